#include "fairstream/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace fairstream {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header, const std::string& spec) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (lower(header[i]) == lower(spec)) return i;
  }
  if (auto idx = parse_number<std::size_t>(spec); idx && *idx < header.size()) return idx;
  return std::nullopt;
}

}  // namespace

GroupId GroupLabels::resolve(const std::string& label) {
  if (auto it = mapping_.find(label); it != mapping_.end()) return it->second;
  GroupId g = 0;
  if (auto n = parse_number<int>(label); n && *n >= 1 && *n <= groups_) {
    g = *n;
  } else {
    for (GroupId candidate = 1; candidate <= groups_; ++candidate) {
      const bool taken = std::any_of(mapping_.begin(), mapping_.end(),
                                     [&](const auto& kv) { return kv.second == candidate; });
      if (!taken) {
        g = candidate;
        break;
      }
    }
  }
  if (g == 0) throw InputError("unknown group value '" + label + "' (at most " + std::to_string(groups_) + " groups)");
  for (const auto& [other, idx] : mapping_) {
    if (idx == g) throw InputError("group labels '" + other + "' and '" + label + "' map to the same group");
  }
  mapping_.emplace(label, g);
  return g;
}

std::optional<std::string> GroupLabels::label_of(GroupId g) const {
  for (const auto& [label, idx] : mapping_) {
    if (idx == g) return label;
  }
  return std::nullopt;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

CsvPointReader::CsvPointReader(std::istream& in, CsvOptions options)
    : in_(in), options_(std::move(options)), labels_(options_.groups) {
  std::string line;
  if (!std::getline(in_, line) || trim(line).empty()) throw InputError("empty input: missing CSV header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  header_ = split_csv_line(line);

  auto group = find_column(header_, options_.group_column);
  if (!group) throw InputError("group column '" + options_.group_column + "' not found in header");
  group_index_ = *group;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (lower(header_[i]) == lower(options_.id_column) && i != group_index_) id_index_ = i;
  }
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i != group_index_ && (!id_index_ || i != *id_index_)) feature_columns_.push_back(i);
  }
  if (feature_columns_.empty()) throw InputError("no feature columns in header");
}

std::optional<Point> CsvPointReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string where = "line " + std::to_string(line_);
    if (fields.size() != header_.size()) {
      throw InputError(where + ": expected " + std::to_string(header_.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }

    Point p;
    p.id = static_cast<PointId>(records_);
    if (id_index_) {
      auto id = parse_number<PointId>(fields[*id_index_]);
      if (!id) throw InputError(where + ": id '" + fields[*id_index_] + "' is not an integer");
      p.id = *id;
    }
    p.coords.reserve(feature_columns_.size());
    for (std::size_t col : feature_columns_) {
      auto v = parse_number<double>(fields[col]);
      if (!v || !std::isfinite(*v)) {
        throw InputError(where + ": column '" + header_[col] + "' value '" + fields[col] + "' is not numeric");
      }
      p.coords.push_back(*v);
    }
    try {
      p.group = labels_.resolve(fields[group_index_]);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    if (options_.require_group_order && p.group < last_group_) {
      throw StreamOrderError(where + ": group " + std::to_string(p.group) + " after group " +
                             std::to_string(last_group_) + " in a group-ordered stream");
    }
    last_group_ = std::max(last_group_, p.group);
    ++records_;
    return p;
  }
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, std::span<const Point> points) {
  const std::size_t dim = points.empty() ? 0 : points.front().coords.size();
  out << "id";
  for (std::size_t i = 0; i < dim; ++i) out << ",x" << i;
  out << ",group\n";
  for (const auto& p : points) {
    out << p.id;
    for (double x : p.coords) out << ',' << format_double(x);
    out << ',' << p.group << '\n';
  }
}

}  // namespace fairstream
