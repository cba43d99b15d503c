#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fairstream/metric.hpp"

namespace fairstream {

struct CsvOptions {
  /// Column holding the group label: a header name, or a 0-based index.
  std::string group_column = "group";
  /// Optional column holding point ids; ids default to the record index.
  std::string id_column = "id";
  /// Number of groups m; labels must map into 1..m.
  int groups = 2;
  /// Reject a record whose group index is smaller than an earlier one.
  bool require_group_order = false;
};

/// Maps group labels to indices 1..m. Integer labels in 1..m map to
/// themselves; any other label takes the smallest free index on first sight.
class GroupLabels {
 public:
  explicit GroupLabels(int groups) : groups_(groups) {}

  /// Throws InputError when the label cannot be mapped.
  GroupId resolve(const std::string& label);
  const std::map<std::string, GroupId>& mapping() const { return mapping_; }
  std::optional<std::string> label_of(GroupId g) const;

 private:
  int groups_;
  std::map<std::string, GroupId> mapping_;
};

/// One-pass CSV reader yielding Points in file order. Holds only the
/// current record. Errors carry the 1-based line number.
class CsvPointReader {
 public:
  CsvPointReader(std::istream& in, CsvOptions options);

  /// Next record, or nullopt at end of input. Throws InputError / StreamOrderError.
  std::optional<Point> next();

  const std::vector<std::string>& header() const { return header_; }
  std::size_t dimension() const { return feature_columns_.size(); }
  const GroupLabels& labels() const { return labels_; }
  std::uint64_t records() const { return records_; }

 private:
  std::istream& in_;
  CsvOptions options_;
  GroupLabels labels_;
  std::vector<std::string> header_;
  std::size_t group_index_ = 0;
  std::optional<std::size_t> id_index_;
  std::vector<std::size_t> feature_columns_;
  std::uint64_t line_ = 1;
  std::uint64_t records_ = 0;
  GroupId last_group_ = 0;
};

/// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Writes "id,x0,..,x{d-1},group" with shortest round-trip numbers.
void write_csv(std::ostream& out, std::span<const Point> points);

}  // namespace fairstream
