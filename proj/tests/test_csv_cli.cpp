#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fairstream/cli.hpp"
#include "fairstream/csv.hpp"
#include "fairstream/oracle.hpp"

using namespace fairstream;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "fairstream_tests";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

cli::RunConfig config(const std::string& command, const fs::path& input, std::vector<int> caps) {
  cli::RunConfig cfg;
  cfg.command = command;
  cfg.input = input.string();
  cfg.caps = std::move(caps);
  return cfg;
}

}  // namespace

TEST_CASE("csv: parses a record into a point") {
  std::istringstream in("x,y,group\n0,0,1\n1.5,-2,2\n");
  CsvPointReader reader(in, {});
  const auto p = reader.next();
  REQUIRE(p);
  CHECK(p->id == 0);
  CHECK(p->coords == std::vector<double>{0, 0});
  CHECK(p->group == 1);
  const auto q = reader.next();
  REQUIRE(q);
  CHECK(q->coords == std::vector<double>{1.5, -2});
  CHECK(q->group == 2);
  CHECK_FALSE(reader.next());
  CHECK(reader.dimension() == 2);
}

TEST_CASE("csv: non-numeric value reports its line") {
  std::istringstream in("x,y,group\na,0,1\n");
  CsvPointReader reader(in, {});
  try {
    reader.next();
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("csv: ragged rows and missing header") {
  std::istringstream ragged("x,group\n1,1\n2\n");
  CsvPointReader reader(ragged, {});
  reader.next();
  CHECK_THROWS_AS(reader.next(), InputError);

  std::istringstream empty("");
  CHECK_THROWS_AS(CsvPointReader(empty, {}), InputError);

  std::istringstream nogroup("x,y\n1,2\n");
  CHECK_THROWS_AS(CsvPointReader(nogroup, {}), InputError);
}

TEST_CASE("csv: group order enforced when requested") {
  std::istringstream in("x,group\n0,1\n1,2\n2,1\n");
  CsvOptions opt;
  opt.require_group_order = true;
  CsvPointReader reader(in, opt);
  reader.next();
  reader.next();
  try {
    reader.next();
    FAIL("expected an order error");
  } catch (const StreamOrderError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("csv: labels, index column and id column") {
  std::istringstream in("id,label,x\n7,red,1\n9,blue,2\n11,red,3\n");
  CsvOptions opt;
  opt.group_column = "1";
  CsvPointReader reader(in, opt);
  auto a = reader.next();
  auto b = reader.next();
  auto c = reader.next();
  CHECK(a->id == 7);
  CHECK(a->group == 1);
  CHECK(b->group == 2);
  CHECK(c->group == 1);
  CHECK(a->coords == std::vector<double>{1});
  CHECK(reader.labels().label_of(2) == std::optional<std::string>("blue"));

  std::istringstream three("x,group\n0,a\n1,b\n2,c\n");
  CsvPointReader over(three, {});
  over.next();
  over.next();
  CHECK_THROWS_AS(over.next(), InputError);
}

TEST_CASE("csv: numeric labels map to themselves") {
  GroupLabels labels(2);
  CHECK(labels.resolve("2") == 2);
  CHECK(labels.resolve("x") == 1);
  CHECK_THROWS_AS(labels.resolve("y"), InputError);
}

TEST_CASE("csv: split and round trip") {
  CHECK(split_csv_line("a,\"b,c\",\"d\"\"e\"") == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(100.5) == "100.5");
  std::vector<Point> pts{{3, {0.1, 2}, 1}, {4, {1e-300, -7}, 2}};
  std::ostringstream out;
  write_csv(out, pts);
  std::istringstream in(out.str());
  CsvPointReader reader(in, {});
  for (const auto& p : pts) {
    auto q = reader.next();
    REQUIRE(q);
    CHECK(q->id == p.id);
    CHECK(q->coords == p.coords);
    CHECK(q->group == p.group);
  }
}

TEST_CASE("cli: known radius run on the three-cluster example") {
  const auto path = write_temp("case3.csv", "x,group\n0,1\n100,1\n0.5,2\n100.5,2\n");
  auto cfg = config("known", path, {1, 1});
  cfg.radius = 0.5;
  const auto res = cli::run(cfg);
  REQUIRE(res.exit_code == 0);
  const auto& r = res.report;
  CHECK(r["status"] == "feasible");
  std::vector<double> xs;
  for (const auto& c : r["centers"]) xs.push_back(c["coords"][0].get<double>());
  std::sort(xs.begin(), xs.end());
  CHECK(xs == std::vector<double>{0, 100.5});
  CHECK(r["cost"].get<double>() == 0.5);

  cfg.no_replay = true;
  CHECK_FALSE(cli::run(cfg).report.contains("cost"));
}

TEST_CASE("cli: planted data round trip through gen and oracle") {
  const auto path = fs::temp_directory_path() / "fairstream_tests" / "planted.csv";
  fs::create_directories(path.parent_path());
  cli::RunConfig gen;
  gen.command = "gen";
  gen.caps = {2, 1};
  gen.n = 12;
  gen.seed = 5;
  gen.out = path.string();
  const auto g = cli::run(gen);
  REQUIRE(g.exit_code == 0);
  const double planted = g.report["planted_r"].get<double>();
  CHECK(planted == 1.0);

  const auto o = cli::run(config("oracle", path, {2, 1}));
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["r_opt"].get<double>() == planted);
}

TEST_CASE("cli: structured errors") {
  const auto empty = write_temp("empty.csv", "");
  auto res = cli::run(config("solve", empty, {1, 1}));
  CHECK(res.exit_code == 1);
  CHECK(res.report["status"] == "error");
  CHECK(res.report["error"]["kind"] == "input");

  const auto header_only = write_temp("header.csv", "x,group\n");
  CHECK(cli::run(config("solve", header_only, {1, 1})).exit_code == 1);

  CHECK(cli::run(config("solve", "/nonexistent/input.csv", {1, 1})).report["error"]["kind"] == "io");

  const auto unordered = write_temp("unordered.csv", "x,group\n0,1\n1,2\n2,1\n");
  res = cli::run(config("semi", unordered, {1, 1}));
  CHECK(res.exit_code == 1);
  CHECK(res.report["error"]["kind"] == "stream_order");

  auto bad_k = config("solve", unordered, {1, 1});
  bad_k.k = 3;
  CHECK(cli::run(bad_k).exit_code == 1);

  auto tiny = config("known", unordered, {1, 1});
  tiny.radius = 0.01;
  res = cli::run(tiny);
  CHECK(res.exit_code == 2);
  CHECK(res.report["error"]["kind"] == "infeasible");
}

TEST_CASE("cli: reports are deterministic apart from timing") {
  const auto path = fs::temp_directory_path() / "fairstream_tests" / "det.csv";
  cli::RunConfig gen;
  gen.command = "gen";
  gen.caps = {3, 2};
  gen.n = 500;
  gen.seed = 8;
  gen.out = path.string();
  REQUIRE(cli::run(gen).exit_code == 0);

  for (const char* cmd : {"solve", "semi"}) {
    auto cfg = config(cmd, path, {3, 2});
    if (std::string(cmd) == "semi") {
      // Group-sort the file first.
      std::ifstream in(path);
      CsvPointReader reader(in, {});
      std::vector<Point> pts;
      while (auto p = reader.next()) pts.push_back(*p);
      std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.group < b.group; });
      std::ostringstream out;
      write_csv(out, pts);
      cfg.input = write_temp("det_sorted.csv", out.str()).string();
    }
    const auto a = cli::run(cfg);
    const auto b = cli::run(cfg);
    REQUIRE(a.exit_code == 0);
    CHECK(cli::strip_timing(a.report).dump() == cli::strip_timing(b.report).dump());

    auto serial_cfg = cfg;
    serial_cfg.serial = true;
    const auto s = cli::run(serial_cfg);
    CHECK(s.report["centers"] == a.report["centers"]);

    const auto& r = a.report;
    const auto counts = r["per_group_counts"].get<std::vector<int>>();
    CHECK(counts[0] <= 3);
    CHECK(counts[1] <= 2);
    const std::size_t instances = r["stats"]["instances"]["total"].get<std::size_t>();
    CHECK(r["stats"]["peak_stored_points"].get<std::size_t>() <= instances * (3 * 5 + 2));
    CHECK(r["stats"]["update_budget_violations"].get<int>() == 0);
    CHECK(r["cost"].get<double>() <= (std::string(cmd) == "semi" ? 3.3 : 5.5));
  }
}

TEST_CASE("cli: argv parsing") {
  const auto path = write_temp("argv.csv", "x,group\n0,1\n100,1\n0.5,2\n100.5,2\n");
  const std::string p = path.string();
  const char* argv[] = {"fairstream", "known", "--input", p.c_str(), "--caps", "1,1", "--radius", "0.5"};
  std::ostringstream out, err;
  CHECK(cli::run_cli(8, argv, out, err) == 0);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["schema"] == cli::kReportSchema);
  CHECK(j["centers"].size() == 2);

  const char* missing[] = {"fairstream", "solve", "--input", p.c_str()};
  std::ostringstream o2, e2;
  CHECK(cli::run_cli(4, missing, o2, e2) != 0);
}

TEST_CASE("cli: bench rows") {
  cli::RunConfig cfg;
  cfg.command = "bench";
  cfg.caps = {2, 1};
  cfg.sizes = {12, 200};
  const auto res = cli::run(cfg);
  REQUIRE(res.exit_code == 0);
  std::set<std::string> algos;
  for (const auto& row : res.report) {
    algos.insert(row["algorithm"].get<std::string>());
    if (row["status"] == "feasible") CHECK(row["fair"].get<bool>());
  }
  CHECK(algos == std::set<std::string>{"solve", "semi", "gonzalez"});
}
