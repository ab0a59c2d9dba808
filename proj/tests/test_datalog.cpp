#include <algorithm>
#include <random>
#include <sstream>

#include "blockea/datalog.hpp"
#include "doctest.h"
#include "support/golden.hpp"

using namespace blockea;
using namespace blockea::datalog;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<Event> two_runs() {
  return {
      {0, RunStartedEvent{}},
      {0, RecordEvent{0, 1, 3}},
      {0, PrintEvent{"a"}},
      {0, RecordEvent{1, 3, 5}},
      {0, RunFinishedEvent{"11111", 5}},
      {1, RunStartedEvent{}},
      {1, PlotPointEvent{"s", 0, 1, PlotStyle::Line}},
      {1, RecordEvent{0, 2, 1}},
      {1, RunFinishedEvent{"10", 1}},
  };
}

RunLog run_with(std::int64_t id, std::vector<RecordRow> records) {
  RunLog log;
  log.run_id = id;
  log.records = std::move(records);
  return log;
}

}  // namespace

TEST_CASE("collect groups by run") {
  const auto logs = collect(two_runs());
  REQUIRE(logs.size() == 2);
  CHECK(logs[0].run_id == 0);
  CHECK(logs[0].records == std::vector<RecordRow>{{0, 1, 3}, {1, 3, 5}});
  CHECK(logs[0].prints == std::vector<std::string>{"a"});
  CHECK(logs[0].best_individual->to_string() == "11111");
  CHECK(logs[0].best_fitness == 5.0);
  CHECK(logs[1].plot_points.size() == 1);
  CHECK(collect(std::vector<Event>{{kNoRun, PrintEvent{"outside"}}}).empty());
}

TEST_CASE("collect is insensitive to how runs interleave") {
  const auto reference = collect(two_runs());
  auto events = two_runs();
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    // random merge of the two per-run sequences
    std::vector<Event> r0(events.begin(), events.begin() + 5), r1(events.begin() + 5, events.end());
    std::vector<Event> merged;
    std::size_t i = 0, j = 0;
    while (i < r0.size() || j < r1.size()) {
      if (j == r1.size() || (i < r0.size() && rng() % 2 == 0)) {
        merged.push_back(r0[i++]);
      } else {
        merged.push_back(r1[j++]);
      }
    }
    CHECK(collect(merged) == reference);
  }
}

TEST_CASE("collect rejects malformed streams") {
  CHECK_THROWS_AS(collect(std::vector<Event>{{0, RunStartedEvent{}}, {0, RecordEvent{0, 5, 1}},
                                             {0, RecordEvent{1, 4, 1}}, {0, RunFinishedEvent{}}}),
                  MalformedStream);
  CHECK_THROWS_AS(collect(std::vector<Event>{{0, RunStartedEvent{}}, {0, RecordEvent{0, 5, 3}},
                                             {0, RecordEvent{1, 6, 2}}, {0, RunFinishedEvent{}}}),
                  MalformedStream);
  CHECK_THROWS_AS(collect(std::vector<Event>{{0, RecordEvent{0, 1, 1}}}), MalformedStream);
  CHECK_THROWS_AS(collect(std::vector<Event>{{0, RunStartedEvent{}}, {0, RunStartedEvent{}}}), MalformedStream);
  CHECK_THROWS_AS(collect(std::vector<Event>{{0, RunStartedEvent{}}}), MalformedStream);
  CHECK_THROWS_AS(collect(std::vector<Event>{{0, RunStartedEvent{}}, {0, RunFinishedEvent{}}, {0, PrintEvent{"late"}}}),
                  MalformedStream);
  CHECK_THROWS_AS(collect(std::vector<Event>{{kNoRun, RecordEvent{0, 1, 1}}}), MalformedStream);
}

TEST_CASE("csv export") {
  CHECK(export_csv({}) == std::string(kCsvHeader) + "\n");
  const std::vector<RunLog> logs = {run_with(0, {{0, 1, 3}, {1, 3, 5}})};
  CHECK(export_csv(logs) == "run,generation,evaluations,best_fitness\n0,0,1,3\n0,1,3,5\n");
  const std::vector<RunLog> fractional = {run_with(2, {{0, 1, 0.1}, {4, 1234567, 1.0 / 3}}),
                                          run_with(0, {{0, 1, 1e21}})};
  const auto text = export_csv(fractional);
  CHECK(text.find("2,4,1234567,0.3333333333333333\n") != std::string::npos);
  CHECK(text.find("0,0,1,1e+21") < text.find("2,0,1,0.1"));  // run order
  const auto back = parse_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].records == fractional[1].records);
  CHECK(back[1].records == fractional[0].records);
  CHECK_THROWS_AS(parse_csv("wrong\n"), MalformedStream);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\n0,1\n"), MalformedStream);
}

TEST_CASE("csv round-trip on collected logs") {
  const auto logs = testing::three_run_logs();
  const auto back = parse_csv(export_csv(logs));
  REQUIRE(back.size() == logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    CHECK(back[i].run_id == logs[i].run_id);
    CHECK(back[i].records == logs[i].records);
  }
}

TEST_CASE("ioh export by hand") {
  const std::vector<RunLog> logs = {run_with(0, {{0, 1, 3}, {5, 11, 20}})};
  ExperimentMeta meta;
  meta.function_name = "OneMax";
  meta.dimension = 20;
  meta.algorithm_name = "ea";
  const auto files = export_ioh(logs, meta);
  const auto dat = lines_of(files.dat);
  CHECK(dat == std::vector<std::string>{std::string(kIohDatHeader), "1 3", "11 20"});
  const auto info = lines_of(files.info);
  REQUIRE(info.size() == 3);
  CHECK(info[0] == "suite = 'BLOCKEA', funcName = 'OneMax', DIM = 20, algId = 'ea'");
  CHECK(info[1] == "%");
  CHECK(info[2] == files.dat_path + ", 11:20");
  CHECK(files.info_path == "IOHprofiler_OneMax.info");
  CHECK(files.dat_path == "data_OneMax/IOHprofiler_OneMax_DIM20.dat");
}

TEST_CASE("ioh rows keep improvements and the final record") {
  const std::vector<RunLog> logs = {run_with(0, {{0, 1, 3}, {1, 2, 3}, {2, 4, 4}, {3, 6, 4}, {4, 9, 4}})};
  const auto dat = lines_of(export_ioh(logs, {}).dat);
  CHECK(dat == std::vector<std::string>{std::string(kIohDatHeader), "1 3", "4 4", "9 4"});
}

TEST_CASE("ioh export needs records") {
  CHECK_THROWS_AS(export_ioh({}, {}), EmptyLog);
  CHECK_THROWS_AS(export_ioh({run_with(0, {})}, {}), EmptyLog);
}

TEST_CASE("dimension is taken from the best individual") {
  RunLog log = run_with(0, {{0, 1, 1}});
  CHECK(infer_dimension({log}) == 0);
  log.best_individual = ea::individual_from_text("0101");
  CHECK(infer_dimension({log}) == 4);
}

TEST_CASE("three-run experiment matches the golden exports") {
  const auto logs = testing::three_run_logs();
  REQUIRE(logs.size() == 3);
  const auto csv = export_csv(logs);
  CHECK(csv == testing::golden("three_runs.csv", csv));
  const auto ioh = export_ioh(logs, testing::three_run_meta());
  CHECK(ioh.info == testing::golden("three_runs.info", ioh.info));
  CHECK(ioh.dat == testing::golden("three_runs.dat", ioh.dat));

  const auto dat = lines_of(ioh.dat);
  CHECK(std::count(dat.begin(), dat.end(), std::string(kIohDatHeader)) == 3);
  double last = -1;
  std::size_t block = 0;
  for (const auto& line : dat) {
    if (line == kIohDatHeader) {
      last = -1;
      ++block;
      continue;
    }
    const double f = std::stod(line.substr(line.find(' ') + 1));
    CHECK(f >= last);
    last = f;
  }
  CHECK(block == 3);
  for (const auto& log : logs) {
    for (std::size_t i = 1; i < log.records.size(); ++i) {
      CHECK(log.records[i].evaluations > log.records[i - 1].evaluations);
      CHECK(log.records[i].best_fitness >= log.records[i - 1].best_fitness);
    }
  }
}
