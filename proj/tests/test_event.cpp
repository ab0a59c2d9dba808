#include <cmath>
#include <limits>

#include "blockea/event.hpp"
#include "doctest.h"

using namespace blockea;

TEST_CASE("console lines") {
  CHECK(to_console_line({kNoRun, PrintEvent{"hello"}}) == "hello");
  CHECK(to_console_line({0, PlotPointEvent{"run 0", 3, 17, PlotStyle::Line}}) == "[plot line] run 0 3 17");
  CHECK(to_console_line({2, PlotPointEvent{"s", 0.5, 1e21, PlotStyle::Bar}}) == "[plot bar] s 0.5 1e+21");
  CHECK(to_console_line({4, RecordEvent{5, 11, 20}}) == "[record] run=4 generation=5 evaluations=11 best=20");
  CHECK(to_console_line({1, RunStartedEvent{}}) == "[run 1 started]");
  CHECK(to_console_line({1, RunFinishedEvent{"0110", 2}}) == "[run 1 finished] best=0110 fitness=2");
  CHECK(to_console_line({1, RunFinishedEvent{}}) == "[run 1 finished] best=none fitness=none");
}

TEST_CASE("json lines round-trip") {
  const std::vector<Event> events = {
      {kNoRun, PrintEvent{"caf\xc3\xa9 \"q\"\n"}},
      {0, PlotPointEvent{"s", 1.25, -3, PlotStyle::Scatter}},
      {0, PlotPointEvent{"nan", std::numeric_limits<double>::infinity(), 0, PlotStyle::Line}},
      {3, RecordEvent{7, 70, 12.5}},
      {3, RunStartedEvent{}},
      {3, RunFinishedEvent{"101", 2}},
      {3, RunFinishedEvent{}},
      {5, PrintEvent{"12.3"}, true},
  };
  for (const auto& e : events) {
    const auto line = to_json_line(e);
    CAPTURE(line);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(event_from_json_line(line) == e);
  }
  CHECK(to_json_line({kNoRun, PrintEvent{"hi"}}) == R"({"run":-1,"text":"hi","type":"print"})");
  const auto nan = event_from_json_line(to_json_line({0, PlotPointEvent{"s", std::nan(""), 1, PlotStyle::Line}}));
  CHECK(std::isnan(std::get<PlotPointEvent>(nan.payload).x));
}

TEST_CASE("deterministic view masks clock-derived events only") {
  const std::vector<Event> a = {{kNoRun, PrintEvent{"x"}}, {kNoRun, PrintEvent{"12.5"}, true}};
  const std::vector<Event> b = {{kNoRun, PrintEvent{"x"}}, {kNoRun, PrintEvent{"99.1"}, true}};
  const std::vector<Event> c = {{kNoRun, PrintEvent{"y"}}, {kNoRun, PrintEvent{"99.1"}, true}};
  CHECK(deterministic_view(a) == deterministic_view(b));
  CHECK(deterministic_view(a) != deterministic_view(c));
}

TEST_CASE("collecting sink keeps batches whole") {
  CollectingSink sink;
  std::vector<Event> batch = {{0, PrintEvent{"a"}}, {0, PrintEvent{"b"}}};
  sink.emit(batch);
  sink.emit(Event{1, PrintEvent{"c"}});
  CHECK(sink.events().size() == 3);
  CHECK(std::get<PrintEvent>(sink.events()[2].payload).text == "c");
}
