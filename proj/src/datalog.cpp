#include "blockea/datalog.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "blockea/format.hpp"

namespace blockea::datalog {

namespace {

struct PendingRun {
  RunLog log;
  bool finished = false;
};

std::string run_name(std::int64_t id) { return "run " + std::to_string(id); }

}  // namespace

std::vector<RunLog> collect(std::span<const Event> events) {
  std::map<std::int64_t, PendingRun> runs;
  for (const auto& e : events) {
    const bool run_scoped = std::holds_alternative<RecordEvent>(e.payload) ||
                            std::holds_alternative<RunStartedEvent>(e.payload) ||
                            std::holds_alternative<RunFinishedEvent>(e.payload);
    if (e.run_id == kNoRun) {
      if (run_scoped) throw MalformedStream("run-scoped event outside any run");
      continue;
    }
    if (std::holds_alternative<RunStartedEvent>(e.payload)) {
      auto [it, inserted] = runs.try_emplace(e.run_id);
      if (!inserted) throw MalformedStream(run_name(e.run_id) + " started twice");
      it->second.log.run_id = e.run_id;
      continue;
    }
    auto it = runs.find(e.run_id);
    if (it == runs.end()) throw MalformedStream(run_name(e.run_id) + " has events before RunStarted");
    PendingRun& run = it->second;
    if (run.finished) throw MalformedStream(run_name(e.run_id) + " has events after RunFinished");

    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, PrintEvent>) {
            run.log.prints.push_back(p.text);
          } else if constexpr (std::is_same_v<T, PlotPointEvent>) {
            run.log.plot_points.push_back(p);
          } else if constexpr (std::is_same_v<T, RecordEvent>) {
            if (!run.log.records.empty()) {
              const auto& last = run.log.records.back();
              if (p.evaluations <= last.evaluations) {
                throw MalformedStream(run_name(e.run_id) + ": evaluations decrease from " +
                                      std::to_string(last.evaluations) + " to " + std::to_string(p.evaluations));
              }
              if (p.best_fitness < last.best_fitness) {
                throw MalformedStream(run_name(e.run_id) + ": best-so-far fitness decreases");
              }
            }
            run.log.records.push_back({p.generation, p.evaluations, p.best_fitness});
          } else if constexpr (std::is_same_v<T, RunFinishedEvent>) {
            if (p.best_individual) run.log.best_individual = ea::individual_from_text(*p.best_individual);
            run.log.best_fitness = p.best_fitness;
            run.finished = true;
          }
        },
        e.payload);
  }

  std::vector<RunLog> out;
  out.reserve(runs.size());
  for (auto& [id, run] : runs) {
    if (!run.finished) throw MalformedStream(run_name(id) + " never finished");
    out.push_back(std::move(run.log));
  }
  return out;
}

std::string export_csv(const std::vector<RunLog>& logs) {
  std::string out(kCsvHeader);
  out += "\n";
  std::vector<const RunLog*> ordered;
  for (const auto& log : logs) ordered.push_back(&log);
  std::stable_sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->run_id < b->run_id; });
  for (const RunLog* log : ordered) {
    for (const auto& r : log->records) {
      out += std::to_string(log->run_id) + "," + std::to_string(r.generation) + "," +
             std::to_string(r.evaluations) + "," + format_number(r.best_fitness) + "\n";
    }
  }
  return out;
}

std::vector<RunLog> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw MalformedStream("missing CSV header");
  std::map<std::int64_t, RunLog> runs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) throw MalformedStream("line " + std::to_string(line_no) + ": expected 4 columns");
    try {
      const std::int64_t run = std::stoll(cells[0]);
      auto fitness = parse_number(cells[3]);
      if (!fitness) throw std::invalid_argument(cells[3]);
      RunLog& log = runs[run];
      log.run_id = run;
      log.records.push_back({std::stoll(cells[1]), std::stoll(cells[2]), *fitness});
    } catch (const std::logic_error&) {
      throw MalformedStream("line " + std::to_string(line_no) + ": bad number");
    }
  }
  std::vector<RunLog> out;
  for (auto& [id, log] : runs) out.push_back(std::move(log));
  return out;
}

IohFiles export_ioh(const std::vector<RunLog>& logs, const ExperimentMeta& meta) {
  if (logs.empty()) throw EmptyLog("no runs to export");
  IohFiles files;
  const std::string func = meta.function_name;
  files.info_path = "IOHprofiler_" + func + ".info";
  files.dat_path = "data_" + func + "/IOHprofiler_" + func + "_DIM" + std::to_string(meta.dimension) + ".dat";

  std::string summary = files.dat_path;
  for (const auto& log : logs) {
    if (log.records.empty()) throw EmptyLog("run " + std::to_string(log.run_id) + " has no records");
    files.dat += std::string(kIohDatHeader) + "\n";
    std::optional<double> emitted_best;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
      const auto& r = log.records[i];
      const bool last = i + 1 == log.records.size();
      if (emitted_best && r.best_fitness <= *emitted_best && !last) continue;
      files.dat += std::to_string(r.evaluations) + " " + format_number(r.best_fitness) + "\n";
      emitted_best = r.best_fitness;
    }
    const auto& final_record = log.records.back();
    summary += ", " + std::to_string(final_record.evaluations) + ":" + format_number(final_record.best_fitness);
  }
  files.info = "suite = 'BLOCKEA', funcName = '" + func + "', DIM = " + std::to_string(meta.dimension) +
               ", algId = '" + meta.algorithm_name + "'\n%\n" + summary + "\n";
  return files;
}

std::int64_t infer_dimension(const std::vector<RunLog>& logs) {
  for (const auto& log : logs) {
    if (log.best_individual) return static_cast<std::int64_t>(log.best_individual->size());
  }
  return 0;
}

}  // namespace blockea::datalog
