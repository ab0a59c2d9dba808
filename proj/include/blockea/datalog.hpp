#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blockea/ea.hpp"
#include "blockea/event.hpp"

namespace blockea::datalog {

class MalformedStream : public std::runtime_error {
 public:
  explicit MalformedStream(const std::string& reason) : std::runtime_error("MalformedStream: " + reason) {}
};

class EmptyLog : public std::runtime_error {
 public:
  explicit EmptyLog(const std::string& reason) : std::runtime_error("EmptyLog: " + reason) {}
};

struct RecordRow {
  std::int64_t generation = 0;
  std::int64_t evaluations = 0;
  double best_fitness = 0;
  friend bool operator==(const RecordRow&, const RecordRow&) = default;
};

/// Everything one run produced. Records have strictly increasing
/// evaluations and non-decreasing best-so-far fitness.
struct RunLog {
  std::int64_t run_id = 0;
  std::vector<RecordRow> records;
  std::vector<std::string> prints;
  std::vector<PlotPointEvent> plot_points;
  std::optional<ea::Individual> best_individual;
  std::optional<double> best_fitness;

  friend bool operator==(const RunLog&, const RunLog&) = default;
};

struct ExperimentMeta {
  std::string function_name = "OneMax";
  std::int64_t dimension = 0;
  std::string algorithm_name = "blockea";
  std::uint64_t master_seed = 0;
  std::int64_t run_count = 1;
};

/// Groups a run-tagged event stream into per-run logs ordered by run id.
/// Runs may be interleaved; each run's own events must be in order
/// (RunStarted first, RunFinished last). Events outside any run are ignored
/// unless they are run-scoped (records, run start/finish).
std::vector<RunLog> collect(std::span<const Event> events);

inline constexpr std::string_view kCsvHeader = "run,generation,evaluations,best_fitness";

std::string export_csv(const std::vector<RunLog>& logs);

/// Reads export_csv output back (records only).
std::vector<RunLog> parse_csv(std::string_view text);

struct IohFiles {
  std::string info_path;  // relative to the export directory
  std::string info;
  std::string dat_path;
  std::string dat;
};

/// IOHanalyzer-style pair of files. Each dat block lists the first record,
/// every record that improves best-so-far, and always the final record.
IohFiles export_ioh(const std::vector<RunLog>& logs, const ExperimentMeta& meta);

/// Problem dimension of an experiment: bit length of the first recorded
/// best individual, 0 when no run evaluated anything.
std::int64_t infer_dimension(const std::vector<RunLog>& logs);

inline constexpr std::string_view kIohDatHeader = "\"function evaluation\" \"best-so-far f(x)\"";

}  // namespace blockea::datalog
