#pragma once

#include <cstdint>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "blockea/datalog.hpp"
#include "blockea/event.hpp"
#include "blockea/program.hpp"
#include "blockea/runner.hpp"
#include "blockea/validate.hpp"

namespace blockea {

enum class HaltReason {
  UnboundVariable,
  EmptyPopulation,
  BudgetExhausted,
  BadRange,
  BadDuration,
  NotAnInteger,
  BadLength,
  BadCharacter,
  LengthMismatch,
  BadProbability,
  BadCount,
  AllZeroFitness,
  NegativeFitness,
  BadGap,
  TooSmall,
  IndexOutOfRange,
  WorkerLimit,
  TooLarge,
};

std::string_view to_string(HaltReason reason);

/// A block program stopped on a runtime condition it cannot continue from.
class RuntimeHalt : public std::runtime_error {
 public:
  RuntimeHalt(HaltReason reason, const std::string& detail);
  HaltReason reason() const { return reason_; }

 private:
  HaltReason reason_;
};

class Cancelled : public std::runtime_error {
 public:
  Cancelled() : std::runtime_error("Cancelled") {}
};

/// interpret() was handed a program that validate() rejects.
class InvalidProgram : public std::invalid_argument {
 public:
  explicit InvalidProgram(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// A value of the wrong type reached a block. Validated programs never
/// produce this; it exists so fuzzing can tell it apart from a halt.
class RuntimeTypeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr std::int64_t kDefaultIterationBudget = 1'000'000;
/// Cap on bits held by one population or individual and on characters in one text.
inline constexpr std::int64_t kMaxValueSize = std::int64_t{1} << 26;
/// Cap on the task count of one repetitions or thread_run block.
inline constexpr std::int64_t kMaxTasks = std::int64_t{1} << 20;

struct InterpretOptions {
  /// Execution mode for the repetitions of a repetitions block.
  runner::ThreadMode mode = runner::ThreadMode::sequential();
  /// Loop iterations allowed per run (and per thread task, and for the
  /// top level) before the program halts with BudgetExhausted.
  std::int64_t iteration_budget = kDefaultIterationBudget;
  std::stop_token stop;
  runner::RunnerOptions runner;
};

struct ExperimentResult {
  std::vector<datalog::RunLog> logs;
  std::vector<std::string> printed;
  std::vector<Event> events;
};

/// Executes every executable root in order. Repetition k runs with a fresh
/// scope and a generator seeded with derive_seed(master_seed, k), so the
/// event stream is a function of (program, master_seed) only, whatever the
/// thread mode. Events reach `sink` (if any) as they are produced; buffers
/// of parallel repetitions arrive whole and in run order.
ExperimentResult interpret(const BlockProgram& program, std::uint64_t master_seed, EventSink* sink = nullptr,
                           const InterpretOptions& options = {});

}  // namespace blockea
