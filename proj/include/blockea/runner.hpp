#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blockea/event.hpp"
#include "blockea/value.hpp"

namespace blockea::runner {

/// How a batch of tasks is executed:
///   Sequential - in order on the calling thread (the serial reference),
///   Unlimited  - one worker per task, all started together,
///   Pool(x)    - at most x workers, queued tasks handed out FIFO.
struct ThreadMode {
  enum class Kind { Sequential, Unlimited, Pool };

  Kind kind = Kind::Sequential;
  std::int64_t workers = 1;  // Pool only

  static ThreadMode sequential() { return {Kind::Sequential, 1}; }
  static ThreadMode unlimited() { return {Kind::Unlimited, 0}; }
  static ThreadMode pool(std::int64_t x);

  friend bool operator==(const ThreadMode&, const ThreadMode&) = default;
};

/// Accepts "seq", "all" and "pool:X".
ThreadMode parse_thread_mode(std::string_view text);
std::string to_string(const ThreadMode& mode);

/// What a running task can see: its index and its private event buffer.
struct TaskContext {
  std::size_t index;
  EventSink& events;
};

/// A closed task description. Everything the task reads must be captured by
/// value; the returned Value is the only thing that flows back.
using Task = std::function<Value(TaskContext&)>;

struct TaskResult {
  std::size_t task_index = 0;
  Value value;
  std::vector<Event> events;
};

class WorkerPanicked : public std::runtime_error {
 public:
  WorkerPanicked(std::size_t task_index, const std::string& message, std::exception_ptr cause);
  std::size_t task_index() const { return task_index_; }
  std::exception_ptr cause() const { return cause_; }

 private:
  std::size_t task_index_;
  std::exception_ptr cause_;
};

class SpawnFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunnerOptions {
  /// Hard cap on Unlimited-mode team size; BLOCKEA_MAX_WORKERS overrides.
  std::size_t max_workers = default_max_workers();

  static std::size_t default_max_workers();
};

/// Runs the batch in the given mode and returns results in submission order.
/// Task buffers are flushed to `sink` (if any) in task order as soon as all
/// earlier tasks have completed. If tasks throw, every task still runs;
/// events are flushed up to and including the lowest failing task, then
/// WorkerPanicked is thrown for that task.
std::vector<TaskResult> run_tasks(std::vector<Task> tasks, const ThreadMode& mode, EventSink* sink = nullptr,
                                  const RunnerOptions& options = {});

/// Logical core count of the host; 1 if it cannot be determined.
std::int64_t hardware_concurrency();

/// Naive exponential-time Fibonacci used as a CPU-bound dummy task.
std::uint64_t fibonacci(std::uint32_t m);

struct PerfRow {
  std::string label;  // "one thread", "all threads", "limited threads"
  std::int64_t iterations = 0;
  std::int64_t threads = 0;
  double millis = 0;
};

/// Wall-clock milliseconds for `count` fibonacci(m) tasks in `mode`.
double time_batch(std::int64_t count, std::uint32_t m, const ThreadMode& mode);

/// All three modes for i = 1..i_max; the pool uses `pool_workers` workers.
std::vector<PerfRow> measure_perf(std::int64_t i_max, std::uint32_t m, std::int64_t pool_workers);

/// CSV text: header `threads,num_iterations,num_threads,time`, three rows
/// per i, and a line of 48 dashes between consecutive i.
std::string format_perf_csv(const std::vector<PerfRow>& rows);

std::string perf_experiment(std::int64_t i_max, std::uint32_t m);

}  // namespace blockea::runner
