#include "blockea/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <thread>

#include "blockea/format.hpp"

namespace blockea::runner {

ThreadMode ThreadMode::pool(std::int64_t x) {
  if (x < 1) throw std::invalid_argument("pool worker count must be >= 1, got " + std::to_string(x));
  return {Kind::Pool, x};
}

ThreadMode parse_thread_mode(std::string_view text) {
  if (text == "seq") return ThreadMode::sequential();
  if (text == "all") return ThreadMode::unlimited();
  if (text.starts_with("pool:")) {
    const std::string count(text.substr(5));
    std::size_t used = 0;
    std::int64_t x = 0;
    try {
      x = std::stoll(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != count.size() || count.empty()) throw std::invalid_argument("bad pool size in '" + std::string(text) + "'");
    return ThreadMode::pool(x);
  }
  throw std::invalid_argument("unknown thread mode '" + std::string(text) + "' (expected seq, all or pool:X)");
}

std::string to_string(const ThreadMode& mode) {
  switch (mode.kind) {
    case ThreadMode::Kind::Sequential: return "seq";
    case ThreadMode::Kind::Unlimited: return "all";
    case ThreadMode::Kind::Pool: return "pool:" + std::to_string(mode.workers);
  }
  return "seq";
}

WorkerPanicked::WorkerPanicked(std::size_t task_index, const std::string& message, std::exception_ptr cause)
    : std::runtime_error("WorkerPanicked(task " + std::to_string(task_index) + "): " + message),
      task_index_(task_index),
      cause_(std::move(cause)) {}

std::size_t RunnerOptions::default_max_workers() {
  if (const char* env = std::getenv("BLOCKEA_MAX_WORKERS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 256;
}

namespace {

/// Shared bookkeeping of one batch: results, completion flags, and the
/// in-order flush cursor.
class Batch {
 public:
  Batch(std::vector<Task> tasks, EventSink* sink)
      : tasks_(std::move(tasks)),
        results_(tasks_.size()),
        errors_(tasks_.size()),
        done_(tasks_.size(), false),
        sink_(sink) {}

  std::size_t size() const { return tasks_.size(); }

  /// Runs one task; never throws (exceptions must not leave an OpenMP region).
  void execute(std::size_t i) noexcept {
    BufferSink buffer;
    TaskContext ctx{i, buffer};
    std::exception_ptr error;
    Value value;
    try {
      value = tasks_[i](ctx);
    } catch (...) {
      error = std::current_exception();
    }
    try {
      complete(i, std::move(value), std::move(buffer.events()), error);
    } catch (...) {
      // A throwing sink is recorded against this task.
      std::lock_guard lock(mutex_);
      if (!errors_[i]) errors_[i] = std::current_exception();
    }
  }

  std::vector<TaskResult> finish() {
    for (std::size_t i = 0; i < errors_.size(); ++i) {
      if (errors_[i]) throw WorkerPanicked(i, describe(errors_[i]), errors_[i]);
    }
    return std::move(results_);
  }

 private:
  void complete(std::size_t i, Value value, std::vector<Event> events, std::exception_ptr error) {
    std::lock_guard lock(mutex_);
    results_[i] = TaskResult{i, std::move(value), std::move(events)};
    errors_[i] = error;
    done_[i] = true;
    while (flush_cursor_ < done_.size() && done_[flush_cursor_] && !flush_stopped_) {
      const auto& r = results_[flush_cursor_];
      if (sink_ != nullptr && !r.events.empty()) sink_->emit(r.events);
      if (errors_[flush_cursor_]) flush_stopped_ = true;
      ++flush_cursor_;
    }
  }

  static std::string describe(const std::exception_ptr& e) {
    try {
      std::rethrow_exception(e);
    } catch (const std::exception& ex) {
      return ex.what();
    } catch (...) {
      return "unknown exception";
    }
  }

  std::vector<Task> tasks_;
  std::vector<TaskResult> results_;
  std::vector<std::exception_ptr> errors_;
  std::vector<bool> done_;
  EventSink* sink_;
  std::mutex mutex_;
  std::size_t flush_cursor_ = 0;
  bool flush_stopped_ = false;
};

void enable_nesting() {
  // Runs dispatched in parallel may themselves contain parallel batches.
  if (omp_get_max_active_levels() < 64) omp_set_max_active_levels(64);
}

void run_sequential(Batch& batch) {
  for (std::size_t i = 0; i < batch.size(); ++i) batch.execute(i);
}

void run_unlimited(Batch& batch, const RunnerOptions& options) {
  const std::size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("Unlimited mode needs at least one task");
  if (n > options.max_workers) {
    throw SpawnFailure("Unlimited mode limited to " + std::to_string(options.max_workers) + " workers, " +
                       std::to_string(n) + " requested (see BLOCKEA_MAX_WORKERS)");
  }
  enable_nesting();
  omp_set_dynamic(0);
  std::atomic<bool> short_team{false};
#pragma omp parallel num_threads(static_cast<int>(n))
  {
    if (static_cast<std::size_t>(omp_get_num_threads()) != n) {
      short_team = true;
    } else {
      batch.execute(static_cast<std::size_t>(omp_get_thread_num()));
    }
  }
  if (short_team) throw SpawnFailure("platform refused to start " + std::to_string(n) + " workers");
}

void run_pool(Batch& batch, std::int64_t workers) {
  const auto n = static_cast<std::int64_t>(batch.size());
  if (n == 0) return;
  enable_nesting();
  omp_set_dynamic(0);
  const int team = static_cast<int>(std::min(workers, n));
#pragma omp parallel for num_threads(team) schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) batch.execute(static_cast<std::size_t>(i));
}

}  // namespace

std::vector<TaskResult> run_tasks(std::vector<Task> tasks, const ThreadMode& mode, EventSink* sink,
                                  const RunnerOptions& options) {
  Batch batch(std::move(tasks), sink);
  switch (mode.kind) {
    case ThreadMode::Kind::Sequential: run_sequential(batch); break;
    case ThreadMode::Kind::Unlimited: run_unlimited(batch, options); break;
    case ThreadMode::Kind::Pool:
      if (mode.workers < 1) throw std::invalid_argument("pool worker count must be >= 1");
      run_pool(batch, mode.workers);
      break;
  }
  return batch.finish();
}

std::int64_t hardware_concurrency() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<std::int64_t>(n);
}

std::uint64_t fibonacci(std::uint32_t m) {
  if (m < 2) return m;
  return fibonacci(m - 1) + fibonacci(m - 2);
}

double time_batch(std::int64_t count, std::uint32_t m, const ThreadMode& mode) {
  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    tasks.emplace_back([m](TaskContext&) { return Value(static_cast<double>(fibonacci(m))); });
  }
  const auto start = std::chrono::steady_clock::now();
  run_tasks(std::move(tasks), mode);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

std::vector<PerfRow> measure_perf(std::int64_t i_max, std::uint32_t m, std::int64_t pool_workers) {
  if (i_max < 1) throw std::invalid_argument("i_max must be >= 1");
  std::vector<PerfRow> rows;
  for (std::int64_t i = 1; i <= i_max; ++i) {
    rows.push_back({"one thread", i, 1, time_batch(i, m, ThreadMode::sequential())});
    rows.push_back({"all threads", i, i, time_batch(i, m, ThreadMode::unlimited())});
    rows.push_back({"limited threads", i, pool_workers, time_batch(i, m, ThreadMode::pool(pool_workers))});
  }
  return rows;
}

std::string format_perf_csv(const std::vector<PerfRow>& rows) {
  std::string out = "threads,num_iterations,num_threads,time\n";
  std::int64_t previous = -1;
  for (const auto& row : rows) {
    if (previous != -1 && row.iterations != previous) out += std::string(48, '-') + "\n";
    previous = row.iterations;
    out += row.label + "," + std::to_string(row.iterations) + "," + std::to_string(row.threads) + "," +
           format_number(row.millis) + "\n";
  }
  return out;
}

std::string perf_experiment(std::int64_t i_max, std::uint32_t m) {
  return format_perf_csv(measure_perf(i_max, m, hardware_concurrency()));
}

}  // namespace blockea::runner
