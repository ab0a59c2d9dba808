#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace blockea {

enum class PlotStyle { Line, Scatter, Bar };

std::string_view to_string(PlotStyle style);
std::optional<PlotStyle> plot_style_from_string(std::string_view name);

struct PrintEvent {
  std::string text;
  friend bool operator==(const PrintEvent&, const PrintEvent&) = default;
};

struct PlotPointEvent {
  std::string series;
  double x = 0;
  double y = 0;
  PlotStyle style = PlotStyle::Line;
  friend bool operator==(const PlotPointEvent&, const PlotPointEvent&) = default;
};

struct RecordEvent {
  std::int64_t generation = 0;
  std::int64_t evaluations = 0;
  double best_fitness = 0;
  friend bool operator==(const RecordEvent&, const RecordEvent&) = default;
};

struct RunStartedEvent {
  friend bool operator==(const RunStartedEvent&, const RunStartedEvent&) = default;
};

struct RunFinishedEvent {
  std::optional<std::string> best_individual;  // bit text; none if nothing was evaluated
  std::optional<double> best_fitness;
  friend bool operator==(const RunFinishedEvent&, const RunFinishedEvent&) = default;
};

using EventPayload = std::variant<PrintEvent, PlotPointEvent, RecordEvent, RunStartedEvent, RunFinishedEvent>;

inline constexpr std::int64_t kNoRun = -1;

struct Event {
  std::int64_t run_id = kNoRun;  // kNoRun for events outside any repetition
  EventPayload payload;
  bool clock_derived = false;  // payload depends on wall-clock readings

  friend bool operator==(const Event&, const Event&) = default;
};

/// One JSON object per event, e.g. {"type":"print","run":0,"text":"hi"}.
std::string to_json_line(const Event& event);
Event event_from_json_line(std::string_view line);

/// Console line as printed by the CLI and by exported bundles:
///   print       -> the text itself
///   plot point  -> [plot <style>] <series> <x> <y>
///   record      -> [record] run=<id> generation=<g> evaluations=<e> best=<f>
///   run started -> [run <id> started]
///   run finish  -> [run <id> finished] best=<bits> fitness=<f>
std::string to_console_line(const Event& event);

/// Destination for events. Implementations must accept calls from several
/// producer threads; a batch is delivered atomically and in order.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void emit(std::span<const Event> batch) = 0;
  void emit(const Event& event) { emit(std::span<const Event>(&event, 1)); }
};

/// Thread-safe sink that keeps everything in memory.
class CollectingSink final : public EventSink {
 public:
  using EventSink::emit;
  void emit(std::span<const Event> batch) override {
    std::lock_guard lock(mutex_);
    events_.insert(events_.end(), batch.begin(), batch.end());
  }
  std::vector<Event> events() const {
    std::lock_guard lock(mutex_);
    return events_;
  }

 private:
  mutable std::mutex mutex_;
  std::vector<Event> events_;
};

/// Unsynchronised per-task buffer; owned by exactly one worker.
class BufferSink final : public EventSink {
 public:
  using EventSink::emit;
  void emit(std::span<const Event> batch) override { events_.insert(events_.end(), batch.begin(), batch.end()); }
  std::vector<Event>& events() { return events_; }

 private:
  std::vector<Event> events_;
};

/// Replaces clock-derived payloads with a fixed marker so that two streams
/// can be compared for determinism.
std::vector<std::string> deterministic_view(std::span<const Event> events);

}  // namespace blockea
