#include "blockea/event.hpp"

#include <cmath>
#include <stdexcept>

#include "blockea/format.hpp"
#include "json.hpp"

namespace blockea {

using nlohmann::json;

std::string_view to_string(PlotStyle style) {
  switch (style) {
    case PlotStyle::Line: return "line";
    case PlotStyle::Scatter: return "scatter";
    case PlotStyle::Bar: return "bar";
  }
  return "line";
}

std::optional<PlotStyle> plot_style_from_string(std::string_view name) {
  if (name == "line") return PlotStyle::Line;
  if (name == "scatter") return PlotStyle::Scatter;
  if (name == "bar") return PlotStyle::Bar;
  return std::nullopt;
}

namespace {

// JSON has no NaN or infinities; those travel as their text form.
json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    if (auto v = parse_number(j.get<std::string>())) return *v;
  }
  throw std::invalid_argument("event number field is not a number: " + j.dump());
}

}  // namespace

std::string to_json_line(const Event& event) {
  json j;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PrintEvent>) {
          j["type"] = "print";
          j["text"] = p.text;
        } else if constexpr (std::is_same_v<T, PlotPointEvent>) {
          j["type"] = "plot";
          j["series"] = p.series;
          j["x"] = number_json(p.x);
          j["y"] = number_json(p.y);
          j["style"] = std::string(to_string(p.style));
        } else if constexpr (std::is_same_v<T, RecordEvent>) {
          j["type"] = "record";
          j["generation"] = p.generation;
          j["evaluations"] = p.evaluations;
          j["best_fitness"] = number_json(p.best_fitness);
        } else if constexpr (std::is_same_v<T, RunStartedEvent>) {
          j["type"] = "run_started";
        } else {
          j["type"] = "run_finished";
          j["best_individual"] = p.best_individual ? json(*p.best_individual) : json(nullptr);
          j["best_fitness"] = p.best_fitness ? number_json(*p.best_fitness) : json(nullptr);
        }
      },
      event.payload);
  j["run"] = event.run_id;
  if (event.clock_derived) j["clock_derived"] = true;
  return j.dump();
}

Event event_from_json_line(std::string_view line) {
  const json j = json::parse(line);
  Event e;
  e.run_id = j.at("run").get<std::int64_t>();
  e.clock_derived = j.value("clock_derived", false);
  const std::string type = j.at("type").get<std::string>();
  if (type == "print") {
    e.payload = PrintEvent{j.at("text").get<std::string>()};
  } else if (type == "plot") {
    auto style = plot_style_from_string(j.at("style").get<std::string>());
    if (!style) throw std::invalid_argument("unknown plot style");
    e.payload = PlotPointEvent{j.at("series").get<std::string>(), number_from_json(j.at("x")),
                               number_from_json(j.at("y")), *style};
  } else if (type == "record") {
    e.payload = RecordEvent{j.at("generation").get<std::int64_t>(), j.at("evaluations").get<std::int64_t>(),
                            number_from_json(j.at("best_fitness"))};
  } else if (type == "run_started") {
    e.payload = RunStartedEvent{};
  } else if (type == "run_finished") {
    RunFinishedEvent f;
    if (!j.at("best_individual").is_null()) f.best_individual = j.at("best_individual").get<std::string>();
    if (!j.at("best_fitness").is_null()) f.best_fitness = number_from_json(j.at("best_fitness"));
    e.payload = f;
  } else {
    throw std::invalid_argument("unknown event type '" + type + "'");
  }
  return e;
}

std::string to_console_line(const Event& event) {
  return std::visit(
      [&](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PrintEvent>) {
          return p.text;
        } else if constexpr (std::is_same_v<T, PlotPointEvent>) {
          return "[plot " + std::string(to_string(p.style)) + "] " + p.series + " " + format_number(p.x) + " " +
                 format_number(p.y);
        } else if constexpr (std::is_same_v<T, RecordEvent>) {
          return "[record] run=" + std::to_string(event.run_id) + " generation=" + std::to_string(p.generation) +
                 " evaluations=" + std::to_string(p.evaluations) + " best=" + format_number(p.best_fitness);
        } else if constexpr (std::is_same_v<T, RunStartedEvent>) {
          return "[run " + std::to_string(event.run_id) + " started]";
        } else {
          return "[run " + std::to_string(event.run_id) + " finished] best=" + p.best_individual.value_or("none") +
                 " fitness=" + (p.best_fitness ? format_number(*p.best_fitness) : std::string("none"));
        }
      },
      event.payload);
}

std::vector<std::string> deterministic_view(std::span<const Event> events) {
  std::vector<std::string> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    if (e.clock_derived) {
      Event masked{e.run_id, PrintEvent{"<clock-derived>"}, true};
      out.push_back(to_json_line(masked));
    } else {
      out.push_back(to_json_line(e));
    }
  }
  return out;
}

}  // namespace blockea
