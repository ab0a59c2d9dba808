#include "blockea/examples.hpp"

#include <array>
#include <stdexcept>

#include "blockea/shipped_programs.hpp"
#include "blockea/xml.hpp"

namespace blockea {

namespace {

std::string_view embedded_xml(std::string_view slug) {
  for (const auto& [stem, text] : embedded::kPrograms) {
    if (stem == slug) return text;
  }
  throw std::logic_error("program '" + std::string(slug) + "' was not embedded");
}

std::array<ShippedExample, 2> build() {
  return {{
      {"Simple Plotting", "simple_plotting",
       "15 repetitions of a (10+10)-EA with one-point crossover and per-bit mutation on OneMax, n = 20; "
       "one plotted series per run",
       embedded_xml("simple_plotting")},
      {"Multi-Threading Performance Test", "multithreading_performance_test",
       "times i Fibonacci tasks run on one thread, on i threads and on hardware_concurrency threads",
       embedded_xml("multithreading_performance_test")},
  }};
}

}  // namespace

std::span<const ShippedExample> shipped_examples() {
  static const auto examples = build();
  return examples;
}

const ShippedExample* find_example(std::string_view name) {
  for (const auto& e : shipped_examples()) {
    if (e.name == name || e.slug == name) return &e;
  }
  return nullptr;
}

BlockProgram load_example(const ShippedExample& example) { return parse_xml(example.xml); }

}  // namespace blockea
