// Serial reference vs OpenMP execution modes.
//   blockea_bench [i_max] [fib_argument]
// Prints the perf CSV for Fibonacci tasks, then wall time of the shipped
// Simple Plotting example under each repetition mode.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "blockea/examples.hpp"
#include "blockea/format.hpp"
#include "blockea/interpreter.hpp"
#include "blockea/runner.hpp"

using namespace blockea;

int main(int argc, char** argv) {
  const std::int64_t i_max = argc > 1 ? std::atoll(argv[1]) : 2 * runner::hardware_concurrency();
  const auto m = static_cast<std::uint32_t>(argc > 2 ? std::atoi(argv[2]) : 27);

  std::cout << runner::perf_experiment(i_max, m) << "\n";

  const auto program = load_example(*find_example("Simple Plotting"));
  const auto cores = runner::hardware_concurrency();
  std::cout << "mode,millis\n";
  for (const auto& mode : {runner::ThreadMode::sequential(), runner::ThreadMode::pool(cores),
                           runner::ThreadMode::unlimited()}) {
    InterpretOptions options;
    options.mode = mode;
    const auto start = std::chrono::steady_clock::now();
    interpret(program, 1, nullptr, options);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::cout << runner::to_string(mode) << "," << format_number(ms) << "\n";
  }
}
