#pragma once

#include <cstdint>

#include "blockea/program.hpp"

namespace blockea::testing {

struct GeneratorOptions {
  bool allow_clock = true;           // time_sleep, time_timer
  bool allow_host_queries = true;    // hardware_concurrency
  bool allow_disconnected = true;    // stray value roots (validate warns)
  bool allow_awkward_text = true;    // markup characters, tabs, newlines, non-ASCII
  int max_statement_depth = 3;
  int max_expression_depth = 3;
};

/// A random program that validate() accepts with zero errors. Same seed,
/// same program.
BlockProgram random_program(std::uint64_t seed, const GeneratorOptions& options = {});

}  // namespace blockea::testing
