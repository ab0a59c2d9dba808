#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "blockea/interpreter.hpp"
#include "blockea/program.hpp"

namespace blockea::codegen {

class UnsupportedBlock : public std::runtime_error {
 public:
  explicit UnsupportedBlock(const std::string& kind)
      : std::runtime_error("UnsupportedBlock: no emitter for '" + kind + "'"), kind_(kind) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

/// A standalone JavaScript program for Node plus the runtime it requires.
/// `node program.js [seed]` prints the engine's console lines for that seed.
struct Bundle {
  static constexpr std::string_view kProgramFile = "program.js";
  static constexpr std::string_view kRuntimeFile = "blockea_runtime.js";

  std::string program;
  std::string runtime;
};

bool has_emitter(std::string_view kind_id);

/// Throws InvalidProgram if validate() reports errors, UnsupportedBlock if
/// a reachable block has no emitter.
Bundle emit_standalone(const BlockProgram& program, std::uint64_t master_seed,
                       std::int64_t iteration_budget = kDefaultIterationBudget);

/// Writes both files into `dir` (created if missing).
void write_bundle(const Bundle& bundle, const std::filesystem::path& dir);

std::string_view runtime_source();

}  // namespace blockea::codegen
