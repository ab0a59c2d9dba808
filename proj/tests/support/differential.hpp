#pragma once

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>

#include "blockea/codegen.hpp"
#include "support/node.hpp"
#include "support/random_program.hpp"

namespace blockea::testing {

struct DifferentialReport {
  int programs = 0;
  int runs = 0;
  int mismatches = 0;
  int halted = 0;  // runs (agreeing or not) that ended in a halt
  std::string first_mismatch;
};

inline std::string describe_mismatch(std::uint64_t program_seed, std::uint64_t seed, const Transcript& engine,
                                     const Transcript& bundle) {
  std::ostringstream out;
  out << "program " << program_seed << ", seed " << seed << ":";
  const std::size_t n = std::max(engine.size(), bundle.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string a = i < engine.size() ? engine[i] : "<none>";
    const std::string b = i < bundle.size() ? bundle[i] : "<none>";
    if (a != b) {
      out << " line " << i << " engine='" << a << "' bundle='" << b << "'";
      break;
    }
  }
  return out.str();
}

/// Emits `count` random clock-free programs, runs each under three seeds in
/// both the engine and node, and compares the console transcripts.
inline DifferentialReport run_differential(std::uint64_t first_program, int count, std::int64_t budget,
                                           const std::filesystem::path& work) {
  GeneratorOptions gen;
  gen.allow_clock = false;
  gen.allow_host_queries = false;
  InterpretOptions options;
  options.iteration_budget = budget;

  std::filesystem::remove_all(work);
  std::vector<NodeJob> jobs;
  std::vector<std::vector<Transcript>> expected;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t program_seed = first_program + static_cast<std::uint64_t>(i);
    const auto program = random_program(program_seed, gen);
    const auto dir = work / ("p" + std::to_string(program_seed));
    codegen::write_bundle(codegen::emit_standalone(program, 0, budget), dir);
    NodeJob job{dir, {program_seed, program_seed * 7919 + 1, (std::uint64_t{1} << 63) + program_seed}};
    std::vector<Transcript> per_seed;
    for (auto s : job.seeds) per_seed.push_back(engine_transcript(program, s, options));
    expected.push_back(std::move(per_seed));
    jobs.push_back(std::move(job));
  }
  const auto actual = run_bundles(jobs, work / "node");

  DifferentialReport report;
  report.programs = count;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (std::size_t s = 0; s < jobs[i].seeds.size(); ++s) {
      ++report.runs;
      const auto& e = expected[i][s];
      if (!e.empty() && e.back().rfind("[halt] ", 0) == 0) ++report.halted;
      if (e != actual[i][s]) {
        if (report.mismatches++ == 0) {
          report.first_mismatch = describe_mismatch(first_program + i, jobs[i].seeds[s], e, actual[i][s]);
        }
      }
    }
  }
  return report;
}

}  // namespace blockea::testing
