#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blockea/random.hpp"

namespace blockea::ea {

enum class ErrorCode {
  BadLength,
  BadCharacter,
  LengthMismatch,
  BadProbability,
  BadCount,
  EmptyPopulation,
  AllZeroFitness,
  NegativeFitness,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Fixed-length bit string. Length never changes after construction.
class Individual {
 public:
  Individual() = default;
  explicit Individual(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// "0"/"1" characters, most significant first in index order.
  std::string to_string() const;

  friend bool operator==(const Individual&, const Individual&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

using Population = std::vector<Individual>;

/// Objective evaluation as seen by population operators. Each call is one
/// fitness evaluation (callers that count evaluations wrap the counter in).
using FitnessFn = std::function<double(const Individual&)>;

Individual random_individual(std::int64_t length, RandomSource& rng);
Individual individual_from_text(std::string_view text);
Individual complement(const Individual& x);

Individual one_point_crossover(const Individual& a, const Individual& b, RandomSource& rng);
Individual two_point_crossover(const Individual& a, const Individual& b, RandomSource& rng);
Individual uniform_crossover(const Individual& a, const Individual& b, RandomSource& rng);

/// Deterministic bodies of the crossovers for a given cut; exposed for tests.
Individual one_point_crossover_at(const Individual& a, const Individual& b, std::size_t cut);
Individual two_point_crossover_at(const Individual& a, const Individual& b, std::size_t first_cut,
                                  std::size_t second_cut);

Individual mutate_per_bit(const Individual& x, double p, RandomSource& rng);
Individual mutate_k_bits(const Individual& x, std::int64_t k, RandomSource& rng);

Population random_population(std::int64_t size, std::int64_t length, RandomSource& rng);

std::size_t select_uniform_index(const Population& pop, RandomSource& rng);
const Individual& select_uniform(const Population& pop, RandomSource& rng);

/// Evaluates every member exactly once, then draws one index proportional to
/// fitness. Negative fitness is rejected, never shifted.
std::size_t select_fitness_proportionate_index(const Population& pop, const FitnessFn& f,
                                               RandomSource& rng);
const Individual& select_fitness_proportionate(const Population& pop, const FitnessFn& f,
                                               RandomSource& rng);

/// Maximizer of f; the first occurrence wins ties.
std::size_t best_index(const Population& pop, const FitnessFn& f);
const Individual& best_of(const Population& pop, const FitnessFn& f);

Population merge(const Population& a, const Population& b);

/// Descending fitness, stable. Evaluates every member exactly once.
Population sort_by_fitness(const Population& pop, const FitnessFn& f);

Population take_first(const Population& pop, std::int64_t k);

}  // namespace blockea::ea
