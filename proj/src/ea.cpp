#include "blockea/ea.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace blockea::ea {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::BadCharacter: return "BadCharacter";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadProbability: return "BadProbability";
    case ErrorCode::BadCount: return "BadCount";
    case ErrorCode::EmptyPopulation: return "EmptyPopulation";
    case ErrorCode::AllZeroFitness: return "AllZeroFitness";
    case ErrorCode::NegativeFitness: return "NegativeFitness";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, std::string(to_string(code)) + ": " + detail);
}

void require_same_length(const Individual& a, const Individual& b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::LengthMismatch,
         "parents have lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
}

void require_nonempty(const Population& pop) {
  if (pop.empty()) fail(ErrorCode::EmptyPopulation, "population has no members");
}

std::vector<double> evaluate_all(const Population& pop, const FitnessFn& f) {
  std::vector<double> values;
  values.reserve(pop.size());
  for (const auto& member : pop) values.push_back(f(member));
  return values;
}

}  // namespace

std::string Individual::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

Individual random_individual(std::int64_t length, RandomSource& rng) {
  if (length < 1) fail(ErrorCode::BadLength, "length must be >= 1, got " + std::to_string(length));
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(length));
  for (auto& b : bits) b = rng.bit() ? 1 : 0;
  return Individual(std::move(bits));
}

Individual individual_from_text(std::string_view text) {
  if (text.empty()) fail(ErrorCode::BadCharacter, "empty bit text");
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') fail(ErrorCode::BadCharacter, std::string("'") + c + "' is not a bit");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return Individual(std::move(bits));
}

Individual complement(const Individual& x) {
  std::vector<std::uint8_t> bits = x.bits();
  for (auto& b : bits) b ^= 1;
  return Individual(std::move(bits));
}

Individual one_point_crossover_at(const Individual& a, const Individual& b, std::size_t cut) {
  std::vector<std::uint8_t> bits(a.bits().begin(), a.bits().begin() + static_cast<std::ptrdiff_t>(cut));
  bits.insert(bits.end(), b.bits().begin() + static_cast<std::ptrdiff_t>(cut), b.bits().end());
  return Individual(std::move(bits));
}

Individual two_point_crossover_at(const Individual& a, const Individual& b, std::size_t first_cut,
                                  std::size_t second_cut) {
  std::vector<std::uint8_t> bits = a.bits();
  for (std::size_t i = first_cut; i < second_cut; ++i) bits[i] = b[i];
  return Individual(std::move(bits));
}

Individual one_point_crossover(const Individual& a, const Individual& b, RandomSource& rng) {
  require_same_length(a, b);
  const std::size_t n = a.size();
  if (n < 2) fail(ErrorCode::BadLength, "one-point crossover needs n >= 2");
  const std::size_t cut = 1 + rng.below(n - 1);
  return one_point_crossover_at(a, b, cut);
}

Individual two_point_crossover(const Individual& a, const Individual& b, RandomSource& rng) {
  require_same_length(a, b);
  const std::size_t n = a.size();
  if (n < 3) fail(ErrorCode::BadLength, "two-point crossover needs n >= 3");
  // Two distinct cuts from {1, ..., n-1}, uniform over unordered pairs.
  std::size_t c1 = 1 + rng.below(n - 1);
  std::size_t c2 = 1 + rng.below(n - 2);
  if (c2 >= c1) ++c2;
  if (c1 > c2) std::swap(c1, c2);
  return two_point_crossover_at(a, b, c1, c2);
}

Individual uniform_crossover(const Individual& a, const Individual& b, RandomSource& rng) {
  require_same_length(a, b);
  std::vector<std::uint8_t> bits(a.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng.bit() ? a[i] : b[i];
  return Individual(std::move(bits));
}

Individual mutate_per_bit(const Individual& x, double p, RandomSource& rng) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::BadProbability, "p must lie in [0, 1]");
  std::vector<std::uint8_t> bits = x.bits();
  for (auto& b : bits) {
    if (rng.bernoulli(p)) b ^= 1;
  }
  return Individual(std::move(bits));
}

Individual mutate_k_bits(const Individual& x, std::int64_t k, RandomSource& rng) {
  const auto n = static_cast<std::int64_t>(x.size());
  if (k < 0 || k > n) {
    fail(ErrorCode::BadCount, "k must lie in [0, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  std::vector<std::size_t> positions(x.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::vector<std::uint8_t> bits = x.bits();
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const std::size_t j = i + rng.below(x.size() - i);
    std::swap(positions[i], positions[j]);
    bits[positions[i]] ^= 1;
  }
  return Individual(std::move(bits));
}

Population random_population(std::int64_t size, std::int64_t length, RandomSource& rng) {
  if (length < 1) fail(ErrorCode::BadLength, "length must be >= 1, got " + std::to_string(length));
  if (size < 0) fail(ErrorCode::BadCount, "population size must be >= 0, got " + std::to_string(size));
  Population pop;
  pop.reserve(static_cast<std::size_t>(size));
  for (std::int64_t i = 0; i < size; ++i) pop.push_back(random_individual(length, rng));
  return pop;
}

std::size_t select_uniform_index(const Population& pop, RandomSource& rng) {
  require_nonempty(pop);
  return rng.below(pop.size());
}

const Individual& select_uniform(const Population& pop, RandomSource& rng) {
  return pop[select_uniform_index(pop, rng)];
}

std::size_t select_fitness_proportionate_index(const Population& pop, const FitnessFn& f,
                                               RandomSource& rng) {
  require_nonempty(pop);
  const std::vector<double> values = evaluate_all(pop, f);
  double total = 0.0;
  for (double v : values) {
    if (v < 0.0) fail(ErrorCode::NegativeFitness, "fitness-proportionate selection needs f >= 0");
    total += v;
  }
  if (total <= 0.0) fail(ErrorCode::AllZeroFitness, "all members have zero fitness");
  const double target = rng.unit() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0.0) continue;
    acc += values[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

const Individual& select_fitness_proportionate(const Population& pop, const FitnessFn& f,
                                               RandomSource& rng) {
  return pop[select_fitness_proportionate_index(pop, f, rng)];
}

std::size_t best_index(const Population& pop, const FitnessFn& f) {
  require_nonempty(pop);
  std::size_t best = 0;
  double best_value = f(pop[0]);
  for (std::size_t i = 1; i < pop.size(); ++i) {
    const double v = f(pop[i]);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

const Individual& best_of(const Population& pop, const FitnessFn& f) {
  return pop[best_index(pop, f)];
}

Population merge(const Population& a, const Population& b) {
  Population out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Population sort_by_fitness(const Population& pop, const FitnessFn& f) {
  const std::vector<double> values = evaluate_all(pop, f);
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return values[l] > values[r]; });
  Population out;
  out.reserve(pop.size());
  for (auto i : order) out.push_back(pop[i]);
  return out;
}

Population take_first(const Population& pop, std::int64_t k) {
  if (k < 0 || k > static_cast<std::int64_t>(pop.size())) {
    fail(ErrorCode::BadCount, "k must lie in [0, " + std::to_string(pop.size()) + "], got " +
                                  std::to_string(k));
  }
  return Population(pop.begin(), pop.begin() + k);
}

}  // namespace blockea::ea
