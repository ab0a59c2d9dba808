#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "blockea/ea.hpp"

namespace blockea::fitness {

class BadGap : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Counts objective evaluations within one run and remembers the best
/// individual seen so far. Confined to the thread that owns the run.
class EvalCounter {
 public:
  std::int64_t count() const { return count_; }

  void observe(const ea::Individual& x, double value) {
    ++count_;
    if (!best_value_ || value > *best_value_) {
      best_value_ = value;
      best_ = x;
    }
  }

  const std::optional<double>& best_so_far() const { return best_value_; }
  const ea::Individual& best_individual() const { return best_; }

  void reset() { *this = EvalCounter{}; }

 private:
  std::int64_t count_ = 0;
  std::optional<double> best_value_;
  ea::Individual best_;
};

// Raw definitions. They never touch a counter.
double onemax_value(const ea::Individual& x);
double leading_ones_value(const ea::Individual& x);
/// Droste-Jansen-Wegener Jump_k; throws BadGap unless 1 <= k <= n.
double jump_value(const ea::Individual& x, std::int64_t k);

// Objective evaluations: each call increments the counter by exactly one.
double onemax(const ea::Individual& x, EvalCounter& counter);
double leading_ones(const ea::Individual& x, EvalCounter& counter);
double jump(const ea::Individual& x, std::int64_t k, EvalCounter& counter);

/// Mean pairwise Hamming distance; not an objective, never counted.
double diversity_mean_hamming(const ea::Population& pop);

enum class ObjectiveKind { OneMax, LeadingOnes, Jump };

std::string_view to_string(ObjectiveKind kind);
std::optional<ObjectiveKind> objective_from_string(std::string_view name);

/// An objective with its parameter, bound to a counter on demand.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::OneMax;
  std::int64_t gap = 2;

  double operator()(const ea::Individual& x, EvalCounter& counter) const;

  ea::FitnessFn bind(EvalCounter& counter) const {
    return [this, &counter](const ea::Individual& x) { return (*this)(x, counter); };
  }
};

}  // namespace blockea::fitness
