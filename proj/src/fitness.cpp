#include "blockea/fitness.hpp"

namespace blockea::fitness {

double onemax_value(const ea::Individual& x) {
  std::int64_t ones = 0;
  for (auto b : x.bits()) ones += b;
  return static_cast<double>(ones);
}

double leading_ones_value(const ea::Individual& x) {
  std::int64_t prefix = 0;
  for (auto b : x.bits()) {
    if (!b) break;
    ++prefix;
  }
  return static_cast<double>(prefix);
}

double jump_value(const ea::Individual& x, std::int64_t k) {
  const auto n = static_cast<std::int64_t>(x.size());
  if (k < 1 || k > n) {
    throw BadGap("BadGap: jump gap must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  const auto ones = static_cast<std::int64_t>(onemax_value(x));
  if (ones <= n - k || ones == n) return static_cast<double>(k + ones);
  return static_cast<double>(n - ones);
}

double onemax(const ea::Individual& x, EvalCounter& counter) {
  const double v = onemax_value(x);
  counter.observe(x, v);
  return v;
}

double leading_ones(const ea::Individual& x, EvalCounter& counter) {
  const double v = leading_ones_value(x);
  counter.observe(x, v);
  return v;
}

double jump(const ea::Individual& x, std::int64_t k, EvalCounter& counter) {
  const double v = jump_value(x, k);
  counter.observe(x, v);
  return v;
}

double diversity_mean_hamming(const ea::Population& pop) {
  if (pop.size() < 2) throw TooSmall("TooSmall: diversity needs at least two members");
  const std::size_t n = pop.front().size();
  for (const auto& member : pop) {
    if (member.size() != n) throw ea::Error(ea::ErrorCode::LengthMismatch, "LengthMismatch: members differ in length");
  }
  // Per position, a column with c ones contributes c * (m - c) differing pairs.
  const std::size_t m = pop.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ones = 0;
    for (const auto& member : pop) ones += member[i];
    total += static_cast<double>(ones) * static_cast<double>(m - ones);
  }
  const double pairs = static_cast<double>(m) * static_cast<double>(m - 1) / 2.0;
  return total / pairs;
}

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::OneMax: return "onemax";
    case ObjectiveKind::LeadingOnes: return "leading_ones";
    case ObjectiveKind::Jump: return "jump";
  }
  return "onemax";
}

std::optional<ObjectiveKind> objective_from_string(std::string_view name) {
  if (name == "onemax") return ObjectiveKind::OneMax;
  if (name == "leading_ones") return ObjectiveKind::LeadingOnes;
  if (name == "jump") return ObjectiveKind::Jump;
  return std::nullopt;
}

double Objective::operator()(const ea::Individual& x, EvalCounter& counter) const {
  switch (kind) {
    case ObjectiveKind::OneMax: return onemax(x, counter);
    case ObjectiveKind::LeadingOnes: return leading_ones(x, counter);
    case ObjectiveKind::Jump: return jump(x, gap, counter);
  }
  return onemax(x, counter);
}

}  // namespace blockea::fitness
