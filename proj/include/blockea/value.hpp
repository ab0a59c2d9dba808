#pragma once

#include <string>
#include <variant>
#include <vector>

#include "blockea/ea.hpp"
#include "blockea/registry.hpp"

namespace blockea {

using NumberList = std::vector<double>;

/// Runtime value of a block expression. `clock_derived` marks values whose
/// content depends on wall-clock readings; it propagates through every
/// operation so that events carrying such payloads can be excluded from
/// determinism comparisons.
struct Value {
  using Data = std::variant<double, bool, std::string, ea::Individual, ea::Population, NumberList>;

  Data data;
  bool clock_derived = false;

  Value() : data(0.0) {}
  Value(Data d, bool clocked = false) : data(std::move(d)), clock_derived(clocked) {}

  ValueType type() const;

  friend bool operator==(const Value&, const Value&) = default;
};

/// Text rendering used by the "to text" blocks.
std::string to_text(const NumberList& list);

}  // namespace blockea
