#pragma once

#include <span>
#include <string>
#include <string_view>

#include "blockea/program.hpp"

namespace blockea {

/// A block program compiled into the binary.
struct ShippedExample {
  std::string_view name;  // display name, e.g. "Simple Plotting"
  std::string_view slug;  // file stem under programs/
  std::string_view description;
  std::string_view xml;
};

std::span<const ShippedExample> shipped_examples();

/// Looks up by display name or slug.
const ShippedExample* find_example(std::string_view name);

BlockProgram load_example(const ShippedExample& example);

}  // namespace blockea
