#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blockea {

enum class ValueType { Number, Boolean, Text, Individual, Population, ListOfNumber };

std::string_view to_string(ValueType type);
std::optional<ValueType> value_type_from_string(std::string_view name);

/// The ten palette groups. The editor colours blocks by group.
enum class BlockGroup {
  Population,
  Individuals,
  Fitness,
  Primitives,
  Logic,
  Loops,
  Functions,
  Logging,
  Multithreading,
  Time,
};

std::string_view to_string(BlockGroup group);

enum class FieldKind { Number, Text, Choice };

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::Text;
  std::vector<std::string> choices;  // Choice only
  std::string default_value;
};

/// A port is either a typed value socket or a statement body (C-shaped slot).
struct PortSpec {
  std::string name;
  std::optional<ValueType> value_type;  // nullopt: statement body

  bool is_statement() const { return !value_type.has_value(); }
};

struct BlockKind {
  std::string id;
  BlockGroup group = BlockGroup::Primitives;
  std::optional<ValueType> output;  // value block iff set
  std::vector<PortSpec> ports;      // declaration order
  std::vector<FieldSpec> fields;    // declaration order

  bool is_statement() const { return !output.has_value(); }
  const PortSpec* port(std::string_view name) const;
  const FieldSpec* field(std::string_view name) const;
};

/// Fixed registry of every block kind, in palette order.
std::span<const BlockKind> block_kinds();
const BlockKind* find_kind(std::string_view id);

/// Checks a field literal against its spec (number must be finite, choice
/// must be listed, text fields may restrict characters, e.g. bit strings).
bool field_value_ok(const BlockKind& kind, const FieldSpec& field, std::string_view value);

// Kinds referenced by name across the engine.
namespace kinds {
inline constexpr std::string_view kRepetitions = "function_repetitions";
inline constexpr std::string_view kRunIndex = "run_index";
inline constexpr std::string_view kThreadRun = "thread_run";
inline constexpr std::string_view kThreadReturn = "thread_return";
inline constexpr std::string_view kThreadTaskIndex = "thread_task_index";
}  // namespace kinds

/// Variable kinds are generated per value type: variables_get_<type>,
/// variables_set_<type>. Returns the type and whether it is a setter.
struct VariableKindInfo {
  ValueType type;
  bool setter;
};
std::optional<VariableKindInfo> variable_kind_info(std::string_view kind_id);
std::string variable_type_suffix(ValueType type);

}  // namespace blockea
