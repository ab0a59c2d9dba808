#include "blockea/registry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "blockea/format.hpp"

namespace blockea {

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::Number: return "Number";
    case ValueType::Boolean: return "Boolean";
    case ValueType::Text: return "Text";
    case ValueType::Individual: return "Individual";
    case ValueType::Population: return "Population";
    case ValueType::ListOfNumber: return "ListOfNumber";
  }
  return "Number";
}

std::optional<ValueType> value_type_from_string(std::string_view name) {
  for (auto t : {ValueType::Number, ValueType::Boolean, ValueType::Text, ValueType::Individual,
                 ValueType::Population, ValueType::ListOfNumber}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view to_string(BlockGroup group) {
  switch (group) {
    case BlockGroup::Population: return "population";
    case BlockGroup::Individuals: return "individuals";
    case BlockGroup::Fitness: return "fitness";
    case BlockGroup::Primitives: return "primitives";
    case BlockGroup::Logic: return "logic";
    case BlockGroup::Loops: return "loops";
    case BlockGroup::Functions: return "functions";
    case BlockGroup::Logging: return "logging";
    case BlockGroup::Multithreading: return "multithreading";
    case BlockGroup::Time: return "time";
  }
  return "primitives";
}

std::string variable_type_suffix(ValueType type) {
  switch (type) {
    case ValueType::Number: return "number";
    case ValueType::Boolean: return "boolean";
    case ValueType::Text: return "text";
    case ValueType::Individual: return "individual";
    case ValueType::Population: return "population";
    case ValueType::ListOfNumber: return "list";
  }
  return "number";
}

const PortSpec* BlockKind::port(std::string_view name) const {
  auto it = std::find_if(ports.begin(), ports.end(), [&](const PortSpec& p) { return p.name == name; });
  return it == ports.end() ? nullptr : &*it;
}

const FieldSpec* BlockKind::field(std::string_view name) const {
  auto it = std::find_if(fields.begin(), fields.end(), [&](const FieldSpec& f) { return f.name == name; });
  return it == fields.end() ? nullptr : &*it;
}

namespace {

using VT = ValueType;
using G = BlockGroup;

PortSpec value(std::string name, VT type) { return {std::move(name), type}; }
PortSpec body(std::string name) { return {std::move(name), std::nullopt}; }

FieldSpec number_field(std::string name, std::string def) {
  return {std::move(name), FieldKind::Number, {}, std::move(def)};
}
FieldSpec text_field(std::string name, std::string def) {
  return {std::move(name), FieldKind::Text, {}, std::move(def)};
}
FieldSpec choice_field(std::string name, std::vector<std::string> choices) {
  std::string def = choices.front();
  return {std::move(name), FieldKind::Choice, std::move(choices), std::move(def)};
}

std::vector<FieldSpec> objective_fields() {
  return {choice_field("objective", {"onemax", "leading_ones", "jump"}), number_field("gap", "2")};
}

BlockKind value_kind(std::string id, G group, VT out, std::vector<PortSpec> ports,
                     std::vector<FieldSpec> fields = {}) {
  return {std::move(id), group, out, std::move(ports), std::move(fields)};
}

BlockKind statement_kind(std::string id, G group, std::vector<PortSpec> ports,
                         std::vector<FieldSpec> fields = {}) {
  return {std::move(id), group, std::nullopt, std::move(ports), std::move(fields)};
}

std::vector<BlockKind> build_registry() {
  std::vector<BlockKind> r;

  // Population
  r.push_back(value_kind("population_random", G::Population, VT::Population,
                         {value("size", VT::Number), value("length", VT::Number)}));
  r.push_back(value_kind("population_empty", G::Population, VT::Population, {}));
  r.push_back(value_kind("population_add", G::Population, VT::Population,
                         {value("population", VT::Population), value("individual", VT::Individual)}));
  r.push_back(value_kind("population_merge", G::Population, VT::Population,
                         {value("first", VT::Population), value("second", VT::Population)}));
  r.push_back(value_kind("population_sort", G::Population, VT::Population,
                         {value("population", VT::Population)}, objective_fields()));
  r.push_back(value_kind("population_take_first", G::Population, VT::Population,
                         {value("population", VT::Population), value("count", VT::Number)}));
  r.push_back(value_kind("population_size", G::Population, VT::Number,
                         {value("population", VT::Population)}));
  r.push_back(value_kind("population_best", G::Population, VT::Individual,
                         {value("population", VT::Population)}, objective_fields()));
  r.push_back(value_kind("population_get", G::Population, VT::Individual,
                         {value("population", VT::Population), value("index", VT::Number)}));
  r.push_back(value_kind("select_uniform", G::Population, VT::Individual,
                         {value("population", VT::Population)}));
  r.push_back(value_kind("select_fitness_proportionate", G::Population, VT::Individual,
                         {value("population", VT::Population)}, objective_fields()));

  // Individuals
  r.push_back(value_kind("individual_random", G::Individuals, VT::Individual,
                         {value("length", VT::Number)}));
  r.push_back(value_kind("individual_explicit", G::Individuals, VT::Individual, {},
                         {text_field("bits", "0")}));
  for (const char* id : {"crossover_one_point", "crossover_two_point", "crossover_uniform"}) {
    r.push_back(value_kind(id, G::Individuals, VT::Individual,
                           {value("first", VT::Individual), value("second", VT::Individual)}));
  }
  r.push_back(value_kind("mutate_per_bit", G::Individuals, VT::Individual,
                         {value("individual", VT::Individual), value("probability", VT::Number)}));
  r.push_back(value_kind("mutate_k_bits", G::Individuals, VT::Individual,
                         {value("individual", VT::Individual), value("count", VT::Number)}));
  r.push_back(value_kind("individual_length", G::Individuals, VT::Number,
                         {value("individual", VT::Individual)}));
  r.push_back(value_kind("individual_to_text", G::Individuals, VT::Text,
                         {value("individual", VT::Individual)}));

  // Fitness
  r.push_back(value_kind("fitness_onemax", G::Fitness, VT::Number, {value("individual", VT::Individual)}));
  r.push_back(value_kind("fitness_leading_ones", G::Fitness, VT::Number,
                         {value("individual", VT::Individual)}));
  r.push_back(value_kind("fitness_jump", G::Fitness, VT::Number,
                         {value("individual", VT::Individual), value("gap", VT::Number)}));
  r.push_back(value_kind("diversity_hamming", G::Fitness, VT::Number,
                         {value("population", VT::Population)}));
  r.push_back(value_kind("evaluation_count", G::Fitness, VT::Number, {}));

  // Primitives
  r.push_back(value_kind("number", G::Primitives, VT::Number, {}, {number_field("value", "0")}));
  r.push_back(value_kind("text", G::Primitives, VT::Text, {}, {text_field("value", "")}));
  r.push_back(value_kind("text_join", G::Primitives, VT::Text,
                         {value("first", VT::Text), value("second", VT::Text)}));
  r.push_back(value_kind("number_to_text", G::Primitives, VT::Text, {value("value", VT::Number)}));
  r.push_back(value_kind("math_arithmetic", G::Primitives, VT::Number,
                         {value("left", VT::Number), value("right", VT::Number)},
                         {choice_field("op", {"add", "subtract", "multiply", "divide", "modulo",
                                              "minimum", "maximum"})}));
  r.push_back(value_kind("math_random_int", G::Primitives, VT::Number,
                         {value("low", VT::Number), value("high", VT::Number)}));
  for (auto t : {VT::Number, VT::Boolean, VT::Text, VT::Individual, VT::Population, VT::ListOfNumber}) {
    const std::string suffix = variable_type_suffix(t);
    r.push_back(value_kind("variables_get_" + suffix, G::Primitives, t, {}, {text_field("name", "x")}));
    r.push_back(statement_kind("variables_set_" + suffix, G::Primitives, {value("value", t)},
                               {text_field("name", "x")}));
  }
  r.push_back(value_kind("list_length", G::Primitives, VT::Number, {value("list", VT::ListOfNumber)}));
  r.push_back(value_kind("list_get", G::Primitives, VT::Number,
                         {value("list", VT::ListOfNumber), value("index", VT::Number)}));
  r.push_back(value_kind("list_to_text", G::Primitives, VT::Text, {value("list", VT::ListOfNumber)}));

  // Logic
  r.push_back(value_kind("boolean", G::Logic, VT::Boolean, {}, {choice_field("value", {"true", "false"})}));
  r.push_back(value_kind("logic_compare", G::Logic, VT::Boolean,
                         {value("left", VT::Number), value("right", VT::Number)},
                         {choice_field("op", {"eq", "neq", "lt", "lte", "gt", "gte"})}));
  r.push_back(value_kind("logic_operation", G::Logic, VT::Boolean,
                         {value("left", VT::Boolean), value("right", VT::Boolean)},
                         {choice_field("op", {"and", "or", "equivalent"})}));
  r.push_back(value_kind("logic_not", G::Logic, VT::Boolean, {value("value", VT::Boolean)}));
  r.push_back(statement_kind("logic_if", G::Logic,
                             {value("condition", VT::Boolean), body("then"), body("else")}));

  // Loops
  r.push_back(statement_kind("loop_repeat", G::Loops, {value("times", VT::Number), body("do")}));
  r.push_back(statement_kind("loop_evolutionary", G::Loops, {value("until", VT::Boolean), body("do")}));
  r.push_back(statement_kind("loop_ioh", G::Loops, {value("until", VT::Boolean), body("do")}));
  r.push_back(value_kind("loop_generation", G::Loops, VT::Number, {}));

  // Functions
  r.push_back(statement_kind(std::string(kinds::kRepetitions), G::Functions,
                             {value("times", VT::Number), body("do")}));
  r.push_back(value_kind(std::string(kinds::kRunIndex), G::Functions, VT::Number, {}));

  // Logging
  r.push_back(statement_kind("print", G::Logging, {value("value", VT::Text)}));
  r.push_back(statement_kind("plot", G::Logging,
                             {value("series", VT::Text), value("x", VT::Number), value("y", VT::Number)},
                             {choice_field("style", {"line", "scatter", "bar"})}));
  r.push_back(statement_kind("comment", G::Logging, {}, {text_field("text", "")}));

  // Multi-threading
  r.push_back(statement_kind(std::string(kinds::kThreadRun), G::Multithreading,
                             {value("count", VT::Number), value("workers", VT::Number), body("do")},
                             {choice_field("mode", {"sequential", "all", "limited"}),
                              text_field("into", "results")}));
  r.push_back(statement_kind(std::string(kinds::kThreadReturn), G::Multithreading,
                             {value("value", VT::Number)}));
  r.push_back(value_kind(std::string(kinds::kThreadTaskIndex), G::Multithreading, VT::Number, {}));
  r.push_back(value_kind("hardware_concurrency", G::Multithreading, VT::Number, {}));
  r.push_back(value_kind("fibonacci_task", G::Multithreading, VT::Number, {value("argument", VT::Number)}));

  // Time
  r.push_back(statement_kind("time_sleep", G::Time, {value("seconds", VT::Number)}));
  r.push_back(value_kind("time_timer", G::Time, VT::Number, {}));
  return r;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

std::span<const BlockKind> block_kinds() {
  static const std::vector<BlockKind> registry = build_registry();
  return registry;
}

const BlockKind* find_kind(std::string_view id) {
  for (const auto& k : block_kinds()) {
    if (k.id == id) return &k;
  }
  return nullptr;
}

bool field_value_ok(const BlockKind& kind, const FieldSpec& field, std::string_view value) {
  switch (field.kind) {
    case FieldKind::Number: {
      auto parsed = parse_number(value);
      return parsed && std::isfinite(*parsed);
    }
    case FieldKind::Choice:
      return std::find(field.choices.begin(), field.choices.end(), value) != field.choices.end();
    case FieldKind::Text:
      if (field.name == "name" || field.name == "into") return is_identifier(value);
      if (kind.id == "individual_explicit" && field.name == "bits") {
        return !value.empty() &&
               std::all_of(value.begin(), value.end(), [](char c) { return c == '0' || c == '1'; });
      }
      return true;
  }
  return false;
}

std::optional<VariableKindInfo> variable_kind_info(std::string_view kind_id) {
  for (auto t : {VT::Number, VT::Boolean, VT::Text, VT::Individual, VT::Population, VT::ListOfNumber}) {
    const std::string suffix = variable_type_suffix(t);
    if (kind_id == "variables_get_" + suffix) return VariableKindInfo{t, false};
    if (kind_id == "variables_set_" + suffix) return VariableKindInfo{t, true};
  }
  return std::nullopt;
}

}  // namespace blockea
