#include "support/random_program.hpp"

#include <array>
#include <set>
#include <string>
#include <vector>

#include "blockea/random.hpp"
#include "blockea/registry.hpp"

namespace blockea::testing {

namespace {

using VT = ValueType;
using Fields = std::map<std::string, std::string, std::less<>>;

struct Where {
  bool top_level = false;
  bool in_run = false;
  bool in_task = false;
  int depth = 0;
};

class Generator {
 public:
  Generator(std::uint64_t seed, const GeneratorOptions& options)
      : rng_(seed), options_(options), length_(static_cast<int>(2 + rng_.below(7))) {}

  BlockProgram build() {
    const int roots = 1 + static_cast<int>(rng_.below(3));
    for (int i = 0; i < roots; ++i) {
      assigned_.clear();
      b_.root(chain(Where{.top_level = true}, 1 + static_cast<int>(rng_.below(4))));
    }
    if (options_.allow_disconnected && rng_.below(5) == 0) {
      b_.root(value(pick_type(), Where{}, 1));
    }
    return b_.build();
  }

 private:
  bool chance(unsigned percent) { return rng_.below(100) < percent; }
  template <typename T>
  const T& pick(const std::vector<T>& items) { return items[rng_.below(items.size())]; }

  static std::string suffix(VT t) { return variable_type_suffix(t); }

  std::string var_name(VT t) {
    static const std::array<const char*, 3> tags = {"a", "b", "c"};
    return suffix(t) + "_" + tags[rng_.below(tags.size())];
  }

  VT pick_type() {
    static const std::vector<VT> types = {VT::Number, VT::Boolean, VT::Text, VT::Individual, VT::Population};
    return pick(types);
  }

  std::string number_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  BlockUid literal(double v) { return b_.add("number", {{"value", number_text(v)}}); }

  BlockUid any_number_literal() {
    static const std::vector<double> values = {0, 1, 2, 3, 5, 7, 10, -1, -4, 0.5, 0.25, 1.5, 1e21, 1e-7, 123456789, -0.0};
    return literal(pick(values));
  }

  /// Numbers for ports that must hold small non-negative integers; mostly
  /// literals so that most programs get past them.
  BlockUid count_value(const Where& w, int lo, int hi) {
    if (chance(85)) return literal(lo + static_cast<int>(rng_.below(static_cast<std::uint64_t>(hi - lo + 1))));
    return value(VT::Number, w, options_.max_expression_depth);
  }

  BlockUid length_value(const Where& w) {
    if (chance(90)) return literal(length_);
    return count_value(w, 0, 4);
  }

  std::string text_literal() {
    static const std::vector<std::string> plain = {"", "x", "hello", "best", "run", " ", "a b", "42", "0.5"};
    static const std::vector<std::string> awkward = {"<tag>", "a&b", "\"quoted\"", "it's", "tab\there",
                                                     "line\nbreak", "caf\xc3\xa9", "\xe2\x82\xac 5", "\xf0\x9f\x98\x80",
                                                     "]]>", "&amp;", "cr\rlf"};
    if (options_.allow_awkward_text && chance(30)) return pick(awkward);
    return pick(plain);
  }

  BlockUid add(std::string_view kind, std::vector<std::pair<std::string, BlockUid>> inputs, Fields fields = {}) {
    auto uid = b_.add(kind, std::move(fields));
    for (auto& [port, child] : inputs) b_.connect(uid, port, child);
    return uid;
  }

  Fields objective_fields() {
    static const std::vector<std::string> kinds = {"onemax", "leading_ones", "jump"};
    const std::string& kind = pick(kinds);
    return {{"objective", kind}, {"gap", number_text(kind == "jump" ? 1 + static_cast<int>(rng_.below(3)) : 2)}};
  }

  BlockUid variable_get(VT t) {
    std::string name = var_name(t);
    std::vector<std::string> known;
    for (const auto& n : assigned_) {
      if (n.rfind(suffix(t) + "_", 0) == 0) known.push_back(n);
    }
    if (!known.empty() && chance(97)) name = pick(known);
    // Mostly stay bound; an occasional unbound read exercises UnboundVariable.
    if (known.empty() && t != VT::ListOfNumber && chance(95)) return bound_literal(t);
    return b_.add("variables_get_" + suffix(t), {{"name", name}});
  }

  BlockUid bound_literal(VT t) {
    switch (t) {
      case VT::Number: return any_number_literal();
      case VT::Boolean: return b_.add("boolean", {{"value", chance(50) ? "true" : "false"}});
      case VT::Text: return b_.add("text", {{"value", text_literal()}});
      case VT::Individual: return b_.add("individual_explicit", {{"bits", random_bits()}});
      default:
        return add("population_random", {{"size", literal(1 + static_cast<int>(rng_.below(4)))}, {"length", literal(length_)}});
    }
  }

  bool has_assigned(VT t) const {
    for (const auto& n : assigned_) {
      if (n.rfind(suffix(t) + "_", 0) == 0) return true;
    }
    return false;
  }

  BlockUid value(VT t, const Where& w, int depth) {
    const bool leaf = depth >= options_.max_expression_depth || chance(25);
    switch (t) {
      case VT::Number: return number(w, depth, leaf);
      case VT::Boolean: return boolean(w, depth, leaf);
      case VT::Text: return text(w, depth, leaf);
      case VT::Individual: return individual(w, depth, leaf);
      case VT::Population: return population(w, depth, leaf);
      case VT::ListOfNumber: return variable_get(VT::ListOfNumber);
    }
    return literal(0);
  }

  BlockUid number(const Where& w, int depth, bool leaf) {
    std::vector<int> options = {0, 1, 2, 3, 4};
    if (w.in_run) options.push_back(5);
    if (w.in_task) options.push_back(6);
    if (options_.allow_host_queries) options.push_back(7);
    if (options_.allow_clock) options.push_back(8);
    if (!leaf) {
      for (int o : {20, 21, 22, 23, 24, 25, 26, 27, 28, 29}) options.push_back(o);
      if (has_assigned(VT::ListOfNumber)) {
        options.push_back(30);
        options.push_back(31);
      }
    }
    const int d = depth + 1;
    switch (pick(options)) {
      case 0:
      case 1: return any_number_literal();
      case 2: return variable_get(VT::Number);
      case 3: return b_.add("evaluation_count");
      case 4: return b_.add("loop_generation");
      case 5: return b_.add("run_index");
      case 6: return b_.add("thread_task_index");
      case 7: return b_.add("hardware_concurrency");
      case 8: return b_.add("time_timer");
      case 20:
      case 21: {
        static const std::vector<std::string> ops = {"add", "subtract", "multiply", "divide", "modulo", "minimum", "maximum"};
        return add("math_arithmetic", {{"left", value(VT::Number, w, d)}, {"right", value(VT::Number, w, d)}},
                   {{"op", pick(ops)}});
      }
      case 22: return add("fitness_onemax", {{"individual", value(VT::Individual, w, d)}});
      case 23: return add("fitness_leading_ones", {{"individual", value(VT::Individual, w, d)}});
      case 24: return add("fitness_jump", {{"individual", value(VT::Individual, w, d)}, {"gap", count_value(w, 1, 3)}});
      case 25: return add("population_size", {{"population", value(VT::Population, w, d)}});
      case 26: return add("individual_length", {{"individual", value(VT::Individual, w, d)}});
      case 27: return add("diversity_hamming", {{"population", value(VT::Population, w, d)}});
      case 28: return add("math_random_int", {{"low", count_value(w, -3, 3)}, {"high", count_value(w, 3, 9)}});
      case 29: return add("fibonacci_task", {{"argument", count_value(w, 0, 12)}});
      case 30: return add("list_length", {{"list", variable_get(VT::ListOfNumber)}});
      default: return add("list_get", {{"list", variable_get(VT::ListOfNumber)}, {"index", count_value(w, 0, 2)}});
    }
  }

  BlockUid boolean(const Where& w, int depth, bool leaf) {
    const int d = depth + 1;
    const int choice = leaf ? static_cast<int>(rng_.below(2)) : static_cast<int>(rng_.below(5));
    switch (choice) {
      case 0: return b_.add("boolean", {{"value", chance(50) ? "true" : "false"}});
      case 1: return variable_get(VT::Boolean);
      case 2: {
        static const std::vector<std::string> ops = {"eq", "neq", "lt", "lte", "gt", "gte"};
        return add("logic_compare", {{"left", value(VT::Number, w, d)}, {"right", value(VT::Number, w, d)}},
                   {{"op", pick(ops)}});
      }
      case 3: {
        static const std::vector<std::string> ops = {"and", "or", "equivalent"};
        return add("logic_operation", {{"left", value(VT::Boolean, w, d)}, {"right", value(VT::Boolean, w, d)}},
                   {{"op", pick(ops)}});
      }
      default: return add("logic_not", {{"value", value(VT::Boolean, w, d)}});
    }
  }

  BlockUid text(const Where& w, int depth, bool leaf) {
    const int d = depth + 1;
    int choice = leaf ? static_cast<int>(rng_.below(2)) : static_cast<int>(rng_.below(6));
    if (choice == 5 && !has_assigned(VT::ListOfNumber)) choice = 2;
    switch (choice) {
      case 0: return b_.add("text", {{"value", text_literal()}});
      case 1: return variable_get(VT::Text);
      case 2: return add("text_join", {{"first", value(VT::Text, w, d)}, {"second", value(VT::Text, w, d)}});
      case 3: return add("number_to_text", {{"value", value(VT::Number, w, d)}});
      case 4: return add("individual_to_text", {{"individual", value(VT::Individual, w, d)}});
      default: return add("list_to_text", {{"list", variable_get(VT::ListOfNumber)}});
    }
  }

  std::string random_bits() {
    std::string bits;
    for (int i = 0; i < length_; ++i) bits.push_back(rng_.bit() ? '1' : '0');
    return bits;
  }

  BlockUid individual(const Where& w, int depth, bool leaf) {
    const int d = depth + 1;
    const int choice = leaf ? static_cast<int>(rng_.below(3)) : static_cast<int>(rng_.below(13));
    switch (choice) {
      case 0: return add("individual_random", {{"length", length_value(w)}});
      case 1: return b_.add("individual_explicit", {{"bits", random_bits()}});
      case 2: return variable_get(VT::Individual);
      case 3: return add("crossover_one_point", {{"first", value(VT::Individual, w, d)}, {"second", value(VT::Individual, w, d)}});
      case 4: return add("crossover_two_point", {{"first", value(VT::Individual, w, d)}, {"second", value(VT::Individual, w, d)}});
      case 5: return add("crossover_uniform", {{"first", value(VT::Individual, w, d)}, {"second", value(VT::Individual, w, d)}});
      case 6: {
        static const std::vector<double> ps = {0, 0.1, 0.25, 0.5, 1};
        BlockUid p = chance(85) ? literal(pick(ps)) : value(VT::Number, w, d);
        return add("mutate_per_bit", {{"individual", value(VT::Individual, w, d)}, {"probability", p}});
      }
      case 7: return add("mutate_k_bits", {{"individual", value(VT::Individual, w, d)}, {"count", count_value(w, 0, 2)}});
      case 8: return add("select_uniform", {{"population", value(VT::Population, w, d)}});
      case 9:
        return add("select_fitness_proportionate", {{"population", value(VT::Population, w, d)}}, objective_fields());
      case 10: return add("population_best", {{"population", value(VT::Population, w, d)}}, objective_fields());
      case 11: return add("population_get", {{"population", value(VT::Population, w, d)}, {"index", count_value(w, 0, 2)}});
      default: return variable_get(VT::Individual);
    }
  }

  BlockUid population(const Where& w, int depth, bool leaf) {
    const int d = depth + 1;
    const int choice = leaf ? static_cast<int>(rng_.below(3)) : static_cast<int>(rng_.below(8));
    switch (choice) {
      case 0: return add("population_random", {{"size", count_value(w, 0, 6)}, {"length", length_value(w)}});
      case 1: return chance(30) ? b_.add("population_empty") : variable_get(VT::Population);
      case 2: return variable_get(VT::Population);
      case 3: return add("population_add", {{"population", value(VT::Population, w, d)}, {"individual", value(VT::Individual, w, d)}});
      case 4: return add("population_merge", {{"first", value(VT::Population, w, d)}, {"second", value(VT::Population, w, d)}});
      case 5: return add("population_sort", {{"population", value(VT::Population, w, d)}}, objective_fields());
      case 6: return add("population_take_first", {{"population", value(VT::Population, w, d)}, {"count", count_value(w, 0, 3)}});
      default: return add("population_random", {{"size", count_value(w, 1, 6)}, {"length", length_value(w)}});
    }
  }

  /// A statement chain of `length` blocks; returns its head.
  BlockUid chain(const Where& w, int length) {
    BlockUid head = statement(w);
    BlockUid tail = head;
    for (int i = 1; i < length; ++i) {
      BlockUid next = statement(w);
      b_.chain(tail, next);
      tail = next;
    }
    return head;
  }

  void body(const BlockUid& parent, std::string_view slot, const Where& w) {
    if (chance(10)) return;  // empty body
    b_.connect(parent, slot, chain(w, 1 + static_cast<int>(rng_.below(3))));
  }

  BlockUid until(const Where& w) {
    if (chance(75)) {
      auto bound = add("logic_compare", {{"left", b_.add("loop_generation")}, {"right", literal(1 + static_cast<int>(rng_.below(5)))}},
                       {{"op", "gte"}});
      return add("logic_operation", {{"left", bound}, {"right", value(VT::Boolean, w, 1)}}, {{"op", "or"}});
    }
    return value(VT::Boolean, w, 1);
  }

  BlockUid statement(const Where& w) {
    Where inner = w;
    inner.top_level = false;
    inner.depth = w.depth + 1;
    const bool nest = w.depth < options_.max_statement_depth;

    std::vector<int> options = {0, 0, 0, 1, 1, 2, 3};
    if (nest) {
      for (int o : {10, 11, 12, 13, 14}) options.push_back(o);
    }
    if (w.top_level) options.push_back(15);
    if (w.top_level) options.push_back(15);
    if (w.in_task) options.push_back(4);
    if (options_.allow_clock) options.push_back(5);

    switch (pick(options)) {
      case 0: {
        const VT t = chance(10) && has_assigned(VT::ListOfNumber) ? VT::ListOfNumber : pick_type();
        BlockUid v = value(t, inner, 1);
        const std::string name = var_name(t);
        assigned_.insert(name);
        return add("variables_set_" + suffix(t), {{"value", v}}, {{"name", name}});
      }
      case 1: return add("print", {{"value", value(VT::Text, inner, 1)}});
      case 2: {
        static const std::vector<std::string> styles = {"line", "scatter", "bar"};
        return add("plot", {{"series", value(VT::Text, inner, 2)}, {"x", value(VT::Number, inner, 2)}, {"y", value(VT::Number, inner, 2)}},
                   {{"style", pick(styles)}});
      }
      case 3: return b_.add("comment", {{"text", text_literal()}});
      case 4: return add("thread_return", {{"value", value(VT::Number, inner, 1)}});
      case 5:
        if (chance(50)) return add("time_sleep", {{"seconds", literal(chance(50) ? 0 : 0.001)}});
        return add("print", {{"value", add("number_to_text", {{"value", b_.add("time_timer")}})}});
      case 10: {
        auto uid = add("logic_if", {{"condition", value(VT::Boolean, inner, 1)}});
        const auto saved = assigned_;
        body(uid, "then", inner);
        assigned_ = saved;
        if (chance(60)) body(uid, "else", inner);
        assigned_ = saved;
        return uid;
      }
      case 11: {
        auto uid = add("loop_repeat", {{"times", count_value(inner, 0, 4)}});
        const auto saved = assigned_;
        body(uid, "do", inner);
        assigned_ = saved;
        return uid;
      }
      case 12:
      case 13: {
        auto uid = add(chance(50) ? "loop_ioh" : "loop_evolutionary", {{"until", until(inner)}});
        const auto saved = assigned_;
        body(uid, "do", inner);
        assigned_ = saved;
        return uid;
      }
      case 14: {
        static const std::vector<std::string> modes = {"sequential", "all", "limited"};
        Where task = inner;
        task.in_task = true;
        const std::string into = var_name(VT::ListOfNumber);
        auto uid = add("thread_run", {{"count", count_value(inner, 0, 3)}, {"workers", count_value(inner, 1, 3)}},
                       {{"mode", pick(modes)}, {"into", into}});
        const auto saved = assigned_;
        body(uid, "do", task);
        assigned_ = saved;
        assigned_.insert(into);
        return uid;
      }
      default: {
        Where run = inner;
        run.in_run = true;
        const auto saved = assigned_;
        assigned_.clear();
        auto uid = add("function_repetitions", {{"times", count_value(inner, 0, 3)}});
        body(uid, "do", run);
        assigned_ = saved;
        return uid;
      }
    }
  }

  RandomSource rng_;
  GeneratorOptions options_;
  int length_;
  ProgramBuilder b_;
  std::set<std::string> assigned_;
};

}  // namespace

BlockProgram random_program(std::uint64_t seed, const GeneratorOptions& options) {
  return Generator(seed, options).build();
}

}  // namespace blockea::testing
