#include "blockea/codegen.hpp"

#include <fstream>
#include <functional>
#include <unordered_map>

#include "blockea/runtime_js.hpp"
#include "blockea/validate.hpp"
#include "json.hpp"

namespace blockea::codegen {

namespace {

std::string js_string(std::string_view text) {
  return nlohmann::json(std::string(text)).dump(-1, ' ', true, nlohmann::json::error_handler_t::replace);
}

class Emitter;
using ValueEmitter = std::function<std::string(Emitter&, const Block&)>;
using StatementEmitter = std::function<void(Emitter&, const Block&)>;

const std::unordered_map<std::string_view, ValueEmitter>& value_emitters();
const std::unordered_map<std::string_view, StatementEmitter>& statement_emitters();

class Emitter {
 public:
  explicit Emitter(const BlockProgram& program) : program_(program) {}

  std::string in(const Block& b, std::string_view port) { return value(program_.at(*b.input(port))); }

  std::string integer(const Block& b, std::string_view port) {
    return "rt.int(" + in(b, port) + ", " + js_string(port) + ")";
  }

  std::string value(const Block& b) {
    if (auto var = variable_kind_info(b.kind->id); var && !var->setter) {
      return "rt.getVar(ctx, " + js_string(b.field("name")) + ")";
    }
    auto it = value_emitters().find(b.kind->id);
    if (it == value_emitters().end()) throw UnsupportedBlock(b.kind->id);
    return it->second(*this, b);
  }

  void statement(const Block& b) {
    if (auto var = variable_kind_info(b.kind->id); var && var->setter) {
      line("rt.setVar(ctx, " + js_string(b.field("name")) + ", " + in(b, "value") + ");");
      return;
    }
    auto it = statement_emitters().find(b.kind->id);
    if (it == statement_emitters().end()) throw UnsupportedBlock(b.kind->id);
    it->second(*this, b);
  }

  void chain(const BlockUid* head) {
    for (const Block* cursor = head ? &program_.at(*head) : nullptr; cursor != nullptr;
         cursor = cursor->next ? &program_.at(*cursor->next) : nullptr) {
      statement(*cursor);
    }
  }

  /// Emits `open`, the body indented, then `close`.
  void block(const std::string& open, const Block& b, std::string_view slot, const std::string& close) {
    line(open);
    ++depth_;
    chain(b.input(slot));
    --depth_;
    line(close);
  }

  void line(const std::string& text) {
    out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  void indent() { ++depth_; }
  void dedent() { --depth_; }
  std::string take() { return std::move(out_); }

 private:
  const BlockProgram& program_;
  std::string out_;
  int depth_ = 0;
};

std::string objective(const Block& b) {
  return "rt.objective(ctx, " + js_string(b.field("objective")) + ", " + std::string(b.field("gap")) + ")";
}

std::string call(std::string_view fn, std::initializer_list<std::string> args) {
  std::string out = std::string(fn) + "(";
  bool first = true;
  for (const auto& a : args) {
    if (!first) out += ", ";
    out += a;
    first = false;
  }
  return out + ")";
}

const std::unordered_map<std::string_view, ValueEmitter>& value_emitters() {
  static const std::unordered_map<std::string_view, ValueEmitter> table = {
      {"population_random",
       [](Emitter& e, const Block& b) {
         return call("rt.randomPopulation", {"ctx", e.integer(b, "size"), e.integer(b, "length")});
       }},
      {"population_empty", [](Emitter&, const Block&) { return std::string("[]"); }},
      {"population_add",
       [](Emitter& e, const Block& b) { return call("rt.add", {e.in(b, "population"), e.in(b, "individual")}); }},
      {"population_merge",
       [](Emitter& e, const Block& b) { return call("rt.merge", {e.in(b, "first"), e.in(b, "second")}); }},
      {"population_sort",
       [](Emitter& e, const Block& b) { return call("rt.sortPop", {objective(b), e.in(b, "population")}); }},
      {"population_take_first",
       [](Emitter& e, const Block& b) {
         return call("rt.takeFirst", {e.in(b, "population"), e.integer(b, "count")});
       }},
      {"population_size", [](Emitter& e, const Block& b) { return "(" + e.in(b, "population") + ").length"; }},
      {"population_best",
       [](Emitter& e, const Block& b) { return call("rt.bestOf", {objective(b), e.in(b, "population")}); }},
      {"population_get",
       [](Emitter& e, const Block& b) {
         return call("rt.at", {e.in(b, "population"), e.in(b, "index"), "'population'"});
       }},
      {"select_uniform",
       [](Emitter& e, const Block& b) { return call("rt.selectUniform", {"ctx", e.in(b, "population")}); }},
      {"select_fitness_proportionate",
       [](Emitter& e, const Block& b) {
         return call("rt.selectProportionate", {"ctx", objective(b), e.in(b, "population")});
       }},
      {"individual_random",
       [](Emitter& e, const Block& b) { return call("rt.randomIndividual", {"ctx", e.integer(b, "length")}); }},
      {"individual_explicit",
       [](Emitter&, const Block& b) { return call("rt.fromText", {js_string(b.field("bits"))}); }},
      {"crossover_one_point",
       [](Emitter& e, const Block& b) { return call("rt.onePoint", {"ctx", e.in(b, "first"), e.in(b, "second")}); }},
      {"crossover_two_point",
       [](Emitter& e, const Block& b) { return call("rt.twoPoint", {"ctx", e.in(b, "first"), e.in(b, "second")}); }},
      {"crossover_uniform",
       [](Emitter& e, const Block& b) { return call("rt.uniform", {"ctx", e.in(b, "first"), e.in(b, "second")}); }},
      {"mutate_per_bit",
       [](Emitter& e, const Block& b) {
         return call("rt.mutatePerBit", {"ctx", e.in(b, "individual"), e.in(b, "probability")});
       }},
      {"mutate_k_bits",
       [](Emitter& e, const Block& b) {
         return call("rt.mutateKBits", {"ctx", e.in(b, "individual"), e.integer(b, "count")});
       }},
      {"individual_length", [](Emitter& e, const Block& b) { return "(" + e.in(b, "individual") + ").length"; }},
      {"individual_to_text",
       [](Emitter& e, const Block& b) { return call("rt.bitsText", {e.in(b, "individual")}); }},
      {"fitness_onemax", [](Emitter& e, const Block& b) { return call("rt.onemax", {"ctx", e.in(b, "individual")}); }},
      {"fitness_leading_ones",
       [](Emitter& e, const Block& b) { return call("rt.leadingOnes", {"ctx", e.in(b, "individual")}); }},
      {"fitness_jump",
       [](Emitter& e, const Block& b) {
         return call("rt.jump", {"ctx", e.in(b, "individual"), e.integer(b, "gap")});
       }},
      {"diversity_hamming", [](Emitter& e, const Block& b) { return call("rt.diversity", {e.in(b, "population")}); }},
      {"evaluation_count", [](Emitter&, const Block&) { return std::string("ctx.count"); }},
      {"number", [](Emitter&, const Block& b) { return "(" + std::string(b.field("value")) + ")"; }},
      {"text", [](Emitter&, const Block& b) { return js_string(b.field("value")); }},
      {"text_join", [](Emitter& e, const Block& b) { return call("rt.join", {e.in(b, "first"), e.in(b, "second")}); }},
      {"number_to_text", [](Emitter& e, const Block& b) { return call("String", {e.in(b, "value")}); }},
      {"math_arithmetic",
       [](Emitter& e, const Block& b) {
         const std::string l = e.in(b, "left");
         const std::string r = e.in(b, "right");
         const std::string_view op = b.field("op");
         if (op == "minimum") return call("Math.min", {l, r});
         if (op == "maximum") return call("Math.max", {l, r});
         static const std::unordered_map<std::string_view, std::string> symbols = {
             {"add", "+"}, {"subtract", "-"}, {"multiply", "*"}, {"divide", "/"}, {"modulo", "%"}};
         return "(" + l + " " + symbols.at(op) + " " + r + ")";
       }},
      {"math_random_int",
       [](Emitter& e, const Block& b) {
         return call("rt.randomInt", {"ctx", e.integer(b, "low"), e.integer(b, "high")});
       }},
      {"list_length", [](Emitter& e, const Block& b) { return "(" + e.in(b, "list") + ").length"; }},
      {"list_get", [](Emitter& e, const Block& b) { return call("rt.at", {e.in(b, "list"), e.in(b, "index"), "'list'"}); }},
      {"list_to_text", [](Emitter& e, const Block& b) { return call("rt.listText", {e.in(b, "list")}); }},
      {"boolean", [](Emitter&, const Block& b) { return std::string(b.field("value")); }},
      {"logic_compare",
       [](Emitter& e, const Block& b) {
         static const std::unordered_map<std::string_view, std::string> symbols = {
             {"eq", "==="}, {"neq", "!=="}, {"lt", "<"}, {"lte", "<="}, {"gt", ">"}, {"gte", ">="}};
         return "(" + e.in(b, "left") + " " + symbols.at(b.field("op")) + " " + e.in(b, "right") + ")";
       }},
      {"logic_operation",
       [](Emitter& e, const Block& b) {
         static const std::unordered_map<std::string_view, std::string> symbols = {
             {"and", "&&"}, {"or", "||"}, {"equivalent", "==="}};
         return "(" + e.in(b, "left") + " " + symbols.at(b.field("op")) + " " + e.in(b, "right") + ")";
       }},
      {"logic_not", [](Emitter& e, const Block& b) { return "(!" + e.in(b, "value") + ")"; }},
      {"loop_generation", [](Emitter&, const Block&) { return std::string("ctx.generation"); }},
      {kinds::kRunIndex, [](Emitter&, const Block&) { return std::string("ctx.runId"); }},
      {kinds::kThreadTaskIndex, [](Emitter&, const Block&) { return std::string("ctx.taskIndex"); }},
      {"hardware_concurrency", [](Emitter&, const Block&) { return std::string("rt.hardwareConcurrency()"); }},
      {"fibonacci_task", [](Emitter& e, const Block& b) { return call("rt.fibonacci", {e.integer(b, "argument")}); }},
      {"time_timer", [](Emitter&, const Block&) { return std::string("rt.timer(ctx)"); }},
  };
  return table;
}

const std::unordered_map<std::string_view, StatementEmitter>& statement_emitters() {
  static const std::unordered_map<std::string_view, StatementEmitter> table = {
      {"logic_if",
       [](Emitter& e, const Block& b) {
         e.block("if (" + e.in(b, "condition") + ") {", b, "then", "} else {");
         e.indent();
         e.chain(b.input("else"));
         e.dedent();
         e.line("}");
       }},
      {"loop_repeat",
       [](Emitter& e, const Block& b) {
         e.block("rt.repeat(ctx, " + e.integer(b, "times") + ", () => {", b, "do", "});");
       }},
      {"loop_evolutionary",
       [](Emitter& e, const Block& b) {
         e.block("rt.evolve(ctx, () => " + e.in(b, "until") + ", () => {", b, "do", "}, false);");
       }},
      {"loop_ioh",
       [](Emitter& e, const Block& b) {
         e.block("rt.evolve(ctx, () => " + e.in(b, "until") + ", () => {", b, "do", "}, true);");
       }},
      {kinds::kRepetitions,
       [](Emitter& e, const Block& b) {
         e.block("rt.repetitions(ctx, " + e.integer(b, "times") + ", (ctx) => {", b, "do", "});");
       }},
      {"print", [](Emitter& e, const Block& b) { e.line("rt.print(ctx, " + e.in(b, "value") + ");"); }},
      {"plot",
       [](Emitter& e, const Block& b) {
         e.line(call("rt.plot", {"ctx", js_string(b.field("style")), e.in(b, "series"), e.in(b, "x"), e.in(b, "y")}) +
                ";");
       }},
      {"comment",
       [](Emitter& e, const Block& b) { e.line("// comment " + js_string(b.field("text"))); }},
      {kinds::kThreadRun,
       [](Emitter& e, const Block& b) {
         e.line("// thread_run (" + std::string(b.field("mode")) + "): tasks run one after another in this bundle");
         e.block("rt.setVar(ctx, " + js_string(b.field("into")) + ", rt.threadRun(ctx, " + e.integer(b, "count") +
                     ", " + e.integer(b, "workers") + ", " + js_string(b.field("mode")) + ", (ctx) => {",
                 b, "do", "}));");
       }},
      {kinds::kThreadReturn,
       [](Emitter& e, const Block& b) { e.line("ctx.taskResult = " + e.in(b, "value") + ";"); }},
      {"time_sleep", [](Emitter& e, const Block& b) { e.line("rt.sleep(" + e.in(b, "seconds") + ");"); }},
  };
  return table;
}

}  // namespace

bool has_emitter(std::string_view kind_id) {
  if (variable_kind_info(kind_id)) return true;
  return value_emitters().contains(kind_id) || statement_emitters().contains(kind_id);
}

std::string_view runtime_source() { return embedded::kRuntimeJs; }

Bundle emit_standalone(const BlockProgram& program, std::uint64_t master_seed, std::int64_t iteration_budget) {
  auto diagnostics = validate(program);
  if (has_errors(diagnostics)) throw InvalidProgram(std::move(diagnostics));

  Emitter body(program);
  body.indent();
  for (const auto& root : program.roots()) {
    if (!is_executable_root(program, root)) continue;
    body.chain(&root);
  }

  std::string out;
  out += "'use strict';\n";
  out += "// Exported block program. Usage: node program.js [seed]\n";
  out += "const rt = require('./" + std::string(Bundle::kRuntimeFile) + "');\n\n";
  out += "const DEFAULT_SEED = '" + std::to_string(master_seed) + "';\n";
  out += "const ITERATION_BUDGET = " + std::to_string(iteration_budget) + ";\n\n";
  out += "function main(ctx) {\n" + body.take() + "}\n\n";
  out += "function run(seed = DEFAULT_SEED, write = undefined) {\n";
  out += "  return rt.execute(main, seed, ITERATION_BUDGET, write);\n";
  out += "}\n\n";
  out += "module.exports = { run };\n\n";
  out += "if (require.main === module) process.exitCode = run(process.argv[2] ?? DEFAULT_SEED);\n";
  return Bundle{std::move(out), std::string(runtime_source())};
}

void write_bundle(const Bundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : {std::pair{Bundle::kProgramFile, &bundle.program},
                                   std::pair{Bundle::kRuntimeFile, &bundle.runtime}}) {
    std::ofstream f(dir / std::string(name), std::ios::binary);
    f << *text;
    if (!f) throw std::filesystem::filesystem_error("cannot write", dir / std::string(name),
                                                    std::make_error_code(std::errc::io_error));
  }
}

}  // namespace blockea::codegen
