#include "blockea/interpreter.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <thread>
#include <unordered_map>

#include "blockea/fitness.hpp"
#include "blockea/format.hpp"
#include "blockea/random.hpp"

namespace blockea {

std::string_view to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::UnboundVariable: return "UnboundVariable";
    case HaltReason::EmptyPopulation: return "EmptyPopulation";
    case HaltReason::BudgetExhausted: return "BudgetExhausted";
    case HaltReason::BadRange: return "BadRange";
    case HaltReason::BadDuration: return "BadDuration";
    case HaltReason::NotAnInteger: return "NotAnInteger";
    case HaltReason::BadLength: return "BadLength";
    case HaltReason::BadCharacter: return "BadCharacter";
    case HaltReason::LengthMismatch: return "LengthMismatch";
    case HaltReason::BadProbability: return "BadProbability";
    case HaltReason::BadCount: return "BadCount";
    case HaltReason::AllZeroFitness: return "AllZeroFitness";
    case HaltReason::NegativeFitness: return "NegativeFitness";
    case HaltReason::BadGap: return "BadGap";
    case HaltReason::TooSmall: return "TooSmall";
    case HaltReason::IndexOutOfRange: return "IndexOutOfRange";
    case HaltReason::WorkerLimit: return "WorkerLimit";
    case HaltReason::TooLarge: return "TooLarge";
  }
  return "Halt";
}

RuntimeHalt::RuntimeHalt(HaltReason reason, const std::string& detail)
    : std::runtime_error("RuntimeHalt(" + std::string(to_string(reason)) + "): " + detail), reason_(reason) {}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  std::string out = "program has validation errors:";
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::Error) out += " " + std::string(to_string(d.code)) + "(" + d.detail + ")";
  }
  return out;
}

}  // namespace

InvalidProgram::InvalidProgram(std::vector<Diagnostic> diagnostics)
    : std::invalid_argument(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

namespace {

using Clock = std::chrono::steady_clock;

HaltReason halt_reason_of(ea::ErrorCode code) {
  switch (code) {
    case ea::ErrorCode::BadLength: return HaltReason::BadLength;
    case ea::ErrorCode::BadCharacter: return HaltReason::BadCharacter;
    case ea::ErrorCode::LengthMismatch: return HaltReason::LengthMismatch;
    case ea::ErrorCode::BadProbability: return HaltReason::BadProbability;
    case ea::ErrorCode::BadCount: return HaltReason::BadCount;
    case ea::ErrorCode::EmptyPopulation: return HaltReason::EmptyPopulation;
    case ea::ErrorCode::AllZeroFitness: return HaltReason::AllZeroFitness;
    case ea::ErrorCode::NegativeFitness: return HaltReason::NegativeFitness;
  }
  return HaltReason::BadCount;
}

enum class Op {
  PopulationRandom, PopulationEmpty, PopulationAdd, PopulationMerge, PopulationSort, PopulationTakeFirst,
  PopulationSize, PopulationBest, PopulationGet, SelectUniform, SelectFitnessProportionate,
  IndividualRandom, IndividualExplicit, CrossoverOnePoint, CrossoverTwoPoint, CrossoverUniform,
  MutatePerBit, MutateKBits, IndividualLength, IndividualToText,
  FitnessOneMax, FitnessLeadingOnes, FitnessJump, DiversityHamming, EvaluationCount,
  Number, Text, TextJoin, NumberToText, MathArithmetic, MathRandomInt, VariableGet, VariableSet,
  ListLength, ListGet, ListToText,
  Boolean, LogicCompare, LogicOperation, LogicNot, LogicIf,
  LoopRepeat, LoopEvolutionary, LoopIoh, LoopGeneration,
  Repetitions, RunIndex,
  Print, Plot, Comment,
  ThreadRun, ThreadReturn, ThreadTaskIndex, HardwareConcurrency, FibonacciTask,
  TimeSleep, TimeTimer,
};

Op op_of(const BlockKind& kind) {
  static const std::unordered_map<std::string_view, Op> table = {
      {"population_random", Op::PopulationRandom},
      {"population_empty", Op::PopulationEmpty},
      {"population_add", Op::PopulationAdd},
      {"population_merge", Op::PopulationMerge},
      {"population_sort", Op::PopulationSort},
      {"population_take_first", Op::PopulationTakeFirst},
      {"population_size", Op::PopulationSize},
      {"population_best", Op::PopulationBest},
      {"population_get", Op::PopulationGet},
      {"select_uniform", Op::SelectUniform},
      {"select_fitness_proportionate", Op::SelectFitnessProportionate},
      {"individual_random", Op::IndividualRandom},
      {"individual_explicit", Op::IndividualExplicit},
      {"crossover_one_point", Op::CrossoverOnePoint},
      {"crossover_two_point", Op::CrossoverTwoPoint},
      {"crossover_uniform", Op::CrossoverUniform},
      {"mutate_per_bit", Op::MutatePerBit},
      {"mutate_k_bits", Op::MutateKBits},
      {"individual_length", Op::IndividualLength},
      {"individual_to_text", Op::IndividualToText},
      {"fitness_onemax", Op::FitnessOneMax},
      {"fitness_leading_ones", Op::FitnessLeadingOnes},
      {"fitness_jump", Op::FitnessJump},
      {"diversity_hamming", Op::DiversityHamming},
      {"evaluation_count", Op::EvaluationCount},
      {"number", Op::Number},
      {"text", Op::Text},
      {"text_join", Op::TextJoin},
      {"number_to_text", Op::NumberToText},
      {"math_arithmetic", Op::MathArithmetic},
      {"math_random_int", Op::MathRandomInt},
      {"list_length", Op::ListLength},
      {"list_get", Op::ListGet},
      {"list_to_text", Op::ListToText},
      {"boolean", Op::Boolean},
      {"logic_compare", Op::LogicCompare},
      {"logic_operation", Op::LogicOperation},
      {"logic_not", Op::LogicNot},
      {"logic_if", Op::LogicIf},
      {"loop_repeat", Op::LoopRepeat},
      {"loop_evolutionary", Op::LoopEvolutionary},
      {"loop_ioh", Op::LoopIoh},
      {"loop_generation", Op::LoopGeneration},
      {kinds::kRepetitions, Op::Repetitions},
      {kinds::kRunIndex, Op::RunIndex},
      {"print", Op::Print},
      {"plot", Op::Plot},
      {"comment", Op::Comment},
      {kinds::kThreadRun, Op::ThreadRun},
      {kinds::kThreadReturn, Op::ThreadReturn},
      {kinds::kThreadTaskIndex, Op::ThreadTaskIndex},
      {"hardware_concurrency", Op::HardwareConcurrency},
      {"fibonacci_task", Op::FibonacciTask},
      {"time_sleep", Op::TimeSleep},
      {"time_timer", Op::TimeTimer},
  };
  if (auto var = variable_kind_info(kind.id)) return var->setter ? Op::VariableSet : Op::VariableGet;
  return table.at(kind.id);
}

/// JavaScript Math.min / Math.max semantics (NaN wins, -0 < +0).
double js_min(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  if (a == b) return std::signbit(a) ? a : b;
  return a < b ? a : b;
}

double js_max(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  if (a == b) return std::signbit(a) ? b : a;
  return a > b ? a : b;
}

/// Immutable per-interpretation state shared by every frame.
struct Shared {
  const BlockProgram* program;
  std::uint64_t master_seed;
  InterpretOptions options;
  std::int64_t* next_run_id;  // touched only by the top-level frame
};

/// Execution state of one run, one thread task, or the top level.
struct Frame {
  const Shared* shared = nullptr;
  std::int64_t run_id = kNoRun;
  RandomSource rng{0};
  fitness::EvalCounter counter;
  std::int64_t generation = 0;
  std::int64_t iterations = 0;
  std::int64_t last_record_evaluations = 0;
  Clock::time_point started = Clock::now();
  std::map<std::string, Value, std::less<>> scope;
  EventSink* sink = nullptr;
  bool records_enabled = false;
  std::optional<std::size_t> task_index;
  std::optional<Value> task_result;
};

class Engine {
 public:
  static void exec_chain(const BlockUid& head, Frame& f) {
    const BlockProgram& program = *f.shared->program;
    const Block* cursor = &program.at(head);
    while (cursor != nullptr) {
      exec(*cursor, f);
      cursor = cursor->next ? &program.at(*cursor->next) : nullptr;
    }
  }

 private:
  template <typename T>
  static const T& as(const Value& v, std::string_view what) {
    if (const T* p = std::get_if<T>(&v.data)) return *p;
    throw RuntimeTypeError("value for " + std::string(what) + " has type " + std::string(to_string(v.type())));
  }

  [[noreturn]] static void too_large(std::string_view what) {
    throw RuntimeHalt(HaltReason::TooLarge, std::string(what) + " exceeds " + std::to_string(kMaxValueSize) + " elements");
  }

  static void check_size(const ea::Population& pop) {
    std::int64_t bits = 0;
    for (const auto& x : pop) bits += static_cast<std::int64_t>(x.size());
    if (bits > kMaxValueSize) too_large("population");
  }

  static std::int64_t as_int(const Value& v, std::string_view what) {
    const double d = as<double>(v, what);
    if (!std::isfinite(d) || d != std::floor(d) || std::fabs(d) > 9007199254740992.0) {
      throw RuntimeHalt(HaltReason::NotAnInteger, std::string(what) + " must be an integer, got " + format_number(d));
    }
    return static_cast<std::int64_t>(d);
  }

  static void check_stop(const Frame& f) {
    if (f.shared->options.stop.stop_requested()) throw Cancelled();
  }

  static void tick(Frame& f) {
    check_stop(f);
    if (++f.iterations > f.shared->options.iteration_budget) {
      throw RuntimeHalt(HaltReason::BudgetExhausted,
                        "more than " + std::to_string(f.shared->options.iteration_budget) + " loop iterations");
    }
  }

  static void emit(Frame& f, EventPayload payload, bool clocked = false) {
    f.sink->emit(Event{f.run_id, std::move(payload), clocked});
  }

  static fitness::Objective objective_of(const Block& b) {
    fitness::Objective obj;
    obj.kind = *fitness::objective_from_string(b.field("objective"));
    obj.gap = as_int(Value(*parse_number(b.field("gap"))), b.kind->id + ".gap");
    return obj;
  }

  static const Block& child(const Block& b, std::string_view port, const Frame& f) {
    return f.shared->program->at(*b.input(port));
  }

  /// Evaluates value inputs and remembers whether any was clock-derived.
  struct Inputs {
    const Block& block;
    Frame& frame;
    bool clocked = false;

    Value operator()(std::string_view port) {
      Value v = eval(child(block, port, frame), frame);
      clocked = clocked || v.clock_derived;
      return v;
    }
  };

  static Value eval(const Block& b, Frame& f) {
    try {
      Inputs in{b, f};
      Value out = eval_op(b, f, in);
      out.clock_derived = out.clock_derived || in.clocked;
      return out;
    } catch (const ea::Error& e) {
      throw RuntimeHalt(halt_reason_of(e.code()), e.what());
    } catch (const fitness::BadGap& e) {
      throw RuntimeHalt(HaltReason::BadGap, e.what());
    } catch (const fitness::TooSmall& e) {
      throw RuntimeHalt(HaltReason::TooSmall, e.what());
    }
  }

  static Value eval_op(const Block& b, Frame& f, Inputs& in) {
    const std::string& id = b.kind->id;
    switch (op_of(*b.kind)) {
      case Op::PopulationRandom: {
        const auto size = as_int(in("size"), "size");
        const auto length = as_int(in("length"), "length");
        if (size > 0 && length > 0 && size > kMaxValueSize / length) too_large("population");
        return Value(ea::random_population(size, length, f.rng));
      }
      case Op::PopulationEmpty: return Value(ea::Population{});
      case Op::PopulationAdd: {
        auto pop = as<ea::Population>(in("population"), id);
        pop.push_back(as<ea::Individual>(in("individual"), id));
        check_size(pop);
        return Value(std::move(pop));
      }
      case Op::PopulationMerge: {
        const Value a = in("first");
        const Value c = in("second");
        auto merged = ea::merge(as<ea::Population>(a, id), as<ea::Population>(c, id));
        check_size(merged);
        return Value(std::move(merged));
      }
      case Op::PopulationSort: {
        const auto obj = objective_of(b);
        return Value(ea::sort_by_fitness(as<ea::Population>(in("population"), id), obj.bind(f.counter)));
      }
      case Op::PopulationTakeFirst: {
        const Value pop = in("population");
        return Value(ea::take_first(as<ea::Population>(pop, id), as_int(in("count"), "count")));
      }
      case Op::PopulationSize:
        return Value(static_cast<double>(as<ea::Population>(in("population"), id).size()));
      case Op::PopulationBest: {
        const auto obj = objective_of(b);
        return Value(ea::best_of(as<ea::Population>(in("population"), id), obj.bind(f.counter)));
      }
      case Op::PopulationGet: {
        const Value pop = in("population");
        const auto& members = as<ea::Population>(pop, id);
        const auto index = as_int(in("index"), "index");
        if (index < 0 || index >= static_cast<std::int64_t>(members.size())) {
          throw RuntimeHalt(HaltReason::IndexOutOfRange, "population index " + std::to_string(index));
        }
        return Value(members[static_cast<std::size_t>(index)]);
      }
      case Op::SelectUniform:
        return Value(ea::select_uniform(as<ea::Population>(in("population"), id), f.rng));
      case Op::SelectFitnessProportionate: {
        const auto obj = objective_of(b);
        return Value(ea::select_fitness_proportionate(as<ea::Population>(in("population"), id),
                                                      obj.bind(f.counter), f.rng));
      }
      case Op::IndividualRandom: {
        const auto length = as_int(in("length"), "length");
        if (length > kMaxValueSize) too_large("individual");
        return Value(ea::random_individual(length, f.rng));
      }
      case Op::IndividualExplicit: return Value(ea::individual_from_text(b.field("bits")));
      case Op::CrossoverOnePoint:
      case Op::CrossoverTwoPoint:
      case Op::CrossoverUniform: {
        const Value first = in("first");
        const Value second = in("second");
        const auto& a = as<ea::Individual>(first, id);
        const auto& c = as<ea::Individual>(second, id);
        switch (op_of(*b.kind)) {
          case Op::CrossoverOnePoint: return Value(ea::one_point_crossover(a, c, f.rng));
          case Op::CrossoverTwoPoint: return Value(ea::two_point_crossover(a, c, f.rng));
          default: return Value(ea::uniform_crossover(a, c, f.rng));
        }
      }
      case Op::MutatePerBit: {
        const Value x = in("individual");
        const double p = as<double>(in("probability"), "probability");
        return Value(ea::mutate_per_bit(as<ea::Individual>(x, id), p, f.rng));
      }
      case Op::MutateKBits: {
        const Value x = in("individual");
        return Value(ea::mutate_k_bits(as<ea::Individual>(x, id), as_int(in("count"), "count"), f.rng));
      }
      case Op::IndividualLength:
        return Value(static_cast<double>(as<ea::Individual>(in("individual"), id).size()));
      case Op::IndividualToText: return Value(as<ea::Individual>(in("individual"), id).to_string());
      case Op::FitnessOneMax: return Value(fitness::onemax(as<ea::Individual>(in("individual"), id), f.counter));
      case Op::FitnessLeadingOnes:
        return Value(fitness::leading_ones(as<ea::Individual>(in("individual"), id), f.counter));
      case Op::FitnessJump: {
        const Value x = in("individual");
        return Value(fitness::jump(as<ea::Individual>(x, id), as_int(in("gap"), "gap"), f.counter));
      }
      case Op::DiversityHamming:
        return Value(fitness::diversity_mean_hamming(as<ea::Population>(in("population"), id)));
      case Op::EvaluationCount: return Value(static_cast<double>(f.counter.count()));
      case Op::Number: return Value(*parse_number(b.field("value")));
      case Op::Text: return Value(std::string(b.field("value")));
      case Op::TextJoin: {
        std::string a = as<std::string>(in("first"), id);
        const Value second = in("second");
        const auto& tail = as<std::string>(second, id);
        if (static_cast<std::int64_t>(a.size() + tail.size()) > kMaxValueSize) too_large("text");
        a += tail;
        return Value(std::move(a));
      }
      case Op::NumberToText: return Value(format_number(as<double>(in("value"), id)));
      case Op::MathArithmetic: {
        const double l = as<double>(in("left"), id);
        const double r = as<double>(in("right"), id);
        const std::string_view op = b.field("op");
        if (op == "add") return Value(l + r);
        if (op == "subtract") return Value(l - r);
        if (op == "multiply") return Value(l * r);
        if (op == "divide") return Value(l / r);
        if (op == "modulo") return Value(std::fmod(l, r));
        if (op == "minimum") return Value(js_min(l, r));
        return Value(js_max(l, r));
      }
      case Op::MathRandomInt: {
        const auto lo = as_int(in("low"), "low");
        const auto hi = as_int(in("high"), "high");
        if (lo > hi) throw RuntimeHalt(HaltReason::BadRange, std::to_string(lo) + " > " + std::to_string(hi));
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return Value(static_cast<double>(lo + static_cast<std::int64_t>(f.rng.below(span))));
      }
      case Op::VariableGet: {
        auto it = f.scope.find(b.field("name"));
        if (it == f.scope.end()) {
          throw RuntimeHalt(HaltReason::UnboundVariable, "variable '" + std::string(b.field("name")) + "' is not set");
        }
        return it->second;
      }
      case Op::ListLength: return Value(static_cast<double>(as<NumberList>(in("list"), id).size()));
      case Op::ListGet: {
        const Value list = in("list");
        const auto& items = as<NumberList>(list, id);
        const auto index = as_int(in("index"), "index");
        if (index < 0 || index >= static_cast<std::int64_t>(items.size())) {
          throw RuntimeHalt(HaltReason::IndexOutOfRange, "list index " + std::to_string(index));
        }
        return Value(items[static_cast<std::size_t>(index)]);
      }
      case Op::ListToText: return Value(to_text(as<NumberList>(in("list"), id)));
      case Op::Boolean: return Value(b.field("value") == "true");
      case Op::LogicCompare: {
        const double l = as<double>(in("left"), id);
        const double r = as<double>(in("right"), id);
        const std::string_view op = b.field("op");
        if (op == "eq") return Value(l == r);
        if (op == "neq") return Value(l != r);
        if (op == "lt") return Value(l < r);
        if (op == "lte") return Value(l <= r);
        if (op == "gt") return Value(l > r);
        return Value(l >= r);
      }
      case Op::LogicOperation: {
        const std::string_view op = b.field("op");
        const bool l = as<bool>(in("left"), id);
        if (op == "and" && !l) return Value(false);
        if (op == "or" && l) return Value(true);
        const bool r = as<bool>(in("right"), id);
        if (op == "equivalent") return Value(l == r);
        return Value(r);
      }
      case Op::LogicNot: return Value(!as<bool>(in("value"), id));
      case Op::LoopGeneration: return Value(static_cast<double>(f.generation));
      case Op::RunIndex: return Value(static_cast<double>(f.run_id));
      case Op::ThreadTaskIndex: return Value(static_cast<double>(f.task_index.value_or(0)));
      case Op::HardwareConcurrency: return Value(static_cast<double>(runner::hardware_concurrency()));
      case Op::FibonacciTask: {
        const auto m = as_int(in("argument"), "argument");
        if (m < 0 || m > 93) throw RuntimeHalt(HaltReason::BadCount, "fibonacci argument must lie in [0, 93]");
        return Value(static_cast<double>(runner::fibonacci(static_cast<std::uint32_t>(m))));
      }
      case Op::TimeTimer: {
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - f.started).count();
        return Value(ms, true);
      }
      default: break;
    }
    throw RuntimeTypeError("statement block " + id + " used as a value");
  }

  static void exec(const Block& b, Frame& f) {
    check_stop(f);
    try {
      exec_op(b, f);
    } catch (const ea::Error& e) {
      throw RuntimeHalt(halt_reason_of(e.code()), e.what());
    }
  }

  static bool condition(const Block& b, std::string_view port, Frame& f) {
    return as<bool>(eval(child(b, port, f), f), b.kind->id + "." + std::string(port));
  }

  static void body(const Block& b, std::string_view slot, Frame& f) {
    if (const BlockUid* head = b.input(slot)) exec_chain(*head, f);
  }

  static void maybe_record(Frame& f) {
    if (!f.records_enabled) return;
    const auto& best = f.counter.best_so_far();
    if (!best || f.counter.count() <= f.last_record_evaluations) return;
    f.last_record_evaluations = f.counter.count();
    emit(f, RecordEvent{f.generation, f.counter.count(), *best});
  }

  static void exec_op(const Block& b, Frame& f) {
    Inputs in{b, f};
    switch (op_of(*b.kind)) {
      case Op::VariableSet: f.scope[std::string(b.field("name"))] = in("value"); return;
      case Op::LogicIf: body(b, condition(b, "condition", f) ? "then" : "else", f); return;
      case Op::LoopRepeat: {
        const auto times = as_int(in("times"), "times");
        if (times < 0) throw RuntimeHalt(HaltReason::BadCount, "repeat count " + std::to_string(times));
        for (std::int64_t i = 0; i < times; ++i) {
          tick(f);
          body(b, "do", f);
        }
        return;
      }
      case Op::LoopEvolutionary:
      case Op::LoopIoh: {
        const bool ioh = op_of(*b.kind) == Op::LoopIoh;
        if (ioh) maybe_record(f);
        while (!condition(b, "until", f)) {
          tick(f);
          body(b, "do", f);
          ++f.generation;
          if (ioh) maybe_record(f);
        }
        return;
      }
      case Op::Repetitions: run_repetitions(b, f); return;
      case Op::Print: {
        const Value text = in("value");
        emit(f, PrintEvent{as<std::string>(text, "print")}, text.clock_derived);
        return;
      }
      case Op::Plot: {
        const Value series = in("series");
        const double x = as<double>(in("x"), "plot.x");
        const double y = as<double>(in("y"), "plot.y");
        emit(f, PlotPointEvent{as<std::string>(series, "plot.series"), x, y, *plot_style_from_string(b.field("style"))},
             in.clocked);
        return;
      }
      case Op::Comment: return;
      case Op::ThreadRun: run_threads(b, f, in); return;
      case Op::ThreadReturn: f.task_result = in("value"); return;
      case Op::TimeSleep: {
        const double seconds = as<double>(in("seconds"), "seconds");
        if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
          throw RuntimeHalt(HaltReason::BadDuration, "cannot sleep " + format_number(seconds) + " s");
        }
        sleep_for(seconds, f);
        return;
      }
      default: break;
    }
    throw RuntimeTypeError("value block " + b.kind->id + " used as a statement");
  }

  static void sleep_for(double seconds, const Frame& f) {
    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
    while (Clock::now() < deadline) {
      check_stop(f);
      const auto left = deadline - Clock::now();
      std::this_thread::sleep_for(std::min<Clock::duration>(left, std::chrono::milliseconds(5)));
    }
    check_stop(f);
  }

  static std::vector<runner::TaskResult> dispatch(std::vector<runner::Task> tasks, const runner::ThreadMode& mode,
                                                  Frame& f) {
    try {
      return runner::run_tasks(std::move(tasks), mode, f.sink, f.shared->options.runner);
    } catch (const runner::WorkerPanicked& e) {
      std::rethrow_exception(e.cause());
    } catch (const runner::SpawnFailure& e) {
      throw RuntimeHalt(HaltReason::WorkerLimit, e.what());
    }
  }

  static void run_repetitions(const Block& b, Frame& f) {
    const auto times = as_int(eval(child(b, "times", f), f), "times");
    if (times < 0) throw RuntimeHalt(HaltReason::BadCount, "repetition count " + std::to_string(times));
    if (times > kMaxTasks) too_large("repetition count");
    if (times == 0) return;
    const std::int64_t first_run = *f.shared->next_run_id;
    *f.shared->next_run_id += times;
    const BlockUid* head = b.input("do");
    const Shared* shared = f.shared;

    std::vector<runner::Task> tasks;
    tasks.reserve(static_cast<std::size_t>(times));
    for (std::int64_t k = 0; k < times; ++k) {
      const std::int64_t run_id = first_run + k;
      std::optional<BlockUid> body_head = head ? std::optional<BlockUid>(*head) : std::nullopt;
      tasks.emplace_back([shared, run_id, body_head](runner::TaskContext& ctx) {
        Frame run;
        run.shared = shared;
        run.run_id = run_id;
        run.rng = RandomSource(derive_seed(shared->master_seed, static_cast<std::uint64_t>(run_id)));
        run.sink = &ctx.events;
        run.records_enabled = true;
        run.started = Clock::now();
        emit(run, RunStartedEvent{});
        if (body_head) exec_chain(*body_head, run);
        RunFinishedEvent done;
        if (run.counter.best_so_far()) {
          done.best_individual = run.counter.best_individual().to_string();
          done.best_fitness = run.counter.best_so_far();
        }
        emit(run, done);
        return Value();
      });
    }
    dispatch(std::move(tasks), shared->options.mode, f);
  }

  static void run_threads(const Block& b, Frame& f, Inputs& in) {
    const auto count = as_int(in("count"), "count");
    const auto workers = as_int(in("workers"), "workers");
    const std::string_view mode_name = b.field("mode");
    if (count < 0) throw RuntimeHalt(HaltReason::BadCount, "thread task count " + std::to_string(count));
    if (count > kMaxTasks) too_large("thread task count");
    runner::ThreadMode mode = runner::ThreadMode::sequential();
    if (mode_name == "all") mode = runner::ThreadMode::unlimited();
    if (mode_name == "limited") {
      if (workers < 1) throw RuntimeHalt(HaltReason::BadCount, "worker count " + std::to_string(workers));
      mode = runner::ThreadMode::pool(workers);
    }

    const std::uint64_t base = f.rng.next_u64();
    NumberList results;
    bool clocked = false;
    if (count > 0) {
      std::vector<runner::Task> tasks;
      tasks.reserve(static_cast<std::size_t>(count));
      const BlockUid* head = b.input("do");
      for (std::int64_t i = 0; i < count; ++i) {
        // By-value import of the caller's variables; nothing flows back but
        // the returned number.
        auto imported = f.scope;
        std::optional<BlockUid> body_head = head ? std::optional<BlockUid>(*head) : std::nullopt;
        tasks.emplace_back([shared = f.shared, run_id = f.run_id, started = f.started, base,
                            imported = std::move(imported), body_head](runner::TaskContext& ctx) {
          Frame task;
          task.shared = shared;
          task.run_id = run_id;
          task.rng = RandomSource(derive_seed(base, ctx.index));
          task.scope = imported;
          task.sink = &ctx.events;
          task.task_index = ctx.index;
          task.started = started;
          if (body_head) exec_chain(*body_head, task);
          if (task.task_result) return *task.task_result;
          return Value(std::numeric_limits<double>::quiet_NaN());
        });
      }
      for (auto& r : dispatch(std::move(tasks), mode, f)) {
        results.push_back(as<double>(r.value, "thread result"));
        clocked = clocked || r.value.clock_derived;
      }
    }
    f.scope[std::string(b.field("into"))] = Value(std::move(results), clocked || in.clocked);
  }
};

/// Forwards to the caller's sink while keeping a copy for the result.
class TeeSink final : public EventSink {
 public:
  explicit TeeSink(EventSink* downstream) : downstream_(downstream) {}
  using EventSink::emit;
  void emit(std::span<const Event> batch) override {
    collected_.emit(batch);
    if (downstream_ != nullptr) downstream_->emit(batch);
  }
  std::vector<Event> events() const { return collected_.events(); }

 private:
  EventSink* downstream_;
  CollectingSink collected_;
};

}  // namespace

ExperimentResult interpret(const BlockProgram& program, std::uint64_t master_seed, EventSink* sink,
                           const InterpretOptions& options) {
  auto diagnostics = validate(program);
  if (has_errors(diagnostics)) throw InvalidProgram(std::move(diagnostics));

  std::int64_t next_run_id = 0;
  const Shared shared{&program, master_seed, options, &next_run_id};
  TeeSink tee(sink);

  Frame top;
  top.shared = &shared;
  top.rng = RandomSource(main_context_seed(master_seed));
  top.sink = &tee;
  top.started = Clock::now();
  for (const auto& root : program.roots()) {
    if (!is_executable_root(program, root)) continue;
    Engine::exec_chain(root, top);
  }

  ExperimentResult result;
  result.events = tee.events();
  for (const auto& e : result.events) {
    if (const auto* p = std::get_if<PrintEvent>(&e.payload)) result.printed.push_back(p->text);
  }
  result.logs = datalog::collect(result.events);
  return result;
}

}  // namespace blockea
