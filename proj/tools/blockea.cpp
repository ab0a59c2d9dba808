// blockea: run, validate and export block programs; serve the editor API.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "blockea/codegen.hpp"
#include "blockea/datalog.hpp"
#include "blockea/examples.hpp"
#include "blockea/interpreter.hpp"
#include "blockea/service.hpp"
#include "blockea/validate.hpp"
#include "blockea/xml.hpp"

namespace fs = std::filesystem;
using namespace blockea;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitParse = 2;
constexpr int kExitHalt = 3;
constexpr int kExitIo = 4;

struct ExitError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExitError{kExitIo, "cannot read " + path};
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw ExitError{kExitIo, "cannot write " + path.string()};
}

BlockProgram load(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_xml(text);
  } catch (const ProgramError& e) {
    throw ExitError{kExitParse, path + ": " + e.what()};
  }
}

/// Prints diagnostics to stderr; true if any is an error.
bool report(const BlockProgram& program, const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) std::cerr << d.to_string(program) << "\n";
  return has_errors(diagnostics);
}

void ensure_writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = dir / ".blockea-write-test";
  std::ofstream f(probe);
  if (ec || !f) throw ExitError{kExitIo, "output directory " + dir.string() + " is not writable"};
  f.close();
  fs::remove(probe, ec);
}

class ConsoleSink final : public EventSink {
 public:
  using EventSink::emit;
  void emit(std::span<const Event> batch) override {
    std::lock_guard lock(mutex_);
    for (const auto& e : batch) std::cout << to_console_line(e) << '\n';
  }

 private:
  std::mutex mutex_;
};

struct RunArgs {
  std::string file;
  std::uint64_t seed = 0;
  std::string mode = "seq";
  std::string out = ".";
  std::vector<std::string> formats;
  std::string function_name = "OneMax";
  std::string algorithm = "blockea";
  std::int64_t budget = kDefaultIterationBudget;
};

int cmd_run(const RunArgs& a) {
  const auto program = load(a.file);
  if (report(program, validate(program))) return kExitParse;
  runner::ThreadMode mode;
  try {
    mode = runner::parse_thread_mode(a.mode);
  } catch (const std::invalid_argument& e) {
    throw ExitError{kExitParse, e.what()};
  }
  for (const auto& f : a.formats) {
    if (f != "csv" && f != "ioh") throw ExitError{kExitParse, "unknown format '" + f + "' (expected csv or ioh)"};
  }
  if (!a.formats.empty()) ensure_writable_dir(a.out);

  ConsoleSink console;
  InterpretOptions options;
  options.mode = mode;
  options.iteration_budget = a.budget;
  ExperimentResult result;
  try {
    result = interpret(program, a.seed, &console, options);
  } catch (const RuntimeHalt& e) {
    std::cout << "[halt] " << to_string(e.reason()) << std::endl;
    std::cerr << e.what() << "\n";
    return kExitHalt;
  }
  std::cout.flush();

  for (const auto& f : a.formats) {
    if (f == "csv") {
      write_file(fs::path(a.out) / "results.csv", datalog::export_csv(result.logs));
      continue;
    }
    datalog::ExperimentMeta meta;
    meta.function_name = a.function_name;
    meta.algorithm_name = a.algorithm;
    meta.dimension = datalog::infer_dimension(result.logs);
    meta.master_seed = a.seed;
    meta.run_count = static_cast<std::int64_t>(result.logs.size());
    try {
      const auto files = datalog::export_ioh(result.logs, meta);
      write_file(fs::path(a.out) / files.info_path, files.info);
      write_file(fs::path(a.out) / files.dat_path, files.dat);
    } catch (const datalog::EmptyLog& e) {
      std::cerr << "ioh export skipped: " << e.what() << "\n";
    }
  }
  return 0;
}

int cmd_validate(const std::string& file) {
  const auto program = load(file);
  const auto diagnostics = validate(program);
  const bool errors = report(program, diagnostics);
  if (!errors) std::cout << file << ": ok\n";
  return errors ? kExitInvalid : 0;
}

int cmd_export_code(const std::string& file, std::uint64_t seed, const std::string& out) {
  const auto program = load(file);
  if (report(program, validate(program))) return kExitParse;
  const auto bundle = codegen::emit_standalone(program, seed);
  ensure_writable_dir(out);
  write_file(fs::path(out) / std::string(codegen::Bundle::kProgramFile), bundle.program);
  write_file(fs::path(out) / std::string(codegen::Bundle::kRuntimeFile), bundle.runtime);
  std::cout << "wrote " << (fs::path(out) / std::string(codegen::Bundle::kProgramFile)).string() << "\n";
  return 0;
}

Service* g_service = nullptr;

int cmd_serve(const std::string& host, int port) {
  Service service;
  int bound = 0;
  try {
    bound = service.bind(host, port);
  } catch (const std::runtime_error& e) {
    throw ExitError{kExitIo, e.what()};
  }
  g_service = &service;
  std::signal(SIGINT, [](int) { if (g_service) g_service->stop(); });
  std::signal(SIGTERM, [](int) { if (g_service) g_service->stop(); });
  std::cout << "listening on http://" << host << ":" << bound << std::endl;
  service.listen();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-based evolutionary algorithm programs"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Interpret a program and print its console output");
  run->add_option("file", run_args.file, "program (.blockea.xml)")->required();
  run->add_option("--seed", run_args.seed, "master seed");
  run->add_option("--mode", run_args.mode, "repetition mode: seq, all or pool:X");
  run->add_option("--out", run_args.out, "directory for exported data");
  run->add_option("--formats", run_args.formats, "comma-separated: csv, ioh")->delimiter(',');
  run->add_option("--function", run_args.function_name, "function name written to IOH files");
  run->add_option("--algorithm", run_args.algorithm, "algorithm id written to IOH files");
  run->add_option("--budget", run_args.budget, "loop iterations allowed per run");

  std::string validate_file;
  auto* val = app.add_subcommand("validate", "Report static errors and warnings");
  val->add_option("file", validate_file)->required();

  std::string export_file;
  std::uint64_t export_seed = 0;
  std::string export_out = "bundle";
  auto* exp = app.add_subcommand("export-code", "Write a standalone JavaScript bundle");
  exp->add_option("file", export_file)->required();
  exp->add_option("--seed", export_seed, "default master seed of the bundle");
  exp->add_option("--out", export_out, "output directory");

  auto* examples = app.add_subcommand("examples", "Shipped example programs");
  examples->require_subcommand(1);
  auto* list = examples->add_subcommand("list", "List example names");
  std::string example_name;
  auto* get = examples->add_subcommand("get", "Print an example's XML");
  get->add_option("name", example_name)->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--port", port);
  serve->add_option("--host", host);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*val) return cmd_validate(validate_file);
    if (*exp) return cmd_export_code(export_file, export_seed, export_out);
    if (*list) {
      for (const auto& e : shipped_examples()) std::cout << e.name << "\t" << e.description << "\n";
      return 0;
    }
    if (*get) {
      const auto* e = find_example(example_name);
      if (e == nullptr) throw ExitError{kExitInvalid, "unknown example '" + example_name + "'"};
      std::cout << e->xml;
      return 0;
    }
    if (*serve) return cmd_serve(host, port);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
