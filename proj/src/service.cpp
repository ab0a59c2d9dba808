#include "blockea/service.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "blockea/codegen.hpp"
#include "blockea/datalog.hpp"
#include "blockea/examples.hpp"
#include "blockea/interpreter.hpp"
#include "blockea/registry.hpp"
#include "blockea/validate.hpp"
#include "blockea/xml.hpp"
#include "httplib.h"
#include "json.hpp"

namespace blockea {

namespace {

using json = nlohmann::json;
using namespace std::chrono_literals;

enum class RunState { Queued, Running, Finished, Failed, Cancelled };

std::string_view to_string(RunState s) {
  switch (s) {
    case RunState::Queued: return "queued";
    case RunState::Running: return "running";
    case RunState::Finished: return "finished";
    case RunState::Failed: return "failed";
    case RunState::Cancelled: return "cancelled";
  }
  return "queued";
}

struct Run {
  std::string id;
  std::uint64_t seed = 0;
  runner::ThreadMode mode;
  std::chrono::system_clock::time_point created_at = std::chrono::system_clock::now();
  std::atomic<RunState> state{RunState::Queued};

  std::mutex mutex;
  std::condition_variable changed;
  std::vector<Event> events;
  bool done = false;
  std::string error;
  std::optional<std::string> halt;
  std::vector<datalog::RunLog> logs;

  std::stop_source stop;
  std::jthread worker;
};

class RunSink final : public EventSink {
 public:
  explicit RunSink(Run& run) : run_(run) {}
  using EventSink::emit;
  void emit(std::span<const Event> batch) override {
    {
      std::lock_guard lock(run_.mutex);
      run_.events.insert(run_.events.end(), batch.begin(), batch.end());
    }
    run_.changed.notify_all();
  }

 private:
  Run& run_;
};

void execute(const std::shared_ptr<Run>& run, const BlockProgram& program) {
  run->state = RunState::Running;
  RunSink sink(*run);
  InterpretOptions options;
  options.mode = run->mode;
  options.stop = run->stop.get_token();
  RunState final_state = RunState::Finished;
  std::string error;
  std::optional<std::string> halt;
  std::vector<datalog::RunLog> logs;
  try {
    logs = interpret(program, run->seed, &sink, options).logs;
  } catch (const Cancelled&) {
    final_state = RunState::Cancelled;
  } catch (const RuntimeHalt& e) {
    final_state = RunState::Failed;
    halt = std::string(to_string(e.reason()));
    error = e.what();
  } catch (const std::exception& e) {
    final_state = RunState::Failed;
    error = e.what();
  }
  {
    std::lock_guard lock(run->mutex);
    run->logs = std::move(logs);
    run->error = error;
    run->halt = halt;
    run->state = final_state;
    run->done = true;
  }
  run->changed.notify_all();
}

json end_marker(const Run& run) {
  json j{{"type", "end"}, {"state", to_string(run.state.load())}};
  if (!run.error.empty()) j["error"] = run.error;
  if (run.halt) j["halt"] = *run.halt;
  return j;
}

json diagnostics_json(const BlockProgram& program, const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) {
    out.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                   {"code", to_string(d.code)},
                   {"uid", d.uid},
                   {"detail", d.detail},
                   {"message", d.to_string(program)}});
  }
  return out;
}

json registry_json() {
  json kinds = json::array();
  for (const auto& k : block_kinds()) {
    json ports = json::array();
    for (const auto& p : k.ports) {
      ports.push_back({{"name", p.name}, {"type", p.value_type ? json(to_string(*p.value_type)) : json(nullptr)}});
    }
    json fields = json::array();
    for (const auto& f : k.fields) {
      const char* kind = f.kind == FieldKind::Number ? "number" : f.kind == FieldKind::Choice ? "choice" : "text";
      fields.push_back({{"name", f.name}, {"kind", kind}, {"choices", f.choices}, {"default", f.default_value}});
    }
    kinds.push_back({{"id", k.id},
                     {"group", to_string(k.group)},
                     {"output", k.output ? json(to_string(*k.output)) : json(nullptr)},
                     {"ports", ports},
                     {"fields", fields}});
  }
  return json{{"format_version", kFormatVersion}, {"kinds", kinds}};
}

std::optional<std::uint64_t> parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return v;
}

void reply_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply_json(res, json{{"error", message}}, status);
}

}  // namespace

struct Service::Impl {
  httplib::Server server;
  std::mutex runs_mutex;
  std::map<std::string, std::shared_ptr<Run>> runs;
  std::uint64_t next_id = 1;
  std::atomic<bool> stopping{false};

  Impl() {
    // SO_REUSEPORT (httplib's default) would let a second server share a taken port.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    routes();
  }

  ~Impl() {
    stopping = true;
    server.stop();
    std::lock_guard lock(runs_mutex);
    for (auto& [id, run] : runs) run->stop.request_stop();
    for (auto& [id, run] : runs) {
      if (run->worker.joinable()) run->worker.join();
    }
  }

  std::shared_ptr<Run> find(const std::string& id) {
    std::lock_guard lock(runs_mutex);
    auto it = runs.find(id);
    return it == runs.end() ? nullptr : it->second;
  }

  /// Parses the body; on failure writes a 400 reply and returns nullopt.
  static std::optional<BlockProgram> read_program(const httplib::Request& req, httplib::Response& res) {
    try {
      return parse_xml(req.body);
    } catch (const ProgramError& e) {
      reply_json(res, json{{"ok", false}, {"error", e.what()}, {"code", to_string(e.code())}}, 400);
      return std::nullopt;
    }
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server.Post("/programs/validate", [](const httplib::Request& req, httplib::Response& res) {
      auto program = read_program(req, res);
      if (!program) return;
      const auto diagnostics = validate(*program);
      reply_json(res, json{{"ok", !has_errors(diagnostics)}, {"diagnostics", diagnostics_json(*program, diagnostics)}});
    });

    server.Post("/programs/export-code", [](const httplib::Request& req, httplib::Response& res) {
      auto program = read_program(req, res);
      if (!program) return;
      auto seed = parse_seed(req.has_param("seed") ? req.get_param_value("seed") : "0");
      if (!seed) return reply_error(res, 400, "seed must be an unsigned 64-bit integer");
      try {
        const auto bundle = codegen::emit_standalone(*program, *seed);
        reply_json(res, json{{std::string(codegen::Bundle::kProgramFile), bundle.program},
                             {std::string(codegen::Bundle::kRuntimeFile), bundle.runtime}});
      } catch (const InvalidProgram& e) {
        reply_json(res, json{{"ok", false}, {"diagnostics", diagnostics_json(*program, e.diagnostics())}}, 400);
      }
    });

    server.Post("/runs", [this](const httplib::Request& req, httplib::Response& res) {
      auto program = read_program(req, res);
      if (!program) return;
      const auto diagnostics = validate(*program);
      if (has_errors(diagnostics)) {
        return reply_json(res, json{{"ok", false}, {"diagnostics", diagnostics_json(*program, diagnostics)}}, 400);
      }
      auto seed = parse_seed(req.has_param("seed") ? req.get_param_value("seed") : "0");
      if (!seed) return reply_error(res, 400, "seed must be an unsigned 64-bit integer");
      runner::ThreadMode mode;
      try {
        mode = runner::parse_thread_mode(req.has_param("mode") ? req.get_param_value("mode") : "seq");
      } catch (const std::invalid_argument& e) {
        return reply_error(res, 400, e.what());
      }

      auto run = std::make_shared<Run>();
      run->seed = *seed;
      run->mode = mode;
      {
        std::lock_guard lock(runs_mutex);
        run->id = "r" + std::to_string(next_id++);
        runs[run->id] = run;
      }
      run->worker = std::jthread([run, program = std::move(*program)] { execute(run, program); });
      reply_json(res, json{{"id", run->id}, {"state", to_string(RunState::Queued)}});
    });

    server.Get(R"(/runs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto run = find(req.matches[1]);
      if (!run) return reply_error(res, 404, "unknown run");
      std::lock_guard lock(run->mutex);
      const auto created = std::chrono::duration_cast<std::chrono::milliseconds>(run->created_at.time_since_epoch());
      json body{{"id", run->id},
                {"state", to_string(run->state.load())},
                {"seed", run->seed},
                {"mode", runner::to_string(run->mode)},
                {"created_at_ms", created.count()},
                {"events", run->events.size()}};
      if (!run->error.empty()) body["error"] = run->error;
      if (run->halt) body["halt"] = *run->halt;
      reply_json(res, body);
    });

    server.Get(R"(/runs/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
      auto run = find(req.matches[1]);
      if (!run) return reply_error(res, 404, "unknown run");
      auto cursor = std::make_shared<std::size_t>(0);
      res.set_chunked_content_provider(
          "application/x-ndjson", [this, run, cursor](std::size_t, httplib::DataSink& sink) {
            std::unique_lock lock(run->mutex);
            run->changed.wait_for(lock, 100ms, [&] { return run->done || run->events.size() > *cursor; });
            std::string chunk;
            while (*cursor < run->events.size()) chunk += to_json_line(run->events[(*cursor)++]) + "\n";
            const bool finished = run->done && *cursor == run->events.size();
            if (finished) chunk += end_marker(*run).dump() + "\n";
            lock.unlock();
            if (!chunk.empty() && !sink.write(chunk.data(), chunk.size())) return false;
            if (finished || stopping) sink.done();
            return true;
          });
    });

    server.Post(R"(/runs/([^/]+)/cancel)", [this](const httplib::Request& req, httplib::Response& res) {
      auto run = find(req.matches[1]);
      if (!run) return reply_error(res, 404, "unknown run");
      run->stop.request_stop();
      reply_json(res, json{{"id", run->id}, {"state", to_string(run->state.load())}});
    });

    server.Get(R"(/runs/([^/]+)/export)", [this](const httplib::Request& req, httplib::Response& res) {
      auto run = find(req.matches[1]);
      if (!run) return reply_error(res, 404, "unknown run");
      if (run->state.load() != RunState::Finished) return reply_error(res, 409, "run has not finished");
      const std::string format = req.has_param("format") ? req.get_param_value("format") : "csv";
      std::lock_guard lock(run->mutex);
      if (format == "csv") return res.set_content(datalog::export_csv(run->logs), "text/csv");
      if (format != "ioh") return reply_error(res, 400, "format must be csv or ioh");
      datalog::ExperimentMeta meta;
      if (req.has_param("function")) meta.function_name = req.get_param_value("function");
      if (req.has_param("algorithm")) meta.algorithm_name = req.get_param_value("algorithm");
      meta.dimension = datalog::infer_dimension(run->logs);
      meta.master_seed = run->seed;
      meta.run_count = static_cast<std::int64_t>(run->logs.size());
      try {
        const auto files = datalog::export_ioh(run->logs, meta);
        reply_json(res, json{{"info_path", files.info_path},
                             {"info", files.info},
                             {"dat_path", files.dat_path},
                             {"dat", files.dat}});
      } catch (const datalog::EmptyLog& e) {
        reply_error(res, 422, e.what());
      }
    });

    server.Get("/examples", [](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& e : shipped_examples()) {
        list.push_back({{"name", e.name}, {"slug", e.slug}, {"description", e.description}});
      }
      reply_json(res, list);
    });

    server.Get(R"(/examples/(.+))", [](const httplib::Request& req, httplib::Response& res) {
      const auto* example = find_example(req.matches[1].str());
      if (example == nullptr) return reply_error(res, 404, "unknown example");
      res.set_content(std::string(example->xml), "application/xml");
    });

    server.Get("/registry", [](const httplib::Request&, httplib::Response& res) { reply_json(res, registry_json()); });
  }
};

Service::Service() : impl_(std::make_unique<Impl>()) {}
Service::~Service() = default;

int Service::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("BindFailure: cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("BindFailure: cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
  impl_->stopping = true;
  impl_->server.stop();
}

}  // namespace blockea
