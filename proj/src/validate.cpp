#include "blockea/validate.hpp"

#include <algorithm>
#include <map>

namespace blockea {

std::string_view to_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::DisconnectedRoot: return "DisconnectedRoot";
    case DiagnosticCode::MissingInput: return "MissingInput";
    case DiagnosticCode::TypeMismatch: return "TypeMismatch";
    case DiagnosticCode::MisplacedBlock: return "MisplacedBlock";
  }
  return "Diagnostic";
}

std::string Diagnostic::to_string(const BlockProgram& program) const {
  std::string out = severity == Severity::Error ? "error: " : "warning: ";
  out += std::string(blockea::to_string(code));
  out += "(" + detail + ")";
  if (const Block* b = program.find(uid)) out += " at " + b->kind->id + " '" + uid + "'";
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

bool is_executable_root(const BlockProgram& program, std::string_view uid) {
  const Block* b = program.find(uid);
  return b != nullptr && b->kind->is_statement();
}

namespace {

struct Placement {
  bool top_level = false;
  bool in_run = false;
  bool in_task = false;
};

class Checker {
 public:
  explicit Checker(const BlockProgram& program) : program_(program) {}

  std::vector<Diagnostic> run() {
    for (const auto& root : program_.roots()) {
      if (!is_executable_root(program_, root)) {
        warn(DiagnosticCode::DisconnectedRoot, root, "not connected to an executable block");
        continue;
      }
      check_chain(root, Placement{.top_level = true});
    }
    return std::move(out_);
  }

 private:
  void error(DiagnosticCode code, const BlockUid& uid, std::string detail) {
    out_.push_back({Severity::Error, code, uid, std::move(detail)});
  }
  void warn(DiagnosticCode code, const BlockUid& uid, std::string detail) {
    out_.push_back({Severity::Warning, code, uid, std::move(detail)});
  }

  void check_chain(const BlockUid& head, Placement where) {
    std::optional<BlockUid> cursor = head;
    while (cursor) {
      const Block& b = program_.at(*cursor);
      if (!b.kind->is_statement()) {
        error(DiagnosticCode::TypeMismatch, b.uid,
              "value block " + b.kind->id + " used as a statement");
      }
      check_block(b, where);
      cursor = b.next;
    }
  }

  void check_block(const Block& b, Placement where) {
    const std::string& id = b.kind->id;
    if (id == kinds::kRepetitions && !where.top_level) {
      error(DiagnosticCode::MisplacedBlock, b.uid, "repetitions must be a top-level block");
    }
    if (id == kinds::kRunIndex && !where.in_run) {
      error(DiagnosticCode::MisplacedBlock, b.uid, "run index is only defined inside repetitions");
    }
    if ((id == kinds::kThreadReturn || id == kinds::kThreadTaskIndex) && !where.in_task) {
      error(DiagnosticCode::MisplacedBlock, b.uid, id + " is only defined inside a thread block");
    }
    if (auto var = variable_kind_info(id)) declare(b, std::string(b.field("name")), var->type);
    if (id == kinds::kThreadRun) declare(b, std::string(b.field("into")), ValueType::ListOfNumber);

    Placement inner = where;
    inner.top_level = false;
    if (id == kinds::kRepetitions) inner.in_run = true;

    for (const auto& port : b.kind->ports) {
      const BlockUid* child_uid = b.input(port.name);
      if (child_uid == nullptr) {
        if (!port.is_statement()) error(DiagnosticCode::MissingInput, b.uid, port.name);
        continue;
      }
      const Block& child = program_.at(*child_uid);
      if (port.is_statement()) {
        Placement body = inner;
        if (id == kinds::kThreadRun) body.in_task = true;
        check_chain(child.uid, body);
        continue;
      }
      if (child.kind->output != port.value_type) {
        const std::string got = child.kind->output ? std::string(to_string(*child.kind->output)) : "statement";
        error(DiagnosticCode::TypeMismatch, b.uid,
              port.name + ": expected " + std::string(to_string(*port.value_type)) + ", got " + got);
      }
      if (child.next) {
        error(DiagnosticCode::TypeMismatch, child.uid, "a value block cannot have a successor");
      }
      check_block(child, inner);
    }
  }

  void declare(const Block& b, const std::string& name, ValueType type) {
    auto [it, inserted] = variables_.emplace(name, type);
    if (!inserted && it->second != type) {
      error(DiagnosticCode::TypeMismatch, b.uid,
            "variable '" + name + "' is " + std::string(to_string(type)) + " here but " +
                std::string(to_string(it->second)) + " elsewhere");
    }
  }

  const BlockProgram& program_;
  std::vector<Diagnostic> out_;
  std::map<std::string, ValueType> variables_;
};

}  // namespace

std::vector<Diagnostic> validate(const BlockProgram& program) { return Checker(program).run(); }

}  // namespace blockea
