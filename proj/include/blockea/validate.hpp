#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blockea/program.hpp"

namespace blockea {

enum class Severity { Warning, Error };

enum class DiagnosticCode {
  DisconnectedRoot,      // warning: root is a value block, skipped at run time
  MissingInput,          // a value port is empty
  TypeMismatch,          // illegal connection, or one variable used at two types
  MisplacedBlock,        // block used outside the context it needs
};

std::string_view to_string(DiagnosticCode code);

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagnosticCode code = DiagnosticCode::MissingInput;
  BlockUid uid;
  std::string detail;  // port name, variable name, or explanation

  std::string to_string(const BlockProgram& program) const;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Static checks. Roots that are value blocks are reported as
/// DisconnectedRoot warnings and their subtrees are not checked further;
/// everything reachable from an executable root is.
std::vector<Diagnostic> validate(const BlockProgram& program);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// True for roots the interpreter runs (statement blocks).
bool is_executable_root(const BlockProgram& program, std::string_view uid);

}  // namespace blockea
