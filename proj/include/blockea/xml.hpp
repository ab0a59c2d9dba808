#pragma once

#include <string>
#include <string_view>

#include "blockea/program.hpp"

namespace blockea {

/// Major version written to and accepted from `.blockea.xml` files.
inline constexpr int kFormatVersion = 1;

/// Parses a `.blockea.xml` document. Throws ProgramError with the offending
/// element's path in the message on any violation.
///
/// Layout: `<blockea format_version="1">` holding top-level `<block>`
/// elements. A block carries `kind`, an optional `uid`, and one attribute
/// per field. Connections are `<value name=..>`, `<statement name=..>` and
/// `<next>` children that either nest exactly one `<block>` or name one by
/// `ref="uid"`. Top-level blocks that nothing references are the roots.
BlockProgram parse_xml(std::string_view text);

/// Canonical text: roots in order, children depth-first with ports in
/// declaration order, uids renumbered b0, b1, ... in visit order, two-space
/// indentation, LF line endings, trailing newline.
std::string serialize_xml(const BlockProgram& program);

}  // namespace blockea
