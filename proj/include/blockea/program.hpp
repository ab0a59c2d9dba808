#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blockea/registry.hpp"

namespace blockea {

using BlockUid = std::string;

/// One block instance. Ports hold child uids, fields hold literal text
/// (numbers normalised through format_number).
struct Block {
  BlockUid uid;
  const BlockKind* kind = nullptr;
  std::map<std::string, std::string, std::less<>> fields;
  std::map<std::string, BlockUid, std::less<>> inputs;  // value ports and statement-body heads
  std::optional<BlockUid> next;

  std::string_view field(std::string_view name) const;
  const BlockUid* input(std::string_view port) const;
};

enum class ProgramErrorCode {
  MalformedXml,
  UnsupportedVersion,
  UnknownKind,
  UnknownPort,
  BadField,
  DuplicateUid,
  DanglingReference,
  CycleDetected,
  SharedChild,
};

std::string_view to_string(ProgramErrorCode code);

class ProgramError : public std::runtime_error {
 public:
  ProgramError(ProgramErrorCode code, const std::string& detail);
  ProgramErrorCode code() const { return code_; }

 private:
  ProgramErrorCode code_;
};

/// A forest of blocks plus the ordered list of top-level blocks. Immutable
/// once built, so it can be read from any number of threads.
class BlockProgram {
 public:
  BlockProgram() = default;

  /// Checks every structural invariant (existing references, forest shape,
  /// acyclicity, roots unreachable, field conformance) and throws
  /// ProgramError on the first violation.
  BlockProgram(std::map<BlockUid, Block, std::less<>> blocks, std::vector<BlockUid> roots);

  const std::vector<BlockUid>& roots() const { return roots_; }
  const std::map<BlockUid, Block, std::less<>>& blocks() const { return blocks_; }
  const Block& at(std::string_view uid) const;
  const Block* find(std::string_view uid) const;
  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }

 private:
  std::map<BlockUid, Block, std::less<>> blocks_;
  std::vector<BlockUid> roots_;
};

/// Structural equality: same roots in the same order, same kinds, fields and
/// connections; uid values are ignored.
bool structurally_equal(const BlockProgram& a, const BlockProgram& b);

/// Convenience construction API used by tests, the examples registry and
/// the random program generator.
class ProgramBuilder {
 public:
  /// Adds a block with fields defaulted from its kind; returns its uid.
  BlockUid add(std::string_view kind, std::map<std::string, std::string, std::less<>> fields = {});
  /// Adds a block under a caller-chosen uid.
  BlockUid add_with_uid(BlockUid uid, std::string_view kind,
                        std::map<std::string, std::string, std::less<>> fields = {});

  ProgramBuilder& connect(const BlockUid& parent, std::string_view port, const BlockUid& child);
  ProgramBuilder& chain(const BlockUid& first, const BlockUid& second);
  ProgramBuilder& root(const BlockUid& uid);

  BlockProgram build() const;

 private:
  std::map<BlockUid, Block, std::less<>> blocks_;
  std::vector<BlockUid> roots_;
  std::size_t counter_ = 0;
};

}  // namespace blockea
