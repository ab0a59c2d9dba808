#include "blockea/program.hpp"

#include <set>

#include "blockea/format.hpp"

namespace blockea {

std::string_view to_string(ProgramErrorCode code) {
  switch (code) {
    case ProgramErrorCode::MalformedXml: return "MalformedXml";
    case ProgramErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ProgramErrorCode::UnknownKind: return "UnknownKind";
    case ProgramErrorCode::UnknownPort: return "UnknownPort";
    case ProgramErrorCode::BadField: return "BadField";
    case ProgramErrorCode::DuplicateUid: return "DuplicateUid";
    case ProgramErrorCode::DanglingReference: return "DanglingReference";
    case ProgramErrorCode::CycleDetected: return "CycleDetected";
    case ProgramErrorCode::SharedChild: return "SharedChild";
  }
  return "ProgramError";
}

ProgramError::ProgramError(ProgramErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

std::string_view Block::field(std::string_view name) const {
  auto it = fields.find(name);
  return it == fields.end() ? std::string_view{} : std::string_view{it->second};
}

const BlockUid* Block::input(std::string_view port) const {
  auto it = inputs.find(port);
  return it == inputs.end() ? nullptr : &it->second;
}

BlockProgram::BlockProgram(std::map<BlockUid, Block, std::less<>> blocks, std::vector<BlockUid> roots)
    : blocks_(std::move(blocks)), roots_(std::move(roots)) {
  std::map<BlockUid, BlockUid, std::less<>> parent_of;
  auto link = [&](const Block& parent, const BlockUid& child) {
    if (!blocks_.contains(child)) {
      throw ProgramError(ProgramErrorCode::DanglingReference,
                         "block '" + parent.uid + "' references missing uid '" + child + "'");
    }
    if (child == parent.uid) {
      throw ProgramError(ProgramErrorCode::CycleDetected, "block '" + child + "' references itself");
    }
    auto [it, inserted] = parent_of.emplace(child, parent.uid);
    if (!inserted) {
      throw ProgramError(ProgramErrorCode::SharedChild,
                         "block '" + child + "' is connected to both '" + it->second + "' and '" +
                             parent.uid + "'");
    }
  };

  for (auto& [uid, block] : blocks_) {
    if (block.uid != uid) {
      throw ProgramError(ProgramErrorCode::DuplicateUid, "block keyed '" + uid + "' carries uid '" + block.uid + "'");
    }
    if (block.kind == nullptr) throw ProgramError(ProgramErrorCode::UnknownKind, "block '" + uid + "' has no kind");
    for (const auto& [name, value] : block.fields) {
      const FieldSpec* spec = block.kind->field(name);
      if (spec == nullptr || !field_value_ok(*block.kind, *spec, value)) {
        throw ProgramError(ProgramErrorCode::BadField, block.kind->id + "." + name + " = '" + value + "'");
      }
    }
    for (const auto& spec : block.kind->fields) {
      if (!block.fields.contains(spec.name)) {
        throw ProgramError(ProgramErrorCode::BadField, block.kind->id + "." + spec.name + " is missing");
      }
    }
    for (const auto& [port, child] : block.inputs) {
      if (block.kind->port(port) == nullptr) {
        throw ProgramError(ProgramErrorCode::UnknownPort, block.kind->id + " has no port '" + port + "'");
      }
      link(block, child);
    }
    if (block.next) link(block, *block.next);
  }

  std::set<std::string_view> root_set;
  for (const auto& r : roots_) {
    if (!blocks_.contains(r)) throw ProgramError(ProgramErrorCode::DanglingReference, "root '" + r + "' does not exist");
    if (parent_of.contains(r)) {
      throw ProgramError(ProgramErrorCode::CycleDetected, "root '" + r + "' is also connected below '" + parent_of.at(r) + "'");
    }
    if (!root_set.insert(r).second) throw ProgramError(ProgramErrorCode::DuplicateUid, "root '" + r + "' listed twice");
  }

  // Every block has at most one parent, so a block that cannot be reached
  // from a root either has no parent (unlisted root) or sits below a cycle.
  std::set<std::string_view> reached;
  std::vector<std::string_view> stack(roots_.begin(), roots_.end());
  while (!stack.empty()) {
    const Block& b = blocks_.at(std::string(stack.back()));
    stack.pop_back();
    if (!reached.insert(b.uid).second) continue;
    for (const auto& [port, child] : b.inputs) stack.push_back(child);
    if (b.next) stack.push_back(*b.next);
  }
  for (const auto& [uid, block] : blocks_) {
    if (reached.contains(uid)) continue;
    if (!parent_of.contains(uid)) {
      throw ProgramError(ProgramErrorCode::DanglingReference, "block '" + uid + "' is neither connected nor a root");
    }
    throw ProgramError(ProgramErrorCode::CycleDetected, "block '" + uid + "' lies on a connection cycle");
  }
}

const Block& BlockProgram::at(std::string_view uid) const {
  auto it = blocks_.find(uid);
  if (it == blocks_.end()) throw ProgramError(ProgramErrorCode::DanglingReference, std::string(uid));
  return it->second;
}

const Block* BlockProgram::find(std::string_view uid) const {
  auto it = blocks_.find(uid);
  return it == blocks_.end() ? nullptr : &it->second;
}

namespace {

bool equal_subtree(const BlockProgram& pa, const Block& a, const BlockProgram& pb, const Block& b) {
  if (a.kind != b.kind || a.fields != b.fields) return false;
  if (a.inputs.size() != b.inputs.size() || a.next.has_value() != b.next.has_value()) return false;
  for (const auto& [port, child] : a.inputs) {
    const BlockUid* other = b.input(port);
    if (other == nullptr || !equal_subtree(pa, pa.at(child), pb, pb.at(*other))) return false;
  }
  return !a.next || equal_subtree(pa, pa.at(*a.next), pb, pb.at(*b.next));
}

}  // namespace

bool structurally_equal(const BlockProgram& a, const BlockProgram& b) {
  if (a.roots().size() != b.roots().size() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.roots().size(); ++i) {
    if (!equal_subtree(a, a.at(a.roots()[i]), b, b.at(b.roots()[i]))) return false;
  }
  return true;
}

BlockUid ProgramBuilder::add(std::string_view kind, std::map<std::string, std::string, std::less<>> fields) {
  BlockUid uid;
  do {
    uid = "n" + std::to_string(counter_++);
  } while (blocks_.contains(uid));
  return add_with_uid(std::move(uid), kind, std::move(fields));
}

BlockUid ProgramBuilder::add_with_uid(BlockUid uid, std::string_view kind,
                                      std::map<std::string, std::string, std::less<>> fields) {
  const BlockKind* k = find_kind(kind);
  if (k == nullptr) throw ProgramError(ProgramErrorCode::UnknownKind, std::string(kind));
  if (blocks_.contains(uid)) throw ProgramError(ProgramErrorCode::DuplicateUid, uid);
  Block b;
  b.uid = uid;
  b.kind = k;
  for (const auto& spec : k->fields) b.fields[spec.name] = spec.default_value;
  for (auto& [name, value] : fields) {
    const FieldSpec* spec = k->field(name);
    if (spec != nullptr && spec->kind == FieldKind::Number) {
      if (auto parsed = parse_number(value)) value = format_number(*parsed);
    }
    b.fields[name] = value;
  }
  blocks_.emplace(uid, std::move(b));
  return uid;
}

ProgramBuilder& ProgramBuilder::connect(const BlockUid& parent, std::string_view port, const BlockUid& child) {
  blocks_.at(parent).inputs[std::string(port)] = child;
  return *this;
}

ProgramBuilder& ProgramBuilder::chain(const BlockUid& first, const BlockUid& second) {
  blocks_.at(first).next = second;
  return *this;
}

ProgramBuilder& ProgramBuilder::root(const BlockUid& uid) {
  roots_.push_back(uid);
  return *this;
}

BlockProgram ProgramBuilder::build() const { return BlockProgram(blocks_, roots_); }

}  // namespace blockea
