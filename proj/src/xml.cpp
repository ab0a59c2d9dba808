#include "blockea/xml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "blockea/format.hpp"

namespace blockea {

namespace pt = boost::property_tree;

namespace {

constexpr std::string_view kAttrNode = "<xmlattr>";
constexpr std::string_view kCommentNode = "<xmlcomment>";

bool blank(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw ProgramError(ProgramErrorCode::MalformedXml, "<" + where + ">: " + what);
}

std::map<std::string, std::string, std::less<>> attributes_of(const pt::ptree& node) {
  std::map<std::string, std::string, std::less<>> out;
  if (auto attrs = node.get_child_optional(std::string(kAttrNode))) {
    for (const auto& [name, value] : *attrs) out[name] = value.data();
  }
  return out;
}

class Reader {
 public:
  BlockProgram read(const pt::ptree& doc) {
    const pt::ptree* root = nullptr;
    for (const auto& [name, child] : doc) {
      if (name == kCommentNode) continue;
      if (name != "blockea" || root != nullptr) malformed(name, "expected a single <blockea> root element");
      root = &child;
    }
    if (root == nullptr) malformed("document", "missing <blockea> root element");
    check_version(*root);

    std::vector<BlockUid> top_level;
    for (const auto& [name, child] : *root) {
      if (name == kAttrNode || name == kCommentNode) continue;
      if (name != "block") malformed("blockea/" + name, "unexpected element");
      top_level.push_back(read_block(child, "blockea/block"));
    }
    if (!blank(root->data())) malformed("blockea", "unexpected text content");

    std::vector<BlockUid> roots;
    for (const auto& uid : top_level) {
      if (!referenced_.contains(uid)) roots.push_back(uid);
    }
    return BlockProgram(std::move(blocks_), std::move(roots));
  }

 private:
  void check_version(const pt::ptree& root) {
    auto attrs = attributes_of(root);
    auto it = attrs.find("format_version");
    if (it == attrs.end()) malformed("blockea", "missing format_version attribute");
    for (const auto& [name, value] : attrs) {
      if (name != "format_version") {
        throw ProgramError(ProgramErrorCode::BadField, "<blockea> has unknown attribute '" + name + "'");
      }
    }
    const std::string& v = it->second;
    const std::string major = v.substr(0, v.find('.'));
    if (major.empty() || !std::all_of(major.begin(), major.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ProgramError(ProgramErrorCode::UnsupportedVersion, "format_version '" + v + "' is not a version number");
    }
    if (std::stoi(major) > kFormatVersion) {
      throw ProgramError(ProgramErrorCode::UnsupportedVersion,
                         "format_version " + v + " is newer than supported major " + std::to_string(kFormatVersion));
    }
  }

  BlockUid fresh_uid() {
    BlockUid uid;
    do {
      uid = "auto" + std::to_string(auto_counter_++);
    } while (declared_.contains(uid));
    return uid;
  }

  BlockUid read_block(const pt::ptree& node, const std::string& path) {
    auto attrs = attributes_of(node);
    auto kind_it = attrs.find("kind");
    if (kind_it == attrs.end()) malformed(path, "missing kind attribute");
    const BlockKind* kind = find_kind(kind_it->second);
    if (kind == nullptr) throw ProgramError(ProgramErrorCode::UnknownKind, "<" + path + "> kind '" + kind_it->second + "'");
    const std::string here = path + "[" + kind->id + "]";

    Block block;
    block.kind = kind;
    if (auto uid_it = attrs.find("uid"); uid_it != attrs.end()) {
      if (uid_it->second.empty()) malformed(here, "empty uid");
      block.uid = uid_it->second;
    } else {
      block.uid = fresh_uid();
    }
    if (!declared_.insert(block.uid).second) {
      throw ProgramError(ProgramErrorCode::DuplicateUid, "<" + here + "> uid '" + block.uid + "' declared twice");
    }

    for (const auto& [name, value] : attrs) {
      if (name == "kind" || name == "uid") continue;
      const FieldSpec* spec = kind->field(name);
      if (spec == nullptr) {
        throw ProgramError(ProgramErrorCode::BadField, "<" + here + "> unknown attribute '" + name + "'");
      }
      if (!field_value_ok(*kind, *spec, value)) {
        throw ProgramError(ProgramErrorCode::BadField, "<" + here + "> " + kind->id + "." + name + " = '" + value + "'");
      }
      block.fields[name] = spec->kind == FieldKind::Number ? format_number(*parse_number(value)) : value;
    }
    for (const auto& spec : kind->fields) {
      if (!block.fields.contains(spec.name)) block.fields[spec.name] = spec.default_value;
    }
    if (!blank(node.data())) malformed(here, "unexpected text content");

    for (const auto& [name, child] : node) {
      if (name == kAttrNode || name == kCommentNode) continue;
      const std::string child_path = here + "/" + name;
      if (name == "next") {
        if (block.next) malformed(child_path, "more than one <next>");
        block.next = read_connection(child, child_path, false);
        continue;
      }
      if (name != "value" && name != "statement") malformed(child_path, "unexpected element");
      auto cattrs = attributes_of(child);
      auto port_name = cattrs.find("name");
      if (port_name == cattrs.end()) malformed(child_path, "missing name attribute");
      const PortSpec* port = kind->port(port_name->second);
      if (port == nullptr || port->is_statement() != (name == "statement")) {
        throw ProgramError(ProgramErrorCode::UnknownPort,
                           "<" + child_path + "> " + kind->id + " has no " + name + " port '" + port_name->second + "'");
      }
      if (block.inputs.contains(port->name)) malformed(child_path, "port '" + port->name + "' connected twice");
      block.inputs[port->name] = read_connection(child, child_path + "[" + port->name + "]", true);
    }

    BlockUid uid = block.uid;
    blocks_.emplace(uid, std::move(block));
    return uid;
  }

  BlockUid read_connection(const pt::ptree& node, const std::string& path, bool named) {
    auto attrs = attributes_of(node);
    for (const auto& [name, value] : attrs) {
      if (name == "ref" || (named && name == "name")) continue;
      throw ProgramError(ProgramErrorCode::BadField, "<" + path + "> unknown attribute '" + name + "'");
    }
    if (!blank(node.data())) malformed(path, "unexpected text content");
    std::optional<BlockUid> target;
    if (auto ref = attrs.find("ref"); ref != attrs.end()) target = ref->second;
    for (const auto& [name, child] : node) {
      if (name == kAttrNode || name == kCommentNode) continue;
      if (name != "block") malformed(path + "/" + name, "unexpected element");
      if (target) malformed(path, "expects exactly one block or ref");
      target = read_block(child, path + "/block");
    }
    if (!target) malformed(path, "expects exactly one block or ref");
    referenced_.insert(*target);
    return *target;
  }

  std::map<BlockUid, Block, std::less<>> blocks_;
  std::set<BlockUid, std::less<>> declared_;
  std::set<BlockUid, std::less<>> referenced_;
  std::size_t auto_counter_ = 0;
};

std::string escape_attribute(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

class Writer {
 public:
  explicit Writer(const BlockProgram& program) : program_(program) {}

  std::string write() {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ << "<blockea format_version=\"" << kFormatVersion << "\"";
    if (program_.roots().empty()) {
      out_ << "/>\n";
      return out_.str();
    }
    out_ << ">\n";
    for (const auto& root : program_.roots()) write_block(program_.at(root), 1);
    out_ << "</blockea>\n";
    return out_.str();
  }

 private:
  void indent(int depth) { out_ << std::string(static_cast<std::size_t>(depth) * 2, ' '); }

  void write_block(const Block& block, int depth) {
    indent(depth);
    out_ << "<block kind=\"" << block.kind->id << "\" uid=\"b" << next_uid_++ << "\"";
    for (const auto& spec : block.kind->fields) {
      out_ << " " << spec.name << "=\"" << escape_attribute(block.field(spec.name)) << "\"";
    }
    const bool has_children = !block.inputs.empty() || block.next.has_value();
    if (!has_children) {
      out_ << "/>\n";
      return;
    }
    out_ << ">\n";
    for (const auto& port : block.kind->ports) {
      const BlockUid* child = block.input(port.name);
      if (child == nullptr) continue;
      const char* tag = port.is_statement() ? "statement" : "value";
      indent(depth + 1);
      out_ << "<" << tag << " name=\"" << port.name << "\">\n";
      write_block(program_.at(*child), depth + 2);
      indent(depth + 1);
      out_ << "</" << tag << ">\n";
    }
    if (block.next) {
      indent(depth + 1);
      out_ << "<next>\n";
      write_block(program_.at(*block.next), depth + 2);
      indent(depth + 1);
      out_ << "</next>\n";
    }
    indent(depth);
    out_ << "</block>\n";
  }

  const BlockProgram& program_;
  std::ostringstream out_;
  std::size_t next_uid_ = 0;
};

}  // namespace

BlockProgram parse_xml(std::string_view text) {
  pt::ptree doc;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw ProgramError(ProgramErrorCode::MalformedXml,
                       "line " + std::to_string(e.line()) + ": " + e.message());
  }
  return Reader{}.read(doc);
}

std::string serialize_xml(const BlockProgram& program) { return Writer(program).write(); }

}  // namespace blockea
