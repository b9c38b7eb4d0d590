#include "dockmine/rulebook.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dockmine {

const char* rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::Implies: return "implies";
    case RuleKind::DisjImplies: return "disj_implies";
    case RuleKind::Sandwich: return "sandwich";
    case RuleKind::Special: return "special";
  }
  return "?";
}

const char* rule_level_name(RuleLevel l) {
  switch (l) {
    case RuleLevel::Mandatory: return "mandatory";
    case RuleLevel::Encouraged: return "encouraged";
  }
  return "?";
}

const std::vector<std::string>& special_handlers() {
  static const std::vector<std::string> handlers = {
      "set-eux",
      "useradd-not-root",
      "groupadd-not-root",
  };
  return handlers;
}

bool matcher_token_matches(const std::string& pattern, const std::string& token) {
  if (pattern == "ANY") return true;
  static const std::string kWild = "[ANY]";
  if (pattern.find(kWild) == std::string::npos) return pattern == token;

  size_t pi = 0;
  size_t ti = 0;
  while (pi < pattern.size()) {
    if (pattern.compare(pi, kWild.size(), kWild) == 0) {
      if (ti >= token.size() || token[ti] != '[') return false;
      bool trailing = pi + kWild.size() == pattern.size();
      if (trailing) {
        // The wildcard field runs to the end of the token; the closing
        // bracket must be the token's final character.
        if (token.size() - ti < 2 || token.back() != ']') return false;
        ti = token.size();
      } else {
        size_t close = token.find(']', ti + 1);
        if (close == std::string::npos) return false;
        ti = close + 1;
      }
      pi += kWild.size();
    } else {
      if (ti >= token.size() || token[ti] != pattern[pi]) return false;
      ++pi;
      ++ti;
    }
  }
  return ti == token.size();
}

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

std::string rule_label(size_t index, const YAML::Node& node) {
  char buf[64];
  if (node.IsMap() && node["id"] && node["id"].IsScalar()) {
    std::snprintf(buf, sizeof(buf), "rule %s", node["id"].Scalar().c_str());
  } else {
    std::snprintf(buf, sizeof(buf), "rule #%zu", index + 1);
  }
  return buf;
}

int require_int(const YAML::Node& node, const std::string& where, const char* field) {
  if (!node.IsScalar()) schema_fail(where, std::string(field) + " must be an integer");
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    schema_fail(where, std::string(field) + " must be an integer");
  }
}

double require_double(const YAML::Node& node, const std::string& where, const char* field) {
  if (!node.IsScalar()) schema_fail(where, std::string(field) + " must be a number");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    schema_fail(where, std::string(field) + " must be a number");
  }
}

std::string require_string(const YAML::Node& node, const std::string& where, const char* field) {
  if (!node.IsScalar()) schema_fail(where, std::string(field) + " must be a string");
  return node.Scalar();
}

// p/q/r values are lists of token lists; every token is a non-empty string.
std::vector<Matcher> require_matchers(const YAML::Node& node, const std::string& where,
                                      const char* field) {
  if (!node.IsSequence()) schema_fail(where, std::string(field) + " must be a list of token lists");
  std::vector<Matcher> out;
  for (const auto& alt : node) {
    if (!alt.IsSequence())
      schema_fail(where, std::string(field) + " entries must be token lists");
    Matcher m;
    for (const auto& tok : alt) {
      if (!tok.IsScalar() || tok.Scalar().empty())
        schema_fail(where, std::string(field) + " tokens must be non-empty strings");
      m.tokens.push_back(tok.Scalar());
    }
    if (m.tokens.empty())
      schema_fail(where, std::string(field) + " token lists must be non-empty");
    out.push_back(std::move(m));
  }
  return out;
}

Rule parse_rule(const YAML::Node& node, size_t index) {
  const std::string where = rule_label(index, node);
  if (!node.IsMap()) schema_fail(where, "each rule must be a mapping");

  static const std::set<std::string> accepted = {
      "id", "name", "level", "type", "within", "p", "q", "r",
      "handler", "confidence", "lift", "message",
  };
  for (const auto& kv : node) {
    if (!kv.first.IsScalar()) schema_fail(where, "field names must be strings");
    const std::string key = kv.first.Scalar();
    if (!accepted.count(key)) schema_fail(where, "unknown field '" + key + "'");
  }

  Rule rule;

  if (!node["id"]) schema_fail(where, "missing required field 'id'");
  rule.id = require_int(node["id"], where, "id");

  if (!node["name"]) schema_fail(where, "missing required field 'name'");
  rule.name = require_string(node["name"], where, "name");
  if (rule.name.empty()) schema_fail(where, "name must be non-empty");

  if (!node["level"]) schema_fail(where, "missing required field 'level'");
  const std::string level = require_string(node["level"], where, "level");
  if (level == "mandatory") {
    rule.level = RuleLevel::Mandatory;
  } else if (level == "encouraged") {
    rule.level = RuleLevel::Encouraged;
  } else {
    schema_fail(where, "level must be 'mandatory' or 'encouraged', got '" + level + "'");
  }

  if (!node["type"]) schema_fail(where, "missing required field 'type'");
  const std::string type = require_string(node["type"], where, "type");
  if (type == "implies") {
    rule.kind = RuleKind::Implies;
  } else if (type == "disj_implies") {
    rule.kind = RuleKind::DisjImplies;
  } else if (type == "sandwich") {
    rule.kind = RuleKind::Sandwich;
  } else if (type == "special") {
    rule.kind = RuleKind::Special;
  } else {
    schema_fail(where, "type must be one of implies, disj_implies, sandwich, special");
  }

  if (node["within"]) {
    const std::string within = require_string(node["within"], where, "within");
    if (within == "file") {
      rule.within = RuleScope::File;
    } else if (within == "run") {
      rule.within = RuleScope::Run;
    } else {
      schema_fail(where, "within must be 'file' or 'run', got '" + within + "'");
    }
  }

  if (node["p"]) rule.p = require_matchers(node["p"], where, "p");
  if (node["q"]) rule.q = require_matchers(node["q"], where, "q");
  if (node["r"]) rule.r = require_matchers(node["r"], where, "r");
  if (node["handler"]) rule.handler = require_string(node["handler"], where, "handler");
  if (node["confidence"]) rule.confidence = require_double(node["confidence"], where, "confidence");
  if (node["lift"]) rule.lift = require_double(node["lift"], where, "lift");
  if (node["message"]) rule.message = require_string(node["message"], where, "message");
  if (rule.message.empty()) rule.message = rule.name;

  switch (rule.kind) {
    case RuleKind::Implies:
      if (rule.p.size() != 1 || rule.q.size() != 1)
        schema_fail(where, "implies rules need exactly one p and one q token list");
      if (!rule.r.empty()) schema_fail(where, "r is only valid for sandwich rules");
      if (!rule.handler.empty()) schema_fail(where, "handler is only valid for special rules");
      break;
    case RuleKind::DisjImplies:
      if (rule.p.empty() || rule.q.empty())
        schema_fail(where, "disj_implies rules need at least one p and one q alternative");
      if (!rule.r.empty()) schema_fail(where, "r is only valid for sandwich rules");
      if (!rule.handler.empty()) schema_fail(where, "handler is only valid for special rules");
      break;
    case RuleKind::Sandwich:
      if (rule.p.size() != 1 || rule.q.size() != 1 || rule.r.size() != 1)
        schema_fail(where, "sandwich rules need exactly one p, q and r token list");
      if (!rule.handler.empty()) schema_fail(where, "handler is only valid for special rules");
      break;
    case RuleKind::Special:
      if (!rule.p.empty() || !rule.q.empty() || !rule.r.empty())
        schema_fail(where, "special rules take a handler instead of p/q/r");
      if (rule.handler.empty()) schema_fail(where, "missing required field 'handler'");
      {
        const auto& handlers = special_handlers();
        if (std::find(handlers.begin(), handlers.end(), rule.handler) == handlers.end())
          throw UnknownHandlerError(where + ": unknown handler '" + rule.handler + "'");
      }
      break;
  }

  return rule;
}

}  // namespace

RuleCatalog load_rules(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw SchemaError(std::string("malformed YAML: ") + e.what());
  }
  if (!root.IsMap()) throw SchemaError("rule document must be a mapping with a 'rules' key");
  for (const auto& kv : root) {
    if (!kv.first.IsScalar() || kv.first.Scalar() != "rules")
      throw SchemaError("rule document accepts only the 'rules' key");
  }
  const YAML::Node rules = root["rules"];
  if (!rules || !rules.IsSequence()) throw SchemaError("'rules' must be a list of rules");

  RuleCatalog catalog;
  std::set<int> seen_ids;
  size_t index = 0;
  for (const auto& entry : rules) {
    Rule rule = parse_rule(entry, index++);
    if (!seen_ids.insert(rule.id).second) {
      throw DuplicateRuleIdError("duplicate rule id " + std::to_string(rule.id));
    }
    catalog.rules.push_back(std::move(rule));
  }
  return catalog;
}

RuleCatalog load_rules_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read rules file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_rules(buf.str());
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

void emit_matchers(std::ostream& os, const char* field, const std::vector<Matcher>& ms) {
  os << "    " << field << ":\n";
  for (const auto& m : ms) {
    os << "      - [";
    for (size_t i = 0; i < m.tokens.size(); ++i) {
      if (i) os << ", ";
      os << quote(m.tokens[i]);
    }
    os << "]\n";
  }
}

}  // namespace

std::string to_yaml(const RuleCatalog& catalog) {
  std::ostringstream os;
  os << "rules:\n";
  for (const auto& rule : catalog.rules) {
    os << "  - id: " << rule.id << "\n";
    os << "    name: " << quote(rule.name) << "\n";
    os << "    level: " << rule_level_name(rule.level) << "\n";
    os << "    type: " << rule_kind_name(rule.kind) << "\n";
    if (rule.within == RuleScope::Run) os << "    within: run\n";
    if (!rule.p.empty()) emit_matchers(os, "p", rule.p);
    if (!rule.q.empty()) emit_matchers(os, "q", rule.q);
    if (!rule.r.empty()) emit_matchers(os, "r", rule.r);
    if (!rule.handler.empty()) os << "    handler: " << rule.handler << "\n";
    if (rule.confidence) os << "    confidence: " << format_number(*rule.confidence) << "\n";
    if (rule.lift) os << "    lift: " << format_number(*rule.lift) << "\n";
    if (rule.message != rule.name) os << "    message: " << quote(rule.message) << "\n";
  }
  return os.str();
}

}  // namespace dockmine
