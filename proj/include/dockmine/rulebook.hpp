#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dockmine {

class RuleLoadError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Missing/extra fields, wrong types, malformed YAML, bad token lists.
class SchemaError : public RuleLoadError {
  using RuleLoadError::RuleLoadError;
};
class DuplicateRuleIdError : public RuleLoadError {
  using RuleLoadError::RuleLoadError;
};
class UnknownHandlerError : public RuleLoadError {
  using RuleLoadError::RuleLoadError;
};

enum class RuleKind { Implies, DisjImplies, Sandwich, Special };
enum class RuleLevel { Mandatory, Encouraged };
enum class RuleScope { File, Run };

const char* rule_kind_name(RuleKind k);
const char* rule_level_name(RuleLevel l);

// An ordered token list matched with subsequence semantics. A token is a
// literal, the whole-token wildcard ANY, or a literal with [ANY] bracket
// fields (e.g. FROM-IMAGE-[ANY]-TAG-[ANY] matches any FROM token).
struct Matcher {
  std::vector<std::string> tokens;
};

bool matcher_token_matches(const std::string& pattern, const std::string& token);

struct Rule {
  int id = 0;
  std::string name;
  RuleKind kind = RuleKind::Implies;
  RuleLevel level = RuleLevel::Encouraged;
  RuleScope within = RuleScope::File;
  std::vector<Matcher> p;  // Implies: exactly 1; DisjImplies: alternatives
  std::vector<Matcher> q;
  std::vector<Matcher> r;        // Sandwich only
  std::string handler;           // Special only
  std::optional<double> confidence;
  std::optional<double> lift;
  std::string message;  // human-readable advice; defaults to name
};

struct RuleCatalog {
  std::vector<Rule> rules;
};

// Registered Special handlers; load_rules rejects anything else.
const std::vector<std::string>& special_handlers();

// Parses the YAML rule DSL. Validation is total: any input yields either a
// valid catalog or a typed error (SchemaError / DuplicateRuleIdError /
// UnknownHandlerError).
RuleCatalog load_rules(const std::string& yaml_text);
RuleCatalog load_rules_file(const std::string& path);

// Serializes a catalog back to DSL text; load_rules(to_yaml(c)) == c.
std::string to_yaml(const RuleCatalog& catalog);

// The shipped catalog: 34 semantic rules (ids 1-34) and 19 syntactic rules
// (ids 101-119).
const RuleCatalog& builtin_catalog();

}  // namespace dockmine
