#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "dockmine/ir.hpp"
#include "dockmine/rulebook.hpp"

using namespace dockmine;

TEST_CASE("matcher token matching") {
  // Literals.
  CHECK(matcher_token_matches("SC-[curl]", "SC-[curl]"));
  CHECK_FALSE(matcher_token_matches("SC-[curl]", "SC-[curls]"));
  CHECK_FALSE(matcher_token_matches("SC-[curl]", "SC-[cur]"));
  // Whole-token wildcard.
  CHECK(matcher_token_matches("ANY", "SC-[anything]"));
  CHECK(matcher_token_matches("ANY", "EXPOSE"));
  // Trailing bracket field wildcard anchors at the token's final bracket.
  CHECK(matcher_token_matches("SC-[mv]-ARG-[ANY]", "SC-[mv]-ARG-[PATH-NORMAL]"));
  CHECK(matcher_token_matches("SC-[mv]-ARG-[ANY]", "SC-[mv]-ARG-[a[0]]"));
  CHECK_FALSE(matcher_token_matches("SC-[mv]-ARG-[ANY]", "SC-[mvn]-ARG-[x]"));
  CHECK_FALSE(matcher_token_matches("SC-[mv]-ARG-[ANY]", "SC-[mv]-ARG-x"));
  CHECK_FALSE(matcher_token_matches("SC-[mv]-ARG-[ANY]", "SC-[mv]"));
  // Middle wildcard scans to the first closing bracket.
  CHECK(matcher_token_matches("FROM-IMAGE-[ANY]-TAG-[ANY]",
                              "FROM-IMAGE-[python]-TAG-[SPECIFIC]"));
  CHECK(matcher_token_matches("FROM-IMAGE-[ANY]-TAG-[ANY]",
                              "FROM-IMAGE-[registry/img]-TAG-[LATEST]"));
  CHECK_FALSE(matcher_token_matches("FROM-IMAGE-[ANY]-TAG-[ANY]", "SC-[go]"));
  CHECK_FALSE(matcher_token_matches("FROM-IMAGE-[ANY]-TAG-[ANY]", "FROM-IMAGE-[x]"));
  CHECK(matcher_token_matches("SC-[ANY]", "SC-[rm]"));
  CHECK(matcher_token_matches("SC-[ANY]-ARG-[ANY]", "SC-[rm]-ARG-[-r]"));
  CHECK_FALSE(matcher_token_matches("SC-[ANY]-ARG-[ANY]", "SC-[rm]"));
}

TEST_CASE("builtin catalog shape") {
  const RuleCatalog& catalog = builtin_catalog();
  REQUIRE(catalog.rules.size() == 53);
  int semantic = 0, syntactic = 0, mandatory = 0, special = 0;
  for (const Rule& rule : catalog.rules) {
    if (rule.id >= 1 && rule.id <= 34) ++semantic;
    if (rule.id >= 101 && rule.id <= 119) ++syntactic;
    if (rule.level == RuleLevel::Mandatory) ++mandatory;
    if (rule.kind == RuleKind::Special) {
      ++special;
      CHECK_FALSE(rule.confidence.has_value());
      CHECK_FALSE(rule.lift.has_value());
      CHECK(!rule.handler.empty());
    }
    if (rule.id >= 1 && rule.id <= 31) {
      CHECK(rule.confidence.has_value());
      CHECK(rule.lift.has_value());
    }
    if (rule.id >= 101) {
      CHECK(rule.level == RuleLevel::Encouraged);
      CHECK_FALSE(rule.confidence.has_value());
    }
  }
  CHECK(semantic == 34);
  CHECK(syntactic == 19);
  CHECK(mandatory == 18);
  CHECK(special == 3);
}

TEST_CASE("builtin matcher tokens use the real replacement vocabulary") {
  // Guards the catalog against drifting from what the IR layer can emit:
  // every canonical-looking bracket value must be in the substitution
  // vocabulary (or the ANY wildcard).
  const auto& vocab = replacement_vocabulary();
  auto check_token = [&](const std::string& tok) {
    size_t arg = tok.find("-ARG-[");
    if (arg == std::string::npos) return;
    REQUIRE(tok.back() == ']');
    std::string value = tok.substr(arg + 6, tok.size() - arg - 7);
    bool canonical_shape = value.rfind("FILE-", 0) == 0 ||
                           value.rfind("PATH-", 0) == 0 ||
                           value.rfind("URL-", 0) == 0;
    if (canonical_shape) {
      CAPTURE(tok);
      CHECK(vocab.count(value) == 1);
    }
  };
  for (const Rule& rule : builtin_catalog().rules) {
    for (const auto& group : {rule.p, rule.q, rule.r}) {
      for (const Matcher& m : group) {
        for (const std::string& tok : m.tokens) check_token(tok);
      }
    }
  }
}

TEST_CASE("yaml round-trip preserves the catalog") {
  const RuleCatalog& original = builtin_catalog();
  RuleCatalog reloaded = load_rules(to_yaml(original));
  REQUIRE(reloaded.rules.size() == original.rules.size());
  for (size_t i = 0; i < original.rules.size(); ++i) {
    const Rule& a = original.rules[i];
    const Rule& b = reloaded.rules[i];
    CAPTURE(a.id);
    CHECK(a.id == b.id);
    CHECK(a.name == b.name);
    CHECK(a.kind == b.kind);
    CHECK(a.level == b.level);
    CHECK(a.within == b.within);
    CHECK(a.handler == b.handler);
    CHECK(a.message == b.message);
    CHECK(a.confidence == b.confidence);
    CHECK(a.lift == b.lift);
    REQUIRE(a.p.size() == b.p.size());
    REQUIRE(a.q.size() == b.q.size());
    REQUIRE(a.r.size() == b.r.size());
    for (size_t j = 0; j < a.p.size(); ++j) CHECK(a.p[j].tokens == b.p[j].tokens);
    for (size_t j = 0; j < a.q.size(); ++j) CHECK(a.q[j].tokens == b.q[j].tokens);
    for (size_t j = 0; j < a.r.size(); ++j) CHECK(a.r[j].tokens == b.r[j].tokens);
  }
}

namespace {

const char* kValidRule = R"(
rules:
  - id: 1
    name: "demo"
    level: mandatory
    type: implies
    p:
      - ["SC-[a]"]
    q:
      - ["SC-[a]-ARG-[-y]"]
)";

}  // namespace

TEST_CASE("user rules load with defaults applied") {
  RuleCatalog catalog = load_rules(kValidRule);
  REQUIRE(catalog.rules.size() == 1);
  const Rule& rule = catalog.rules[0];
  CHECK(rule.within == RuleScope::File);       // default
  CHECK(rule.message == "demo");               // defaults to name
  CHECK_FALSE(rule.confidence.has_value());

  RuleCatalog scoped = load_rules(
      "rules:\n"
      "  - id: 7\n"
      "    name: \"scoped\"\n"
      "    level: encouraged\n"
      "    type: implies\n"
      "    within: run\n"
      "    p:\n"
      "      - [\"SC-[tar]\"]\n"
      "    q:\n"
      "      - [\"SC-[rm]\"]\n"
      "    message: \"clean up archives in the same RUN\"\n");
  CHECK(scoped.rules[0].within == RuleScope::Run);
  CHECK(scoped.rules[0].message == "clean up archives in the same RUN");
}

TEST_CASE("schema violations raise typed errors") {
  // Unknown field.
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: mandatory\n"
                             "    type: special\n    handler: set-eux\n    bogus: 1\n"),
                  SchemaError);
  // Missing required fields.
  CHECK_THROWS_AS(load_rules("rules:\n  - name: \"x\"\n    level: mandatory\n"
                             "    type: special\n    handler: set-eux\n"),
                  SchemaError);
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    level: mandatory\n"
                             "    type: special\n    handler: set-eux\n"),
                  SchemaError);
  // Bad enum values.
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: sometimes\n"
                             "    type: special\n    handler: set-eux\n"),
                  SchemaError);
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: mandatory\n"
                             "    type: perhaps\n    handler: set-eux\n"),
                  SchemaError);
  // Arity per kind.
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: mandatory\n"
                             "    type: implies\n    p:\n      - [\"A\"]\n      - [\"B\"]\n"
                             "    q:\n      - [\"C\"]\n"),
                  SchemaError);
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: mandatory\n"
                             "    type: sandwich\n    p:\n      - [\"A\"]\n"
                             "    q:\n      - [\"B\"]\n"),
                  SchemaError);
  // r outside sandwich, handler outside special, p/q on special.
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: mandatory\n"
                             "    type: implies\n    p:\n      - [\"A\"]\n"
                             "    q:\n      - [\"B\"]\n    r:\n      - [\"C\"]\n"),
                  SchemaError);
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: mandatory\n"
                             "    type: implies\n    p:\n      - [\"A\"]\n"
                             "    q:\n      - [\"B\"]\n    handler: set-eux\n"),
                  SchemaError);
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: mandatory\n"
                             "    type: special\n    handler: set-eux\n"
                             "    p:\n      - [\"A\"]\n"),
                  SchemaError);
  // Structural problems.
  CHECK_THROWS_AS(load_rules("just a scalar"), SchemaError);
  CHECK_THROWS_AS(load_rules("rules: 12"), SchemaError);
  CHECK_THROWS_AS(load_rules("norules: []"), SchemaError);
  CHECK_THROWS_AS(load_rules("rules:\n  - [1, 2]\n"), SchemaError);
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: mandatory\n"
                             "    type: implies\n    p: 3\n    q:\n      - [\"B\"]\n"),
                  SchemaError);
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"x\"\n    level: mandatory\n"
                             "    type: implies\n    p:\n      - []\n    q:\n      - [\"B\"]\n"),
                  SchemaError);
  CHECK_THROWS_AS(load_rules(": : ::\n  - bad"), SchemaError);
}

TEST_CASE("duplicate ids and unknown handlers raise their own errors") {
  CHECK_THROWS_AS(load_rules("rules:\n"
                             "  - id: 1\n    name: \"a\"\n    level: mandatory\n"
                             "    type: special\n    handler: set-eux\n"
                             "  - id: 1\n    name: \"b\"\n    level: mandatory\n"
                             "    type: special\n    handler: set-eux\n"),
                  DuplicateRuleIdError);
  CHECK_THROWS_AS(load_rules("rules:\n  - id: 1\n    name: \"a\"\n    level: mandatory\n"
                             "    type: special\n    handler: warp-speed\n"),
                  UnknownHandlerError);
}

TEST_CASE("loading is total: arbitrary input yields catalog or typed error") {
  // Deterministic fuzz over yaml-ish character soup. Anything other than a
  // RuleLoadError subtype escaping counts as a failure.
  std::mt19937 rng(1234);
  const std::string charset =
      "abcdef:-[]{}\"' \n\t0123456789,#&*!|>%@`rules:idnamelevltypq";
  std::uniform_int_distribution<size_t> pick(0, charset.size() - 1);
  std::uniform_int_distribution<int> len(0, 160);
  for (int i = 0; i < 500; ++i) {
    std::string doc;
    const int n = len(rng);
    for (int j = 0; j < n; ++j) doc.push_back(charset[pick(rng)]);
    try {
      RuleCatalog catalog = load_rules(doc);
      (void)catalog;
    } catch (const RuleLoadError&) {
      // expected typed failure
    }
  }
  CHECK(true);  // reaching here means no foreign exception escaped
}

TEST_CASE("load_rules_file reports unreadable paths") {
  CHECK_THROWS_AS(load_rules_file("/nonexistent/rules.yaml"), SchemaError);
}
