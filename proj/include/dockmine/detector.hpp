#pragma once

#include <string>
#include <vector>

#include "dockmine/ir.hpp"
#include "dockmine/rulebook.hpp"

namespace dockmine {

struct Violation {
  int rule_id = 0;
  RuleLevel level = RuleLevel::Encouraged;
  std::string rule_name;
  std::string message;
  int line_begin = 0;  // span of the triggering occurrence
  int line_end = 0;
};

// A window of token indices [begin, end] (inclusive) plus its line span.
struct MatchWindow {
  size_t begin = 0;
  size_t end = 0;
};

// Occurrence searches over an IR token list, subsequence semantics.
// "last": greatest end index, then greatest start (rightmost-compact).
// "first": least end index, then greatest start (leftmost-compact).
bool find_last_window(const std::vector<IrToken>& tokens, const Matcher& m,
                      size_t limit, MatchWindow* out);
bool find_first_window(const std::vector<IrToken>& tokens, const Matcher& m,
                       size_t from, MatchWindow* out);
bool window_exists(const std::vector<IrToken>& tokens, const Matcher& m,
                   size_t from, size_t limit);

std::vector<Violation> check_implies(const IrSequence& seq, const Rule& rule);
std::vector<Violation> check_disj_implies(const IrSequence& seq,
                                          const Rule& rule);
std::vector<Violation> check_sandwich(const IrSequence& seq, const Rule& rule);
std::vector<Violation> run_special(const IrSequence& seq,
                                   const ParsedDockerfile& parsed,
                                   const Rule& rule);

struct CheckResult {
  std::string file;
  bool parse_ok = true;
  std::string error;  // parse/shell error message when !parse_ok
  std::vector<Violation> violations;  // sorted by (line_begin, rule_id)
  bool has_mandatory = false;
};

CheckResult check_file(const std::string& text, const std::string& source_name,
                       const RuleCatalog& catalog);
CheckResult check_ir(const IrSequence& seq, const ParsedDockerfile& parsed,
                     const RuleCatalog& catalog);

// Multi-file driver. `jobs` <= 1 is the serial reference path; > 1 checks
// files in parallel. Results are in input order either way.
struct FileInput {
  std::string path;  // display name
  std::string text;
};
std::vector<CheckResult> check_files(const std::vector<FileInput>& files,
                                     const RuleCatalog& catalog, int jobs = 1);

// "<file>:<line>: [<LEVEL>] rule <id> <name>: <message>" lines; parse
// failures render as "<file>:1: [ERROR] <reason>".
std::string format_text(const CheckResult& result);
// Line-delimited JSON records {file, line_start, line_end, rule_id, level,
// message}.
std::string format_records(const CheckResult& result);

}  // namespace dockmine
