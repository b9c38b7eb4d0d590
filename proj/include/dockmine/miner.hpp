#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dockmine/ir.hpp"

namespace dockmine {

class EmptyDatabaseError : public std::runtime_error {
 public:
  EmptyDatabaseError() : std::runtime_error("sequence database is empty") {}
};

class ZeroAntecedentSupportError : public std::runtime_error {
 public:
  ZeroAntecedentSupportError()
      : std::runtime_error("antecedent has zero support") {}
};

using TokenSeq = std::vector<std::string>;

struct SequenceDatabase {
  std::string group_command;  // empty for ad-hoc databases
  std::vector<TokenSeq> sequences;
};

// Replicated grouping: one database per distinct shell command, holding the
// full IR token sequence of every file whose commands_present contains it.
// Deterministic: groups sorted by command, sequences in input order.
std::vector<SequenceDatabase> group_by_command(
    const std::vector<IrSequence>& corpus);

struct Pattern {
  TokenSeq tokens;
  int support_count = 0;
  double support = 0.0;  // fraction of sequences containing the pattern
};

struct MiningOptions {
  double min_support = 0.40;  // fraction, (0, 1]
  int max_len = 12;
};

// PrefixSpan with pseudo-projection (suffixes are (sequence, offset) pairs;
// nothing is copied). Returns all frequent patterns up to max_len, sorted
// lexicographically by token text (element-wise), shorter prefix first.
// Throws EmptyDatabaseError on an empty database.
std::vector<Pattern> prefixspan(const SequenceDatabase& db,
                                const MiningOptions& opts);

// True iff `needle` is a (not necessarily contiguous) subsequence of `hay`.
bool is_subsequence(const TokenSeq& needle, const TokenSeq& hay);

// Keeps the patterns that are not a proper subsequence of any other input
// pattern. Order preserved.
std::vector<Pattern> maximal(std::vector<Pattern> patterns);

// Tuple completeness: every SC-[c] must be followed by at least one
// SC-[c]-ARG-[...] before the next ShellCmd token, and every SC-[c]-ARG-[...]
// must be preceded somewhere by its SC-[c]. Docker-instruction tokens are
// exempt. Returns the patterns that satisfy it.
bool is_tuple_complete(const TokenSeq& pattern);
std::vector<Pattern> prune_incomplete(std::vector<Pattern> patterns);

struct RuleStats {
  double support = 0.0;     // of antecedent ++ consequent, in order
  double confidence = 0.0;  // P(consequent after antecedent | antecedent)
  double lift = 0.0;
};

// Sequence-level stats. Throws ZeroAntecedentSupportError when no sequence
// contains the antecedent; lift is 0 when the consequent never occurs.
RuleStats rule_stats(const TokenSeq& antecedent, const TokenSeq& consequent,
                     const SequenceDatabase& db);

struct GroupReport {
  std::string group_command;
  int database_size = 0;
  int threshold_count = 0;  // min sequences for a pattern to be frequent
  int frequent_count = 0;
  int maximal_count = 0;
  std::vector<Pattern> patterns;  // after maximal + tuple pruning
  // Stats per surviving pattern, split antecedent = first token,
  // consequent = remainder (see report header).
  std::vector<RuleStats> stats;
  std::string error;  // non-empty if this group failed
};

struct MiningReport {
  MiningOptions options;
  int corpus_size = 0;
  std::vector<GroupReport> groups;
};

// Full pipeline over a parsed corpus: group, mine each group, reduce to
// maximal patterns, prune incomplete tuples, attach stats. A failing group
// records its error and does not abort the others. `jobs` <= 1 runs the
// serial reference path; > 1 mines groups in parallel (identical output).
MiningReport mine(const std::vector<IrSequence>& corpus,
                  const MiningOptions& opts, int jobs = 1);

std::string format_report(const MiningReport& report);

}  // namespace dockmine
