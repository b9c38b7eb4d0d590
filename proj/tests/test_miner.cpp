#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dockmine/miner.hpp"

using namespace dockmine;

namespace {

// Independent subsequence check for the oracle (recursive, not two-pointer).
bool oracle_contains(const TokenSeq& hay, const TokenSeq& needle, size_t hi,
                     size_t ni) {
  if (ni == needle.size()) return true;
  if (hi == hay.size()) return false;
  if (hay[hi] == needle[ni] && oracle_contains(hay, needle, hi + 1, ni + 1)) {
    return true;
  }
  return oracle_contains(hay, needle, hi + 1, ni);
}

bool oracle_contains(const TokenSeq& hay, const TokenSeq& needle) {
  return oracle_contains(hay, needle, 0, 0);
}

// Brute-force frequent-pattern miner: enumerate every distinct subsequence of
// every sequence (they are the only candidates that can have support >= 1),
// then count sequence-level support for each.
std::vector<Pattern> oracle_mine(const SequenceDatabase& db,
                                 const MiningOptions& opts) {
  std::set<TokenSeq> candidates;
  for (const TokenSeq& seq : db.sequences) {
    const size_t n = seq.size();
    REQUIRE(n <= 16);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      TokenSeq sub;
      for (size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) sub.push_back(seq[i]);
      }
      if (int(sub.size()) <= opts.max_len) candidates.insert(std::move(sub));
    }
  }
  const int n_seqs = int(db.sequences.size());
  const int threshold =
      std::max(1, int(std::ceil(opts.min_support * n_seqs - 1e-9)));
  std::vector<Pattern> out;
  for (const TokenSeq& cand : candidates) {
    int count = 0;
    for (const TokenSeq& seq : db.sequences) {
      if (oracle_contains(seq, cand)) ++count;
    }
    if (count >= threshold) {
      Pattern p;
      p.tokens = cand;
      p.support_count = count;
      p.support = double(count) / double(n_seqs);
      out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Pattern& a, const Pattern& b) { return a.tokens < b.tokens; });
  return out;
}

SequenceDatabase random_db(std::mt19937& rng) {
  static const std::vector<std::string> alphabet = {"a", "b", "c", "d", "e", "f"};
  std::uniform_int_distribution<int> n_seqs(1, 8);
  std::uniform_int_distribution<int> seq_len(0, 6);
  std::uniform_int_distribution<size_t> letter(0, alphabet.size() - 1);
  SequenceDatabase db;
  const int n = n_seqs(rng);
  for (int i = 0; i < n; ++i) {
    TokenSeq seq;
    const int len = seq_len(rng);
    for (int j = 0; j < len; ++j) seq.push_back(alphabet[letter(rng)]);
    db.sequences.push_back(std::move(seq));
  }
  return db;
}

}  // namespace

TEST_CASE("prefixspan matches the brute-force oracle") {
  std::mt19937 rng(99);
  const double thresholds[] = {0.25, 0.4, 0.5, 1.0};
  for (int trial = 0; trial < 250; ++trial) {
    SequenceDatabase db = random_db(rng);
    for (double ms : thresholds) {
      MiningOptions opts;
      opts.min_support = ms;
      opts.max_len = 12;
      std::vector<Pattern> got = prefixspan(db, opts);
      std::vector<Pattern> want = oracle_mine(db, opts);
      CAPTURE(trial);
      CAPTURE(ms);
      REQUIRE(got.size() == want.size());
      for (size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].tokens == want[i].tokens);
        CHECK(got[i].support_count == want[i].support_count);
      }
    }
  }
}

TEST_CASE("prefixspan respects max_len") {
  SequenceDatabase db;
  db.sequences = {{"a", "b", "c", "d"}, {"a", "b", "c", "d"}};
  MiningOptions opts;
  opts.min_support = 1.0;
  opts.max_len = 2;
  for (const Pattern& p : prefixspan(db, opts)) {
    CHECK(p.tokens.size() <= 2);
  }
  opts.max_len = 12;
  std::vector<Pattern> all = prefixspan(db, opts);
  // 2^4 - 1 distinct non-empty subsequences, all with support 1.0.
  CHECK(all.size() == 15);
}

TEST_CASE("every prefix of a frequent pattern is frequent with at least its support") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    SequenceDatabase db = random_db(rng);
    MiningOptions opts;
    opts.min_support = 0.4;
    std::vector<Pattern> patterns = prefixspan(db, opts);
    std::map<TokenSeq, int> support;
    for (const Pattern& p : patterns) support[p.tokens] = p.support_count;
    for (const Pattern& p : patterns) {
      for (size_t cut = 1; cut < p.tokens.size(); ++cut) {
        TokenSeq prefix(p.tokens.begin(), p.tokens.begin() + cut);
        REQUIRE(support.count(prefix) == 1);
        CHECK(support[prefix] >= p.support_count);
      }
    }
  }
}

TEST_CASE("support threshold boundary") {
  // With five sequences at min_support 0.4, two occurrences are exactly
  // enough.
  SequenceDatabase db;
  db.sequences = {{"a"}, {"a"}, {"b"}, {"c"}, {"d"}};
  MiningOptions opts;
  opts.min_support = 0.4;
  std::vector<Pattern> patterns = prefixspan(db, opts);
  REQUIRE(patterns.size() == 1);
  CHECK(patterns[0].tokens == TokenSeq{"a"});
  CHECK(patterns[0].support_count == 2);
  CHECK(patterns[0].support == doctest::Approx(0.4));
}

TEST_CASE("prefixspan input validation") {
  SequenceDatabase empty;
  MiningOptions opts;
  CHECK_THROWS_AS(prefixspan(empty, opts), EmptyDatabaseError);

  SequenceDatabase db;
  db.sequences = {{"a"}};
  MiningOptions bad;
  bad.min_support = 0.0;
  CHECK_THROWS_AS(prefixspan(db, bad), std::invalid_argument);
  bad.min_support = 1.01;
  CHECK_THROWS_AS(prefixspan(db, bad), std::invalid_argument);
  bad.min_support = 0.4;
  bad.max_len = 0;
  CHECK_THROWS_AS(prefixspan(db, bad), std::invalid_argument);
}

TEST_CASE("is_subsequence basics") {
  CHECK(is_subsequence({}, {"a"}));
  CHECK(is_subsequence({"a", "c"}, {"a", "b", "c"}));
  CHECK_FALSE(is_subsequence({"c", "a"}, {"a", "b", "c"}));
  CHECK_FALSE(is_subsequence({"a", "a"}, {"a"}));
  CHECK(is_subsequence({"a", "a"}, {"b", "a", "b", "a"}));
}

TEST_CASE("maximal filter agrees with the definition") {
  std::mt19937 rng(21);
  static const std::vector<std::string> alphabet = {"x", "y", "z"};
  std::uniform_int_distribution<int> n_pats(0, 10);
  std::uniform_int_distribution<int> pat_len(1, 4);
  std::uniform_int_distribution<size_t> letter(0, alphabet.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Pattern> input;
    const int n = n_pats(rng);
    for (int i = 0; i < n; ++i) {
      Pattern p;
      const int len = pat_len(rng);
      for (int j = 0; j < len; ++j) p.tokens.push_back(alphabet[letter(rng)]);
      input.push_back(std::move(p));
    }
    std::vector<Pattern> kept = maximal(input);
    // Definition: kept iff no *other* input pattern properly contains it.
    std::set<TokenSeq> kept_set;
    for (const Pattern& p : kept) kept_set.insert(p.tokens);
    for (const Pattern& p : input) {
      bool subsumed = false;
      for (const Pattern& q : input) {
        if (q.tokens.size() > p.tokens.size() &&
            oracle_contains(q.tokens, p.tokens)) {
          subsumed = true;
          break;
        }
      }
      CAPTURE(trial);
      CHECK(kept_set.count(p.tokens) == (subsumed ? 0u : 1u));
    }
  }
}

TEST_CASE("tuple completeness") {
  // Complete: each command carries an argument before the next command.
  CHECK(is_tuple_complete({"SC-[pip]", "SC-[pip]-ARG-[install]"}));
  CHECK(is_tuple_complete(
      {"SC-[pip]", "SC-[pip]-ARG-[install]", "SC-[pip]-ARG-[-r]"}));
  CHECK(is_tuple_complete({"SC-[pip]", "SC-[pip]-ARG-[x]", "SC-[rm]",
                           "SC-[rm]-ARG-[y]"}));
  // A later argument may refer back to an earlier command.
  CHECK(is_tuple_complete({"SC-[rm]", "SC-[rm]-ARG-[a]", "SC-[pip]",
                           "SC-[pip]-ARG-[b]", "SC-[rm]-ARG-[c]"}));
  // Incomplete: bare command.
  CHECK_FALSE(is_tuple_complete({"SC-[pip]"}));
  CHECK_FALSE(is_tuple_complete({"SC-[pip]", "SC-[rm]", "SC-[rm]-ARG-[x]"}));
  // Incomplete: argument with no owning command anywhere before it.
  CHECK_FALSE(is_tuple_complete({"SC-[pip]-ARG-[install]"}));
  CHECK_FALSE(is_tuple_complete({"SC-[pip]", "SC-[pip]-ARG-[x]",
                                 "SC-[rm]-ARG-[y]"}));
  // Docker tokens are exempt and do not close a command's argument window.
  CHECK(is_tuple_complete({"FROM-IMAGE-[a]-TAG-[LATEST]"}));
  CHECK(is_tuple_complete({"EXPOSE", "EXPOSE-ARG-[80]"}));
  CHECK(is_tuple_complete({"SC-[pip]", "FROM-IMAGE-[a]-TAG-[LATEST]",
                           "SC-[pip]-ARG-[x]"}));
  CHECK(is_tuple_complete({}));

  std::vector<Pattern> mixed;
  for (TokenSeq tokens : std::vector<TokenSeq>{
           {"SC-[pip]", "SC-[pip]-ARG-[install]"},
           {"SC-[pip]"},
           {"EXPOSE"},
       }) {
    Pattern p;
    p.tokens = std::move(tokens);
    mixed.push_back(std::move(p));
  }
  std::vector<Pattern> pruned = prune_incomplete(mixed);
  REQUIRE(pruned.size() == 2);
  CHECK(pruned[0].tokens.size() == 2);
  CHECK(pruned[1].tokens == TokenSeq{"EXPOSE"});
}

TEST_CASE("rule stats worked example") {
  const std::string P = "SC-[pip]";
  const std::string I = "SC-[pip]-ARG-[install]";
  const std::string X = "SC-[rm]";
  SequenceDatabase db;
  db.sequences = {{P, I}, {P, I}, {P, I}, {P, X}, {I, P}, {P, I}, {X, X}, {P, I}};
  // Antecedent in 7 of 8, consequent in 6 of 8, ordered pair in 5 of 8.
  RuleStats stats = rule_stats({P}, {I}, db);
  CHECK(stats.support == doctest::Approx(5.0 / 8.0));
  CHECK(stats.confidence == doctest::Approx(5.0 / 7.0));
  CHECK(stats.lift == doctest::Approx((5.0 / 7.0) / (6.0 / 8.0)));

  CHECK_THROWS_AS(rule_stats({"SC-[missing]"}, {I}, db),
                  ZeroAntecedentSupportError);

  RuleStats zero = rule_stats({P}, {"SC-[nothing]"}, db);
  CHECK(zero.confidence == 0.0);
  CHECK(zero.lift == 0.0);
}

namespace {

IrSequence make_seq(const std::string& name,
                    const std::vector<std::pair<IrKind, std::string>>& toks,
                    const std::vector<std::string>& commands) {
  IrSequence seq;
  seq.source_name = name;
  int line = 1;
  for (const auto& [kind, text] : toks) {
    IrToken tok;
    tok.kind = kind;
    tok.text = text;
    tok.origin = {line++, 1};
    seq.tokens.push_back(std::move(tok));
  }
  seq.commands_present = commands;
  return seq;
}

}  // namespace

TEST_CASE("group_by_command replicates files per command") {
  std::vector<IrSequence> corpus;
  corpus.push_back(make_seq("one", {{IrKind::ShellCmd, "SC-[pip]"},
                                    {IrKind::ShellArg, "SC-[pip]-ARG-[install]"},
                                    {IrKind::ShellCmd, "SC-[rm]"},
                                    {IrKind::ShellArg, "SC-[rm]-ARG-[-r]"}},
                            {"pip", "rm"}));
  corpus.push_back(make_seq("two", {{IrKind::ShellCmd, "SC-[pip]"},
                                    {IrKind::ShellArg, "SC-[pip]-ARG-[wheel]"}},
                            {"pip"}));
  std::vector<SequenceDatabase> groups = group_by_command(corpus);
  REQUIRE(groups.size() == 2);  // sorted: pip, rm
  CHECK(groups[0].group_command == "pip");
  CHECK(groups[0].sequences.size() == 2);
  CHECK(groups[1].group_command == "rm");
  REQUIRE(groups[1].sequences.size() == 1);
  // Grouping replicates the *whole* file sequence, not a per-command slice.
  CHECK(groups[1].sequences[0].size() == 4);
}

TEST_CASE("mine finds the planted practice pattern") {
  std::vector<IrSequence> corpus;
  for (int i = 0; i < 40; ++i) {
    corpus.push_back(make_seq(
        "with-" + std::to_string(i),
        {{IrKind::FromImage, "FROM-IMAGE-[img" + std::to_string(i) + "]-TAG-[SPECIFIC]"},
         {IrKind::ShellCmd, "SC-[pip]"},
         {IrKind::ShellArg, "SC-[pip]-ARG-[install]"},
         {IrKind::ShellArg, "SC-[pip]-ARG-[--no-cache-dir]"},
         {IrKind::ShellArg, "SC-[pip]-ARG-[pkg" + std::to_string(i) + "]"}},
        {"pip"}));
  }
  for (int i = 0; i < 10; ++i) {
    corpus.push_back(make_seq(
        "without-" + std::to_string(i),
        {{IrKind::FromImage,
          "FROM-IMAGE-[other" + std::to_string(i) + "]-TAG-[LATEST]"},
         {IrKind::ShellCmd, "SC-[pip]"},
         {IrKind::ShellArg, "SC-[pip]-ARG-[install]"},
         {IrKind::ShellArg, "SC-[pip]-ARG-[extra" + std::to_string(i) + "]"}},
        {"pip"}));
  }
  MiningOptions opts;
  MiningReport report = mine(corpus, opts, 1);
  CHECK(report.corpus_size == 50);
  REQUIRE(report.groups.size() == 1);
  const GroupReport& group = report.groups[0];
  CHECK(group.group_command == "pip");
  CHECK(group.database_size == 50);
  CHECK(group.threshold_count == 20);
  CHECK(group.error.empty());
  // Pipeline counts can only shrink.
  CHECK(group.frequent_count >= group.maximal_count);
  CHECK(group.maximal_count >= int(group.patterns.size()));

  const TokenSeq want = {"SC-[pip]", "SC-[pip]-ARG-[install]",
                         "SC-[pip]-ARG-[--no-cache-dir]"};
  bool found = false;
  for (size_t i = 0; i < group.patterns.size(); ++i) {
    if (group.patterns[i].tokens == want) {
      found = true;
      CHECK(group.patterns[i].support_count == 40);
      CHECK(group.patterns[i].support == doctest::Approx(0.8));
      // Stats split: antecedent = first token, consequent = remainder.
      CHECK(group.stats[i].confidence == doctest::Approx(40.0 / 50.0));
    }
  }
  CHECK(found);
}

TEST_CASE("mine reports per-group errors without aborting") {
  // An all-empty-commands corpus produces no groups at all.
  std::vector<IrSequence> corpus;
  corpus.push_back(make_seq("plain", {{IrKind::Instr, "EXPOSE"}}, {}));
  MiningReport report = mine(corpus, MiningOptions{}, 1);
  CHECK(report.groups.empty());
}

TEST_CASE("format_report carries the stats split header") {
  std::vector<IrSequence> corpus;
  corpus.push_back(make_seq("a", {{IrKind::ShellCmd, "SC-[go]"},
                                  {IrKind::ShellArg, "SC-[go]-ARG-[build]"}},
                            {"go"}));
  MiningReport report = mine(corpus, MiningOptions{}, 1);
  std::string text = format_report(report);
  CHECK(text.find("antecedent = first token") != std::string::npos);
  CHECK(text.find("group go") != std::string::npos);
}
