#include "dockmine/miner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "dockmine/parallel.hpp"

namespace dockmine {

std::vector<SequenceDatabase> group_by_command(
    const std::vector<IrSequence>& corpus) {
  // Replicated grouping: a file lands in the database of every command it
  // uses, carrying its full token sequence each time.
  std::map<std::string, std::vector<const IrSequence*>> groups;
  for (const IrSequence& seq : corpus) {
    for (const std::string& cmd : seq.commands_present) {
      groups[cmd].push_back(&seq);
    }
  }
  std::vector<SequenceDatabase> out;
  out.reserve(groups.size());
  for (auto& [cmd, members] : groups) {
    SequenceDatabase db;
    db.group_command = cmd;
    db.sequences.reserve(members.size());
    for (const IrSequence* seq : members) {
      TokenSeq tokens;
      tokens.reserve(seq->tokens.size());
      for (const IrToken& t : seq->tokens) tokens.push_back(t.text);
      db.sequences.push_back(std::move(tokens));
    }
    out.push_back(std::move(db));
  }
  return out;
}

namespace {

struct Interned {
  std::vector<std::vector<int>> sequences;
  std::vector<std::string> names;  // id -> token text
};

Interned intern(const SequenceDatabase& db) {
  Interned out;
  std::map<std::string, int> ids;
  out.sequences.reserve(db.sequences.size());
  for (const TokenSeq& seq : db.sequences) {
    std::vector<int> s;
    s.reserve(seq.size());
    for (const std::string& tok : seq) {
      auto [it, fresh] = ids.emplace(tok, int(out.names.size()));
      if (fresh) out.names.push_back(tok);
      s.push_back(it->second);
    }
    out.sequences.push_back(std::move(s));
  }
  return out;
}

struct Projection {  // pseudo-projection: (sequence index, suffix offset)
  int seq;
  int pos;
};

struct MineState {
  const Interned* data;
  int threshold;
  int max_len;
  int db_size;
  std::vector<std::pair<std::vector<int>, int>> found;  // (pattern, count)
};

void mine_recursive(MineState* st, const std::vector<Projection>& projected,
                    std::vector<int>* prefix) {
  // Frequency of each item across the projected suffixes, one count per
  // sequence no matter how often it repeats.
  std::map<int, int> freq;
  for (const Projection& p : projected) {
    const std::vector<int>& seq = st->data->sequences[p.seq];
    std::set<int> seen;
    for (size_t i = p.pos; i < seq.size(); ++i) {
      if (seen.insert(seq[i]).second) ++freq[seq[i]];
    }
  }
  for (const auto& [item, count] : freq) {
    if (count < st->threshold) continue;
    prefix->push_back(item);
    st->found.emplace_back(*prefix, count);
    if (int(prefix->size()) < st->max_len) {
      std::vector<Projection> next;
      next.reserve(projected.size());
      for (const Projection& p : projected) {
        const std::vector<int>& seq = st->data->sequences[p.seq];
        for (size_t i = p.pos; i < seq.size(); ++i) {
          if (seq[i] == item) {
            next.push_back({p.seq, int(i) + 1});
            break;
          }
        }
      }
      mine_recursive(st, next, prefix);
    }
    prefix->pop_back();
  }
}

int support_threshold(double min_support, size_t db_size) {
  int t = int(std::ceil(min_support * double(db_size) - 1e-9));
  return std::max(t, 1);
}

}  // namespace

std::vector<Pattern> prefixspan(const SequenceDatabase& db,
                                const MiningOptions& opts) {
  if (db.sequences.empty()) throw EmptyDatabaseError();
  if (!(opts.min_support > 0.0) || opts.min_support > 1.0) {
    throw std::invalid_argument("min_support must be in (0, 1]");
  }
  if (opts.max_len < 1) throw std::invalid_argument("max_len must be >= 1");

  Interned data = intern(db);
  MineState st;
  st.data = &data;
  st.threshold = support_threshold(opts.min_support, db.sequences.size());
  st.max_len = opts.max_len;
  st.db_size = int(db.sequences.size());

  std::vector<Projection> all;
  all.reserve(data.sequences.size());
  for (size_t i = 0; i < data.sequences.size(); ++i) {
    all.push_back({int(i), 0});
  }
  std::vector<int> prefix;
  mine_recursive(&st, all, &prefix);

  std::vector<Pattern> out;
  out.reserve(st.found.size());
  for (auto& [ids, count] : st.found) {
    Pattern p;
    p.tokens.reserve(ids.size());
    for (int id : ids) p.tokens.push_back(data.names[id]);
    p.support_count = count;
    p.support = double(count) / double(db.sequences.size());
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const Pattern& a, const Pattern& b) { return a.tokens < b.tokens; });
  return out;
}

bool is_subsequence(const TokenSeq& needle, const TokenSeq& hay) {
  size_t i = 0;
  for (size_t j = 0; j < hay.size() && i < needle.size(); ++j) {
    if (hay[j] == needle[i]) ++i;
  }
  return i == needle.size();
}

std::vector<Pattern> maximal(std::vector<Pattern> patterns) {
  std::vector<bool> keep(patterns.size(), true);
  for (size_t i = 0; i < patterns.size(); ++i) {
    for (size_t j = 0; j < patterns.size(); ++j) {
      if (j == i) continue;
      if (patterns[i].tokens.size() < patterns[j].tokens.size() &&
          is_subsequence(patterns[i].tokens, patterns[j].tokens)) {
        keep[i] = false;
        break;
      }
    }
  }
  std::vector<Pattern> out;
  out.reserve(patterns.size());
  for (size_t i = 0; i < patterns.size(); ++i) {
    if (keep[i]) out.push_back(std::move(patterns[i]));
  }
  return out;
}

namespace {

enum class TokKind { ShellCmd, ShellArg, Docker };

TokKind classify_pattern_token(const std::string& t, std::string* owner) {
  if (t.rfind("SC-[", 0) != 0) return TokKind::Docker;
  size_t arg = t.find("]-ARG-[");
  if (arg != std::string::npos) {
    *owner = t.substr(4, arg - 4);
    return TokKind::ShellArg;
  }
  if (t.size() > 5 && t.back() == ']') {
    *owner = t.substr(4, t.size() - 5);
    return TokKind::ShellCmd;
  }
  return TokKind::Docker;
}

}  // namespace

bool is_tuple_complete(const TokenSeq& pattern) {
  std::set<std::string> opened;
  for (size_t i = 0; i < pattern.size(); ++i) {
    std::string owner;
    TokKind kind = classify_pattern_token(pattern[i], &owner);
    if (kind == TokKind::Docker) continue;
    if (kind == TokKind::ShellArg) {
      if (!opened.count(owner)) return false;  // arg with no earlier command
      continue;
    }
    // A command must own at least one arg before the next command token.
    opened.insert(owner);
    bool has_arg = false;
    for (size_t j = i + 1; j < pattern.size(); ++j) {
      std::string other;
      TokKind k2 = classify_pattern_token(pattern[j], &other);
      if (k2 == TokKind::ShellCmd) break;
      if (k2 == TokKind::ShellArg && other == owner) {
        has_arg = true;
        break;
      }
    }
    if (!has_arg) return false;
  }
  return true;
}

std::vector<Pattern> prune_incomplete(std::vector<Pattern> patterns) {
  std::vector<Pattern> out;
  out.reserve(patterns.size());
  for (Pattern& p : patterns) {
    if (is_tuple_complete(p.tokens)) out.push_back(std::move(p));
  }
  return out;
}

namespace {

TokenSeq concat(const TokenSeq& a, const TokenSeq& b) {
  TokenSeq out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

RuleStats rule_stats(const TokenSeq& antecedent, const TokenSeq& consequent,
                     const SequenceDatabase& db) {
  if (db.sequences.empty()) throw EmptyDatabaseError();
  int count_a = 0, count_c = 0, count_ac = 0;
  TokenSeq ac = concat(antecedent, consequent);
  for (const TokenSeq& seq : db.sequences) {
    if (is_subsequence(antecedent, seq)) ++count_a;
    if (is_subsequence(consequent, seq)) ++count_c;
    if (is_subsequence(ac, seq)) ++count_ac;
  }
  if (count_a == 0) throw ZeroAntecedentSupportError();
  double n = double(db.sequences.size());
  RuleStats stats;
  stats.support = double(count_ac) / n;
  stats.confidence = double(count_ac) / double(count_a);
  stats.lift =
      count_c == 0 ? 0.0 : stats.confidence / (double(count_c) / n);
  return stats;
}

MiningReport mine(const std::vector<IrSequence>& corpus,
                  const MiningOptions& opts, int jobs) {
  MiningReport report;
  report.options = opts;
  report.corpus_size = int(corpus.size());
  std::vector<SequenceDatabase> groups = group_by_command(corpus);
  report.groups.resize(groups.size());
  // Groups are independent; failures are recorded per group, never fatal.
  parallel_for(int(groups.size()), jobs, [&](int gi) {
    const SequenceDatabase& db = groups[gi];
    GroupReport& gr = report.groups[gi];
    gr.group_command = db.group_command;
    gr.database_size = int(db.sequences.size());
    gr.threshold_count = support_threshold(opts.min_support,
                                           db.sequences.size());
    try {
      std::vector<Pattern> frequent = prefixspan(db, opts);
      gr.frequent_count = int(frequent.size());
      std::vector<Pattern> max_patterns = maximal(std::move(frequent));
      gr.maximal_count = int(max_patterns.size());
      gr.patterns = prune_incomplete(std::move(max_patterns));
      gr.stats.reserve(gr.patterns.size());
      for (const Pattern& p : gr.patterns) {
        TokenSeq antecedent(p.tokens.begin(), p.tokens.begin() + 1);
        TokenSeq consequent(p.tokens.begin() + 1, p.tokens.end());
        gr.stats.push_back(rule_stats(antecedent, consequent, db));
      }
    } catch (const std::exception& e) {
      gr.error = e.what();
      gr.patterns.clear();
      gr.stats.clear();
    }
  });
  return report;
}

std::string format_report(const MiningReport& report) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf),
                "mining report: corpus=%d min_support=%.2f max_len=%d\n",
                report.corpus_size, report.options.min_support,
                report.options.max_len);
  out += buf;
  out += "stats split: antecedent = first token, consequent = remainder\n";
  for (const GroupReport& g : report.groups) {
    std::snprintf(buf, sizeof(buf),
                  "group %s: n=%d threshold=%d frequent=%d maximal=%d "
                  "pruned=%zu\n",
                  g.group_command.c_str(), g.database_size, g.threshold_count,
                  g.frequent_count, g.maximal_count, g.patterns.size());
    out += buf;
    if (!g.error.empty()) {
      out += "  error: " + g.error + "\n";
      continue;
    }
    for (size_t i = 0; i < g.patterns.size(); ++i) {
      const Pattern& p = g.patterns[i];
      const RuleStats& s = g.stats[i];
      std::snprintf(buf, sizeof(buf),
                    "  support=%d/%d (%.2f) confidence=%.2f lift=%.2f ",
                    p.support_count, g.database_size, p.support, s.confidence,
                    s.lift);
      out += buf;
      for (size_t j = 0; j < p.tokens.size(); ++j) {
        if (j) out += ' ';
        out += p.tokens[j];
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace dockmine
