#include "dockmine/detector.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dockmine/parallel.hpp"

namespace dockmine {

bool find_last_window(const std::vector<IrToken>& tokens, const Matcher& m,
                      size_t limit, MatchWindow* out) {
  if (m.tokens.empty()) return false;
  limit = std::min(limit, tokens.size());
  size_t pos = limit;
  size_t begin = 0;
  size_t end = 0;
  // Matching right-to-left and taking the rightmost hit for every matcher
  // token yields the occurrence with the greatest end and, for that end, the
  // greatest start. If this fails, no occurrence fits in [0, limit) at all.
  for (size_t j = m.tokens.size(); j-- > 0;) {
    bool found = false;
    while (pos > 0) {
      --pos;
      if (matcher_token_matches(m.tokens[j], tokens[pos].text)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
    if (j + 1 == m.tokens.size()) end = pos;
    begin = pos;
  }
  out->begin = begin;
  out->end = end;
  return true;
}

bool find_first_window(const std::vector<IrToken>& tokens, const Matcher& m,
                       size_t from, MatchWindow* out) {
  if (m.tokens.empty()) return false;
  const size_t n = tokens.size();
  // Forward-greedy pass: the least feasible end index.
  size_t i = from;
  size_t end = 0;
  for (size_t j = 0; j < m.tokens.size(); ++j) {
    while (i < n && !matcher_token_matches(m.tokens[j], tokens[i].text)) ++i;
    if (i >= n) return false;
    end = i;
    ++i;
  }
  // Backward compaction from that end: the greatest feasible start.
  size_t pos = end;
  size_t begin = end;
  for (size_t j = m.tokens.size() - 1; j-- > 0;) {
    while (pos > from) {
      --pos;
      if (matcher_token_matches(m.tokens[j], tokens[pos].text)) break;
    }
    begin = pos;
  }
  out->begin = begin;
  out->end = end;
  return true;
}

bool window_exists(const std::vector<IrToken>& tokens, const Matcher& m,
                   size_t from, size_t limit) {
  limit = std::min(limit, tokens.size());
  if (m.tokens.empty()) return false;
  size_t i = from;
  for (size_t j = 0; j < m.tokens.size(); ++j) {
    while (i < limit && !matcher_token_matches(m.tokens[j], tokens[i].text)) ++i;
    if (i >= limit) return false;
    ++i;
  }
  return true;
}

namespace {

Violation make_violation(const Rule& rule, const std::vector<IrToken>& tokens,
                         size_t begin, size_t end) {
  Violation v;
  v.rule_id = rule.id;
  v.level = rule.level;
  v.rule_name = rule.name;
  v.message = rule.message;
  int lo = tokens[begin].origin.line;
  int hi = tokens[begin].origin.line;
  for (size_t i = begin; i <= end && i < tokens.size(); ++i) {
    lo = std::min(lo, tokens[i].origin.line);
    hi = std::max(hi, tokens[i].origin.line);
  }
  v.line_begin = lo;
  v.line_end = hi;
  return v;
}

}  // namespace

std::vector<Violation> check_implies(const IrSequence& seq, const Rule& rule) {
  std::vector<Violation> out;
  const auto& tokens = seq.tokens;
  const Matcher& p = rule.p.front();
  const Matcher& q = rule.q.front();
  size_t hi = tokens.size();
  MatchWindow w;
  // Work right to left: each P occurrence must be followed by Q before the
  // previously inspected region begins.
  while (hi > 0 && find_last_window(tokens, p, hi, &w)) {
    if (!window_exists(tokens, q, w.end + 1, hi)) {
      out.push_back(make_violation(rule, tokens, w.begin, w.end));
    }
    hi = w.begin;
  }
  return out;
}

std::vector<Violation> check_disj_implies(const IrSequence& seq, const Rule& rule) {
  const auto& tokens = seq.tokens;
  bool have = false;
  MatchWindow best;
  for (const Matcher& alt : rule.p) {
    MatchWindow w;
    if (!find_last_window(tokens, alt, tokens.size(), &w)) continue;
    if (!have || w.end > best.end || (w.end == best.end && w.begin > best.begin)) {
      best = w;
      have = true;
    }
  }
  if (!have) return {};
  for (const Matcher& alt : rule.q) {
    if (window_exists(tokens, alt, best.end + 1, tokens.size())) return {};
  }
  return {make_violation(rule, tokens, best.begin, best.end)};
}

std::vector<Violation> check_sandwich(const IrSequence& seq, const Rule& rule) {
  std::vector<Violation> out;
  const auto& tokens = seq.tokens;
  const Matcher& p = rule.p.front();
  const Matcher& q = rule.q.front();
  const Matcher& r = rule.r.front();
  size_t off = 0;
  MatchWindow w;
  while (find_first_window(tokens, q, off, &w)) {
    bool p_ok = window_exists(tokens, p, off, w.begin);
    bool r_ok = window_exists(tokens, r, w.end + 1, tokens.size());
    if (!p_ok || !r_ok) {
      out.push_back(make_violation(rule, tokens, w.begin, w.end));
    }
    off = w.end + 1;
  }
  return out;
}

namespace {

// set -eux: every shell-form RUN needs set call(s) whose combined short flags
// cover e, u and x. Arg bundles are already exploded in the IR, so presence
// of the three SC-[set]-ARG tokens within the RUN's token slice suffices.
std::vector<Violation> special_set_eux(const IrSequence& seq,
                                       const ParsedDockerfile& parsed,
                                       const Rule& rule) {
  std::vector<Violation> out;
  const auto& instructions = parsed.ast.instructions;
  for (size_t i = 0; i < instructions.size(); ++i) {
    const Instruction& ins = instructions[i];
    if (ins.keyword != Keyword::Run || ins.form != Form::Shell) continue;
    bool has_e = false, has_u = false, has_x = false;
    for (const IrToken& tok : seq.tokens) {
      if (tok.instr != int(i)) continue;
      if (tok.text == "SC-[set]-ARG-[-e]") has_e = true;
      if (tok.text == "SC-[set]-ARG-[-u]") has_u = true;
      if (tok.text == "SC-[set]-ARG-[-x]") has_x = true;
    }
    if (has_e && has_u && has_x) continue;
    Violation v;
    v.rule_id = rule.id;
    v.level = rule.level;
    v.rule_name = rule.name;
    v.message = rule.message;
    v.line_begin = ins.span.begin;
    v.line_end = ins.span.end;
    out.push_back(v);
  }
  return out;
}

// useradd/groupadd: after the last account-creating call there must be a USER
// instruction selecting something other than root.
std::vector<Violation> special_not_root(const IrSequence& seq, const Rule& rule,
                                        const std::string& cmd_a,
                                        const std::string& cmd_b) {
  const auto& tokens = seq.tokens;
  size_t last = tokens.size();
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind == IrKind::ShellCmd &&
        (tokens[i].text == cmd_a || tokens[i].text == cmd_b)) {
      last = i;
    }
  }
  if (last == tokens.size()) return {};
  for (size_t i = last + 1; i < tokens.size(); ++i) {
    const IrToken& tok = tokens[i];
    if (tok.kind != IrKind::InstrArg) continue;
    const std::string& t = tok.text;
    static const std::string prefix = "USER-ARG-[";
    if (t.compare(0, prefix.size(), prefix) != 0 || t.back() != ']') continue;
    std::string value = t.substr(prefix.size(), t.size() - prefix.size() - 1);
    if (value != "root" && value != "0") return {};
  }
  Violation v;
  v.rule_id = rule.id;
  v.level = rule.level;
  v.rule_name = rule.name;
  v.message = rule.message;
  v.line_begin = tokens[last].origin.line;
  v.line_end = tokens[last].origin.line;
  return {v};
}

}  // namespace

std::vector<Violation> run_special(const IrSequence& seq,
                                   const ParsedDockerfile& parsed,
                                   const Rule& rule) {
  if (rule.handler == "set-eux") return special_set_eux(seq, parsed, rule);
  if (rule.handler == "useradd-not-root")
    return special_not_root(seq, rule, "SC-[useradd]", "SC-[adduser]");
  if (rule.handler == "groupadd-not-root")
    return special_not_root(seq, rule, "SC-[groupadd]", "SC-[addgroup]");
  return {};
}

namespace {

std::vector<Violation> dispatch(const IrSequence& seq,
                                const ParsedDockerfile& parsed,
                                const Rule& rule) {
  switch (rule.kind) {
    case RuleKind::Implies: return check_implies(seq, rule);
    case RuleKind::DisjImplies: return check_disj_implies(seq, rule);
    case RuleKind::Sandwich: return check_sandwich(seq, rule);
    case RuleKind::Special: return run_special(seq, parsed, rule);
  }
  return {};
}

}  // namespace

CheckResult check_ir(const IrSequence& seq, const ParsedDockerfile& parsed,
                     const RuleCatalog& catalog) {
  CheckResult res;
  res.file = seq.source_name;
  res.parse_ok = true;
  for (const Rule& rule : catalog.rules) {
    std::vector<Violation> vs;
    if (rule.within == RuleScope::File || rule.kind == RuleKind::Special) {
      vs = dispatch(seq, parsed, rule);
    } else {
      // Per-RUN scope: evaluate the rule independently on each RUN
      // instruction's token slice.
      const auto& instructions = parsed.ast.instructions;
      for (size_t i = 0; i < instructions.size(); ++i) {
        if (instructions[i].keyword != Keyword::Run) continue;
        IrSequence slice;
        slice.source_name = seq.source_name;
        for (const IrToken& tok : seq.tokens) {
          if (tok.instr == int(i)) slice.tokens.push_back(tok);
        }
        if (slice.tokens.empty()) continue;
        std::vector<Violation> part = dispatch(slice, parsed, rule);
        vs.insert(vs.end(), part.begin(), part.end());
      }
    }
    res.violations.insert(res.violations.end(), vs.begin(), vs.end());
  }
  std::stable_sort(res.violations.begin(), res.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     if (a.line_begin != b.line_begin)
                       return a.line_begin < b.line_begin;
                     return a.rule_id < b.rule_id;
                   });
  for (const Violation& v : res.violations) {
    if (v.level == RuleLevel::Mandatory) res.has_mandatory = true;
  }
  return res;
}

CheckResult check_file(const std::string& text, const std::string& source_name,
                       const RuleCatalog& catalog) {
  try {
    Analysis a = analyze(text, source_name);
    return check_ir(a.ir, a.parsed, catalog);
  } catch (const SyntaxError& e) {
    CheckResult res;
    res.file = source_name;
    res.parse_ok = false;
    res.error = e.what();
    return res;
  } catch (const ShellSyntaxError& e) {
    CheckResult res;
    res.file = source_name;
    res.parse_ok = false;
    res.error = e.what();
    return res;
  }
}

std::vector<CheckResult> check_files(const std::vector<FileInput>& files,
                                     const RuleCatalog& catalog, int jobs) {
  std::vector<CheckResult> results(files.size());
  parallel_for(files.size(), jobs, [&](size_t i) {
    // Exceptions must not escape an OpenMP worker; anything unexpected is
    // reported as a failed file instead.
    try {
      results[i] = check_file(files[i].text, files[i].path, catalog);
    } catch (const std::exception& e) {
      results[i].file = files[i].path;
      results[i].parse_ok = false;
      results[i].error = e.what();
    }
  });
  return results;
}

std::string format_text(const CheckResult& result) {
  std::ostringstream os;
  if (!result.parse_ok) {
    os << result.file << ":1: [ERROR] " << result.error << "\n";
    return os.str();
  }
  for (const Violation& v : result.violations) {
    os << result.file << ":" << v.line_begin << ": ["
       << (v.level == RuleLevel::Mandatory ? "MANDATORY" : "ENCOURAGED")
       << "] rule " << v.rule_id << " " << v.rule_name << ": " << v.message
       << "\n";
  }
  return os.str();
}

std::string format_records(const CheckResult& result) {
  std::ostringstream os;
  if (!result.parse_ok) {
    nlohmann::json rec;
    rec["file"] = result.file;
    rec["line_start"] = 1;
    rec["line_end"] = 1;
    rec["rule_id"] = 0;
    rec["level"] = "error";
    rec["message"] = result.error;
    os << rec.dump() << "\n";
    return os.str();
  }
  for (const Violation& v : result.violations) {
    nlohmann::json rec;
    rec["file"] = result.file;
    rec["line_start"] = v.line_begin;
    rec["line_end"] = v.line_end;
    rec["rule_id"] = v.rule_id;
    rec["level"] = rule_level_name(v.level);
    rec["message"] = v.message;
    os << rec.dump() << "\n";
  }
  return os.str();
}

}  // namespace dockmine
