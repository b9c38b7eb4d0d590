#include "dockmine/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dockmine/dockerfile.hpp"
#include "dockmine/ir.hpp"
#include "dockmine/sha256.hpp"

namespace fs = std::filesystem;

namespace dockmine {

namespace {

bool corpus_file_name(const std::string& name) {
  if (name == "Dockerfile") return true;
  static const std::string suffix = ".Dockerfile";
  return name.size() > suffix.size() &&
         name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string normalize(const std::string& raw) {
  std::ostringstream out;
  std::istringstream in(raw);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t end = line.find_last_not_of(" \t");
    line.erase(end == std::string::npos ? 0 : end + 1);
    if (!first) out << "\n";
    out << line;
    first = false;
  }
  if (!raw.empty() && (raw.back() == '\n' || raw.back() == '\r')) out << "\n";
  return out.str();
}

// "a\nb" and "a\nb\n" are both two lines: a trailing newline terminates the
// last line rather than opening a new one.
int count_lines(const std::string& text) {
  if (text.empty()) return 0;
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  if (text.back() != '\n') ++lines;
  return lines;
}

}  // namespace

IngestReport ingest(const std::string& root) {
  IngestReport report;
  std::vector<std::string> paths;
  std::error_code ec;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    report.diagnostics.push_back("cannot open corpus root " + root + ": " + ec.message());
    return report;
  }
  for (const auto& entry : it) {
    if (!entry.is_regular_file(ec) || ec) continue;
    const std::string name = entry.path().filename().string();
    if (corpus_file_name(name)) paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  report.files_seen = int(paths.size());

  std::set<std::string> seen_hashes;
  for (const std::string& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      report.diagnostics.push_back("cannot read " + path);
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    CorpusEntry entry;
    entry.path = path;
    entry.content = normalize(buf.str());
    entry.content_hash = sha256_hex(entry.content);
    if (!seen_hashes.insert(entry.content_hash).second) {
      ++report.duplicates_dropped;
      continue;
    }
    entry.line_count = count_lines(entry.content);

    try {
      Analysis a = analyze(entry.content, path);
      entry.parse_ok = true;
      entry.has_control_flow = a.parsed.has_control_flow;
      for (const Instruction& ins : a.parsed.ast.instructions) {
        if (ins.keyword == Keyword::Run) entry.has_run = true;
      }
    } catch (const SyntaxError& e) {
      entry.parse_ok = false;
      entry.reject_reason = e.what();
    } catch (const ShellSyntaxError& e) {
      entry.parse_ok = false;
      entry.reject_reason = e.what();
    }

    if (entry.parse_ok) {
      if (entry.has_control_flow) {
        entry.reject_reason = "contains shell control flow";
      } else if (entry.line_count < 4 && !entry.has_run) {
        entry.reject_reason = "too short and no RUN instruction";
      } else {
        entry.gold_eligible = true;
      }
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::string manifest_json(const IngestReport& report) {
  nlohmann::json doc;
  doc["files_seen"] = report.files_seen;
  doc["duplicates_dropped"] = report.duplicates_dropped;
  doc["diagnostics"] = report.diagnostics;
  doc["entries"] = nlohmann::json::array();
  for (const CorpusEntry& entry : report.entries) {
    nlohmann::json rec;
    rec["path"] = entry.path;
    rec["hash"] = entry.content_hash;
    rec["line_count"] = entry.line_count;
    rec["parse_ok"] = entry.parse_ok;
    rec["has_run"] = entry.has_run;
    rec["has_control_flow"] = entry.has_control_flow;
    rec["gold_eligible"] = entry.gold_eligible;
    rec["reject_reason"] = entry.reject_reason;
    doc["entries"].push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

EvalReport evaluate_counts(int tp, int fp, int tn, int fn) {
  EvalReport r;
  r.tp = tp;
  r.fp = fp;
  r.tn = tn;
  r.fn = fn;
  if (tp + fp > 0) r.precision = double(tp) / double(tp + fp);
  if (tp + fn > 0) r.recall = double(tp) / double(tp + fn);
  if (r.precision + r.recall > 0.0) {
    r.f_measure = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

EvalReport evaluate(const std::map<std::string, bool>& predictions,
                    const std::map<std::string, bool>& annotations) {
  if (predictions.size() != annotations.size()) {
    throw KeyMismatchError("prediction and annotation key sets differ");
  }
  int tp = 0, fp = 0, tn = 0, fn = 0;
  auto pi = predictions.begin();
  auto ai = annotations.begin();
  for (; pi != predictions.end(); ++pi, ++ai) {
    if (pi->first != ai->first) {
      throw KeyMismatchError("prediction and annotation key sets differ: '" +
                             pi->first + "' vs '" + ai->first + "'");
    }
    if (pi->second && ai->second) ++tp;
    if (pi->second && !ai->second) ++fp;
    if (!pi->second && !ai->second) ++tn;
    if (!pi->second && ai->second) ++fn;
  }
  return evaluate_counts(tp, fp, tn, fn);
}

std::map<std::string, bool> read_annotations(const std::string& text) {
  std::map<std::string, bool> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("annotation line " + std::to_string(lineno) +
                               ": expected <path>\\t<0|1>");
    }
    std::string path = line.substr(0, tab);
    std::string flag = line.substr(tab + 1);
    if (path.empty() || (flag != "0" && flag != "1")) {
      throw std::runtime_error("annotation line " + std::to_string(lineno) +
                               ": expected <path>\\t<0|1>");
    }
    out[path] = flag == "1";
  }
  return out;
}

std::string write_annotations(const std::map<std::string, bool>& annotations) {
  std::ostringstream out;
  for (const auto& [path, flag] : annotations) {
    out << path << "\t" << (flag ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace dockmine
