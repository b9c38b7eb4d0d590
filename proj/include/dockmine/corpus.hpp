#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dockmine {

class KeyMismatchError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorpusEntry {
  std::string path;
  std::string content;       // normalized: CRLF -> LF, trailing ws stripped
  std::string content_hash;  // sha256 of normalized content
  int line_count = 0;
  bool parse_ok = false;
  bool has_run = false;
  bool has_control_flow = false;
  bool gold_eligible = false;
  std::string reject_reason;  // why not gold_eligible, for the manifest
};

struct IngestReport {
  std::vector<CorpusEntry> entries;  // deduplicated, path-sorted
  int files_seen = 0;
  int duplicates_dropped = 0;
  std::vector<std::string> diagnostics;  // unreadable files etc.
};

// Walks root recursively for files named "Dockerfile" or "*.Dockerfile",
// normalizes and dedups by content hash (first path in sort order wins),
// parses each survivor and computes gold eligibility:
//   parse_ok && !has_control_flow && (line_count >= 4 || has_run).
// Unreadable files are skipped with a diagnostic, never fatal.
IngestReport ingest(const std::string& root);

// One JSON record per entry: {path, hash, gold_eligible, reasons}.
std::string manifest_json(const IngestReport& report);

struct EvalReport {
  int tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

// File-level confusion matrix: prediction/annotation maps must have equal
// key sets (KeyMismatchError otherwise). Positive = violates >= 1 rule.
EvalReport evaluate(const std::map<std::string, bool>& predictions,
                    const std::map<std::string, bool>& annotations);

EvalReport evaluate_counts(int tp, int fp, int tn, int fn);

// Annotation file format: one "<path>\t<0|1>" per line.
std::map<std::string, bool> read_annotations(const std::string& text);
std::string write_annotations(const std::map<std::string, bool>& annotations);

}  // namespace dockmine
