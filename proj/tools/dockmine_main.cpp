#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dockmine/corpus.hpp"
#include "dockmine/detector.hpp"
#include "dockmine/dockerfile.hpp"
#include "dockmine/ir.hpp"
#include "dockmine/miner.hpp"
#include "dockmine/parallel.hpp"
#include "dockmine/rulebook.hpp"

namespace fs = std::filesystem;
using namespace dockmine;

namespace {

bool read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  *out = buf.str();
  return true;
}

bool checkable_name(const std::string& name) {
  if (name == "Dockerfile") return true;
  static const std::string suffix = ".Dockerfile";
  return name.size() > suffix.size() &&
         name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Files are listed in deterministic path order: inputs in argument order,
// directories expanded recursively in sorted order.
std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const std::string& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::recursive_directory_iterator(
               input, fs::directory_options::skip_permission_denied, ec)) {
        if (entry.is_regular_file(ec) &&
            checkable_name(entry.path().filename().string())) {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(input);
    }
  }
  return out;
}

int cmd_parse(const std::string& path, bool want_ir) {
  std::string text;
  if (!read_file(path, &text)) {
    std::cerr << path << ": cannot read file\n";
    return 2;
  }
  try {
    if (want_ir) {
      Analysis a = analyze(text, path);
      std::cout << dump_ir(a.ir);
    } else {
      DockerfileAst ast = parse_dockerfile(text, path);
      std::cout << print_canonical(ast);
    }
  } catch (const SyntaxError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 2;
  } catch (const ShellSyntaxError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_mine(const std::string& corpus_dir, double min_support, int max_len,
             const std::string& out_path, int jobs) {
  if (min_support <= 0.0 || min_support > 1.0) {
    std::cerr << "--min-support must be in (0, 1]\n";
    return 2;
  }
  if (max_len < 1) {
    std::cerr << "--max-len must be at least 1\n";
    return 2;
  }
  IngestReport ingested = ingest(corpus_dir);
  for (const std::string& diag : ingested.diagnostics) {
    std::cerr << diag << "\n";
  }
  std::vector<IrSequence> corpus;
  for (const CorpusEntry& entry : ingested.entries) {
    if (!entry.gold_eligible) continue;
    Analysis a = analyze(entry.content, entry.path);
    corpus.push_back(std::move(a.ir));
  }
  if (corpus.empty()) {
    std::cerr << "no eligible Dockerfiles under " << corpus_dir << "\n";
    return 2;
  }
  MiningOptions opts;
  opts.min_support = min_support;
  opts.max_len = max_len;
  MiningReport report = mine(corpus, opts, jobs);
  std::string text = format_report(report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << text;
  }
  return 0;
}

int cmd_check(const std::vector<std::string>& inputs, const std::string& rules_path,
              const std::string& format, const std::string& only, int jobs) {
  RuleCatalog catalog;
  try {
    catalog = rules_path.empty() ? builtin_catalog() : load_rules_file(rules_path);
  } catch (const RuleLoadError& e) {
    std::cerr << "rules: " << e.what() << "\n";
    return 2;
  }
  if (!only.empty()) {
    std::set<int> wanted;
    std::stringstream ss(only);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        size_t used = 0;
        int id = std::stoi(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
        wanted.insert(id);
      } catch (const std::exception&) {
        std::cerr << "--only expects a comma-separated list of rule ids\n";
        return 2;
      }
    }
    RuleCatalog filtered;
    for (const Rule& rule : catalog.rules) {
      if (wanted.count(rule.id)) filtered.rules.push_back(rule);
    }
    catalog = std::move(filtered);
  }

  std::vector<FileInput> files;
  std::vector<size_t> unreadable;
  for (const std::string& path : expand_inputs(inputs)) {
    FileInput fi;
    fi.path = path;
    if (!read_file(path, &fi.text)) unreadable.push_back(files.size());
    files.push_back(std::move(fi));
  }
  std::vector<CheckResult> results = check_files(files, catalog, jobs);
  for (size_t idx : unreadable) {
    results[idx] = CheckResult{};
    results[idx].file = files[idx].path;
    results[idx].parse_ok = false;
    results[idx].error = "cannot read file";
  }

  bool any_error = false;
  bool any_mandatory = false;
  for (const CheckResult& res : results) {
    std::cout << (format == "records" ? format_records(res) : format_text(res));
    if (!res.parse_ok) any_error = true;
    if (res.has_mandatory) any_mandatory = true;
  }
  if (any_error) return 2;
  return any_mandatory ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dockerfile best-practice miner and checker"};
  app.set_version_flag("--version", [] {
    return std::string("dockmine 1.0.0\ncatalog 1.0.0 (") +
           std::to_string(builtin_catalog().rules.size()) + " rules)";
  });
  app.require_subcommand(1);

  auto* parse_cmd = app.add_subcommand("parse", "Parse a Dockerfile and print its AST");
  std::string parse_file;
  bool dump_ir = false;
  parse_cmd->add_option("file", parse_file, "Dockerfile to parse")->required();
  parse_cmd->add_flag("--dump-ir", dump_ir, "print the IR token dump instead of the AST");

  auto* mine_cmd = app.add_subcommand("mine", "Mine frequent practice patterns from a corpus");
  std::string corpus_dir;
  double min_support = 0.40;
  int max_len = 12;
  std::string out_path;
  int mine_jobs = default_jobs();
  mine_cmd->add_option("corpus", corpus_dir, "corpus directory")->required();
  mine_cmd->add_option("--min-support", min_support, "minimum pattern support, fraction in (0, 1]");
  mine_cmd->add_option("--max-len", max_len, "maximum pattern length");
  mine_cmd->add_option("--out", out_path, "write the report to this file instead of stdout");
  mine_cmd->add_option("--jobs", mine_jobs, "worker count (1 = serial)");

  auto* check_cmd = app.add_subcommand("check", "Check Dockerfiles against the rule catalog");
  std::vector<std::string> check_inputs;
  std::string rules_path;
  std::string format = "text";
  std::string only;
  int check_jobs = default_jobs();
  check_cmd->add_option("input", check_inputs, "Dockerfile or directory")->required();
  check_cmd->add_option("--rules", rules_path, "YAML rule catalog replacing the built-in rules");
  check_cmd->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "records"}));
  check_cmd->add_option("--only", only, "comma-separated rule ids to check");
  check_cmd->add_option("--jobs", check_jobs, "worker count (1 = serial)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (parse_cmd->parsed()) return cmd_parse(parse_file, dump_ir);
  if (mine_cmd->parsed()) return cmd_mine(corpus_dir, min_support, max_len, out_path, mine_jobs);
  if (check_cmd->parsed())
    return cmd_check(check_inputs, rules_path, format, only, check_jobs);
  return 2;
}
