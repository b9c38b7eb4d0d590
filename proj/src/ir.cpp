#include "dockmine/ir.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace dockmine {

namespace {

bool has_scheme(const std::string& s, size_t* scheme_len) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) {
    return false;
  }
  size_t i = 1;
  while (i < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '+' ||
          s[i] == '-' || s[i] == '.')) {
    ++i;
  }
  if (i + 2 < s.size() && s[i] == ':' && s[i + 1] == '/' && s[i + 2] == '/') {
    *scheme_len = i;
    return true;
  }
  return false;
}

std::string basename_of(const std::string& s) {
  size_t slash = s.rfind('/');
  return slash == std::string::npos ? s : s.substr(slash + 1);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// File-category rows. Longer suffixes first so .tar.gz wins over .tar.
const std::array<std::pair<const char*, const char*>, 11>& extension_rows() {
  static const std::array<std::pair<const char*, const char*>, 11> rows = {{
      {".tar.gz", "FILE-TAR-GZ"},
      {".tar.bz2", "FILE-TAR-BZ2"},
      {".tar", "FILE-TAR"},
      {".zip", "FILE-ZIP"},
      {".gem", "FILE-GEM"},
      {".asc", "FILE-ASC"},
      {".jar", "FILE-JAVA-JAR"},
      {".sh", "FILE-SHELL-SCRIPT"},
      {".crt", "FILE-TLS-CERT"},
      {".pem", "FILE-TLS-CERT"},
      {".key", "FILE-KEY"},
  }};
  return rows;
}

// Well-known project files, matched on the basename with the path prefix
// ignored. requirement(s).txt variants all collapse to the pip row.
std::string match_special_filename(const std::string& base) {
  if (base == "go.sum") return "FILE-GO-SUM";
  if (base == "go.mod") return "FILE-GO-MOD";
  if (base == "Cargo.toml") return "FILE-Rust-CARGO-TOME";
  if (base == "yarn.lock") return "FILE-YARN-YARN.LOCK";
  if (base == "package.json") return "FILE-NPM-PACKAGE.JSON";
  if (base == "CMakeLists.txt") return "FILE-CMAKEFILEM";
  if (ends_with(base, ".txt") &&
      base.find("requirement") != std::string::npos) {
    return "FILE-PIP-REQUIREMENT.TXT";
  }
  return "";
}

// File-type token for the tail of a URL or plain argument ("" if none).
std::string match_file_token(const std::string& arg) {
  std::string base = basename_of(arg);
  std::string special = match_special_filename(base);
  if (!special.empty()) return special;
  for (const auto& [suffix, token] : extension_rows()) {
    if (ends_with(base, suffix)) return token;
  }
  return "";
}

std::vector<std::string> split_segments(const std::string& s) {
  std::vector<std::string> segs;
  std::string cur;
  for (char c : s) {
    if (c == '/') {
      if (!cur.empty()) segs.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) segs.push_back(cur);
  return segs;
}

bool has_run(const std::vector<std::string>& segs,
             const std::vector<std::string>& want) {
  if (segs.size() < want.size()) return false;
  for (size_t i = 0; i + want.size() <= segs.size(); ++i) {
    bool all = true;
    for (size_t j = 0; j < want.size(); ++j) {
      if (segs[i + j] != want[j]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// Specific path rows, most specific first.
std::string match_path_token(const std::string& arg) {
  std::vector<std::string> segs = split_segments(arg);
  if (has_run(segs, {"var", "cache", "yum"})) return "PATH-VAR-CACHE-YUM";
  if (has_run(segs, {"var", "lib", "apt", "lists"})) return "PATH-APT-LIST";
  if (has_run(segs, {"var", "cache"})) return "PATH-VAR-CACHE";
  for (const std::string& seg : segs) {
    if (seg == "src") return "PATH-SRC-DIR";
  }
  for (const std::string& seg : segs) {
    if (seg == "cache" || seg == ".cache") return "PATH-DOT-CACHE";
  }
  return "";
}

bool is_whole_var_ref(const std::string& s) {
  if (s.size() < 2 || s[0] != '$') return false;
  if (s[1] == '{') return s.back() == '}' && s.find('}') == s.size() - 1;
  if (!(std::isalpha(static_cast<unsigned char>(s[1])) || s[1] == '_')) {
    return false;
  }
  for (size_t i = 2; i < s.size(); ++i) {
    if (!(std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
      return false;
    }
  }
  return true;
}

bool path_shaped(const std::string& s) {
  return s.find('/') != std::string::npos ||
         s.find('.') != std::string::npos || s.find('~') != std::string::npos;
}

}  // namespace

const std::set<std::string>& replacement_vocabulary() {
  static const std::set<std::string> vocab = [] {
    std::set<std::string> v = {
        "URL-PROTOCOL-HTTP", "URL-PROTOCOL-HTTPS", "URL-PROTOCOL-FTP",
        "URL-PROTOCOL-GIT",  "PATH-VAR-CACHE-YUM", "PATH-VAR-CACHE",
        "PATH-APT-LIST",     "PATH-SRC-DIR",       "PATH-DOT-CACHE",
        "PATH-NORMAL",       "FILE-GEM",           "FILE-ASC",
        "FILE-TAR-GZ",       "FILE-TAR-BZ2",       "FILE-TAR",
        "FILE-ZIP",          "FILE-JAVA-JAR",      "FILE-SHELL-SCRIPT",
        "FILE-TLS-CERT",     "FILE-KEY",           "FILE-GO-SUM",
        "FILE-GO-MOD",       "FILE-Rust-CARGO-TOME",
        "FILE-YARN-YARN.LOCK", "FILE-NPM-PACKAGE.JSON", "FILE-CMAKEFILEM",
        "FILE-PIP-REQUIREMENT.TXT", "TRUE", "FALSE", "GLOB-STAR", "VAR-REF",
    };
    return v;
  }();
  return vocab;
}

std::vector<std::string> substitute(const std::string& raw) {
  if (raw.empty()) return {raw};
  // Flags are never substituted; canonical tokens are fixpoints.
  if (raw[0] == '-') return {raw};
  if (replacement_vocabulary().count(raw)) return {raw};
  if (is_whole_var_ref(raw)) return {"VAR-REF"};

  size_t scheme_len;
  if (has_scheme(raw, &scheme_len)) {
    std::string scheme = raw.substr(0, scheme_len);
    std::transform(scheme.begin(), scheme.end(), scheme.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    std::vector<std::string> out = {"URL-PROTOCOL-" + scheme};
    // The payload may add a file-type token (protocol first, then type).
    std::string tail = raw;
    size_t cut = tail.find_first_of("?#");
    if (cut != std::string::npos) tail = tail.substr(0, cut);
    if (ends_with(tail, ".git")) {
      if (out[0] != "URL-PROTOCOL-GIT") out.push_back("URL-PROTOCOL-GIT");
    } else {
      std::string file = match_file_token(tail);
      if (!file.empty()) out.push_back(file);
    }
    return out;
  }
  if (ends_with(raw, ".git")) return {"URL-PROTOCOL-GIT"};

  std::string file = match_file_token(raw);
  if (!file.empty()) return {file};

  std::string path = match_path_token(raw);
  if (!path.empty()) return {path};

  if (raw == "true" || raw == "True") return {"TRUE"};
  if (raw == "false" || raw == "False") return {"FALSE"};
  if (raw == "*") return {"GLOB-STAR"};

  if (path_shaped(raw)) return {"PATH-NORMAL"};
  return {raw};
}

const char* ir_kind_name(IrKind k) {
  switch (k) {
    case IrKind::ShellCmd: return "shell-cmd";
    case IrKind::ShellArg: return "shell-arg";
    case IrKind::FromImage: return "from-image";
    case IrKind::Instr: return "instr";
    case IrKind::InstrArg: return "instr-arg";
  }
  return "?";
}

ParsedDockerfile parse_shells(DockerfileAst ast) {
  ParsedDockerfile out;
  out.shells.resize(ast.instructions.size());
  for (size_t i = 0; i < ast.instructions.size(); ++i) {
    const Instruction& ins = ast.instructions[i];
    if (ins.keyword != Keyword::Run || ins.form != Form::Shell) continue;
    try {
      out.shells[i] = parse_shell(ins.raw_text);
    } catch (const ShellSyntaxError& e) {
      int line = ins.span.begin;
      if (e.offset() < ins.raw_pos.size()) line = ins.raw_pos[e.offset()].line;
      throw ShellSyntaxError(e.offset(), std::string(e.what()) + " at line " +
                                             std::to_string(line));
    }
    if (out.shells[i]->has_control_flow) out.has_control_flow = true;
  }
  out.ast = std::move(ast);
  return out;
}

namespace {

bool is_short_flag_bundle(const std::string& w) {
  if (w.size() < 3 || w[0] != '-') return false;
  return std::all_of(w.begin() + 1, w.end(), [](unsigned char c) {
    return std::isalpha(c) != 0;
  });
}

std::string cmd_basename(const std::string& cmd) {
  size_t slash = cmd.rfind('/');
  return slash == std::string::npos ? cmd : cmd.substr(slash + 1);
}

// Expands one raw shell/instruction argument into canonical argument tokens:
// short-flag bundles explode (-rf -> -r, -f), --flag=value splits into the
// flag plus its substituted value, everything else goes through substitute.
void expand_arg(const std::string& w, std::vector<std::string>* out) {
  if (!w.empty() && w[0] == '-') {
    size_t eq = w.find('=');
    if (eq != std::string::npos) {
      out->push_back(w.substr(0, eq));
      std::string value = w.substr(eq + 1);
      if (!value.empty()) {
        for (std::string& t : substitute(value)) out->push_back(std::move(t));
      }
      return;
    }
    if (is_short_flag_bundle(w)) {
      for (size_t i = 1; i < w.size(); ++i) {
        out->push_back(std::string("-") + w[i]);
      }
      return;
    }
    out->push_back(w);
    return;
  }
  for (std::string& t : substitute(w)) out->push_back(std::move(t));
}

struct Emitter {
  IrSequence seq;
  int instr = -1;  // instruction currently being emitted

  void emit(IrKind kind, std::string text, SourcePos origin) {
    seq.tokens.push_back({kind, std::move(text), origin, instr});
  }

  void note_command(const std::string& cmd) {
    auto& v = seq.commands_present;
    if (std::find(v.begin(), v.end(), cmd) == v.end()) v.push_back(cmd);
  }

  void emit_call(const std::string& command,
                 const std::vector<std::string>& params, SourcePos cmd_pos,
                 const std::vector<SourcePos>& param_pos) {
    std::string cmd = cmd_basename(command);
    if (cmd.empty()) return;
    note_command(cmd);
    emit(IrKind::ShellCmd, "SC-[" + cmd + "]", cmd_pos);
    for (size_t i = 0; i < params.size(); ++i) {
      std::vector<std::string> expanded;
      expand_arg(params[i], &expanded);
      for (std::string& t : expanded) {
        emit(IrKind::ShellArg, "SC-[" + cmd + "]-ARG-[" + std::move(t) + "]",
             param_pos[i]);
      }
    }
  }
};

SourcePos pos_at(const Instruction& ins, size_t offset) {
  if (offset < ins.raw_pos.size()) return ins.raw_pos[offset];
  return {ins.span.begin, 1};
}

}  // namespace

IrSequence to_ir(const ParsedDockerfile& parsed) {
  Emitter em;
  em.seq.source_name = parsed.ast.source_name;
  const auto& instructions = parsed.ast.instructions;
  for (size_t idx = 0; idx < instructions.size(); ++idx) {
    const Instruction& ins = instructions[idx];
    em.instr = int(idx);
    SourcePos head = pos_at(ins, 0);
    switch (ins.keyword) {
      case Keyword::From: {
        const FromDetails& d = *ins.from;
        bool specific =
            d.digest.has_value() || (d.tag.has_value() && *d.tag != "latest");
        em.emit(IrKind::FromImage,
                "FROM-IMAGE-[" + d.image + "]-TAG-[" +
                    (specific ? "SPECIFIC" : "LATEST") + "]",
                head);
        break;
      }
      case Keyword::Run: {
        if (ins.form == Form::Exec) {
          if (ins.args.empty()) break;
          std::vector<std::string> params(ins.args.begin() + 1,
                                          ins.args.end());
          std::vector<SourcePos> ppos(params.size(), head);
          em.emit_call(ins.args[0], params, head, ppos);
          break;
        }
        const ShellAst& shell = *parsed.shells[idx];
        for (const ShellStatement& st : shell.statements) {
          if (st.kind != StatementKind::Call) continue;
          ClassifiedCall call = classify_tokens(st);
          std::vector<std::string> params;
          std::vector<SourcePos> ppos;
          params.reserve(call.parameters.size());
          for (const ShellWord& w : call.parameters) {
            params.push_back(w.text);
            ppos.push_back(pos_at(ins, w.offset));
          }
          em.emit_call(call.command, params, pos_at(ins, call.command_offset),
                       ppos);
        }
        break;
      }
      case Keyword::Onbuild:
      case Keyword::Healthcheck:
      case Keyword::Label:
      case Keyword::Maintainer:
        break;  // no IR: declarations and deferred/child instructions
      default: {
        const char* kw = keyword_name(ins.keyword);
        em.emit(IrKind::Instr, kw, head);
        // EXPOSE/STOPSIGNAL arguments pass through verbatim (ports and
        // signal names are not paths); everything else is substituted.
        bool verbatim = ins.keyword == Keyword::Expose ||
                        ins.keyword == Keyword::Stopsignal;
        for (size_t i = 0; i < ins.args.size(); ++i) {
          SourcePos apos = ins.arg_offsets.size() == ins.args.size()
                               ? pos_at(ins, ins.arg_offsets[i])
                               : head;
          if (verbatim) {
            em.emit(IrKind::InstrArg,
                    std::string(kw) + "-ARG-[" + ins.args[i] + "]", apos);
            continue;
          }
          std::vector<std::string> expanded;
          expand_arg(ins.args[i], &expanded);
          for (std::string& t : expanded) {
            em.emit(IrKind::InstrArg,
                    std::string(kw) + "-ARG-[" + std::move(t) + "]", apos);
          }
        }
        break;
      }
    }
  }
  return em.seq;
}

Analysis analyze(const std::string& text, const std::string& source_name) {
  Analysis a;
  a.parsed = parse_shells(strip_declarations(parse_dockerfile(text, source_name)));
  a.ir = to_ir(a.parsed);
  return a;
}

std::string dump_ir(const IrSequence& seq) {
  std::string out;
  for (size_t i = 0; i < seq.tokens.size(); ++i) {
    const IrToken& t = seq.tokens[i];
    out += std::to_string(i);
    out += '\t';
    out += ir_kind_name(t.kind);
    out += '\t';
    out += t.text;
    out += '\t';
    out += std::to_string(t.origin.line) + ":" + std::to_string(t.origin.col);
    out += '\n';
  }
  return out;
}

}  // namespace dockmine
