#include "dockmine/dockerfile.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace dockmine {

namespace {

const std::map<std::string, Keyword>& keyword_table() {
  static const std::map<std::string, Keyword> table = {
      {"FROM", Keyword::From},
      {"RUN", Keyword::Run},
      {"COPY", Keyword::Copy},
      {"ADD", Keyword::Add},
      {"ENV", Keyword::Env},
      {"ARG", Keyword::Arg},
      {"WORKDIR", Keyword::Workdir},
      {"EXPOSE", Keyword::Expose},
      {"USER", Keyword::User},
      {"CMD", Keyword::Cmd},
      {"ENTRYPOINT", Keyword::Entrypoint},
      {"VOLUME", Keyword::Volume},
      {"SHELL", Keyword::Shell},
      {"ONBUILD", Keyword::Onbuild},
      {"HEALTHCHECK", Keyword::Healthcheck},
      {"STOPSIGNAL", Keyword::Stopsignal},
      {"LABEL", Keyword::Label},
      {"MAINTAINER", Keyword::Maintainer},
  };
  return table;
}

// Instruction flags we peel ahead of the arguments. Anything else stays in
// the argument text (RUN args may legitimately start with --).
const std::set<std::string>& known_flags(Keyword k) {
  static const std::set<std::string> from = {"platform"};
  static const std::set<std::string> copy = {"from",    "chown",  "chmod",
                                             "link",    "parents", "exclude"};
  static const std::set<std::string> add = {
      "from", "chown", "chmod", "link", "checksum", "keep-git-dir", "exclude"};
  static const std::set<std::string> run = {"mount", "network", "security"};
  static const std::set<std::string> health = {"interval", "timeout",
                                               "start-period",
                                               "start-interval", "retries"};
  static const std::set<std::string> none;
  switch (k) {
    case Keyword::From: return from;
    case Keyword::Copy: return copy;
    case Keyword::Add: return add;
    case Keyword::Run: return run;
    case Keyword::Healthcheck: return health;
    default: return none;
  }
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

bool is_comment(const std::string& line) {
  size_t i = line.find_first_not_of(" \t");
  return i != std::string::npos && line[i] == '#';
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  return lines;
}

// A logical instruction line: continuations folded, with a source position
// recorded for every byte so errors and IR tokens can point home.
struct Logical {
  std::string text;
  std::vector<SourcePos> pos;
  int begin_line = 0;
  int end_line = 0;
};

// Number of consecutive escape chars ending the (right-trimmed) line; a
// trailing odd run means line continuation (even runs are escaped escapes).
bool ends_with_continuation(const std::string& line, char esc, size_t* cut) {
  size_t end = line.find_last_not_of(" \t");
  if (end == std::string::npos) return false;
  size_t run = 0;
  while (run <= end && line[end - run] == esc) ++run;
  if (run % 2 == 0) return false;
  *cut = end;  // drop the final escape char, keep everything before it
  return true;
}

void append_with_pos(Logical* out, const std::string& line, size_t from,
                     size_t to, int line_no) {
  for (size_t i = from; i < to; ++i) {
    out->text += line[i];
    out->pos.push_back({line_no, int(i) + 1});
  }
}

struct DirectiveScan {
  char escape_char = '\\';
  int lines_consumed = 0;
  std::vector<std::string> diagnostics;
};

DirectiveScan scan_directives(const std::vector<std::string>& lines) {
  DirectiveScan result;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (!is_comment(line)) break;
    size_t hash = line.find('#');
    size_t eq = line.find('=', hash);
    if (eq == std::string::npos) break;  // plain comment ends the window
    std::string key = line.substr(hash + 1, eq - hash - 1);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    key = trim(key);
    value = trim(value);
    if (key.empty() ||
        !std::all_of(key.begin(), key.end(),
                     [](unsigned char c) { return std::isalnum(c); })) {
      break;
    }
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (key == "escape") {
      if (value != "\\" && value != "`") {
        throw SyntaxError(int(i) + 1,
                          "invalid escape directive value: " + value);
      }
      result.escape_char = value[0];
    } else if (key == "syntax" || key == "check") {
      result.diagnostics.push_back("line " + std::to_string(i + 1) +
                                   ": ignored parser directive '" + key + "'");
    } else {
      break;  // unknown directive is a plain comment and closes the window
    }
    result.lines_consumed = int(i) + 1;
  }
  return result;
}

// Rejects heredocs wherever they appear unquoted; `$((...))` arithmetic is
// skipped so shift expressions don't trip it.
void reject_heredocs(const Logical& logical, size_t from) {
  const std::string& t = logical.text;
  bool sq = false, dq = false;
  for (size_t i = from; i < t.size(); ++i) {
    char c = t[i];
    if (sq) {
      if (c == '\'') sq = false;
    } else if (dq) {
      if (c == '\\') ++i;
      else if (c == '"') dq = false;
    } else if (c == '\'') {
      sq = true;
    } else if (c == '"') {
      dq = true;
    } else if (c == '\\') {
      ++i;
    } else if (c == '$' && i + 2 < t.size() && t[i + 1] == '(' &&
               t[i + 2] == '(') {
      int depth = 0;
      size_t j = i + 1;
      for (; j < t.size(); ++j) {
        if (t[j] == '(') ++depth;
        if (t[j] == ')' && --depth == 0) break;
      }
      i = j;
    } else if (c == '<' && i + 1 < t.size() && t[i + 1] == '<') {
      throw SyntaxError(logical.pos[i].line, "heredocs are not supported");
    }
  }
}

struct Word {
  std::string text;
  size_t offset;
};

// Quote-aware splitting for non-shell instruction arguments (COPY, ENV, ...).
// Backslash escapes the next char outside quotes and ", \\ inside double
// quotes; single quotes are literal.
std::vector<Word> split_words(const Logical& logical, size_t from) {
  std::vector<Word> words;
  const std::string& t = logical.text;
  size_t i = from;
  while (i < t.size()) {
    while (i < t.size() && (t[i] == ' ' || t[i] == '\t')) ++i;
    if (i >= t.size()) break;
    Word w{"", i};
    while (i < t.size() && t[i] != ' ' && t[i] != '\t') {
      char c = t[i];
      if (c == '\'') {
        size_t close = t.find('\'', i + 1);
        if (close == std::string::npos) {
          throw SyntaxError(logical.pos[i].line, "unterminated single quote");
        }
        w.text += t.substr(i + 1, close - i - 1);
        i = close + 1;
      } else if (c == '"') {
        ++i;
        bool closed = false;
        while (i < t.size()) {
          if (t[i] == '\\' && i + 1 < t.size() &&
              (t[i + 1] == '"' || t[i + 1] == '\\')) {
            w.text += t[i + 1];
            i += 2;
          } else if (t[i] == '"') {
            ++i;
            closed = true;
            break;
          } else {
            w.text += t[i++];
          }
        }
        if (!closed) {
          throw SyntaxError(logical.pos[w.offset].line,
                            "unterminated double quote");
        }
      } else if (c == '\\' && i + 1 < t.size()) {
        w.text += t[i + 1];
        i += 2;
      } else {
        w.text += c;
        ++i;
      }
    }
    words.push_back(std::move(w));
  }
  return words;
}

// Strict bracket-list decoder: ["a", "b"]. Anything that starts and ends
// with brackets but is not a quoted string array is a malformed exec form.
std::vector<std::string> parse_exec_list(const Logical& logical, size_t from) {
  const std::string& t = logical.text;
  int err_line = logical.pos.empty() ? 1 : logical.pos[from].line;
  auto fail = [&]() -> std::vector<std::string> {
    throw SyntaxError(err_line, "malformed exec-form bracket list");
  };
  size_t i = from;
  auto skip_ws = [&]() {
    while (i < t.size() && (t[i] == ' ' || t[i] == '\t')) ++i;
  };
  skip_ws();
  if (i >= t.size() || t[i] != '[') return fail();
  ++i;
  std::vector<std::string> items;
  skip_ws();
  if (i < t.size() && t[i] == ']') {
    ++i;
  } else {
    while (true) {
      skip_ws();
      if (i >= t.size() || t[i] != '"') return fail();
      ++i;
      std::string item;
      bool closed = false;
      while (i < t.size()) {
        char c = t[i];
        if (c == '\\') {
          if (i + 1 >= t.size()) return fail();
          char e = t[i + 1];
          switch (e) {
            case '"': item += '"'; break;
            case '\\': item += '\\'; break;
            case '/': item += '/'; break;
            case 'b': item += '\b'; break;
            case 'f': item += '\f'; break;
            case 'n': item += '\n'; break;
            case 'r': item += '\r'; break;
            case 't': item += '\t'; break;
            default: return fail();  // \uXXXX not supported
          }
          i += 2;
        } else if (c == '"') {
          ++i;
          closed = true;
          break;
        } else {
          item += c;
          ++i;
        }
      }
      if (!closed) return fail();
      items.push_back(std::move(item));
      skip_ws();
      if (i < t.size() && t[i] == ',') {
        ++i;
        continue;
      }
      if (i < t.size() && t[i] == ']') {
        ++i;
        break;
      }
      return fail();
    }
  }
  skip_ws();
  if (i != t.size()) return fail();  // trailing garbage after ]
  return items;
}

FromDetails parse_from_details(const Logical& logical,
                               const std::vector<Word>& words, int line) {
  if (words.empty()) throw SyntaxError(line, "FROM requires an image");
  if (words.size() != 1) {
    std::string as = words[1].text;
    std::transform(as.begin(), as.end(), as.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (words.size() != 3 || as != "AS") {
      throw SyntaxError(line, "FROM: expected FROM <image> [AS <name>]");
    }
  }
  (void)logical;
  FromDetails details;
  std::string ref = words[0].text;
  if (words.size() == 3) details.alias = words[2].text;
  size_t at = ref.find('@');
  if (at != std::string::npos) {
    details.digest = ref.substr(at + 1);
    ref = ref.substr(0, at);
    if (details.digest->empty()) throw SyntaxError(line, "FROM: empty digest");
  }
  size_t slash = ref.rfind('/');
  size_t colon = ref.rfind(':');
  if (colon != std::string::npos &&
      (slash == std::string::npos || colon > slash)) {
    details.tag = ref.substr(colon + 1);
    ref = ref.substr(0, colon);
    if (details.tag->empty()) throw SyntaxError(line, "FROM: empty tag");
  }
  if (ref.empty()) throw SyntaxError(line, "FROM: empty image name");
  details.image = ref;
  return details;
}

bool takes_exec_form(Keyword k) {
  switch (k) {
    case Keyword::Run:
    case Keyword::Cmd:
    case Keyword::Entrypoint:
    case Keyword::Volume:
    case Keyword::Shell:
    case Keyword::Copy:
    case Keyword::Add:
      return true;
    default:
      return false;
  }
}

Instruction parse_logical(const Logical& logical,
                          std::vector<std::string>* diagnostics);

Instruction parse_body(const Logical& logical, Keyword keyword, size_t from,
                       std::vector<std::string>* diagnostics) {
  Instruction ins;
  ins.keyword = keyword;
  ins.span = {logical.begin_line, logical.end_line};
  int line = logical.begin_line;

  reject_heredocs(logical, from);

  // Peel instruction flags (--from=builder etc.) for keywords that take them.
  const std::set<std::string>& flags = known_flags(keyword);
  size_t i = from;
  while (!flags.empty()) {
    size_t start = i;
    while (start < logical.text.size() &&
           (logical.text[start] == ' ' || logical.text[start] == '\t')) {
      ++start;
    }
    if (start + 1 >= logical.text.size() || logical.text[start] != '-' ||
        logical.text[start + 1] != '-') {
      break;
    }
    size_t end = logical.text.find_first_of(" \t", start);
    if (end == std::string::npos) end = logical.text.size();
    std::string word = logical.text.substr(start, end - start);
    size_t eq = word.find('=');
    std::string name = word.substr(2, eq == std::string::npos ? std::string::npos
                                                              : eq - 2);
    if (!flags.count(name)) break;
    InstructionFlag f;
    f.name = name;
    if (eq != std::string::npos) f.value = word.substr(eq + 1);
    ins.flags.push_back(std::move(f));
    i = end;
  }
  while (i < logical.text.size() &&
         (logical.text[i] == ' ' || logical.text[i] == '\t')) {
    ++i;
  }

  ins.raw_text = logical.text.substr(i);
  ins.raw_pos.assign(logical.pos.begin() + i, logical.pos.end());

  if (keyword == Keyword::Onbuild) {
    if (ins.raw_text.empty()) {
      throw SyntaxError(line, "ONBUILD requires an instruction");
    }
    Logical inner{ins.raw_text, ins.raw_pos, logical.begin_line,
                  logical.end_line};
    Instruction child = parse_logical(inner, diagnostics);
    if (child.keyword == Keyword::Onbuild || child.keyword == Keyword::From ||
        child.keyword == Keyword::Maintainer) {
      throw SyntaxError(line, std::string("ONBUILD may not wrap ") +
                                  keyword_name(child.keyword));
    }
    ins.children.push_back(std::move(child));
    return ins;
  }

  bool bracket = false;
  {
    size_t a = ins.raw_text.find_first_not_of(" \t");
    size_t b = ins.raw_text.find_last_not_of(" \t");
    bracket = a != std::string::npos && ins.raw_text[a] == '[' &&
              ins.raw_text[b] == ']';
  }

  if (bracket && takes_exec_form(keyword)) {
    ins.form = Form::Exec;
    Logical rest{ins.raw_text, ins.raw_pos, logical.begin_line,
                 logical.end_line};
    ins.args = parse_exec_list(rest, 0);
    ins.arg_offsets.assign(ins.args.size(), 0);
  } else {
    ins.form = Form::Shell;
    Logical rest{ins.raw_text, ins.raw_pos, logical.begin_line,
                 logical.end_line};
    for (Word& w : split_words(rest, 0)) {
      ins.args.push_back(std::move(w.text));
      ins.arg_offsets.push_back(w.offset);
    }
  }

  switch (keyword) {
    case Keyword::From: {
      Logical rest{ins.raw_text, ins.raw_pos, logical.begin_line,
                   logical.end_line};
      ins.from = parse_from_details(rest, split_words(rest, 0), line);
      break;
    }
    case Keyword::Shell:
      if (ins.form != Form::Exec) {
        throw SyntaxError(line, "SHELL requires an exec-form list");
      }
      break;
    case Keyword::Copy:
    case Keyword::Add:
      if (ins.args.size() < 2) {
        throw SyntaxError(line, std::string(keyword_name(keyword)) +
                                    " requires at least two arguments");
      }
      break;
    case Keyword::Healthcheck: {
      if (ins.args.empty()) {
        throw SyntaxError(line, "HEALTHCHECK requires CMD or NONE");
      }
      std::string head = ins.args[0];
      std::transform(head.begin(), head.end(), head.begin(),
                     [](unsigned char c) { return std::toupper(c); });
      if (head != "CMD" && head != "NONE") {
        throw SyntaxError(line, "HEALTHCHECK requires CMD or NONE");
      }
      break;
    }
    case Keyword::Run:
    case Keyword::Cmd:
    case Keyword::Entrypoint:
      // CMD [] is legal; a bare keyword with no text is not.
      if (ins.form == Form::Shell && ins.args.empty()) {
        throw SyntaxError(line, std::string(keyword_name(keyword)) +
                                    " requires arguments");
      }
      break;
    case Keyword::Env:
    case Keyword::Arg:
    case Keyword::Workdir:
    case Keyword::Expose:
    case Keyword::User:
    case Keyword::Volume:
    case Keyword::Stopsignal:
      if (ins.args.empty()) {
        throw SyntaxError(line, std::string(keyword_name(keyword)) +
                                    " requires arguments");
      }
      break;
    default:
      break;
  }
  return ins;
}

Instruction parse_logical(const Logical& logical,
                          std::vector<std::string>* diagnostics) {
  const std::string& t = logical.text;
  size_t i = t.find_first_not_of(" \t");
  if (i == std::string::npos) {
    throw SyntaxError(logical.begin_line, "empty instruction");
  }
  size_t j = i;
  while (j < t.size() && std::isalpha(static_cast<unsigned char>(t[j]))) ++j;
  if (j < t.size() && t[j] != ' ' && t[j] != '\t') {
    throw SyntaxError(logical.pos[i].line,
                      "unknown instruction: " + t.substr(i, j - i + 1));
  }
  std::string word = t.substr(i, j - i);
  std::string upper = word;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  Keyword keyword;
  if (!keyword_from_name(upper, &keyword)) {
    throw SyntaxError(logical.pos[i].line, "unknown instruction: " + word);
  }
  return parse_body(logical, keyword, j, diagnostics);
}

}  // namespace

const char* keyword_name(Keyword k) {
  switch (k) {
    case Keyword::From: return "FROM";
    case Keyword::Run: return "RUN";
    case Keyword::Copy: return "COPY";
    case Keyword::Add: return "ADD";
    case Keyword::Env: return "ENV";
    case Keyword::Arg: return "ARG";
    case Keyword::Workdir: return "WORKDIR";
    case Keyword::Expose: return "EXPOSE";
    case Keyword::User: return "USER";
    case Keyword::Cmd: return "CMD";
    case Keyword::Entrypoint: return "ENTRYPOINT";
    case Keyword::Volume: return "VOLUME";
    case Keyword::Shell: return "SHELL";
    case Keyword::Onbuild: return "ONBUILD";
    case Keyword::Healthcheck: return "HEALTHCHECK";
    case Keyword::Stopsignal: return "STOPSIGNAL";
    case Keyword::Label: return "LABEL";
    case Keyword::Maintainer: return "MAINTAINER";
  }
  return "?";
}

bool keyword_from_name(const std::string& upper, Keyword* out) {
  auto it = keyword_table().find(upper);
  if (it == keyword_table().end()) return false;
  *out = it->second;
  return true;
}

DockerfileAst parse_dockerfile(const std::string& text,
                               const std::string& source_name) {
  DockerfileAst ast;
  ast.source_name = source_name;
  std::vector<std::string> lines = split_lines(text);
  ast.line_count = int(lines.size());

  DirectiveScan directives = scan_directives(lines);
  ast.escape_char = directives.escape_char;
  ast.diagnostics = std::move(directives.diagnostics);

  size_t i = directives.lines_consumed;
  while (i < lines.size()) {
    const std::string& line = lines[i];
    if (is_blank(line) || is_comment(line)) {
      ++i;
      continue;
    }
    Logical logical;
    logical.begin_line = int(i) + 1;
    size_t cut;
    bool cont = ends_with_continuation(line, ast.escape_char, &cut);
    append_with_pos(&logical, line, 0, cont ? cut : line.size(), int(i) + 1);
    logical.end_line = int(i) + 1;
    ++i;
    while (cont && i < lines.size()) {
      const std::string& next = lines[i];
      if (is_comment(next)) {  // comment lines inside continuations vanish
        logical.end_line = int(i) + 1;
        ++i;
        continue;
      }
      if (is_blank(next)) {
        ast.diagnostics.push_back("line " + std::to_string(i + 1) +
                                  ": empty continuation line");
        logical.end_line = int(i) + 1;
        ++i;
        continue;
      }
      cont = ends_with_continuation(next, ast.escape_char, &cut);
      append_with_pos(&logical, next, 0, cont ? cut : next.size(), int(i) + 1);
      logical.end_line = int(i) + 1;
      ++i;
    }
    if (cont) {
      ast.diagnostics.push_back("line " + std::to_string(logical.end_line) +
                                ": continuation at end of file");
    }
    ast.instructions.push_back(parse_logical(logical, &ast.diagnostics));
  }
  return ast;
}

DockerfileAst strip_declarations(DockerfileAst ast) {
  auto& v = ast.instructions;
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](const Instruction& ins) {
                           return ins.keyword == Keyword::Label ||
                                  ins.keyword == Keyword::Maintainer;
                         }),
          v.end());
  return ast;
}

namespace {

std::string quote_exec_item(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void print_instruction(const Instruction& ins, std::string* out) {
  *out += keyword_name(ins.keyword);
  for (const InstructionFlag& f : ins.flags) {
    *out += " --" + f.name;
    if (!f.value.empty()) *out += "=" + f.value;
  }
  if (ins.keyword == Keyword::Onbuild) {
    *out += " ";
    print_instruction(ins.children.at(0), out);
    return;
  }
  if (ins.form == Form::Exec) {
    *out += " [";
    for (size_t i = 0; i < ins.args.size(); ++i) {
      if (i) *out += ", ";
      *out += quote_exec_item(ins.args[i]);
    }
    *out += "]";
  } else if (!ins.raw_text.empty()) {
    *out += " " + ins.raw_text;
  }
}

}  // namespace

std::string print_canonical(const DockerfileAst& ast) {
  std::string out;
  for (const Instruction& ins : ast.instructions) {
    print_instruction(ins, &out);
    out += '\n';
  }
  return out;
}

}  // namespace dockmine
