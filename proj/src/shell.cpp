#include "dockmine/shell.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace dockmine {

namespace {

struct Token {
  enum Kind { Word, Separator, Redirect } kind;
  std::string text;
  size_t offset;
};

bool is_space(char c) { return c == ' ' || c == '\t'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Scans a balanced $(...) / ${...} region starting at the opener, honoring
// quotes inside so a ')' in a string doesn't close it. Returns one past the
// closing char.
size_t scan_balanced(const std::string& s, size_t i, char open, char close) {
  size_t start = i;
  int depth = 0;
  bool sq = false, dq = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (sq) {
      if (c == '\'') sq = false;
    } else if (dq) {
      if (c == '\\') ++i;
      else if (c == '"') dq = false;
    } else if (c == '\\') {
      ++i;
    } else if (c == '\'') {
      sq = true;
    } else if (c == '"') {
      dq = true;
    } else if (c == open) {
      ++depth;
    } else if (c == close) {
      if (--depth == 0) return i + 1;
    }
  }
  throw ShellSyntaxError(start, std::string("unbalanced ") + open);
}

size_t scan_backticks(const std::string& s, size_t i) {
  size_t start = i++;
  while (i < s.size()) {
    if (s[i] == '\\') i += 2;
    else if (s[i] == '`') return i + 1;
    else ++i;
  }
  throw ShellSyntaxError(start, "unbalanced backtick");
}

bool word_terminator(char c) {
  return is_space(c) || c == '\n' || c == '|' || c == '&' || c == ';' ||
         c == '(' || c == ')' || c == '<' || c == '>';
}

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> tokens;
  size_t i = 0;
  bool at_word_start = true;
  while (i < s.size()) {
    char c = s[i];
    if (is_space(c)) {
      ++i;
      at_word_start = true;
      continue;
    }
    if (c == '\\' && i + 1 < s.size() && s[i + 1] == '\n') {
      i += 2;  // line continuation inside a standalone script
      at_word_start = true;
      continue;
    }
    if (c == '\n') {
      tokens.push_back({Token::Separator, "\n", i});
      ++i;
      at_word_start = true;
      continue;
    }
    if (c == '#' && at_word_start) {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (c == '&' && i + 1 < s.size() && s[i + 1] == '&') {
      tokens.push_back({Token::Separator, "&&", i});
      i += 2;
      at_word_start = true;
      continue;
    }
    if (c == '|' && i + 1 < s.size() && s[i + 1] == '|') {
      tokens.push_back({Token::Separator, "||", i});
      i += 2;
      at_word_start = true;
      continue;
    }
    if (c == '|') {
      size_t len = (i + 1 < s.size() && s[i + 1] == '&') ? 2 : 1;
      tokens.push_back({Token::Separator, "|", i});
      i += len;
      at_word_start = true;
      continue;
    }
    if (c == ';') {
      while (i < s.size() && s[i] == ';') ++i;  // ;; case delimiters too
      tokens.push_back({Token::Separator, ";", i});
      at_word_start = true;
      continue;
    }
    if (c == '(' || c == ')') {
      tokens.push_back({Token::Separator, std::string(1, c), i});
      ++i;
      at_word_start = true;
      continue;
    }
    if ((c == '{' || c == '}') && at_word_start &&
        (i + 1 >= s.size() || is_space(s[i + 1]) || s[i + 1] == '\n' ||
         s[i + 1] == ';')) {
      tokens.push_back({Token::Separator, std::string(1, c), i});
      ++i;
      at_word_start = true;
      continue;
    }

    // Redirections: [n]>, [n]>>, [n]<, [n]>&m, &>, >|, <<<. Heredocs (<<)
    // are rejected outright.
    {
      size_t j = i;
      std::string fd;
      if (at_word_start && is_digit(s[j])) {
        size_t k = j;
        while (k < s.size() && is_digit(s[k])) ++k;
        if (k < s.size() && (s[k] == '>' || s[k] == '<')) {
          fd = s.substr(j, k - j);
          j = k;
        }
      }
      if (j < s.size() && (s[j] == '>' || s[j] == '<')) {
        if (s[j] == '<' && j + 1 < s.size() && s[j + 1] == '<') {
          if (j + 2 < s.size() && s[j + 2] == '<') {
            tokens.push_back({Token::Redirect, fd + "<<<", i});
            i = j + 3;
            at_word_start = true;
            continue;
          }
          throw ShellSyntaxError(j, "heredocs are not supported");
        }
        std::string op = fd + s[j];
        ++j;
        if (j < s.size() && s[j] == op.back() && op.back() == '>') {
          op += '>';
          ++j;
        } else if (j < s.size() && s[j] == '|' && op.back() == '>') {
          op += '|';
          ++j;
        } else if (j < s.size() && s[j] == '&') {
          op += '&';
          ++j;
          size_t k = j;
          while (k < s.size() && is_digit(s[k])) ++k;
          if (k > j && (k >= s.size() || word_terminator(s[k]))) {
            op += s.substr(j, k - j);  // fd duplication: 2>&1
            j = k;
          }
        }
        tokens.push_back({Token::Redirect, op, i});
        i = j;
        at_word_start = true;
        continue;
      }
      if (c == '&' && i + 1 < s.size() && s[i + 1] == '>') {
        std::string op = "&>";
        size_t k = i + 2;
        if (k < s.size() && s[k] == '>') {
          op += '>';
          ++k;
        }
        tokens.push_back({Token::Redirect, op, i});
        i = k;
        at_word_start = true;
        continue;
      }
      if (c == '&') {
        tokens.push_back({Token::Separator, "&", i});
        ++i;
        at_word_start = true;
        continue;
      }
    }

    // A word: concatenation of quoted and unquoted segments. Command and
    // parameter substitutions ride along verbatim as part of the word.
    Token w{Token::Word, "", i};
    while (i < s.size() && !word_terminator(s[i])) {
      char d = s[i];
      if (d == '\'') {
        size_t close = s.find('\'', i + 1);
        if (close == std::string::npos) {
          throw ShellSyntaxError(i, "unterminated single quote");
        }
        w.text += s.substr(i + 1, close - i - 1);
        i = close + 1;
      } else if (d == '"') {
        size_t start = i++;
        bool closed = false;
        while (i < s.size()) {
          char e = s[i];
          if (e == '\\' && i + 1 < s.size()) {
            char f = s[i + 1];
            if (f == '"' || f == '\\' || f == '$' || f == '`') {
              w.text += f;
              i += 2;
            } else {
              w.text += e;
              ++i;
            }
          } else if (e == '"') {
            ++i;
            closed = true;
            break;
          } else if (e == '$' && i + 1 < s.size() && s[i + 1] == '(') {
            size_t end = scan_balanced(s, i + 1, '(', ')');
            w.text += s.substr(i, end - i);
            i = end;
          } else if (e == '`') {
            size_t end = scan_backticks(s, i);
            w.text += s.substr(i, end - i);
            i = end;
          } else {
            w.text += e;
            ++i;
          }
        }
        if (!closed) throw ShellSyntaxError(start, "unterminated double quote");
      } else if (d == '\\') {
        if (i + 1 < s.size()) {
          if (s[i + 1] == '\n') {
            i += 2;
            break;  // continuation ends the word like whitespace
          }
          w.text += s[i + 1];
          i += 2;
        } else {
          ++i;
        }
      } else if (d == '$' && i + 1 < s.size() && s[i + 1] == '(') {
        size_t end = scan_balanced(s, i + 1, '(', ')');
        w.text += s.substr(i, end - i);
        i = end;
      } else if (d == '$' && i + 1 < s.size() && s[i + 1] == '{') {
        size_t end = scan_balanced(s, i + 1, '{', '}');
        w.text += s.substr(i, end - i);
        i = end;
      } else if (d == '`') {
        size_t end = scan_backticks(s, i);
        w.text += s.substr(i, end - i);
        i = end;
      } else {
        w.text += d;
        ++i;
      }
    }
    tokens.push_back(std::move(w));
    at_word_start = false;
  }
  return tokens;
}

bool is_assignment_word(const std::string& w, size_t* eq_out) {
  if (w.empty() || !(std::isalpha(static_cast<unsigned char>(w[0])) ||
                     w[0] == '_')) {
    return false;
  }
  size_t i = 1;
  while (i < w.size() && (std::isalnum(static_cast<unsigned char>(w[i])) ||
                          w[i] == '_')) {
    ++i;
  }
  if (i >= w.size() || w[i] != '=') return false;
  *eq_out = i;
  return true;
}

const std::set<std::string>& loop_headers() {
  static const std::set<std::string> words = {"for", "case"};
  return words;
}

const std::set<std::string>& control_openers() {
  static const std::set<std::string> words = {"if", "while", "until"};
  return words;
}

const std::set<std::string>& skippable_reserved() {
  static const std::set<std::string> words = {"then", "else", "elif", "fi",
                                              "do",   "done", "esac", "in",
                                              "!"};
  return words;
}

struct PendingStatement {
  std::vector<ShellWord> words;
  std::vector<Redirection> redirections;
};

void flush(PendingStatement* pending, ShellAst* ast) {
  std::vector<ShellWord> words = std::move(pending->words);
  std::vector<Redirection> redirections = std::move(pending->redirections);
  pending->words.clear();
  pending->redirections.clear();
  size_t i = 0;
  while (i < words.size()) {
    const std::string& w = words[i].text;
    if (loop_headers().count(w)) {
      ast->has_control_flow = true;
      return;  // the whole statement is a for/case header
    }
    if (control_openers().count(w)) {
      ast->has_control_flow = true;
      ++i;
      continue;
    }
    if (skippable_reserved().count(w)) {
      ++i;
      continue;
    }
    break;
  }
  size_t eq;
  while (i < words.size() && is_assignment_word(words[i].text, &eq)) {
    ShellStatement st;
    st.kind = StatementKind::Assignment;
    st.name = words[i].text.substr(0, eq);
    st.value = words[i].text.substr(eq + 1);
    ast->statements.push_back(std::move(st));
    ++i;
  }
  if (i >= words.size()) return;
  ShellStatement st;
  st.kind = StatementKind::Call;
  st.command = words[i].text;
  st.command_offset = words[i].offset;
  st.args.assign(words.begin() + i + 1, words.end());
  st.redirections = std::move(redirections);
  ast->statements.push_back(std::move(st));
}

}  // namespace

ShellAst parse_shell(const std::string& script) {
  ShellAst ast;
  std::vector<Token> tokens = tokenize(script);
  PendingStatement pending;
  for (size_t i = 0; i < tokens.size(); ++i) {
    Token& tok = tokens[i];
    switch (tok.kind) {
      case Token::Separator:
        flush(&pending, &ast);
        break;
      case Token::Redirect: {
        Redirection r;
        r.op = tok.text;
        bool fd_dup = r.op.find('&') != std::string::npos &&
                      is_digit(r.op.back());
        if (!fd_dup && i + 1 < tokens.size() &&
            tokens[i + 1].kind == Token::Word) {
          r.target = tokens[i + 1].text;
          ++i;
        }
        pending.redirections.push_back(std::move(r));
        break;
      }
      case Token::Word:
        pending.words.push_back({tok.text, tok.offset});
        break;
    }
  }
  flush(&pending, &ast);
  return ast;
}

namespace {

std::string basename_of(const std::string& cmd) {
  size_t slash = cmd.rfind('/');
  return slash == std::string::npos ? cmd : cmd.substr(slash + 1);
}

const std::set<std::string>& wrapper_commands() {
  static const std::set<std::string> wrappers = {"sudo", "xargs", "env",
                                                 "nice", "time"};
  return wrappers;
}

}  // namespace

ClassifiedCall classify_tokens(const ShellStatement& call) {
  ClassifiedCall out;
  out.command = call.command;
  out.command_offset = call.command_offset;
  out.parameters = call.args;
  // Peel wrappers: the first argument that is neither a flag nor a VAR=value
  // word is the effective command. Bounded depth guards pathological input.
  for (int depth = 0; depth < 5; ++depth) {
    if (!wrapper_commands().count(basename_of(out.command))) break;
    size_t eq;
    size_t pick = out.parameters.size();
    for (size_t i = 0; i < out.parameters.size(); ++i) {
      const std::string& w = out.parameters[i].text;
      if (!w.empty() && w[0] == '-') continue;
      if (is_assignment_word(w, &eq)) continue;
      pick = i;
      break;
    }
    if (pick == out.parameters.size()) break;  // bare wrapper: keep as-is
    out.command = out.parameters[pick].text;
    out.command_offset = out.parameters[pick].offset;
    out.parameters.erase(out.parameters.begin(),
                         out.parameters.begin() + pick + 1);
  }
  return out;
}

}  // namespace dockmine
