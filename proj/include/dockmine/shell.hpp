#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dockmine/dockerfile.hpp"  // SourcePos

namespace dockmine {

// Unterminated quote, unbalanced $( / ${ / backtick, or a heredoc. Offsets
// are byte offsets into the script handed to parse_shell; callers that got
// the script from a folded RUN can map them back via Instruction::raw_pos.
class ShellSyntaxError : public std::runtime_error {
 public:
  ShellSyntaxError(size_t offset, const std::string& reason)
      : std::runtime_error(reason + " (offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

struct ShellWord {
  std::string text;    // quotes/escapes resolved; substitutions kept raw
  size_t offset = 0;   // byte offset of the word start in the script
};

struct Redirection {
  std::string op;      // ">", ">>", "<", "2>", "2>&1", "&>", ...
  std::string target;  // empty for fd-duplication forms like 2>&1
};

enum class StatementKind { Assignment, Call };

struct ShellStatement {
  StatementKind kind;
  // Assignment: name/value. Call: command is the first word after leading
  // assignments and redirections are peeled; args are the remaining words.
  std::string name;
  std::string value;
  std::string command;
  size_t command_offset = 0;
  std::vector<ShellWord> args;
  std::vector<Redirection> redirections;
};

struct ShellAst {
  std::vector<ShellStatement> statements;
  // True iff an if/for/while/until/case construct appears anywhere.
  // Such scripts still parse (statements are extracted best-effort); the
  // flag is what excludes the file from mining-eligible corpora.
  bool has_control_flow = false;
};

ShellAst parse_shell(const std::string& script);

// Wrapper peeling: if the call's command (by basename) is one of
// sudo/xargs/env/nice/time, the first argument that is neither a flag nor a
// VAR=value word becomes the effective command, recursively. Returns the
// effective command word and its parameters.
struct ClassifiedCall {
  std::string command;
  size_t command_offset = 0;
  std::vector<ShellWord> parameters;
};

ClassifiedCall classify_tokens(const ShellStatement& call);

}  // namespace dockmine
