#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dockmine {

// Thrown for any input a Dockerfile cannot recover from: unknown keyword,
// malformed exec-form bracket list, heredocs, bad FROM, instruction before
// FROM is *not* an error here (ARG is legal; we do not validate stage
// structure). A file that throws is rejected whole by callers.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class Keyword {
  From,
  Run,
  Copy,
  Add,
  Env,
  Arg,
  Workdir,
  Expose,
  User,
  Cmd,
  Entrypoint,
  Volume,
  Shell,
  Onbuild,
  Healthcheck,
  Stopsignal,
  Label,
  Maintainer,
};

const char* keyword_name(Keyword k);

enum class Form {
  Shell,  // free text after the keyword
  Exec,   // JSON-style ["a", "b"] bracket list
};

struct LineSpan {
  int begin = 0;  // 1-based, inclusive
  int end = 0;    // 1-based, inclusive
};

struct InstructionFlag {
  std::string name;   // without leading dashes, e.g. "platform"
  std::string value;  // empty for bare flags
};

struct FromDetails {
  std::string image;            // name as written, without tag/digest
  std::optional<std::string> tag;
  std::optional<std::string> digest;  // sha256:... when @digest used
  std::optional<std::string> alias;   // AS <alias>
};

struct SourcePos {
  int line = 0;  // 1-based
  int col = 0;   // 1-based
};

struct Instruction {
  Keyword keyword;
  Form form = Form::Shell;
  // Exec form: the decoded bracket list. Shell form: quote-aware word split
  // of raw_text (RUN/CMD/ENTRYPOINT consumers should use raw_text and a real
  // shell parse instead).
  std::vector<std::string> args;
  // Byte offset of each arg within raw_text (0 when unknown, e.g. exec form).
  std::vector<size_t> arg_offsets;
  // Remainder after keyword and instruction flags, continuations folded.
  std::string raw_text;
  // Source position of each byte of raw_text; same length as raw_text.
  // Lets downstream parsers report original line/column through folding.
  std::vector<SourcePos> raw_pos;
  std::vector<InstructionFlag> flags;
  LineSpan span;
  std::optional<FromDetails> from;  // Keyword::From only
  std::vector<Instruction> children;  // ONBUILD: exactly one wrapped instruction
};

struct DockerfileAst {
  std::string source_name;
  std::vector<Instruction> instructions;
  std::vector<std::string> diagnostics;  // ignored directives etc.
  int line_count = 0;
  char escape_char = '\\';
};

DockerfileAst parse_dockerfile(const std::string& text,
                               const std::string& source_name = "<input>");

// Removes declaration-only instructions that never influence rule matching:
// LABEL and MAINTAINER. Idempotent.
DockerfileAst strip_declarations(DockerfileAst ast);

// Canonical one-line-per-instruction rendering; parse(print(parse(x))) is
// structurally equal to parse(x). Used by the round-trip property test.
std::string print_canonical(const DockerfileAst& ast);

bool keyword_from_name(const std::string& upper, Keyword* out);

}  // namespace dockmine
