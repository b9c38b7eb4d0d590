#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dockmine/dockerfile.hpp"
#include "dockmine/shell.hpp"

namespace dockmine {

enum class IrKind {
  ShellCmd,   // SC-[cmd]
  ShellArg,   // SC-[cmd]-ARG-[arg]
  FromImage,  // FROM-IMAGE-[name]-TAG-[SPECIFIC|LATEST]
  Instr,      // <KEYWORD>
  InstrArg,   // <KEYWORD>-ARG-[arg]
};

const char* ir_kind_name(IrKind k);

struct IrToken {
  IrKind kind;
  std::string text;
  SourcePos origin;
  int instr = -1;  // index into the owning AST's instructions
};

struct IrSequence {
  std::string source_name;
  std::vector<IrToken> tokens;
  // Distinct shell command names observed (effective commands, basename
  // normalized), in first-seen order.
  std::vector<std::string> commands_present;
};

// Argument abstraction: maps one raw argument onto zero or more canonical
// replacement tokens, or passes it through. Flags (leading '-') are never
// substituted. A URL may yield two tokens (protocol, then file type).
std::vector<std::string> substitute(const std::string& raw);

// The closed replacement vocabulary (every string substitute can emit that
// is not a verbatim pass-through). Substitution is idempotent on these.
const std::set<std::string>& replacement_vocabulary();

struct ParsedDockerfile {
  DockerfileAst ast;
  // Parallel to ast.instructions; engaged for shell-form RUN instructions.
  std::vector<std::optional<ShellAst>> shells;
  bool has_control_flow = false;
};

// Parses the embedded shell of every shell-form RUN. Throws ShellSyntaxError.
ParsedDockerfile parse_shells(DockerfileAst ast);

IrSequence to_ir(const ParsedDockerfile& parsed);

// parse + strip_declarations + parse_shells + to_ir in one step.
// Throws SyntaxError / ShellSyntaxError.
struct Analysis {
  ParsedDockerfile parsed;
  IrSequence ir;
};
Analysis analyze(const std::string& text, const std::string& source_name);

// Debug dump, one token per line: <index>\t<kind>\t<text>\t<line>:<col>\n
std::string dump_ir(const IrSequence& seq);

}  // namespace dockmine
