#include <doctest.h>

#include <string>
#include <vector>

#include "dockmine/shell.hpp"

using namespace dockmine;

namespace {

std::vector<std::string> arg_texts(const ShellStatement& st) {
  std::vector<std::string> out;
  for (const ShellWord& w : st.args) out.push_back(w.text);
  return out;
}

}  // namespace

TEST_CASE("splits commands on every separator") {
  ShellAst ast = parse_shell(
      "apt-get update && apt-get install -y curl || echo fail; "
      "echo done | tee log & true\n"
      "echo next");
  REQUIRE(ast.statements.size() == 7);
  CHECK(ast.statements[0].command == "apt-get");
  CHECK(arg_texts(ast.statements[0]) == std::vector<std::string>{"update"});
  CHECK(ast.statements[1].command == "apt-get");
  CHECK(arg_texts(ast.statements[1]) ==
        std::vector<std::string>{"install", "-y", "curl"});
  CHECK(ast.statements[2].command == "echo");
  CHECK(ast.statements[3].command == "echo");
  CHECK(ast.statements[4].command == "tee");
  CHECK(ast.statements[5].command == "true");
  CHECK(ast.statements[6].command == "echo");
  CHECK_FALSE(ast.has_control_flow);
}

TEST_CASE("quoting keeps words together and resolves escapes") {
  ShellAst ast = parse_shell(
      "echo 'a b' \"c d\" e\\ f \"quote \\\" inside\" 'keep $HOME'");
  REQUIRE(ast.statements.size() == 1);
  CHECK(arg_texts(ast.statements[0]) ==
        std::vector<std::string>{"a b", "c d", "e f", "quote \" inside",
                                 "keep $HOME"});
}

TEST_CASE("substitutions ride along inside words") {
  ShellAst ast = parse_shell("install --prefix=${PREFIX}/lib $(nproc) `hostname` pkg");
  REQUIRE(ast.statements.size() == 1);
  const auto args = arg_texts(ast.statements[0]);
  REQUIRE(args.size() == 4);
  CHECK(args[0] == "--prefix=${PREFIX}/lib");
  CHECK(args[1] == "$(nproc)");
  CHECK(args[2] == "`hostname`");
  // Separators inside substitutions do not split statements.
  ShellAst nested = parse_shell("echo $(run a && run b) done");
  CHECK(nested.statements.size() == 1);
}

TEST_CASE("word offsets point into the script") {
  const std::string script = "mkdir -p /srv && chown app /srv";
  ShellAst ast = parse_shell(script);
  REQUIRE(ast.statements.size() == 2);
  const ShellStatement& chown = ast.statements[1];
  CHECK(script.substr(chown.command_offset, 5) == "chown");
  CHECK(script.substr(chown.args[0].offset, 3) == "app");
}

TEST_CASE("leading assignments are their own statements") {
  ShellAst ast = parse_shell("DEBIAN_FRONTEND=noninteractive FOO=1 apt-get install -y x");
  REQUIRE(ast.statements.size() == 3);
  CHECK(ast.statements[0].kind == StatementKind::Assignment);
  CHECK(ast.statements[0].name == "DEBIAN_FRONTEND");
  CHECK(ast.statements[0].value == "noninteractive");
  CHECK(ast.statements[1].kind == StatementKind::Assignment);
  CHECK(ast.statements[2].kind == StatementKind::Call);
  CHECK(ast.statements[2].command == "apt-get");
}

TEST_CASE("redirections are peeled off the argument list") {
  ShellAst ast = parse_shell("curl -sSL https://x.test/f > /tmp/f 2>&1");
  REQUIRE(ast.statements.size() == 1);
  const ShellStatement& st = ast.statements[0];
  CHECK(arg_texts(st) == std::vector<std::string>{"-sSL", "https://x.test/f"});
  REQUIRE(st.redirections.size() == 2);
  CHECK(st.redirections[0].op == ">");
  CHECK(st.redirections[0].target == "/tmp/f");
  CHECK(st.redirections[1].op == "2>&1");
  CHECK(st.redirections[1].target.empty());
}

TEST_CASE("control flow is flagged and skipped, not fatal") {
  ShellAst iff = parse_shell("if [ -f x ]; then echo yes; fi; echo after");
  CHECK(iff.has_control_flow);
  ShellAst forr = parse_shell("for f in a b c; do echo $f; done && echo after");
  CHECK(forr.has_control_flow);
  ShellAst whil = parse_shell("while true; do sleep 1; done");
  CHECK(whil.has_control_flow);
  ShellAst cas = parse_shell("case $x in a) echo a;; esac");
  CHECK(cas.has_control_flow);
  ShellAst plain = parse_shell("echo { brace } ( paren )");
  CHECK_FALSE(plain.has_control_flow);
}

TEST_CASE("adding control flow never unsets the flag") {
  const std::string base = "apk add --no-cache curl && rm -rf /var/cache/apk";
  CHECK_FALSE(parse_shell(base).has_control_flow);
  CHECK(parse_shell(base + "; if true; then echo x; fi").has_control_flow);
  CHECK(parse_shell("while read l; do echo $l; done; " + base).has_control_flow);
}

TEST_CASE("comments run to end of line") {
  ShellAst ast = parse_shell("echo one # && echo two\necho three");
  REQUIRE(ast.statements.size() == 2);
  CHECK(arg_texts(ast.statements[0]) == std::vector<std::string>{"one"});
  CHECK(arg_texts(ast.statements[1]) == std::vector<std::string>{"three"});
}

TEST_CASE("heredocs are rejected, herestrings are not") {
  CHECK_THROWS_AS(parse_shell("cat <<EOF\nhi\nEOF"), ShellSyntaxError);
  CHECK_NOTHROW(parse_shell("cat <<< hi"));
  CHECK_THROWS_AS(parse_shell("echo 'unterminated"), ShellSyntaxError);
}

TEST_CASE("wrapper commands yield the effective call") {
  ShellAst sudo = parse_shell("sudo apt-get install -y git");
  ClassifiedCall call = classify_tokens(sudo.statements[0]);
  CHECK(call.command == "apt-get");
  REQUIRE(call.parameters.size() == 3);
  CHECK(call.parameters[0].text == "install");

  // Wrapper flags and assignments are skipped while locating the command.
  ShellAst env = parse_shell("env -i PATH=/bin pip install x");
  ClassifiedCall env_call = classify_tokens(env.statements[0]);
  CHECK(env_call.command == "pip");
  CHECK(env_call.parameters.size() == 2);

  // Nested wrappers unwrap recursively.
  ShellAst nested = parse_shell("sudo env time nice wget https://x.test/a");
  ClassifiedCall nested_call = classify_tokens(nested.statements[0]);
  CHECK(nested_call.command == "wget");
  REQUIRE(nested_call.parameters.size() == 1);
  CHECK(nested_call.parameters[0].text == "https://x.test/a");

  // A bare wrapper with nothing to unwrap stays itself.
  ShellAst bare = parse_shell("sudo -k");
  ClassifiedCall bare_call = classify_tokens(bare.statements[0]);
  CHECK(bare_call.command == "sudo");

  // Absolute paths resolve via basename for wrapper detection.
  ShellAst abs = parse_shell("/usr/bin/sudo rm -rf /tmp/x");
  ClassifiedCall abs_call = classify_tokens(abs.statements[0]);
  CHECK(abs_call.command == "rm");
}

TEST_CASE("non-wrapper calls pass through classify_tokens unchanged") {
  ShellAst ast = parse_shell("tar -xzf src.tar.gz -C /opt");
  ClassifiedCall call = classify_tokens(ast.statements[0]);
  CHECK(call.command == "tar");
  CHECK(call.parameters.size() == 4);
  CHECK(call.command_offset == ast.statements[0].command_offset);
}

TEST_CASE("backslash-newline continues the command line") {
  ShellAst ast = parse_shell("apk add --no-cache \\\n curl git");
  REQUIRE(ast.statements.size() == 1);
  CHECK(arg_texts(ast.statements[0]) ==
        std::vector<std::string>{"add", "--no-cache", "curl", "git"});
}

TEST_CASE("parsing a space-free quoted token is a fixpoint") {
  // Re-splitting the resolved text of simple tokens yields the same token.
  const std::vector<std::string> tokens = {"abc", "--flag=v", "/a/b.txt", "x:y"};
  for (const std::string& tok : tokens) {
    ShellAst first = parse_shell("cmd '" + tok + "'");
    REQUIRE(first.statements.size() == 1);
    REQUIRE(first.statements[0].args.size() == 1);
    const std::string resolved = first.statements[0].args[0].text;
    CHECK(resolved == tok);
    ShellAst second = parse_shell("cmd " + resolved);
    CHECK(second.statements[0].args[0].text == resolved);
  }
}
