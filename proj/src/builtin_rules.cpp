#include "dockmine/rulebook.hpp"

namespace dockmine {

namespace {

// The shipped catalog. Semantic rules (1-34) carry the mined confidence and
// lift; syntactic rules (101-119) describe common invocation shapes and carry
// no statistics. Tokens are quoted because brackets are YAML flow syntax.
const char* const kBuiltinRulesYaml = R"yaml(
rules:
  - id: 1
    name: "apk add --no-cache"
    level: mandatory
    type: implies
    p:
      - ["SC-[apk]", "SC-[apk]-ARG-[add]"]
    q:
      - ["SC-[apk]-ARG-[--no-cache]"]
    confidence: 0.86
    lift: 4.43
    message: "pass --no-cache to apk add so no package index is stored in the image"
  - id: 2
    name: "pip install --no-cache-dir"
    level: mandatory
    type: implies
    p:
      - ["SC-[pip]", "SC-[pip]-ARG-[install]"]
    q:
      - ["SC-[pip]-ARG-[--no-cache-dir]"]
    confidence: 0.55
    lift: 1.68
    message: "pass --no-cache-dir to pip install to keep the pip cache out of the image"
  - id: 3
    name: "pip install requirements file"
    level: encouraged
    type: implies
    p:
      - ["SC-[pip]", "SC-[pip]-ARG-[install]"]
    q:
      - ["SC-[pip]-ARG-[FILE-PIP-REQUIREMENT.TXT]"]
    confidence: 0.66
    lift: 3.48
    message: "install python dependencies from a requirements file for reproducible builds"
  - id: 4
    name: "curl -f"
    level: encouraged
    type: implies
    p:
      - ["SC-[curl]"]
    q:
      - ["SC-[curl]-ARG-[-f]"]
    confidence: 0.77
    lift: 1.39
    message: "pass -f to curl so HTTP errors fail the build instead of saving an error page"
  - id: 5
    name: "curl uses https"
    level: mandatory
    type: implies
    p:
      - ["SC-[curl]"]
    q:
      - ["SC-[curl]-ARG-[URL-PROTOCOL-HTTPS]"]
    confidence: 0.89
    lift: 1.58
    message: "download with curl over https, not plain http"
  - id: 6
    name: "wget uses https"
    level: mandatory
    type: implies
    p:
      - ["SC-[wget]"]
    q:
      - ["SC-[wget]-ARG-[URL-PROTOCOL-HTTPS]"]
    confidence: 0.82
    lift: 1.49
    message: "download with wget over https, not plain http"
  - id: 7
    name: "git clone uses https"
    level: encouraged
    type: implies
    p:
      - ["SC-[git]", "SC-[git]-ARG-[clone]"]
    q:
      - ["SC-[git]-ARG-[URL-PROTOCOL-HTTPS]"]
    confidence: 0.96
    lift: 1.72
    message: "clone repositories over https, not git or ssh protocols"
  - id: 8
    name: "rm zip after unzip"
    level: mandatory
    type: implies
    p:
      - ["SC-[unzip]", "SC-[unzip]-ARG-[FILE-ZIP]"]
    q:
      - ["SC-[rm]", "SC-[rm]-ARG-[FILE-ZIP]"]
    confidence: 0.70
    lift: 1.51
    message: "remove the zip archive after extracting it"
  - id: 9
    name: "rm archive after tar"
    level: mandatory
    type: implies
    p:
      - ["SC-[tar]"]
    q:
      - ["SC-[rm]"]
    confidence: 0.64
    lift: 1.43
    message: "remove the archive after extracting it with tar"
  - id: 10
    name: "gpg --batch"
    level: encouraged
    type: implies
    p:
      - ["SC-[gpg]"]
    q:
      - ["SC-[gpg]-ARG-[--batch]"]
    confidence: 0.45
    lift: 9.31
    message: "run gpg with --batch so the build never waits for interactive input"
  - id: 11
    name: "gpg --keyserver"
    level: encouraged
    type: implies
    p:
      - ["SC-[gpg]"]
    q:
      - ["SC-[gpg]-ARG-[--keyserver]"]
    confidence: 0.45
    lift: 9.31
    message: "pin an explicit --keyserver when fetching keys with gpg"
  - id: 12
    name: "rm .asc after gpg"
    level: encouraged
    type: implies
    p:
      - ["SC-[gpg]", "SC-[gpg]-ARG-[FILE-ASC]"]
    q:
      - ["SC-[rm]", "SC-[rm]-ARG-[FILE-ASC]"]
    confidence: 0.60
    lift: 9.12
    message: "remove the detached signature file after verification"
  - id: 13
    name: "dnf install -y"
    level: mandatory
    type: implies
    p:
      - ["SC-[dnf]", "SC-[dnf]-ARG-[install]"]
    q:
      - ["SC-[dnf]-ARG-[-y]"]
    confidence: 0.76
    lift: 1.57
    message: "pass -y to dnf install so the build never waits for confirmation"
  - id: 14
    name: "mkdir -p"
    level: encouraged
    type: implies
    p:
      - ["SC-[mkdir]"]
    q:
      - ["SC-[mkdir]-ARG-[-p]"]
    confidence: 0.61
    lift: 1.02
    message: "pass -p to mkdir to create parents and tolerate existing directories"
  - id: 15
    name: "chown -R"
    level: encouraged
    type: implies
    p:
      - ["SC-[chown]"]
    q:
      - ["SC-[chown]-ARG-[-R]"]
    confidence: 0.61
    lift: 0.89
    message: "chown is usually wanted recursively; pass -R"
  - id: 16
    name: "rm -rf"
    level: encouraged
    type: implies
    p:
      - ["SC-[rm]"]
    q:
      - ["SC-[rm]-ARG-[-r]", "SC-[rm]-ARG-[-f]"]
    confidence: 0.77
    lift: 1.63
    message: "rm in image builds usually wants -rf to clean directories without prompting"
  - id: 17
    name: "yum install -y"
    level: mandatory
    type: implies
    p:
      - ["SC-[yum]", "SC-[yum]-ARG-[install]"]
    q:
      - ["SC-[yum]-ARG-[-y]"]
    confidence: 0.84
    lift: 1.78
    message: "pass -y to yum install so the build never waits for confirmation"
  - id: 18
    name: "zypper install -y"
    level: mandatory
    type: implies
    p:
      - ["SC-[zypper]", "SC-[zypper]-ARG-[install]"]
    q:
      - ["SC-[zypper]-ARG-[-y]"]
    confidence: 0.81
    lift: 1.72
    message: "pass -y to zypper install so the build never waits for confirmation"
  - id: 19
    name: "apt-get install -y"
    level: mandatory
    type: implies
    p:
      - ["SC-[apt-get]", "SC-[apt-get]-ARG-[install]"]
    q:
      - ["SC-[apt-get]-ARG-[-y]"]
    confidence: 0.72
    lift: 1.53
    message: "pass -y to apt-get install so the build never waits for confirmation"
  - id: 20
    name: "apt-get install --no-install-recommends"
    level: mandatory
    type: implies
    p:
      - ["SC-[apt-get]", "SC-[apt-get]-ARG-[install]"]
    q:
      - ["SC-[apt-get]-ARG-[--no-install-recommends]"]
    confidence: 0.77
    lift: 1.63
    message: "pass --no-install-recommends to apt-get install to skip optional packages"
  - id: 21
    name: "configure --build"
    level: mandatory
    type: implies
    p:
      - ["SC-[configure]"]
    q:
      - ["SC-[configure]-ARG-[--build]"]
    confidence: 0.85
    lift: 7.83
    message: "pass an explicit --build triplet to configure scripts"
  - id: 22
    name: "apt-get update before install"
    level: mandatory
    type: sandwich
    p:
      - ["SC-[apt-get]", "SC-[apt-get]-ARG-[update]"]
    q:
      - ["SC-[apt-get]", "SC-[apt-get]-ARG-[install]"]
    r:
      - ["SC-[apt-get]-ARG-[ANY]"]
    confidence: 0.76
    lift: 2.09
    message: "run apt-get update before each apt-get install and name the packages"
  - id: 23
    name: "go build in multi-stage build"
    level: encouraged
    type: sandwich
    p:
      - ["FROM-IMAGE-[ANY]-TAG-[ANY]"]
    q:
      - ["SC-[go]", "SC-[go]-ARG-[build]"]
    r:
      - ["FROM-IMAGE-[ANY]-TAG-[ANY]"]
    confidence: 0.91
    lift: 4.47
    message: "compile go binaries in a builder stage and copy them into a later stage"
  - id: 24
    name: "mvn package in multi-stage build"
    level: encouraged
    type: sandwich
    p:
      - ["FROM-IMAGE-[ANY]-TAG-[ANY]"]
    q:
      - ["SC-[mvn]", "SC-[mvn]-ARG-[package]"]
    r:
      - ["FROM-IMAGE-[ANY]-TAG-[ANY]"]
    confidence: 0.72
    lift: 6.67
    message: "build java artifacts in a builder stage and copy them into a later stage"
  - id: 25
    name: "conda clean after install"
    level: mandatory
    type: disj_implies
    p:
      - ["SC-[conda]", "SC-[conda]-ARG-[install]"]
    q:
      - ["SC-[conda]", "SC-[conda]-ARG-[clean]"]
    confidence: 0.72
    lift: 7.21
    message: "run conda clean after conda install to drop the package cache"
  - id: 26
    name: "apt-get cleanup after install"
    level: mandatory
    type: disj_implies
    p:
      - ["SC-[apt-get]", "SC-[apt-get]-ARG-[install]"]
      - ["SC-[dpkg]", "SC-[dpkg]-ARG-[-i]"]
    q:
      - ["SC-[rm]", "SC-[rm]-ARG-[PATH-APT-LIST]"]
      - ["SC-[apt-get]", "SC-[apt-get]-ARG-[clean]"]
    confidence: 0.68
    lift: 2.81
    message: "remove /var/lib/apt/lists or run apt-get clean after installing packages"
  - id: 27
    name: "zypper clean after install"
    level: mandatory
    type: disj_implies
    p:
      - ["SC-[zypper]", "SC-[zypper]-ARG-[install]"]
      - ["SC-[zypper]", "SC-[zypper]-ARG-[in]"]
    q:
      - ["SC-[zypper]", "SC-[zypper]-ARG-[clean]"]
      - ["SC-[zypper]", "SC-[zypper]-ARG-[cc]"]
    confidence: 0.75
    lift: 8.82
    message: "run zypper clean after zypper install to drop the package cache"
  - id: 28
    name: "dnf clean after install"
    level: mandatory
    type: disj_implies
    p:
      - ["SC-[dnf]", "SC-[dnf]-ARG-[install]"]
    q:
      - ["SC-[dnf]", "SC-[dnf]-ARG-[clean]"]
      - ["SC-[rm]", "SC-[rm]-ARG-[PATH-VAR-CACHE]"]
    confidence: 0.61
    lift: 9.77
    message: "run dnf clean all or remove /var/cache after dnf install"
  - id: 29
    name: "yum clean after install"
    level: mandatory
    type: disj_implies
    p:
      - ["SC-[yum]", "SC-[yum]-ARG-[install]"]
      - ["SC-[rpm]", "SC-[rpm]-ARG-[-i]"]
    q:
      - ["SC-[yum]", "SC-[yum]-ARG-[clean]"]
      - ["SC-[rm]", "SC-[rm]-ARG-[PATH-VAR-CACHE-YUM]"]
    confidence: 0.71
    lift: 5.73
    message: "run yum clean all or remove /var/cache/yum after installing packages"
  - id: 30
    name: "verify checksum of downloaded archive"
    level: encouraged
    type: disj_implies
    p:
      - ["SC-[wget]", "SC-[wget]-ARG-[FILE-TAR-GZ]"]
      - ["SC-[wget]", "SC-[wget]-ARG-[FILE-TAR-BZ2]"]
      - ["SC-[wget]", "SC-[wget]-ARG-[FILE-TAR]"]
      - ["SC-[wget]", "SC-[wget]-ARG-[FILE-ZIP]"]
      - ["SC-[curl]", "SC-[curl]-ARG-[FILE-TAR-GZ]"]
      - ["SC-[curl]", "SC-[curl]-ARG-[FILE-TAR-BZ2]"]
      - ["SC-[curl]", "SC-[curl]-ARG-[FILE-TAR]"]
      - ["SC-[curl]", "SC-[curl]-ARG-[FILE-ZIP]"]
    q:
      - ["SC-[sha256sum]"]
      - ["SC-[sha512sum]"]
      - ["SC-[sha1sum]"]
      - ["SC-[shasum]"]
    confidence: 0.56
    lift: 1.54
    message: "check a sha checksum after downloading an archive"
  - id: 31
    name: "gpg --verify downloaded signature"
    level: encouraged
    type: disj_implies
    p:
      - ["SC-[wget]", "SC-[wget]-ARG-[FILE-ASC]"]
      - ["SC-[curl]", "SC-[curl]-ARG-[FILE-ASC]"]
    q:
      - ["SC-[gpg]", "SC-[gpg]-ARG-[--verify]"]
    confidence: 0.42
    lift: 1.32
    message: "run gpg --verify against the downloaded detached signature"
  - id: 32
    name: "set -eux in RUN"
    level: encouraged
    type: special
    handler: set-eux
    message: "start shell RUN instructions with set -eux so failures stop the build"
  - id: 33
    name: "switch user after useradd"
    level: encouraged
    type: special
    handler: useradd-not-root
    message: "after creating a user, switch to it with a USER instruction"
  - id: 34
    name: "switch user after groupadd"
    level: encouraged
    type: special
    handler: groupadd-not-root
    message: "after creating a group, switch to a non-root user with a USER instruction"
  - id: 101
    name: "go build"
    level: encouraged
    type: implies
    p:
      - ["SC-[go]"]
    q:
      - ["SC-[go]-ARG-[build]"]
    message: "go invocations in image builds usually compile with go build"
  - id: 102
    name: "go get"
    level: encouraged
    type: implies
    p:
      - ["SC-[go]"]
    q:
      - ["SC-[go]-ARG-[get]"]
    message: "go invocations in image builds usually fetch dependencies with go get"
  - id: 103
    name: "bundle install"
    level: encouraged
    type: implies
    p:
      - ["SC-[bundle]"]
    q:
      - ["SC-[bundle]-ARG-[install]"]
    message: "bundle invocations in image builds usually run bundle install"
  - id: 104
    name: "npm install -g"
    level: encouraged
    type: implies
    p:
      - ["SC-[npm]", "SC-[npm]-ARG-[install]"]
    q:
      - ["SC-[npm]-ARG-[-g]"]
    message: "npm install in image builds usually installs globally with -g"
  - id: 105
    name: "tar -C"
    level: encouraged
    type: implies
    p:
      - ["SC-[tar]"]
    q:
      - ["SC-[tar]-ARG-[-C]"]
    message: "pass -C to tar to extract into an explicit directory"
  - id: 106
    name: "ssh-keygen -t"
    level: encouraged
    type: implies
    p:
      - ["SC-[ssh-keygen]"]
    q:
      - ["SC-[ssh-keygen]-ARG-[-t]"]
    message: "pass an explicit key type to ssh-keygen with -t"
  - id: 107
    name: "sh -s"
    level: encouraged
    type: implies
    p:
      - ["SC-[sh]"]
    q:
      - ["SC-[sh]-ARG-[-s]"]
    message: "piped sh invocations usually read the script from stdin with -s"
  - id: 108
    name: "yarn build"
    level: encouraged
    type: implies
    p:
      - ["SC-[yarn]"]
    q:
      - ["SC-[yarn]-ARG-[build]"]
    message: "yarn invocations in image builds usually run yarn build"
  - id: 109
    name: "addgroup/groupadd -g"
    level: encouraged
    type: disj_implies
    p:
      - ["SC-[addgroup]"]
      - ["SC-[groupadd]"]
    q:
      - ["SC-[addgroup]-ARG-[-g]"]
      - ["SC-[groupadd]-ARG-[-g]"]
    message: "create groups with an explicit gid via -g"
  - id: 110
    name: "git clone"
    level: encouraged
    type: implies
    p:
      - ["SC-[git]"]
    q:
      - ["SC-[git]-ARG-[clone]"]
    message: "git invocations in image builds usually run git clone"
  - id: 111
    name: "mvn package"
    level: encouraged
    type: implies
    p:
      - ["SC-[mvn]"]
    q:
      - ["SC-[mvn]-ARG-[package]"]
    message: "mvn invocations in image builds usually run mvn package"
  - id: 112
    name: "gem install"
    level: encouraged
    type: implies
    p:
      - ["SC-[gem]"]
    q:
      - ["SC-[gem]-ARG-[install]"]
    message: "gem invocations in image builds usually run gem install"
  - id: 113
    name: "make install"
    level: encouraged
    type: implies
    p:
      - ["SC-[make]"]
    q:
      - ["SC-[make]-ARG-[install]"]
    message: "make invocations in image builds usually install with make install"
  - id: 114
    name: "cargo build"
    level: encouraged
    type: implies
    p:
      - ["SC-[cargo]"]
    q:
      - ["SC-[cargo]-ARG-[build]"]
    message: "cargo invocations in image builds usually compile with cargo build"
  - id: 115
    name: "mv with paths"
    level: encouraged
    type: implies
    p:
      - ["SC-[mv]"]
    q:
      - ["SC-[mv]-ARG-[ANY]", "SC-[mv]-ARG-[ANY]"]
    message: "mv takes an explicit source and destination"
  - id: 116
    name: "cat with path"
    level: encouraged
    type: implies
    p:
      - ["SC-[cat]"]
    q:
      - ["SC-[cat]-ARG-[ANY]"]
    message: "cat in image builds takes an explicit file argument"
  - id: 117
    name: "ls with path"
    level: encouraged
    type: implies
    p:
      - ["SC-[ls]"]
    q:
      - ["SC-[ls]-ARG-[ANY]"]
    message: "ls in image builds takes an explicit path argument"
  - id: 118
    name: "cp with paths"
    level: encouraged
    type: implies
    p:
      - ["SC-[cp]"]
    q:
      - ["SC-[cp]-ARG-[ANY]", "SC-[cp]-ARG-[ANY]"]
    message: "cp takes an explicit source and destination"
  - id: 119
    name: "touch with path"
    level: encouraged
    type: implies
    p:
      - ["SC-[touch]"]
    q:
      - ["SC-[touch]-ARG-[ANY]"]
    message: "touch in image builds takes an explicit file argument"
)yaml";

}  // namespace

const RuleCatalog& builtin_catalog() {
  static const RuleCatalog catalog = load_rules(kBuiltinRulesYaml);
  return catalog;
}

}  // namespace dockmine
