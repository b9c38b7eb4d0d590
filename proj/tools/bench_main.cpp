#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "dockmine/detector.hpp"
#include "dockmine/ir.hpp"
#include "dockmine/miner.hpp"
#include "dockmine/parallel.hpp"
#include "dockmine/rulebook.hpp"

#include "../tests/support/synthetic.hpp"

using namespace dockmine;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string render(const std::vector<CheckResult>& results) {
  std::string out;
  for (const CheckResult& res : results) out += format_text(res);
  return out;
}

}  // namespace

// Compares the serial reference path (jobs = 1) against the OpenMP path for
// the two batch kernels, file checking and mining, on the same synthetic
// corpus, and verifies that both produce identical output.
int main(int argc, char** argv) {
  CLI::App app{"dockmine benchmark: serial reference vs OpenMP kernels"};
  int files = 200;
  int runs = 3;
  int jobs = default_jobs();
  app.add_option("--files", files, "synthetic corpus size")->check(CLI::PositiveNumber);
  app.add_option("--runs", runs, "timed repetitions, best run wins")->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "parallel worker count")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  // Checking is benchmarked on the rich generator; mining uses the bounded
  // one (repeated identical lines make the pattern space explode at 40%
  // support, which benchmarks allocator churn instead of the miner).
  std::vector<std::string> texts = synth::make_corpus(files);
  std::vector<FileInput> inputs;
  for (size_t i = 0; i < texts.size(); ++i) {
    FileInput fi;
    fi.path = "bench/file-" + std::to_string(i) + ".Dockerfile";
    fi.text = texts[i];
    inputs.push_back(std::move(fi));
  }
  std::vector<std::string> mining_texts = synth::make_mining_corpus(files);
  std::vector<IrSequence> corpus;
  for (size_t i = 0; i < mining_texts.size(); ++i) {
    corpus.push_back(
        analyze(mining_texts[i], "bench/mine-" + std::to_string(i)).ir);
  }
  const RuleCatalog& catalog = builtin_catalog();
  MiningOptions opts;

  std::printf("corpus: %d files, jobs: %d, runs: %d\n", files, jobs, runs);

  double check_serial = 1e300, check_parallel = 1e300;
  std::string serial_out, parallel_out;
  for (int r = 0; r < runs; ++r) {
    auto t0 = Clock::now();
    serial_out = render(check_files(inputs, catalog, 1));
    check_serial = std::min(check_serial, seconds_since(t0));

    t0 = Clock::now();
    parallel_out = render(check_files(inputs, catalog, jobs));
    check_parallel = std::min(check_parallel, seconds_since(t0));
  }
  if (serial_out != parallel_out) {
    std::fprintf(stderr, "FAIL: check outputs differ between serial and parallel\n");
    return 1;
  }
  std::printf("check  serial %8.3fs  parallel %8.3fs  speedup %.2fx  (outputs identical)\n",
              check_serial, check_parallel, check_serial / check_parallel);

  double mine_serial = 1e300, mine_parallel = 1e300;
  std::string mine_out_serial, mine_out_parallel;
  for (int r = 0; r < runs; ++r) {
    auto t0 = Clock::now();
    mine_out_serial = format_report(mine(corpus, opts, 1));
    mine_serial = std::min(mine_serial, seconds_since(t0));

    t0 = Clock::now();
    mine_out_parallel = format_report(mine(corpus, opts, jobs));
    mine_parallel = std::min(mine_parallel, seconds_since(t0));
  }
  if (mine_out_serial != mine_out_parallel) {
    std::fprintf(stderr, "FAIL: mining reports differ between serial and parallel\n");
    return 1;
  }
  std::printf("mine   serial %8.3fs  parallel %8.3fs  speedup %.2fx  (outputs identical)\n",
              mine_serial, mine_parallel, mine_serial / mine_parallel);
  return 0;
}
