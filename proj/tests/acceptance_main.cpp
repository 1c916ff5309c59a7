// Acceptance suite: runs every verification criterion at its pinned
// tolerance and prints one PASS/FAIL line per criterion.  Criterion 11
// (output determinism) drives the command-line tool named by --cli.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "bergman/audit.hpp"
#include "bergman/xreal.hpp"

namespace {

struct CommandResult {
  std::string output;
  int exit_code = -1;
};

CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

void print_failing_rows(const bergman::audit::CriterionReport& rep) {
  for (const auto& row : rep.rows) {
    if (row.pass) continue;
    std::printf("    FAIL %s", row.id.c_str());
    for (const auto& [key, value] : row.values)
      std::printf("  %s=%s", key.c_str(), value.str().c_str());
    if (!row.note.empty()) std::printf("  note=%s", row.note.c_str());
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--cli") == 0) cli_path = argv[i + 1];

  bool all_pass = true;
  const int n = bergman::audit::criteria_count();
  for (int i = 1; i <= n; ++i) {
    const auto rep = bergman::audit::run_criterion(i, 1e-12);
    std::printf("[%2d/11] %s %s (%zu checks)\n", i, rep.pass ? "PASS" : "FAIL",
                rep.name.c_str(), rep.rows.size());
    if (!rep.pass) {
      print_failing_rows(rep);
      all_pass = false;
    }
    std::fflush(stdout);
  }

  // criterion 11: report-all is byte-identical across runs and thread counts
  // and exits zero
  bool det_pass = false;
  if (cli_path.empty()) {
    std::printf("[11/11] FAIL determinism (no --cli path given)\n");
  } else {
    const std::string base = cli_path + " report-all --format json --rel-tol 1e-12";
    const CommandResult a = run_command(base + " --threads 1");
    const CommandResult b = run_command(base + " --threads 1");
    const CommandResult c = run_command(base + " --threads 4");
    det_pass = a.exit_code == 0 && b.exit_code == 0 && c.exit_code == 0 &&
               !a.output.empty() && a.output == b.output && a.output == c.output;
    std::printf("[11/11] %s determinism (exit codes %d/%d/%d; %zu bytes, repeat %s, "
                "4-thread %s)\n",
                det_pass ? "PASS" : "FAIL", a.exit_code, b.exit_code, c.exit_code,
                a.output.size(), a.output == b.output ? "identical" : "DIFFERS",
                a.output == c.output ? "identical" : "DIFFERS");
  }
  all_pass = all_pass && det_pass;

  std::printf("RESULT: %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? 0 : 1;
}
