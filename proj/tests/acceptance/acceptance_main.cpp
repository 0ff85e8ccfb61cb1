// Acceptance runner: one PASS/FAIL line per criterion 1..12.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "polaron/suites.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

polaron::suites::CriterionResult cli_determinism() {
  polaron::suites::CriterionResult r;
  r.id = 12;
  r.name = "CLI determinism and verify";
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = fs::temp_directory_path() / ("polaron_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = POLARON_CLI_PATH;
  const std::vector<std::string> invocations{
      "estimate-upper --alpha 100 --C 2 --T 2000 --reps 200 --seed 7",
      "sample --process thinned --alpha 50 --eps 1 --T 100 --seed 7 --format csv",
      "sweep --alphas 1e10:1e14:x10 --d 3 --reps 10 --seed 7",
      "bound-table --alphas 1e2:1e6:x10 --format csv",
  };
  bool identical = true;
  std::string detail;
  for (std::size_t i = 0; i < invocations.size(); ++i) {
    const fs::path a = dir / ("a" + std::to_string(i));
    const fs::path b = dir / ("b" + std::to_string(i));
    const int ra = run(cli + " " + invocations[i] + " --out " + a.string());
    const int rb = run(cli + " " + invocations[i] + " --threads 1 --out " + b.string());
    const std::string sa = slurp(a);
    if (ra != 0 || rb != 0 || sa.empty() || sa != slurp(b)) {
      identical = false;
      detail += "differs or failed: " + invocations[i] + "; ";
    }
  }
  const int verify = run(cli + " verify > " + (dir / "verify.txt").string() + " 2>&1");
  std::ifstream log(dir / "verify.txt");
  std::string line;
  int fails = 0;
  while (std::getline(log, line)) {
    if (line.rfind("FAIL", 0) == 0) {
      ++fails;
      detail += line + "; ";
    }
  }
  fs::remove_all(dir);
  r.passed = identical && verify == 0;
  r.detail = std::to_string(invocations.size()) + " invocations byte-identical across runs and thread counts: " +
             (identical ? "yes" : "no") + "; verify exit " + std::to_string(verify) + " with " +
             std::to_string(fails) + " failing suites" + (detail.empty() ? "" : "; " + detail);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void print(const polaron::suites::CriterionResult& r) {
  std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << "): " << r.detail
            << " [" << r.seconds << " s]\n"
            << std::flush;
}

}  // namespace

int main() {
  polaron::suites::SuiteOptions options;
  bool all = true;
  for (const auto& suite : polaron::suites::acceptance_suites()) {
    const auto r = polaron::suites::run_suite(suite, options);
    all = all && r.passed;
    print(r);
  }
  const auto r12 = cli_determinism();
  all = all && r12.passed;
  print(r12);
  std::cout << (all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << "\n";
  return all ? 0 : 1;
}
