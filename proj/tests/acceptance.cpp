// Acceptance run: one PASS/FAIL line per criterion.
//
// usage: pu_acceptance <path-to-pu_cli>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "pu/verify.hpp"

namespace {

struct Criterion {
  int number;
  const char* title;
  const char* suite;
};

constexpr Criterion kCriteria[] = {
    {1, "symmetry discovery", "symmetry"},
    {2, "bi-Hamiltonian flow", "bihamiltonian"},
    {3, "charge hierarchy", "hierarchy"},
    {4, "combined structures", "combined"},
    {5, "group flows", "flows"},
    {6, "transformation catalog", "transform"},
    {7, "positivity windows", "positivity"},
    {8, "dynamics", "dynamics"},
    {9, "interaction", "interaction"},
};

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <pu_cli>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  pu::VerifyConfig cfg;  // w = (2, 1), seed 42, tol 1e-9
  bool all = true;

  for (const auto& c : kCriteria) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst = 0.0;
    std::string failed;
    std::size_t checks = 0;
    try {
      const auto rep = pu::run_suite(c.suite, cfg);
      for (const auto& k : rep.checks) {
        ++checks;
        if (!k.pass) {
          pass = false;
          failed += " " + k.id;
        }
      }
      for (const auto& k : rep.checks) {
        // growth ratios and order factors are not residuals
        if (k.id == "dynamics.rk4_order" || k.id == "dynamics.degenerate_growth") continue;
        worst = std::max(worst, k.residual);
      }
    } catch (const std::exception& e) {
      pass = false;
      failed = std::string(" exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 60.0) {
      pass = false;
      failed += " (over 60 s)";
    }
    all = all && pass;
    std::printf("criterion %d %-24s %s  checks=%zu worst=%.3g time=%.2fs%s%s\n", c.number, c.title,
                pass ? "PASS" : "FAIL", checks, worst, secs, failed.empty() ? "" : " failed:",
                failed.c_str());
  }

  // CLI determinism and exit codes.
  {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("pu_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto a = dir / "a.json", b = dir / "b.json";
    const std::string base = "\"" + cli + "\" verify --omega1 2 --omega2 1 --seed 42 --out ";
    const int e1 = run(base + "\"" + a.string() + "\" 2>/dev/null");
    const int e2 = run(base + "\"" + b.string() + "\" 2>/dev/null");
    const bool same = slurp(a) == slurp(b) && !slurp(a).empty();
    const int usage = run("\"" + cli + "\" verify --omega1 2 >/dev/null 2>&1");
    const int mixed = run("\"" + cli + "\" hierarchy --alpha 5 --beta 4 --omega1 2 --omega2 1 >/dev/null 2>&1");
    const int domain = run("\"" + cli + "\" discover --alpha 5 --beta 0 >/dev/null 2>&1");
    const int ok = run("\"" + cli + "\" hierarchy --n 3 --alpha 5 --beta 4 >/dev/null 2>&1");
    std::filesystem::remove_all(dir);
    const bool pass = e1 == 0 && e2 == 0 && same && usage == 2 && mixed == 2 && domain == 1 && ok == 0;
    all = all && pass;
    std::printf("criterion 10 %-23s %s  verify exits=%d,%d identical=%s usage=%d,%d domain=%d ok=%d\n",
                "CLI determinism", pass ? "PASS" : "FAIL", e1, e2, same ? "yes" : "no", usage, mixed,
                domain, ok);
  }
  return all ? 0 : 1;
}
