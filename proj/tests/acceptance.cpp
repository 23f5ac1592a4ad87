// One line per acceptance criterion. Exit status 0 iff the set of failing
// criteria equals the set given with --expect-fail (empty by default).

#include "udist/suite.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <set>

using namespace udist;

namespace {

struct Pool {
  std::uint32_t M;
  std::vector<std::uint32_t> primes;
  std::map<std::uint32_t, std::uint32_t> alternative_roots;
};

struct Run {
  SuiteResult result;
  double seconds = 0;
};

Run run_pool(const Pool& pool, const std::map<std::uint32_t, std::uint32_t>& roots, std::vector<std::string> checks) {
  SuiteConfig config;
  config.M = pool.M;
  config.primes = pool.primes;
  config.roots = roots;
  config.checks = std::move(checks);
  const auto start = std::chrono::steady_clock::now();
  Run run{run_suite(config), 0};
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

struct Tally {
  std::size_t total = 0, passed = 0;
  std::vector<std::string> failures;
  void add(const SuiteResult& r, const std::set<std::string>& names) {
    for (const auto& c : r.reports) {
      if (!names.count(c.name)) continue;
      ++total;
      if (c.verdict == Verdict::pass)
        ++passed;
      else if (failures.size() < 3)
        failures.push_back(c.name + " " + c.params.dump());
    }
  }
  [[nodiscard]] bool ok() const { return total > 0 && passed == total; }
};

std::map<std::string, Verdict> verdicts(const SuiteResult& r, const std::set<std::string>& names) {
  std::map<std::string, Verdict> out;
  for (const auto& c : r.reports)
    if (names.count(c.name)) out[c.name + c.params.dump()] = c.verdict;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Pool> pools = {{3, {7, 13, 19}, {{7, 5}, {13, 6}, {19, 3}}}, {5, {11, 31}, {{11, 6}, {31, 11}}}};

  const std::set<std::string> c1 = {"u_structure", "l_cohomology"};
  const std::set<std::string> c2 = {"frob_regularity", "reduction_sequence", "sigma_sequence"};
  const std::set<std::string> c3 = {"universal_recursion", "d_ell_properties", "iterated_recursion",
                                    "kolyvagin_class",     "norm_identity",    "euler_relations"};
  const std::set<std::string> c4 = {"k_identities", "epsilon_conjugation", "s_stability", "delta_identities",
                                    "delta_containment"};
  const std::set<std::string> c5 = {"h0_dimension", "h0_of_K"};
  const std::set<std::string> c6 = {"canonical_basis", "shift_equals_D", "basis_corollary"};
  const std::set<std::string> c8 = {"negative_perturbation", "negative_drop"};
  std::set<std::string> choice;
  for (const auto* s : {&c2, &c3, &c5, &c6}) choice.insert(s->begin(), s->end());

  std::vector<Run> base;
  int contradictions = 0;
  for (const auto& pool : pools) {
    base.push_back(run_pool(pool, {}, {"all"}));
    if (base.back().result.exit_code == 3) {
      std::cerr << "internal contradiction (M=" << pool.M << "): " << base.back().result.diagnostic << '\n';
      ++contradictions;
    }
  }

  std::map<int, std::pair<bool, std::string>> lines;
  auto report = [&](int n, const std::string& title, const Tally& t, const std::string& extra = "") {
    std::string text = title + " (" + std::to_string(t.passed) + "/" + std::to_string(t.total) + " checks" + extra + ")";
    for (const auto& f : t.failures) text += "; failing: " + f;
    lines[n] = {t.ok(), text};
  };

  {
    Tally t;
    t.add(base[0].result, c1);
    const bool fast = base[0].seconds < 120;
    char buf[64];
    std::snprintf(buf, sizeof buf, ", full M=3 suite %.1f s", base[0].seconds);
    report(1, "structure of U_r and L(r), M=3, r | 1729", t, buf);
    lines[1].first = lines[1].first && fast;
  }
  const std::vector<std::pair<const std::set<std::string>*, std::string>> pooled = {
      {&c2, "Frobenius regularity, reduction and sigma sequences, both pools"},
      {&c3, "universal Kolyvagin recursion, both pools"},
      {&c5, "H0 dimension and identification with H0 of K, both pools"},
      {&c6, "canonical basis, shift = D, unitriangular transition, both pools"},
      {&c8, "negative controls detected, both pools"}};
  const int numbers[] = {2, 3, 5, 6, 8};
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    Tally t;
    for (const auto& b : base) t.add(b.result, *pooled[i].first);
    report(numbers[i], pooled[i].second, t);
  }
  {
    Tally t;
    t.add(base[0].result, c4);
    report(4, "double complex identities on every window generator, r | 1729", t);
  }
  {
    Tally t;
    bool same = true;
    const std::vector<std::string> names(choice.begin(), choice.end());
    for (std::size_t p = 0; p < pools.size(); ++p) {
      const Run alt = run_pool(pools[p], pools[p].alternative_roots, names);
      t.add(alt.result, choice);
      same = same && verdicts(alt.result, choice) == verdicts(base[p].result, choice);
    }
    report(7, "verdicts of criteria 2, 3, 5, 6 under alternative primitive roots", t,
           same ? ", verdicts unchanged" : ", verdicts changed");
    lines[7].first = lines[7].first && same;
  }

  std::set<int> failing;
  for (const auto& [n, line] : lines) {
    std::cout << "criterion " << n << ": " << (line.first ? "PASS" : "FAIL") << "  " << line.second << '\n';
    if (!line.first) failing.insert(n);
  }
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (!expected.empty()) {
    std::cout << "expected to fail:";
    for (int n : expected) std::cout << ' ' << n;
    std::cout << '\n';
  }
  return contradictions == 0 && failing == expected ? 0 : 1;
}
