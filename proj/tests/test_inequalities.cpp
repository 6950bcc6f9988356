#include "fluidlab/goldens.hpp"
#include "fluidlab/fields.hpp"
#include "fluidlab/inequalities.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace fluidlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

VerifyOptions small(int instances = 4) {
  VerifyOptions o;
  o.instances = instances;
  return o;
}

}  // namespace

TEST_CASE("symmetric and antisymmetric parts") {
  std::vector<double> beta(27);
  for (std::size_t i = 0; i < beta.size(); ++i) beta[i] = std::sin(1.0 + 3.0 * i);
  // Over two slots every tensor splits exactly.
  const SymDecomposition d3 = sym_decompose(beta, 3, 2);
  for (std::size_t i = 0; i < beta.size(); ++i) CHECK(d3.S[i] + d3.A[i] == doctest::Approx(beta[i]).epsilon(1e-14));
  // One slot: both averages are the identity.
  const SymDecomposition d1 = sym_decompose(beta, 3, 1);
  CHECK(d1.S == beta);
  CHECK(d1.A == beta);
  // Three slots of a flat third derivative: beta^S = beta and beta^A = 0.
  const AnalyticScalar f = AnalyticScalar::polynomial({{1.0, {3, 1, 0}}, {-2.0, {1, 1, 2}}, {0.5, {0, 4, 0}}});
  std::vector<double> D[4];
  f.jet({0.3, -0.2, 0.7}, 3, D);
  std::vector<double> b4(81);
  for (std::size_t i = 0; i < 27; ++i)
    for (std::size_t k = 0; k < 3; ++k) b4[3 * i + k] = D[3][i] * (k + 1.0);
  const SymDecomposition d4 = sym_decompose(b4, 4, 3);
  for (std::size_t i = 0; i < b4.size(); ++i) {
    CHECK(d4.S[i] == doctest::Approx(b4[i]).epsilon(1e-12));
    CHECK(std::abs(d4.A[i]) < 1e-12);
  }
  // Rank-2 oracle: S_ij = (b_ij + b_ji) / 2.
  std::vector<double> b2(9);
  for (int i = 0; i < 9; ++i) b2[i] = i * i - 3.0;
  const SymDecomposition d = sym_decompose(b2, 2, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(d.S[3 * i + j] == doctest::Approx(0.5 * (b2[3 * i + j] + b2[3 * j + i])));
      CHECK(d.A[3 * i + j] == doctest::Approx(-d.A[3 * j + i]));
    }
  CHECK_THROWS(sym_decompose(b2, 2, 3));
  CHECK_THROWS(sym_decompose(beta, 2, 1));
}

TEST_CASE("poincare ratios of 1 - r^2") {
  // ||q||^2 = 32 pi / 105, ||grad q||^2 = 16 pi / 5, lap q = -6 on the unit ball.
  const AnalyticScalar q = AnalyticScalar::polynomial({{1.0, {0, 0, 0}}, {-1.0, {2, 0, 0}}, {-1.0, {0, 2, 0}}, {-1.0, {0, 0, 2}}});
  const PoincareCheck p = poincare_check(q, 1.0);
  const double vol = 4 * kPi / 3;
  const double nq = std::sqrt(32 * kPi / 105), ng = std::sqrt(16 * kPi / 5), nl = 6 * std::sqrt(vol);
  CHECK(p.volume == doctest::Approx(vol).epsilon(1e-12));
  CHECK(p.ratio_poin == doctest::Approx(nq / (std::cbrt(vol) * ng)).epsilon(1e-8));
  CHECK(p.ratio_poin2 == doctest::Approx(ng / (std::pow(vol, 1.0 / 6.0) * nl)).epsilon(1e-8));
}

TEST_CASE("theta recovery from a defining function") {
  Rng rng(3);
  const MarginCheck m = projtheta_margin(dirichlet_scalar(rng, 1.0), 1.0);
  CHECK(m.ok);
  CHECK(m.delta > 0.0);
  CHECK(m.min_dn >= m.delta);
  const ThetaRecovery t = projtheta_reverse(
      [](const Vec3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 2.25; }, 1.5, {0.1, 0.05});
  CHECK(t.exact == doctest::Approx(std::sqrt(2.0) * std::sqrt(4 * kPi)));
  for (double g : t.gap) CHECK(g < 1e-6);
  for (double v : t.recovered) CHECK(v == doctest::Approx(t.exact).epsilon(1e-6));
}

TEST_CASE("constant sweeps behave monotonically") {
  const DeltaSweep d = ellbdyfn2_delta_sweep(small(3), 2, {1.0, 0.5, 0.25, 0.125});
  REQUIRE(d.budget.size() == 4);
  for (std::size_t i = 1; i < d.budget.size(); ++i) CHECK(d.budget[i] >= d.budget[i - 1]);
  // Monotone for the full reference family; small subfamilies can wobble by a few percent.
  const LambdaSweep l = dtvf_lambda_sweep(VerifyOptions{}, 1, {0.4, 0.1, 0.01});
  REQUIRE(l.constant.size() == 3);
  for (std::size_t i = 1; i < l.constant.size(); ++i) CHECK(l.constant[i] <= l.constant[i - 1] * (1 + 1e-9));
  CHECK(std::isfinite(l.constant.back()));
}

TEST_CASE("suite names and groups") {
  const std::vector<std::string>& all = suite_names();
  CHECK(std::set<std::string>(all.begin(), all.end()).size() == all.size());
  CHECK(expand_suite("all") == all);
  std::size_t total = 0;
  for (const char* g : {"identity", "elliptic", "projection", "functional", "remainder"}) {
    CHECK(is_suite_or_group(g));
    total += expand_suite(g).size();
  }
  CHECK(total == all.size());
  CHECK(expand_suite("poin") == std::vector<std::string>{"poin"});
  CHECK_FALSE(is_suite_or_group("nosuch"));
  CHECK_THROWS_AS(expand_suite("nosuch"), ConfigError);
  VerifyOptions bad;
  bad.instances = 0;
  CHECK_THROWS_AS(run_suite("poin", bad), ConfigError);
}

TEST_CASE("runs are deterministic in the seed") {
  const auto a = run_suite("poin", small());
  const auto b = run_suite("poin", small());
  VerifyOptions other = small();
  other.seed = 12345;
  const auto c = run_suite("poin", other);
  REQUIRE(a.size() == b.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].instances.size(); ++j) {
      CHECK(a[i].instances[j].lhs == b[i].instances[j].lhs);
      CHECK(a[i].instances[j].rhs == b[i].instances[j].rhs);
      differs = differs || a[i].instances[j].lhs != c[i].instances[j].lhs;
    }
  CHECK(differs);
}

TEST_CASE("finalize handles degenerate and failing instances") {
  InequalityReport r;
  r.name = "synthetic";
  r.instances = {{0, 1.0, 2.0}, {1, 3.0, 1.0}, {2, 0.0, 0.0}, {3, 1.0, 0.0}};
  finalize_report(r, false);
  CHECK(r.empirical_constant == doctest::Approx(3.0));
  CHECK(r.budget == doctest::Approx(30.0));
  CHECK(r.degenerate == std::vector<int>{2, 3});
  CHECK(r.instances[2].pass);
  CHECK_FALSE(r.instances[3].pass);
  CHECK_FALSE(r.pass);
  r.instances.pop_back();
  finalize_report(r, false);
  CHECK(r.pass);
  // Without a frozen golden the variant cannot pass.
  finalize_report(r, true);
  CHECK(std::isnan(r.budget));
  CHECK_FALSE(r.pass);
}

TEST_CASE("verify csv") {
  const auto reps = run_suite("ellbdyfn1", small(2));
  std::ostringstream os;
  write_verify_csv(os, reps);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "suite,instance,lhs,rhs,ratio,pass,order");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.rfind("\"ellbdyfn1[r=", 0) == 0);
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  std::size_t expect = 0;
  for (const auto& r : reps) expect += r.instances.size();
  CHECK(rows == static_cast<int>(expect));
}

TEST_CASE("golden budgets") {
  const auto& table = golden_table();
  CHECK(table.size() >= 30);
  std::set<std::string> names;
  for (const auto& [name, b] : table) {
    CHECK(std::isfinite(b));
    CHECK(b > 0.0);
    names.insert(name);
    CHECK(golden_budget(name) == b);
  }
  CHECK(names.size() == table.size());
  CHECK(std::isnan(golden_budget("hodge")));
  // Every inequality variant of a cheap suite has a frozen entry and passes.
  for (const char* s : {"poin", "poin2", "ellpw", "ellbdyfn1"}) {
    for (const InequalityReport& r : run_suite(s, VerifyOptions{})) {
      CHECK(std::isfinite(golden_budget(r.name)));
      CHECK(r.pass);
    }
  }
}
