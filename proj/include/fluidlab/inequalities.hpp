#ifndef FLUIDLAB_INEQUALITIES_HPP_INCLUDED
#define FLUIDLAB_INEQUALITIES_HPP_INCLUDED

#include "fluidlab/analytic.hpp"
#include "fluidlab/boundary.hpp"

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace fluidlab {

struct InequalityInstance {
  int index = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = false;
  bool degenerate = false;  // rhs vanishes; must then have lhs ~ 0
  bool skipped = false;     // precondition failed
  std::string note;
};

struct InequalityReport {
  std::string name;   // variant, e.g. "ellbdyfn1[r=2]"
  std::string suite;  // base suite
  bool identity = false;
  std::vector<InequalityInstance> instances;
  double empirical_constant = 0.0;  // max ratio over nondegenerate instances
  double budget = std::numeric_limits<double>::quiet_NaN();
  double order = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
  std::vector<int> degenerate;
  std::vector<std::string> notes;
};

struct VerifyOptions {
  std::uint64_t seed = 0xE57;
  int instances = 20;
  double R = 1.0;
  int resolution = 1;        // quadrature refinement factor
  double lattice_h = 0.05;   // identity suites on the Cartesian lattice
  int radial_n = 200;        // identity suites from the radial solver
  double lambda = 0.1;       // boost of the test velocity for the remainder suites
  double trap_k = 0.1;
  bool use_goldens = true;   // false: budget = 10 x empirical constant (used to freeze)
};

// Base suite names in a fixed order, and the groups accepted by --suite.
const std::vector<std::string>& suite_names();
bool is_suite_or_group(const std::string& name);
std::vector<std::string> expand_suite(const std::string& name);

std::vector<InequalityReport> run_suite(const std::string& name, const VerifyOptions& opt = {});
// Fills ratio / pass / empirical constant / budget from the instances.
void finalize_report(InequalityReport& rep, bool use_goldens);

// suite,instance,lhs,rhs,ratio,pass,order
void write_verify_csv(std::ostream& os, const std::vector<InequalityReport>& reports);

// Symmetric and antisymmetric parts over the first r slots of a rank-n
// Euclidean tensor with 3^n components, slot-major.
struct SymDecomposition {
  std::vector<double> S, A;
};
SymDecomposition sym_decompose(const std::vector<double>& beta, int rank, int r);

struct PoincareCheck {
  double q_l2 = 0.0, grad_l2 = 0.0, lap_l2 = 0.0, volume = 0.0;
  double ratio_poin = 0.0;   // ||q|| / (Vol^{1/3} ||grad q||)
  double ratio_poin2 = 0.0;  // ||grad q|| / (Vol^{1/6} ||lap q||)
};
PoincareCheck poincare_check(const AnalyticScalar& q, double R, int resolution = 1);

// Boundary margin for recovering theta from Pi D^2 q: delta is the largest
// value with |D_N q| >= delta and |D_N q| >= 2 delta sup |D_N q|.
struct MarginCheck {
  double min_dn = 0.0, max_dn = 0.0, delta = 0.0;
  bool ok = false;
};
MarginCheck projtheta_margin(const AnalyticScalar& q, double R, int resolution = 1);

// Recover ||theta||_{L2(sphere)} from lattice values of Pi D^2 q / D_N q for q
// with q = 0 on the sphere, at each lattice spacing.
struct ThetaRecovery {
  std::vector<double> h, recovered, gap;
  double exact = 0.0;  // sqrt(2) sqrt(4 pi), independent of R
  double order = 0.0;
};
ThetaRecovery projtheta_reverse(const Scalar3Fn& q, double R, const std::vector<double>& hs);

// Smallest C2(delta) with lhs <= delta A + C2 B across the family.
struct DeltaSweep {
  std::vector<double> delta, budget;
};
DeltaSweep ellbdyfn2_delta_sweep(const VerifyOptions& opt, int r, const std::vector<double>& deltas);

// Empirical constant of the time-derivative bound for decreasing boosts.
struct LambdaSweep {
  std::vector<double> lambda, constant;
};
LambdaSweep dtvf_lambda_sweep(const VerifyOptions& opt, int r, const std::vector<double>& lambdas);

}  // namespace fluidlab

#endif
