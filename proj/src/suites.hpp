#ifndef FLUIDLAB_SRC_SUITES_HPP_INCLUDED
#define FLUIDLAB_SRC_SUITES_HPP_INCLUDED

// Internal interface between the suite dispatcher and the remainder suites.

#include "fluidlab/inequalities.hpp"

#include <string>
#include <vector>

namespace fluidlab::detail {

bool is_remainder_suite(const std::string& name);
std::vector<InequalityReport> run_remainder_suite(const std::string& name, const VerifyOptions& opt);

// Empirical constant of dtvf at one boost.
double dtvf_constant(const VerifyOptions& opt, int r, double lambda);

}  // namespace fluidlab::detail

#endif
