#ifndef FLUIDLAB_GOLDENS_HPP_INCLUDED
#define FLUIDLAB_GOLDENS_HPP_INCLUDED

#include <string>
#include <utility>
#include <vector>

namespace fluidlab {

// Frozen constant budgets per suite variant for the default verify options
// (seed 0xE57, 20 instances). NaN when the variant has no entry.
double golden_budget(const std::string& variant);
const std::vector<std::pair<std::string, double>>& golden_table();

}  // namespace fluidlab

#endif
