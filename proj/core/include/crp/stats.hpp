#pragma once

#include <vector>

#include "crp/dataset.hpp"

namespace crp {

// Per-class means, the global mean, and per-class sample counts.
struct ClassStats {
  std::vector<Matrix> class_means;
  Matrix global_mean;
  std::vector<int> counts;

  int classes() const { return static_cast<int>(class_means.size()); }
};

// Means are accumulated class by class in stored sample order, so repeated
// runs on the same dataset are bit-identical.
ClassStats compute_class_stats(const Dataset& d);

// Unweighted deviations of each class mean from the global mean. The n_i
// weights of classical LDA's between-class scatter are applied by the
// baselines, not here.
std::vector<Matrix> between_deviations(const ClassStats& s);

// Deviation of every sample from its class mean, in dataset order.
std::vector<Matrix> within_deviations(const Dataset& d, const ClassStats& s);

}  // namespace crp
