#pragma once

#include <vector>

#include "crp/dataset.hpp"
#include "crp/stats.hpp"

namespace crp {

// Classical LDA on vectorized samples.
struct LdaModel {
  Matrix w;     // (l1*l2) x dims, generalized eigenvectors, eigenvalues non-increasing
  double ridge = 0.0;
  Vector mean;  // training global mean, length l1*l2
  Index rows = 0;
  Index cols = 0;
};

// Solves the symmetric-definite pencil (S_b, S_w + ridge I) on column-stacked
// samples. With ridge = 0 a singular S_w raises SingularityError.
LdaModel fit_lda(const Dataset& d, int dims, double ridge);

Vector embed_lda(const LdaModel& m, const Matrix& x);

// Alternating two-sided LDA. One iteration is the usual choice; the iteration
// does not guarantee a monotone objective, so per-iteration values are logged
// rather than asserted.
struct TwoDldaModel {
  Matrix u;  // l1 x d1
  Matrix v;  // l2 x d2
  int iterations = 0;
  double ridge = 0.0;
  std::vector<double> objective_log;  // Tr(St_w^{-1} St_b) after each iteration
};

TwoDldaModel fit_2dlda(const Dataset& d, int d1, int d2, int iters,
                       double ridge);

// U^T x V; flatten with vec() for classification.
Matrix embed_2dlda(const TwoDldaModel& m, const Matrix& x);

// Default ridge used by the experiment runner when none is configured:
// 1e-3 * trace(S_w) / dim, evaluated on the training split.
double default_ridge(const Matrix& within_scatter);

}  // namespace crp
