#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crp/dataset.hpp"
#include "crp/stats.hpp"

namespace crp {

// One rank-k bilinear projection. After fitting, Tr(U^T U V^T V) = 1 to 1e-8.
struct ProjectionPair {
  Matrix u;  // l1 x k
  Matrix v;  // l2 x k
};

// The (D, M, N) triple of one half-step. d is the Kronecker metric of the
// fixed factor's Gram matrix, m the between-class quadratic form, n the
// within-class form plus lambda * d.
struct SideProblem {
  Matrix d;
  Matrix m;
  Matrix n;
};

enum class InitMode {
  kDiagonal,  // top k x k block of V set to delta * I, zeros elsewhere
  kRandom,    // seeded standard-normal entries
};

struct CrpConfig {
  int h = 1;            // number of compound projections
  int k = 2;            // rank of each pair
  double lambda = 0.0;  // regularizer; must be > 0 if within-scatter may be singular
  double tol = 1e-6;    // relative objective change that counts as converged
  int max_iter = 50;
  InitMode init = InitMode::kDiagonal;
  double init_delta = 1.0;
  std::uint64_t init_seed = 0;   // only used by InitMode::kRandom
  bool deflation_replay = true;  // replay training deflations when embedding
};

struct CrpModel {
  CrpConfig config;
  Index rows = 0;  // l1
  Index cols = 0;  // l2
  std::vector<ProjectionPair> pairs;
  std::vector<std::vector<double>> traces;  // per-pair objective per iteration
  std::vector<std::uint8_t> degenerate;     // pair's numerator vanished after deflation

  int h() const { return static_cast<int>(pairs.size()); }
};

// Builds the u-side problem for fixed V:
//   d = kron(V^T V, I_{l1})
//   m = sum_i g_i g_i^T,            g_i = vec((Xbar_i - Xbar) V)
//   n = sum_j w_j w_j^T + lambda d, w_j = vec((X_j - Xbar_i) V)
SideProblem assemble_u_problem(const ClassStats& stats,
                               const std::vector<Matrix>& within,
                               const Matrix& v, double lambda);

// Mirror image for fixed U: deviations enter transposed and d uses U^T U.
SideProblem assemble_v_problem(const ClassStats& stats,
                               const std::vector<Matrix>& within,
                               const Matrix& u, double lambda);

// sum_i Tr(U^T (Xbar_i - Xbar) V)^2
// over sum_j Tr(U^T (X_j - Xbar_i) V)^2 + lambda Tr(U^T U V^T V).
double objective_pair(const ProjectionPair& pair, const ClassStats& stats,
                      const std::vector<Matrix>& within, double lambda);

struct PairFit {
  ProjectionPair pair;
  std::vector<double> trace;           // objective after each full iteration
  std::vector<double> constraint_err;  // |Tr(U^T U V^T V) - 1| after each v-step
  bool degenerate = false;
};

// Alternates the u- and v-side eigenproblems until the relative objective
// change drops below cfg.tol or cfg.max_iter is reached. `pair_index` only
// seeds random initialization.
PairFit fit_pair(const ClassStats& stats, const std::vector<Matrix>& within,
                 const CrpConfig& cfg, int pair_index = 0);

// X <- X - Tr(U^T X V) * (U V^T) for every sample. Requires the pair to
// satisfy the unit constraint to 1e-6.
Dataset deflate(const Dataset& d, const ProjectionPair& pair);

struct FitDiagnostics {
  std::vector<std::vector<double>> constraint_errors;  // mirrors PairFit
  std::vector<double> deflation_residual;  // per pair: max |Tr(U^T X' V)| / ||X||_F
  std::vector<std::string> notes;
};

// Fits h pairs, deflating the training data after each one.
CrpModel fit_crp(const Dataset& d, const CrpConfig& cfg,
                 FitDiagnostics* diag = nullptr);

// Feature p is Tr(U_p^T X' V_p) with X' the input deflated by pairs 1..p-1
// (or the raw input when the model was fit with deflation_replay = false).
Vector embed(const CrpModel& model, const Matrix& x);

std::vector<Embedded> embed_dataset(const CrpModel& model, const Dataset& d);

}  // namespace crp
