#pragma once

#include <Eigen/Dense>

#include "crp/errors.hpp"

namespace crp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Kronecker product: block (i, j) of the result is a(i, j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

// Column-stacking vectorization, so that vec(AXB) = kron(B^T, A) vec(X).
Vector vec(const Matrix& m);

// Inverse of vec; throws DimensionError if v.size() != rows * cols.
Matrix unvec(const Vector& v, Index rows, Index cols);

// Tr(U^T X V) in O(l1 l2 k), without forming any Kronecker product.
double trace_bilinear(const Matrix& u, const Matrix& x, const Matrix& v);

// Symmetric-definite pencil (m, n): m PSD, n PD, same order. Construction
// symmetrizes both operands and rejects inputs that are not symmetric to
// 1e-10 relative.
struct SymmetricProblem {
  Matrix m;
  Matrix n;

  SymmetricProblem(Matrix m_in, Matrix n_in);
};

struct SolveOptions {
  // When the Cholesky factorization of n fails, retry with escalating
  // diagonal jitter before giving up. Callers that must treat a singular n
  // as a hard error (e.g. lambda = 0 fits) disable this.
  bool allow_jitter = true;
};

struct GenEigResult {
  Vector q;       // unit Euclidean norm, deterministic sign
  double lambda;  // largest generalized eigenvalue, clamped at 0
};

// Dominant eigenpair of the pencil (m, n), i.e. of n^{-1} m, computed by
// Cholesky whitening: n = L L^T, symmetric eigensolve of L^{-1} m L^{-T},
// eigenvectors mapped back through L^{-T}.
GenEigResult solve_largest_gen_eig(const SymmetricProblem& p,
                                   const SolveOptions& opts = {});

struct GenEigBasis {
  Matrix vectors;  // one unit, sign-fixed generalized eigenvector per column
  Vector values;   // non-increasing
};

// Top `count` generalized eigenpairs, same method as solve_largest_gen_eig.
GenEigBasis solve_gen_eig_desc(const SymmetricProblem& p, Index count,
                               const SolveOptions& opts = {});

// Scales q so that the result w satisfies w^T d w = 1 for SPD d.
Vector d_normalize(const Vector& q, const Matrix& d);

}  // namespace crp
