#include "crp/kronlin.hpp"

#include <cmath>
#include <sstream>

namespace crp {

namespace {

void require_finite(const Matrix& m, const char* name) {
  if (!m.allFinite()) {
    throw NumericalError(std::string(name) + " contains non-finite entries");
  }
}

int argmax_abs(const Vector& q) {
  int best = 0;
  double best_abs = std::abs(q(0));
  for (Index i = 1; i < q.size(); ++i) {
    const double a = std::abs(q(i));
    if (a > best_abs) {
      best = static_cast<int>(i);
      best_abs = a;
    }
  }
  return best;
}

// Largest-magnitude component made positive; first such component wins ties.
void fix_sign(Vector& q) {
  if (q(argmax_abs(q)) < 0.0) q = -q;
}

Eigen::LLT<Matrix> factorize_spd(const Matrix& n_mat, const SolveOptions& opts) {
  Eigen::LLT<Matrix> llt(n_mat);
  if (llt.info() == Eigen::Success) return llt;
  if (!opts.allow_jitter) {
    throw SingularityError("matrix is not positive definite");
  }
  const Index n = n_mat.rows();
  double jitter = 1e-12 * n_mat.trace() / static_cast<double>(n);
  for (int attempt = 0; attempt < 3; ++attempt) {
    llt.compute(n_mat + jitter * Matrix::Identity(n, n));
    if (llt.info() == Eigen::Success) return llt;
    jitter *= 10.0;
  }
  throw SingularityError("matrix is not positive definite even after jitter");
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  require_finite(a, "kron: a");
  require_finite(b, "kron: b");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vec(const Matrix& m) {
  // Eigen stores column-major, so the storage order is already the
  // column-stacking order.
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (rows < 1 || cols < 1 || v.size() != rows * cols) {
    std::ostringstream msg;
    msg << "unvec: vector of length " << v.size() << " cannot fill a " << rows
        << "x" << cols << " matrix";
    throw DimensionError(msg.str());
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

double trace_bilinear(const Matrix& u, const Matrix& x, const Matrix& v) {
  if (u.rows() != x.rows() || v.rows() != x.cols() || u.cols() != v.cols()) {
    std::ostringstream msg;
    msg << "trace_bilinear: non-conformable shapes U " << u.rows() << "x"
        << u.cols() << ", X " << x.rows() << "x" << x.cols() << ", V "
        << v.rows() << "x" << v.cols();
    throw DimensionError(msg.str());
  }
  // Tr(U^T X V) = sum_{ij} U_ij (XV)_ij
  return (u.array() * (x * v).array()).sum();
}

SymmetricProblem::SymmetricProblem(Matrix m_in, Matrix n_in)
    : m(std::move(m_in)), n(std::move(n_in)) {
  if (m.rows() != m.cols() || n.rows() != n.cols() || m.rows() != n.rows()) {
    throw DimensionError("SymmetricProblem: operands must be square and of equal order");
  }
  require_finite(m, "SymmetricProblem: m");
  require_finite(n, "SymmetricProblem: n");
  const double m_asym = (m - m.transpose()).norm();
  const double n_asym = (n - n.transpose()).norm();
  if (m_asym > 1e-10 * std::max(1.0, m.norm()) ||
      n_asym > 1e-10 * std::max(1.0, n.norm())) {
    throw NumericalError("SymmetricProblem: operand is not symmetric");
  }
  m = 0.5 * (m + m.transpose()).eval();
  n = 0.5 * (n + n.transpose()).eval();
}

GenEigBasis solve_gen_eig_desc(const SymmetricProblem& p, Index count,
                               const SolveOptions& opts) {
  const Index n = p.n.rows();
  if (count < 1 || count > n) {
    throw DimensionError("solve_gen_eig_desc: count out of range");
  }
  const Eigen::LLT<Matrix> llt = factorize_spd(p.n, opts);
  const Matrix l = llt.matrixL();

  // w = L^{-1} m L^{-T}, kept symmetric explicitly.
  Matrix w = l.triangularView<Eigen::Lower>().solve(p.m);
  w = l.triangularView<Eigen::Lower>().solve(w.transpose().eval());
  w = (0.5 * (w + w.transpose())).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(w);
  if (es.info() != Eigen::Success) {
    throw NumericalError("symmetric eigendecomposition failed");
  }

  GenEigBasis out;
  out.vectors.resize(n, count);
  out.values.resize(count);
  for (Index j = 0; j < count; ++j) {
    const Index src = n - 1 - j;  // eigenvalues come back ascending
    Vector q = l.transpose().triangularView<Eigen::Upper>().solve(
        es.eigenvectors().col(src));
    q.normalize();
    fix_sign(q);
    out.vectors.col(j) = q;
    out.values(j) = std::max(es.eigenvalues()(src), 0.0);
  }
  return out;
}

GenEigResult solve_largest_gen_eig(const SymmetricProblem& p,
                                   const SolveOptions& opts) {
  const GenEigBasis basis = solve_gen_eig_desc(p, 1, opts);
  return {basis.vectors.col(0), basis.values(0)};
}

Vector d_normalize(const Vector& q, const Matrix& d) {
  if (d.rows() != d.cols() || d.rows() != q.size()) {
    throw DimensionError("d_normalize: metric and vector orders differ");
  }
  const double s = q.dot(d * q);
  const double scale =
      q.squaredNorm() * std::abs(d.trace()) / static_cast<double>(d.rows());
  if (!std::isfinite(s) || s <= 0.0 || s <= 1e-14 * scale) {
    throw IllPosedError("d_normalize: direction is degenerate under the metric");
  }
  return q / std::sqrt(s);
}

}  // namespace crp
