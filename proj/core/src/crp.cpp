#include "crp/crp.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "crp/rng.hpp"

namespace crp {

namespace {

constexpr double kDegenerateObjective = 1e-12;

// Symmetrized Gram matrix of the columns of a.
Matrix gram(const Matrix& a) {
  Matrix g = a.transpose() * a;
  return 0.5 * (g + g.transpose());
}

bool gram_singular(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  const double largest = es.eigenvalues().maxCoeff();
  return es.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, largest);
}

SideProblem assemble_side(const std::vector<Matrix>& between_devs,
                          const std::vector<Matrix>& within,
                          const Matrix& fixed, double lambda, bool transpose) {
  if (lambda < 0.0) throw IllPosedError("assemble: lambda must be nonnegative");
  const Matrix g = gram(fixed);
  if (lambda == 0.0 && gram_singular(g)) {
    throw IllPosedError(
        "assemble: fixed factor has a singular Gram matrix and lambda = 0");
  }
  const Index free_rows = transpose ? between_devs.front().cols()
                                    : between_devs.front().rows();
  const Index order = free_rows * fixed.cols();

  SideProblem p;
  p.d = kron(g, Matrix::Identity(free_rows, free_rows));
  Matrix m = Matrix::Zero(order, order);
  Matrix n = Matrix::Zero(order, order);
  for (const Matrix& dev : between_devs) {
    const Vector gi = transpose ? vec(dev.transpose() * fixed) : vec(dev * fixed);
    m.selfadjointView<Eigen::Lower>().rankUpdate(gi);
  }
  for (const Matrix& dev : within) {
    const Vector wj = transpose ? vec(dev.transpose() * fixed) : vec(dev * fixed);
    n.selfadjointView<Eigen::Lower>().rankUpdate(wj);
  }
  p.m = m.selfadjointView<Eigen::Lower>();
  p.n = Matrix(n.selfadjointView<Eigen::Lower>()) + lambda * p.d;
  return p;
}

Matrix initial_v(Index l2, const CrpConfig& cfg, int pair_index) {
  Matrix v = Matrix::Zero(l2, cfg.k);
  if (cfg.init == InitMode::kDiagonal) {
    for (int i = 0; i < cfg.k; ++i) v(i, i) = cfg.init_delta;
  } else {
    Rng rng = Rng::keyed(cfg.init_seed, 0x56 + static_cast<std::uint64_t>(pair_index));
    for (Index j = 0; j < v.cols(); ++j) {
      for (Index i = 0; i < v.rows(); ++i) v(i, j) = rng.next_normal();
    }
  }
  return v;
}

void validate_config(const CrpConfig& cfg, Index l1, Index l2) {
  if (cfg.h < 1) throw ConfigError("crp: h must be at least 1");
  if (cfg.k < 1 || cfg.k > std::min(l1, l2)) {
    std::ostringstream msg;
    msg << "crp: k = " << cfg.k << " must lie in [1, min(l1, l2)] = [1, "
        << std::min(l1, l2) << "]";
    throw ConfigError(msg.str());
  }
  if (cfg.lambda < 0.0) throw ConfigError("crp: lambda must be nonnegative");
  if (cfg.tol <= 0.0) throw ConfigError("crp: tol must be positive");
  if (cfg.max_iter < 1) throw ConfigError("crp: max_iter must be at least 1");
}

double constraint_value(const ProjectionPair& pair) {
  return (pair.u.transpose() * pair.u * pair.v.transpose() * pair.v).trace();
}

std::vector<Matrix> pair_directions(const CrpModel& model) {
  std::vector<Matrix> dirs;
  dirs.reserve(model.pairs.size());
  for (const ProjectionPair& p : model.pairs) {
    dirs.push_back(p.u * p.v.transpose());
  }
  return dirs;
}

Vector embed_impl(const CrpModel& model, const Matrix& x,
                  const std::vector<Matrix>& dirs) {
  Vector features(model.h());
  if (!model.config.deflation_replay) {
    for (int p = 0; p < model.h(); ++p) {
      features(p) = trace_bilinear(model.pairs[p].u, x, model.pairs[p].v);
    }
    return features;
  }
  Matrix current = x;
  for (int p = 0; p < model.h(); ++p) {
    const ProjectionPair& pair = model.pairs[p];
    const double f = trace_bilinear(pair.u, current, pair.v);
    features(p) = f;
    if (p + 1 < model.h()) {
      current -= f * dirs[p];
    }
  }
  return features;
}

}  // namespace

SideProblem assemble_u_problem(const ClassStats& stats,
                               const std::vector<Matrix>& within,
                               const Matrix& v, double lambda) {
  if (v.rows() != stats.global_mean.cols()) {
    throw DimensionError("assemble_u_problem: V does not match data columns");
  }
  return assemble_side(between_deviations(stats), within, v, lambda,
                       /*transpose=*/false);
}

SideProblem assemble_v_problem(const ClassStats& stats,
                               const std::vector<Matrix>& within,
                               const Matrix& u, double lambda) {
  if (u.rows() != stats.global_mean.rows()) {
    throw DimensionError("assemble_v_problem: U does not match data rows");
  }
  return assemble_side(between_deviations(stats), within, u, lambda,
                       /*transpose=*/true);
}

double objective_pair(const ProjectionPair& pair, const ClassStats& stats,
                      const std::vector<Matrix>& within, double lambda) {
  double numerator = 0.0;
  for (const Matrix& dev : between_deviations(stats)) {
    const double t = trace_bilinear(pair.u, dev, pair.v);
    numerator += t * t;
  }
  double denominator = lambda * constraint_value(pair);
  for (const Matrix& dev : within) {
    const double t = trace_bilinear(pair.u, dev, pair.v);
    denominator += t * t;
  }
  if (denominator <= 0.0) {
    throw IllPosedError("objective_pair: nonpositive denominator");
  }
  return numerator / denominator;
}

PairFit fit_pair(const ClassStats& stats, const std::vector<Matrix>& within,
                 const CrpConfig& cfg, int pair_index) {
  const Index l1 = stats.global_mean.rows();
  const Index l2 = stats.global_mean.cols();
  validate_config(cfg, l1, l2);

  // With lambda = 0 a singular within-scatter must fail loudly instead of
  // being silently pseudo-inverted by the solver's jitter.
  const SolveOptions solve_opts{.allow_jitter = cfg.lambda > 0.0};

  PairFit out;
  Matrix v_mat = initial_v(l2, cfg, pair_index);
  Matrix u_mat;
  double prev = 0.0;
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const SideProblem up = assemble_u_problem(stats, within, v_mat, cfg.lambda);
    const GenEigResult ur =
        solve_largest_gen_eig(SymmetricProblem(up.m, up.n), solve_opts);
    u_mat = unvec(d_normalize(ur.q, up.d), l1, cfg.k);

    const SideProblem vp = assemble_v_problem(stats, within, u_mat, cfg.lambda);
    const GenEigResult vr =
        solve_largest_gen_eig(SymmetricProblem(vp.m, vp.n), solve_opts);
    v_mat = unvec(d_normalize(vr.q, vp.d), l2, cfg.k);

    out.constraint_err.push_back(
        std::abs(constraint_value({u_mat, v_mat}) - 1.0));

    const double obj = objective_pair({u_mat, v_mat}, stats, within, cfg.lambda);
    if (!std::isfinite(obj)) {
      throw NumericalError("fit_pair: objective became non-finite");
    }
    out.trace.push_back(obj);
    const double rel = std::abs(obj - prev) / std::max(std::abs(obj), 1e-30);
    prev = obj;
    if (rel < cfg.tol) break;
  }
  out.pair = {u_mat, v_mat};
  out.degenerate = out.trace.back() <= kDegenerateObjective;
  return out;
}

Dataset deflate(const Dataset& d, const ProjectionPair& pair) {
  const double violation = std::abs(constraint_value(pair) - 1.0);
  if (violation > 1e-6) {
    std::ostringstream msg;
    msg << "deflate: pair violates the unit constraint by " << violation;
    throw IllPosedError(msg.str());
  }
  const Matrix direction = pair.u * pair.v.transpose();
  Dataset out = d;
  for (LabeledMatrix& sample : out.samples) {
    const double f = trace_bilinear(pair.u, sample.data, pair.v);
    sample.data -= f * direction;
  }
  return out;
}

CrpModel fit_crp(const Dataset& d, const CrpConfig& cfg, FitDiagnostics* diag) {
  validate_dataset(d);
  if (d.empty()) throw DataError("fit_crp: empty dataset");
  if (d.classes < 2) throw DataError("fit_crp: need at least 2 classes");
  validate_config(cfg, d.rows, d.cols);
  if (diag != nullptr && cfg.h >= d.rows * d.cols) {
    std::ostringstream note;
    note << "h = " << cfg.h << " meets or exceeds l1*l2 = " << d.rows * d.cols
         << "; deflation can exhaust the sample space and later pairs may be "
            "degenerate";
    diag->notes.push_back(note.str());
    std::cerr << "crp: warning: " << note.str() << "\n";
  }

  CrpModel model;
  model.config = cfg;
  model.rows = d.rows;
  model.cols = d.cols;

  Dataset current = d;
  for (int p = 0; p < cfg.h; ++p) {
    const ClassStats stats = compute_class_stats(current);
    const std::vector<Matrix> within = within_deviations(current, stats);
    PairFit fit = fit_pair(stats, within, cfg, p);
    model.pairs.push_back(fit.pair);
    model.traces.push_back(std::move(fit.trace));
    model.degenerate.push_back(fit.degenerate ? 1 : 0);
    if (diag != nullptr) {
      diag->constraint_errors.push_back(std::move(fit.constraint_err));
    }

    std::vector<double> prior_norms;
    if (diag != nullptr) {
      prior_norms.reserve(current.size());
      for (const LabeledMatrix& s : current.samples) {
        prior_norms.push_back(s.data.norm());
      }
    }
    current = deflate(current, fit.pair);
    if (diag != nullptr) {
      double worst = 0.0;
      for (std::size_t i = 0; i < current.samples.size(); ++i) {
        const double r =
            std::abs(trace_bilinear(fit.pair.u, current.samples[i].data,
                                    fit.pair.v)) /
            std::max(prior_norms[i], 1e-30);
        worst = std::max(worst, r);
      }
      diag->deflation_residual.push_back(worst);
    }
  }
  return model;
}

Vector embed(const CrpModel& model, const Matrix& x) {
  if (x.rows() != model.rows || x.cols() != model.cols) {
    std::ostringstream msg;
    msg << "embed: input is " << x.rows() << "x" << x.cols()
        << ", model expects " << model.rows << "x" << model.cols;
    throw DimensionError(msg.str());
  }
  return embed_impl(model, x, pair_directions(model));
}

std::vector<Embedded> embed_dataset(const CrpModel& model, const Dataset& d) {
  if (!d.empty() && (d.rows != model.rows || d.cols != model.cols)) {
    throw DimensionError("embed_dataset: dataset shape does not match model");
  }
  const std::vector<Matrix> dirs = pair_directions(model);
  std::vector<Embedded> out;
  out.reserve(d.size());
  for (const LabeledMatrix& sample : d.samples) {
    out.push_back({embed_impl(model, sample.data, dirs), sample.label});
  }
  return out;
}

}  // namespace crp
