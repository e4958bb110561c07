#include "tpm/propagate.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "tpm/parallel.hpp"

namespace tpm {

Solver parse_solver(std::string_view s) {
  if (s == "closed") return Solver::closed;
  if (s == "iterative") return Solver::iterative;
  if (s == "auto") return Solver::automatic;
  throw ConfigError("solver must be \"closed\", \"iterative\" or \"auto\", got \"" +
                    std::string(s) + "\"");
}

std::string to_string(Solver s) {
  switch (s) {
    case Solver::closed: return "closed";
    case Solver::iterative: return "iterative";
    case Solver::automatic: return "auto";
  }
  return "auto";
}

namespace {

// 1/sqrt(row sum), or 0 for zero-degree rows. Each row is summed over
// columns in ascending order whatever the partition.
Eigen::VectorXd inverse_sqrt_degrees(const SimMatrix& w, int threads) {
  const auto n = w.rows();
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t b, std::size_t e) {
    const auto len = static_cast<Eigen::Index>(e - b);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const float* col = w.data() + j * n + static_cast<Eigen::Index>(b);
      double* d = deg.data() + b;
      for (Eigen::Index i = 0; i < len; ++i) {
        if (col[i] < 0.0f) throw Error("normalize_sym: negative similarity entry");
        d[i] += col[i];
      }
    }
  });
  for (Eigen::Index i = 0; i < n; ++i) deg(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
  return deg;
}

float normalized_entry(float w, double inv_i, double inv_j) {
  return static_cast<float>(static_cast<double>(w) * inv_i * inv_j);
}

// out = alpha * S * f + beta * y, row-blocked over rows of out.
void scaled_product(const Eigen::MatrixXd& s, const Eigen::MatrixXd& f, double alpha,
                    const Eigen::MatrixXd& y, double beta, Eigen::MatrixXd& out, int threads) {
  const auto n = s.rows();
  const auto p = f.cols();
  out.resize(n, p);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t b, std::size_t e) {
    const auto lo = static_cast<Eigen::Index>(b);
    const auto len = static_cast<Eigen::Index>(e - b);
    for (Eigen::Index c = 0; c < p; ++c) out.col(c).segment(lo, len).setZero();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double* col = s.data() + j * n + lo;
      for (Eigen::Index c = 0; c < p; ++c) {
        const double fj = f(j, c);
        if (fj == 0.0) continue;
        double* o = out.data() + c * n + lo;
        for (Eigen::Index i = 0; i < len; ++i) o[i] += col[i] * fj;
      }
    }
    for (Eigen::Index c = 0; c < p; ++c) {
      for (Eigen::Index i = lo; i < lo + len; ++i) out(i, c) = alpha * out(i, c) + beta * y(i, c);
    }
  });
}

}  // namespace

NormalizedSim normalize_sym(const SimMatrix& w, std::string path_name, int threads) {
  if (w.rows() != w.cols()) throw Error("normalize_sym: matrix is not square");
  const auto inv = inverse_sqrt_degrees(w, threads);
  const auto n = w.rows();
  NormalizedSim out{std::move(path_name), SimMatrix(n, n)};
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t b, std::size_t e) {
    for (auto j = static_cast<Eigen::Index>(b); j < static_cast<Eigen::Index>(e); ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        out.entries(i, j) = normalized_entry(w(i, j), inv(i), inv(j));
      }
    }
  });
  return out;
}

CombinedSim combine_similarities(std::span<const NormalizedSim> sims, const BetaWeights& beta) {
  if (sims.size() != beta.normalized.size())
    throw Error("combine_similarities: " + std::to_string(sims.size()) + " matrices but " +
                std::to_string(beta.normalized.size()) + " weights");
  if (sims.empty()) throw Error("combine_similarities: no matrices");
  const auto n = sims.front().entries.rows();
  for (const auto& s : sims) {
    if (s.entries.rows() != n || s.entries.cols() != n)
      throw Error("combine_similarities: dimension mismatch");
  }
  CombinedSim out{Eigen::MatrixXd::Zero(n, n), beta.normalized};
  for (std::size_t k = 0; k < sims.size(); ++k) {
    out.entries += beta.normalized[k] * sims[k].entries.cast<double>();
  }
  return out;
}

CombinedSim combine_pathsims(std::span<const PathSimMatrix> pathsims, const BetaWeights& beta,
                             int threads) {
  if (pathsims.size() != beta.normalized.size())
    throw Error("combine_pathsims: " + std::to_string(pathsims.size()) + " matrices but " +
                std::to_string(beta.normalized.size()) + " weights");
  if (pathsims.empty()) throw Error("combine_pathsims: no matrices");
  const auto n = pathsims.front().entries.rows();
  std::vector<Eigen::VectorXd> inv;
  for (const auto& ps : pathsims) {
    if (ps.entries.rows() != n || ps.entries.cols() != n)
      throw Error("combine_pathsims: dimension mismatch");
    inv.push_back(inverse_sqrt_degrees(ps.entries, threads));
  }
  CombinedSim out{Eigen::MatrixXd::Zero(n, n), beta.normalized};
  for (std::size_t k = 0; k < pathsims.size(); ++k) {
    const double bk = beta.normalized[k];
    const auto& w = pathsims[k].entries;
    const auto& ik = inv[k];
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t b, std::size_t e) {
      for (auto j = static_cast<Eigen::Index>(b); j < static_cast<Eigen::Index>(e); ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
          out.entries(i, j) += bk * static_cast<double>(normalized_entry(w(i, j), ik(i), ik(j)));
        }
      }
    });
  }
  return out;
}

LabelMatrix make_label_matrix(Eigen::Index n, int n_classes, const SeedSet& seeds) {
  LabelMatrix y{Eigen::MatrixXd::Zero(n, n_classes)};
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const auto node = seeds.nodes[s];
    const auto cls = seeds.classes[s];
    if (node < 0 || node >= n) throw Error("seed node index out of range");
    if (cls < 1 || cls > n_classes) throw Error("seed class out of range");
    y.entries.row(node).setZero();
    y.entries(node, cls - 1) = 1.0;
  }
  return y;
}

namespace {

void check_inputs(const CombinedSim& s, const LabelMatrix& y, const PropagationConfig& cfg) {
  const double a = cfg.alpha();
  if (!(a > 0.0 && a < 1.0)) throw Error("propagation: alpha must lie in (0,1); lambda must be > 0");
  if (s.entries.rows() != s.entries.cols()) throw Error("propagation: S_com is not square");
  if (y.entries.rows() != s.entries.rows())
    throw Error("propagation: label matrix rows do not match S_com");
}

}  // namespace

ScoreMatrix propagate_closed(const CombinedSim& s, const LabelMatrix& y,
                             const PropagationConfig& cfg) {
  check_inputs(s, y, cfg);
  const double a = cfg.alpha();
  const auto n = s.entries.rows();
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - a * s.entries;
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success)
    throw Error("closed-form propagation: I - alpha*S_com is not positive definite");
  const double rcond = llt.rcond();
  if (!(rcond > 1e-12))
    throw Error("closed-form propagation: ill-conditioned system, rcond estimate " +
                std::to_string(rcond));
  return ScoreMatrix{(1.0 - a) * llt.solve(y.entries)};
}

ScoreMatrix propagate_iterative(const CombinedSim& s, const LabelMatrix& y,
                                const PropagationConfig& cfg, int threads) {
  check_inputs(s, y, cfg);
  const double a = cfg.alpha();
  Eigen::MatrixXd f = y.entries;
  Eigen::MatrixXd next;
  double residual = 0.0;
  for (long long it = 0; it < cfg.max_iter; ++it) {
    scaled_product(s.entries, f, a, y.entries, 1.0 - a, next, threads);
    residual = f.size() > 0 ? (next - f).cwiseAbs().maxCoeff() : 0.0;
    f.swap(next);
    if (residual < cfg.tol) return ScoreMatrix{std::move(f)};
  }
  throw PropagationNotConverged(ScoreMatrix{std::move(f)}, residual);
}

ScoreMatrix propagate(const CombinedSim& s, const LabelMatrix& y, const PropagationConfig& cfg,
                      int threads) {
  const bool closed = cfg.solver == Solver::closed ||
                      (cfg.solver == Solver::automatic &&
                       s.entries.rows() <= cfg.closed_form_limit);
  return closed ? propagate_closed(s, y, cfg) : propagate_iterative(s, y, cfg, threads);
}

std::vector<Assignment> assign_labels(const ScoreMatrix& f) {
  const auto& m = f.entries;
  if (m.cols() < 1) throw Error("assign_labels: score matrix has no classes");
  std::vector<Assignment> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto& a = out[static_cast<std::size_t>(i)];
    Eigen::Index best = 0;
    bool all_zero = true;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(i, c);
      if (std::isnan(v)) throw Error("assign_labels: NaN score at row " + std::to_string(i));
      if (v != 0.0) all_zero = false;
      if (v > m(i, best)) best = c;
    }
    a.label = static_cast<int>(best) + 1;
    if (all_zero) {
      a.unreachable = true;
      continue;
    }
    for (Eigen::Index c = best + 1; c < m.cols(); ++c) {
      if (m(i, c) == m(i, best)) a.tie = true;
    }
  }
  return out;
}

double spectral_radius_estimate(const Eigen::MatrixXd& s, int iterations, int threads) {
  const auto n = s.rows();
  if (n == 0) return 0.0;
  Eigen::MatrixXd v = Eigen::MatrixXd::Constant(n, 1, 1.0 / std::sqrt(static_cast<double>(n)));
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, 1);
  Eigen::MatrixXd w;
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    scaled_product(s, v, 1.0, zero, 0.0, w, threads);
    const double norm = w.norm();
    estimate = norm / v.norm();
    if (norm == 0.0) break;
    v = w / norm;
  }
  return estimate;
}

}  // namespace tpm
