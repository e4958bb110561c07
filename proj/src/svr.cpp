#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tpm/weights.hpp"

namespace tpm {
namespace {

constexpr double kTau = 1e-12;

// Dual of the linear epsilon-SVR over 2m variables: t < m carries alpha_t
// (y = +1), t >= m carries alpha*_t (y = -1). With a linear kernel the
// gradient is G_t = y_t (x_t . w) + p_t, so only w needs to be maintained.
class SmoSolver {
 public:
  SmoSolver(std::span<const TrainingPair> pairs, const SvrConfig& cfg)
      : m_(pairs.size()), d_(pairs.front().features.size()), cfg_(cfg) {
    x_.reserve(m_ * d_);
    z_.reserve(m_);
    for (const auto& p : pairs) {
      if (p.features.size() != d_) throw Error("SVR: inconsistent feature dimension");
      x_.insert(x_.end(), p.features.begin(), p.features.end());
      z_.push_back(p.target);
    }
    kdiag_.resize(m_);
    for (std::size_t s = 0; s < m_; ++s) kdiag_[s] = dot(s, s);
    alpha_.assign(2 * m_, 0.0);
    grad_.assign(2 * m_, 0.0);
    w_.assign(d_, 0.0);
  }

  BetaWeights solve() {
    long long iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    while (true) {
      update_gradient();
      const auto [i, j, g] = select_working_set();
      gap = std::max(g, 0.0);
      if (i < 0 || j < 0 || g < cfg_.tolerance) break;
      if (iter >= cfg_.max_iter) throw SvrNotConverged(result(iter, gap), gap);
      take_step(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      ++iter;
    }
    return result(iter, gap);
  }

 private:
  double y(std::size_t t) const { return t < m_ ? 1.0 : -1.0; }
  std::size_t sample(std::size_t t) const { return t < m_ ? t : t - m_; }
  const double* row(std::size_t s) const { return x_.data() + s * d_; }

  double dot(std::size_t a, std::size_t b) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < d_; ++k) acc += row(a)[k] * row(b)[k];
    return acc;
  }

  bool below_upper(std::size_t t) const { return alpha_[t] < cfg_.penalty; }
  bool above_lower(std::size_t t) const { return alpha_[t] > 0.0; }

  void update_gradient() {
    for (std::size_t s = 0; s < m_; ++s) {
      double u = 0.0;
      for (std::size_t k = 0; k < d_; ++k) u += row(s)[k] * w_[k];
      grad_[s] = u + cfg_.epsilon - z_[s];
      grad_[s + m_] = -u + cfg_.epsilon + z_[s];
    }
  }

  struct Selection {
    long long i;
    long long j;
    double gap;
  };

  Selection select_working_set() const {
    double gmax = -std::numeric_limits<double>::infinity();
    long long i = -1;
    for (std::size_t t = 0; t < 2 * m_; ++t) {
      if (y(t) > 0) {
        if (below_upper(t) && -grad_[t] > gmax) {
          gmax = -grad_[t];
          i = static_cast<long long>(t);
        }
      } else if (above_lower(t) && grad_[t] > gmax) {
        gmax = grad_[t];
        i = static_cast<long long>(t);
      }
    }
    if (i < 0) return {-1, -1, 0.0};
    const auto ii = static_cast<std::size_t>(i);
    const auto si = sample(ii);

    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    long long j = -1;
    for (std::size_t t = 0; t < 2 * m_; ++t) {
      double diff;
      if (y(t) > 0) {
        if (!above_lower(t)) continue;
        gmax2 = std::max(gmax2, grad_[t]);
        diff = gmax + grad_[t];
      } else {
        if (!below_upper(t)) continue;
        gmax2 = std::max(gmax2, -grad_[t]);
        diff = gmax - grad_[t];
      }
      if (diff > 0.0) {
        const auto st = sample(t);
        double quad = kdiag_[si] + kdiag_[st] - 2.0 * dot(si, st);
        if (quad <= 0.0) quad = kTau;
        const double obj = -(diff * diff) / quad;
        if (obj < best) {
          best = obj;
          j = static_cast<long long>(t);
        }
      }
    }
    return {i, j, gmax + gmax2};
  }

  void take_step(std::size_t i, std::size_t j) {
    const double c = cfg_.penalty;
    const auto si = sample(i);
    const auto sj = sample(j);
    const double qij = y(i) * y(j) * dot(si, sj);
    const double old_i = alpha_[i];
    const double old_j = alpha_[j];
    double& ai = alpha_[i];
    double& aj = alpha_[j];
    if (y(i) != y(j)) {
      double quad = kdiag_[si] + kdiag_[sj] + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > 0.0) {
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else if (aj > c) {
        aj = c;
        ai = c + diff;
      }
    } else {
      double quad = kdiag_[si] + kdiag_[sj] - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > c) {
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }
    const double di = y(i) * (ai - old_i);
    const double dj = y(j) * (aj - old_j);
    for (std::size_t k = 0; k < d_; ++k) w_[k] += di * row(si)[k] + dj * row(sj)[k];
  }

  // Bias from free variables, or the midpoint of the feasible interval.
  double rho() const {
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < 2 * m_; ++t) {
      const double yg = y(t) * grad_[t];
      if (!below_upper(t)) {
        if (y(t) < 0) ub = std::min(ub, yg);
        else lb = std::max(lb, yg);
      } else if (!above_lower(t)) {
        if (y(t) > 0) ub = std::min(ub, yg);
        else lb = std::max(lb, yg);
      } else {
        ++n_free;
        sum_free += yg;
      }
    }
    return n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  }

  BetaWeights result(long long iter, double gap) const {
    BetaWeights b;
    b.raw = w_;
    b.bias = -rho();
    b.normalized = normalize_weights(b.raw);
    b.kkt_residual = gap;
    b.iterations = iter;
    return b;
  }

  std::size_t m_;
  std::size_t d_;
  SvrConfig cfg_;
  std::vector<double> x_;
  std::vector<double> z_;
  std::vector<double> kdiag_;
  std::vector<double> alpha_;
  std::vector<double> grad_;
  std::vector<double> w_;
};

}  // namespace

std::vector<double> normalize_weights(std::span<const double> raw) {
  std::vector<double> out(raw.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    out[k] = std::max(raw[k], 0.0);
    total += out[k];
  }
  if (out.empty()) return out;
  if (total > 0.0) {
    for (auto& v : out) v /= total;
  } else {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
  }
  return out;
}

BetaWeights fit_svr(std::span<const TrainingPair> pairs, const SvrConfig& cfg) {
  if (pairs.empty()) throw Error("SVR: no training pairs");
  if (pairs.front().features.empty()) throw Error("SVR: zero-dimensional features");
  if (!(cfg.epsilon >= 0.0)) throw Error("SVR: epsilon must be >= 0");
  if (!(cfg.penalty > 0.0)) throw Error("SVR: C must be > 0");
  if (!(cfg.tolerance > 0.0)) throw Error("SVR: tolerance must be > 0");
  return SmoSolver(pairs, cfg).solve();
}

}  // namespace tpm
