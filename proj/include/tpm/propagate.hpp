#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tpm/error.hpp"
#include "tpm/metapath.hpp"
#include "tpm/weights.hpp"

namespace tpm {

// D^{-1/2} W D^{-1/2} for one meta-path similarity.
struct NormalizedSim {
  std::string path_name;
  SimMatrix entries;
};

struct CombinedSim {
  Eigen::MatrixXd entries;
  std::vector<double> beta;
};

struct LabelMatrix {
  Eigen::MatrixXd entries;  // n x p, one-hot rows for seeds
};

struct ScoreMatrix {
  Eigen::MatrixXd entries;  // n x p
};

enum class Solver { closed, iterative, automatic };

Solver parse_solver(std::string_view s);
std::string to_string(Solver s);

struct PropagationConfig {
  double lambda = 2.0;
  double tol = 1e-9;
  long long max_iter = 1000;
  Solver solver = Solver::automatic;
  // Largest n solved by Cholesky under Solver::automatic.
  Eigen::Index closed_form_limit = 5000;

  double alpha() const { return 1.0 / (1.0 + lambda); }
};

class PropagationNotConverged : public Error {
 public:
  PropagationNotConverged(ScoreMatrix last, double residual)
      : Error("label propagation did not converge: residual " + std::to_string(residual)),
        last_(std::move(last)),
        residual_(residual) {}
  const ScoreMatrix& last() const { return last_; }
  double residual() const { return residual_; }

 private:
  ScoreMatrix last_;
  double residual_;
};

// S(i,j) = W(i,j) / sqrt(D_ii D_jj) with D_ii the row sums of W. Zero-degree
// rows and columns stay zero. Throws on negative entries.
NormalizedSim normalize_sym(const SimMatrix& w, std::string path_name = {}, int threads = 1);

// Entrywise sum_k beta.normalized[k] * sims[k].
CombinedSim combine_similarities(std::span<const NormalizedSim> sims, const BetaWeights& beta);

// Same result as normalize_sym on every PathSim followed by
// combine_similarities, in one pass and without the intermediate copies.
CombinedSim combine_pathsims(std::span<const PathSimMatrix> pathsims, const BetaWeights& beta,
                             int threads = 1);

LabelMatrix make_label_matrix(Eigen::Index n, int n_classes, const SeedSet& seeds);

// F = (1 - alpha) (I - alpha S)^{-1} Y via a Cholesky solve.
ScoreMatrix propagate_closed(const CombinedSim& s, const LabelMatrix& y,
                             const PropagationConfig& cfg);

// F_{t+1} = alpha S F_t + (1 - alpha) Y from F_0 = Y until the max-norm step
// drops below cfg.tol.
ScoreMatrix propagate_iterative(const CombinedSim& s, const LabelMatrix& y,
                                const PropagationConfig& cfg, int threads = 1);

// Dispatches on cfg.solver; automatic picks closed form up to
// cfg.closed_form_limit nodes.
ScoreMatrix propagate(const CombinedSim& s, const LabelMatrix& y, const PropagationConfig& cfg,
                      int threads = 1);

struct Assignment {
  int label = 1;  // 1-based
  bool tie = false;
  bool unreachable = false;
};

// Smallest class index attaining each row maximum; all-zero rows get class 1
// and the unreachable flag. Throws on NaN.
std::vector<Assignment> assign_labels(const ScoreMatrix& f);

// Power-iteration estimate of the spectral radius of a symmetric matrix,
// |S v| / |v| after `iterations` steps from the all-ones vector.
double spectral_radius_estimate(const Eigen::MatrixXd& s, int iterations = 50, int threads = 1);

}  // namespace tpm
