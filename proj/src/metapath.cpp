#include "tpm/metapath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tpm/parallel.hpp"

namespace tpm {

bool MetaPath::palindromic() const {
  return std::equal(types.begin(), types.begin() + types.size() / 2, types.rbegin());
}

MetaPath parse_metapath(std::string_view text, const HinGraph& graph) {
  if (text.empty()) throw Error("empty meta-path");
  const auto& schema = graph.schema();
  MetaPath path;
  std::size_t start = 0;
  while (true) {
    const auto dash = text.find('-', start);
    const auto token = text.substr(start, dash == std::string_view::npos ? dash : dash - start);
    const auto type = schema.find_type(token);
    if (!type) throw Error("meta-path '" + std::string(text) + "': unknown type '" +
                           std::string(token) + "'");
    path.types.push_back(*type);
    if (dash == std::string_view::npos) break;
    start = dash + 1;
  }
  for (std::size_t k = 0; k + 1 < path.types.size(); ++k) {
    const auto a = path.types[k];
    const auto b = path.types[k + 1];
    if (!schema.has_relation(a, b))
      throw Error("no schema relation " + schema.types[a] + "→" + schema.types[b] +
                  " in meta-path '" + std::string(text) + "'");
  }
  if (path.types.size() < 3)
    throw Error("meta-path '" + std::string(text) + "' needs at least 3 types");
  if (path.types.front() != graph.target_type() || path.types.back() != graph.target_type())
    throw Error("meta-path '" + std::string(text) + "' must start and end at target type " +
                schema.target);
  path.name = std::string(text);
  return path;
}

std::vector<std::string> default_metapaths() {
  return {"U-A-U", "U-T-U", "U-A-T-A-U", "U-T-A-T-U"};
}

namespace {

using DenseColMajor = Eigen::MatrixXd;

class ChainEvaluator {
 public:
  ChainEvaluator(const HinGraph& graph, const MetaPath& path) {
    for (std::size_t k = 0; k + 1 < path.types.size(); ++k) {
      mats_.push_back(&graph.relation(path.types[k], path.types[k + 1]).matrix());
    }
    dims_.push_back(static_cast<double>(mats_.front()->rows()));
    for (const auto* m : mats_) dims_.push_back(static_cast<double>(m->cols()));
    const std::size_t n = mats_.size();
    cost_.assign(n + 1, std::vector<double>(n + 1, 0.0));
    split_.assign(n + 1, std::vector<std::size_t>(n + 1, 0));
    for (std::size_t len = 2; len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        const std::size_t j = i + len;
        cost_[i][j] = std::numeric_limits<double>::infinity();
        for (std::size_t s = i + 1; s < j; ++s) {
          const double c = cost_[i][s] + cost_[s][j] + dims_[i] * dims_[s] * dims_[j];
          if (c < cost_[i][j]) {
            cost_[i][j] = c;
            split_[i][j] = s;
          }
        }
      }
    }
  }

  std::size_t relations() const { return mats_.size(); }

  std::size_t split(std::size_t i, std::size_t j, ChainOrder order) const {
    switch (order) {
      case ChainOrder::left_to_right: return j - 1;
      case ChainOrder::right_to_left: return i + 1;
      case ChainOrder::optimal: break;
    }
    return split_[i][j];
  }

  // Product of relations [i, j).
  SparseMatrix product(std::size_t i, std::size_t j, ChainOrder order) const {
    if (j - i == 1) return *mats_[i];
    const auto s = split(i, j, order);
    SparseMatrix out = product(i, s, order) * product(s, j, order);
    out.makeCompressed();
    return out;
  }

 private:
  std::vector<const SparseMatrix*> mats_;
  std::vector<double> dims_;
  std::vector<std::vector<double>> cost_;
  std::vector<std::vector<std::size_t>> split_;
};

}  // namespace

CommutingMatrix commuting_matrix(const HinGraph& graph, const MetaPath& path, ChainOrder order,
                                 int threads) {
  if (path.types.size() < 2) throw Error("meta-path too short");
  ChainEvaluator chain(graph, path);
  const std::size_t n_rel = chain.relations();

  // M = L * R with L dense (n x k) and R sparse column-major (k x m).
  DenseColMajor left;
  Eigen::SparseMatrix<double, Eigen::ColMajor> right;
  if (n_rel == 1) {
    left = DenseColMajor(chain.product(0, 1, order));
    right = SparseMatrix(DenseColMajor::Identity(left.cols(), left.cols()).sparseView());
  } else {
    const auto s = chain.split(0, n_rel, order);
    left = DenseColMajor(chain.product(0, s, order));
    right = chain.product(s, n_rel, order);
  }
  right.makeCompressed();

  CommutingMatrix out{path, DenseColMajor::Zero(left.rows(), right.cols())};
  auto& m = out.entries;
  parallel_for(static_cast<std::size_t>(right.cols()), threads,
               [&](std::size_t begin, std::size_t end) {
                 for (auto j = static_cast<Eigen::Index>(begin); j < static_cast<Eigen::Index>(end);
                      ++j) {
                   for (decltype(right)::InnerIterator it(right, j); it; ++it) {
                     m.col(j) += it.value() * left.col(it.index());
                   }
                 }
               });
  return out;
}

PathSimMatrix pathsim(const CommutingMatrix& cm, int threads) {
  const auto& m = cm.entries;
  if (m.rows() != m.cols()) throw Error("pathsim requires a square commuting matrix");
  const auto n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double a = m(i, j);
      const double b = m(j, i);
      if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}))
        throw Error("pathsim requires palindromic path: commuting matrix of '" + cm.path.name +
                    "' is not symmetric");
    }
  }
  const Eigen::VectorXd diag = m.diagonal();
  PathSimMatrix out{cm.path, SimMatrix(n, n)};
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t begin, std::size_t end) {
    for (auto j = static_cast<Eigen::Index>(begin); j < static_cast<Eigen::Index>(end); ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double denom = diag(i) + diag(j);
        out.entries(i, j) = denom > 0.0 ? static_cast<float>(2.0 * m(i, j) / denom) : 0.0f;
      }
    }
  });
  return out;
}

}  // namespace tpm
