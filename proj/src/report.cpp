#include "tpm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace tpm {

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string percent_label(double fraction) { return shortest(fraction * 100.0) + "%"; }

constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Line chart, y axis 0..100 (accuracy percent).
std::string svg_lines(const std::vector<Series>& series, const std::string& x_label,
                      const std::string& title) {
  constexpr double w = 640, h = 420, left = 60, right = 150, top = 40, bottom = 50;
  double xmin = 0, xmax = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = first ? x : std::min(xmin, x);
      xmax = first ? x : std::max(xmax, x);
      first = false;
    }
  }
  if (xmax <= xmin) xmax = xmin + 1;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (w - left - right); };
  auto py = [&](double y) { return top + (100.0 - y) / 100.0 * (h - top - bottom); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << w - right << "\" y2=\""
    << py(0) << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << left << "\" y2=\"" << py(100)
    << "\" stroke=\"black\"/>\n";
  for (int y = 0; y <= 100; y += 20) {
    o << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << y
      << "</text>\n";
  }
  if (!series.empty()) {
    for (const auto& [x, y] : series.front().points) {
      o << "<text x=\"" << px(x) << "\" y=\"" << py(0) + 18 << "\" text-anchor=\"middle\">"
        << shortest(x) << "</text>\n";
    }
  }
  o << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 10
    << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  o << "<text x=\"15\" y=\"" << (top + h - bottom) / 2 << "\" transform=\"rotate(-90 15 "
    << (top + h - bottom) / 2 << ")\" text-anchor=\"middle\">accuracy (%)</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* colour = kColours[k % std::size(kColours)];
    o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[k].points) o << fixed(px(x), 1) << ',' << fixed(py(y), 1) << ' ';
    o << "\"/>\n";
    const double ly = top + 20.0 * static_cast<double>(k);
    o << "<line x1=\"" << w - right + 15 << "\" y1=\"" << ly << "\" x2=\"" << w - right + 35
      << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << w - right + 40 << "\" y=\"" << ly + 4 << "\">" << series[k].name
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::string format_report_csv(const ExperimentReport& r) {
  std::ostringstream o;
  o << "method,fraction,repeat,accuracy\n";
  for (const auto m : r.methods) {
    for (std::size_t fi = 0; fi < r.fractions.size(); ++fi) {
      for (const auto& run : r.runs) {
        if (run.method == m && run.fraction_index == fi) {
          o << to_string(m) << ',' << shortest(r.fractions[fi]) << ',' << run.repeat << ','
            << fixed(run.accuracy, 6) << '\n';
        }
      }
    }
  }
  for (const auto m : r.methods) {
    for (std::size_t fi = 0; fi < r.fractions.size(); ++fi) {
      o << to_string(m) << ',' << shortest(r.fractions[fi]) << ",mean," << fixed(r.mean(m, fi), 6)
        << '\n';
      o << to_string(m) << ',' << shortest(r.fractions[fi]) << ",std,"
        << fixed(r.stddev(m, fi), 6) << '\n';
    }
  }
  return o.str();
}

std::string format_report_md(const ExperimentReport& r) {
  std::ostringstream o;
  o << "| seeds |";
  for (const auto m : r.methods) o << ' ' << to_string(m) << " |";
  o << "\n|---|";
  for (std::size_t k = 0; k < r.methods.size(); ++k) o << "---|";
  o << '\n';
  for (std::size_t fi = 0; fi < r.fractions.size(); ++fi) {
    o << "| " << percent_label(r.fractions[fi]) << " |";
    for (const auto m : r.methods) o << ' ' << fixed(r.mean(m, fi), 2) << " |";
    o << '\n';
  }
  return o.str();
}

std::string format_weights_csv(const ExperimentReport& r) {
  const auto d = r.path_names.size();
  std::vector<double> lo(d, 1.0), hi(d, 0.0), raw(d, 0.0);
  for (const auto& w : r.weights) {
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], w.beta.normalized[k]);
      hi[k] = std::max(hi[k], w.beta.normalized[k]);
      raw[k] += w.beta.raw[k];
    }
  }
  const auto mean = r.mean_normalized_weights();
  std::vector<std::size_t> order(d);
  for (std::size_t k = 0; k < d; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mean[a] > mean[b]; });
  std::vector<std::size_t> rank(d);
  for (std::size_t k = 0; k < d; ++k) rank[order[k]] = k + 1;

  std::ostringstream o;
  o << "path,mean_normalized,min_normalized,max_normalized,mean_raw,rank\n";
  for (std::size_t k = 0; k < d; ++k) {
    const bool any = !r.weights.empty();
    o << r.path_names[k] << ',' << fixed(mean[k], 6) << ',' << fixed(any ? lo[k] : 0.0, 6) << ','
      << fixed(any ? hi[k] : 0.0, 6) << ','
      << fixed(any ? raw[k] / static_cast<double>(r.weights.size()) : 0.0, 6) << ',' << rank[k]
      << '\n';
  }
  return o.str();
}

std::string format_sweep_csv(std::span<const SweepRow> rows) {
  std::ostringstream o;
  o << "param,value,fraction,method,mean_accuracy\n";
  for (const auto& row : rows) {
    o << row.param << ',' << shortest(row.value) << ',' << shortest(row.fraction) << ','
      << to_string(row.method) << ',' << fixed(row.mean_accuracy, 6) << '\n';
  }
  return o.str();
}

std::string format_sweep_md(std::span<const SweepRow> rows) {
  // value -> fraction -> accuracy, tpathmine only
  std::map<double, std::map<double, double>> table;
  std::vector<double> fractions;
  std::string param;
  for (const auto& row : rows) {
    if (row.method != Method::tpathmine) continue;
    param = row.param;
    table[row.value][row.fraction] = row.mean_accuracy;
    if (std::find(fractions.begin(), fractions.end(), row.fraction) == fractions.end())
      fractions.push_back(row.fraction);
  }
  std::ostringstream o;
  o << "| " << (param.empty() ? "value" : param) << " |";
  for (const double f : fractions) o << ' ' << percent_label(f) << " |";
  o << "\n|---|";
  for (std::size_t k = 0; k < fractions.size(); ++k) o << "---|";
  o << '\n';
  for (const auto& [v, by_fraction] : table) {
    o << "| " << shortest(v) << " |";
    for (const double f : fractions) {
      auto it = by_fraction.find(f);
      o << ' ' << (it == by_fraction.end() ? std::string("-") : fixed(it->second, 2)) << " |";
    }
    o << '\n';
  }
  return o.str();
}

std::string svg_accuracy_plot(const ExperimentReport& r) {
  std::vector<Series> series;
  for (const auto m : r.methods) {
    Series s{to_string(m), {}};
    for (std::size_t fi = 0; fi < r.fractions.size(); ++fi) {
      s.points.emplace_back(r.fractions[fi], r.mean(m, fi));
    }
    series.push_back(std::move(s));
  }
  return svg_lines(series, "seed fraction", "Accuracy by seed fraction");
}

std::string svg_sweep_plot(std::span<const SweepRow> rows, Method method) {
  std::map<double, Series> by_fraction;
  std::string param = "value";
  for (const auto& row : rows) {
    if (row.method != method) continue;
    param = row.param;
    auto& s = by_fraction[row.fraction];
    s.name = percent_label(row.fraction) + " seeds";
    s.points.emplace_back(row.value, row.mean_accuracy);
  }
  std::vector<Series> series;
  for (auto& [f, s] : by_fraction) series.push_back(std::move(s));
  return svg_lines(series, param, to_string(method) + " accuracy over " + param);
}

nlohmann::json beta_json(std::span<const MetaPath> paths, const FittedWeights& w,
                         const PipelineConfig& cfg) {
  nlohmann::json per_path = nlohmann::json::array();
  for (std::size_t k = 0; k < paths.size(); ++k) {
    per_path.push_back({{"path", paths[k].name},
                        {"raw", w.beta.raw.at(k)},
                        {"normalized", w.beta.normalized.at(k)}});
  }
  return {{"paths", per_path},
          {"bias", w.beta.bias},
          {"kkt_residual", w.beta.kkt_residual},
          {"iterations", w.beta.iterations},
          {"n_pairs", w.n_pairs},
          {"target_scale", w.target_scale},
          {"target_mode", to_string(cfg.target_mode)},
          {"epsilon", cfg.svr.epsilon},
          {"C", cfg.svr.penalty}};
}

std::string format_scores_csv(const HinGraph& graph, const ScoreMatrix& scores,
                              std::span<const Assignment> labels) {
  const auto& ids = graph.node_ids(graph.target_type());
  const auto& f = scores.entries;
  std::ostringstream o;
  o << "id";
  for (Eigen::Index c = 0; c < f.cols(); ++c) o << ",score_" << c + 1;
  o << ",label,flags\n";
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    o << ids.at(static_cast<std::size_t>(i));
    for (Eigen::Index c = 0; c < f.cols(); ++c) o << ',' << fixed(f(i, c), 9);
    const auto& a = labels[static_cast<std::size_t>(i)];
    o << ',' << a.label << ',';
    if (a.unreachable) o << "unreachable";
    else if (a.tie) o << "tie";
    o << '\n';
  }
  return o.str();
}

std::string format_pathsim_csv(const PathSimMatrix& m) {
  std::string out;
  const auto n = m.entries.rows();
  out.reserve(static_cast<std::size_t>(n * m.entries.cols() * 9));
  char buf[32];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
      if (j) out += ',';
      const int len = std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(m.entries(i, j)));
      out.append(buf, static_cast<std::size_t>(len));
    }
    out += '\n';
  }
  return out;
}

}  // namespace tpm
