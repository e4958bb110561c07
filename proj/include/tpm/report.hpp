#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpm/eval.hpp"

namespace tpm {

std::string fixed(double v, int precision);

// method,fraction,repeat,accuracy; repeat is "mean" / "std" on summary rows.
std::string format_report_csv(const ExperimentReport& r);
// Mean accuracy table: one row per seed fraction, one column per method.
std::string format_report_md(const ExperimentReport& r);
// path,mean_normalized,min_normalized,max_normalized,mean_raw,rank
std::string format_weights_csv(const ExperimentReport& r);

std::string format_sweep_csv(std::span<const SweepRow> rows);
std::string format_sweep_md(std::span<const SweepRow> rows);

std::string svg_accuracy_plot(const ExperimentReport& r);
std::string svg_sweep_plot(std::span<const SweepRow> rows, Method method = Method::tpathmine);

nlohmann::json beta_json(std::span<const MetaPath> paths, const FittedWeights& w,
                         const PipelineConfig& cfg);

// id,score_1..score_p,label,flags
std::string format_scores_csv(const HinGraph& graph, const ScoreMatrix& scores,
                              std::span<const Assignment> labels);

// Dense row-major, six decimals.
std::string format_pathsim_csv(const PathSimMatrix& m);

}  // namespace tpm
