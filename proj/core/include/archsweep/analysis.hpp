#pragma once

#include <span>
#include <string>
#include <vector>

#include "archsweep/stats.hpp"
#include "archsweep/sweep.hpp"

namespace archsweep {

struct AnalysisConfig {
  int top_m = 40;
  // mean_neurons leaves the regression when its correlation with n_neurons
  // exceeds this in magnitude.
  double collinearity_threshold = 0.9;
};

struct AnalysisReport {
  int population_size = 0;  // every architecture, diverged included
  int sample_size = 0;      // the top_m ranked records
  int diverged_count = 0;

  std::vector<ProportionTestRow> layers;
  std::vector<ProportionTestRow> inflections;
  std::vector<ProportionTestRow> neurons;

  // Features plus sse over the non-diverged records.
  CorrelationMatrix correlation;

  bool dropped_mean_neurons = false;
  RegressionReport ols_linear;     // sse on the architecture features
  RegressionReport ols_quadratic;  // sse on n_neurons and its square
};

AnalysisReport analyze(std::span<const SweepCsvRow> rows, const AnalysisConfig& cfg);

// proportions_layers.csv, proportions_inflections.csv, proportions_neurons.csv,
// correlation.csv, ols.csv, ols_quadratic.csv, summary.json
void write_analysis_csvs(const AnalysisReport& report, const std::string& out_dir);

std::string analysis_to_json(const AnalysisReport& report);

// Markdown digest of a directory produced by write_analysis_csvs.
std::string render_report_markdown(const std::string& analysis_dir);

}  // namespace archsweep
