#include "archsweep/analysis.hpp"

#include <cmath>
#include <initializer_list>

#include "archsweep/csvio.hpp"
#include "archsweep/error.hpp"
#include "json.hpp"

namespace archsweep {

AnalysisReport analyze(std::span<const SweepCsvRow> rows, const AnalysisConfig& cfg) {
  if (rows.empty()) raise(errc::empty_input, "no sweep rows");
  if (cfg.top_m < 1) raise(errc::usage, "top_m must be >= 1, got " + std::to_string(cfg.top_m));
  if (!(cfg.collinearity_threshold >= 0.0)) {
    raise(errc::usage, "collinearity_threshold must be >= 0");
  }

  AnalysisReport rep;
  rep.population_size = static_cast<int>(rows.size());

  std::vector<int> pop_layers, pop_inflections, pop_neurons;
  pop_layers.reserve(rows.size());
  pop_inflections.reserve(rows.size());
  pop_neurons.reserve(rows.size());
  int ranked_count = 0;
  for (const SweepCsvRow& row : rows) {
    pop_layers.push_back(row.features.n_layers);
    pop_inflections.push_back(row.features.n_inflections);
    pop_neurons.push_back(row.features.n_neurons);
    if (row.diverged) {
      ++rep.diverged_count;
    } else {
      ++ranked_count;
    }
  }
  if (cfg.top_m > ranked_count) {
    raise(errc::usage, "top_m " + std::to_string(cfg.top_m) + " exceeds the " +
                           std::to_string(ranked_count) + " ranked rows");
  }

  std::vector<int> sample_layers, sample_inflections, sample_neurons;
  sample_layers.reserve(static_cast<std::size_t>(cfg.top_m));
  sample_inflections.reserve(static_cast<std::size_t>(cfg.top_m));
  sample_neurons.reserve(static_cast<std::size_t>(cfg.top_m));
  for (const SweepCsvRow& row : rows) {
    if (row.diverged || row.rank > cfg.top_m) continue;
    sample_layers.push_back(row.features.n_layers);
    sample_inflections.push_back(row.features.n_inflections);
    sample_neurons.push_back(row.features.n_neurons);
  }
  rep.sample_size = static_cast<int>(sample_layers.size());
  if (rep.sample_size != cfg.top_m) {
    raise(errc::malformed_row, "ranks 1.." + std::to_string(cfg.top_m) + " select " +
                                   std::to_string(rep.sample_size) + " rows, expected " +
                                   std::to_string(cfg.top_m));
  }

  rep.layers = proportion_table(sample_layers, pop_layers);
  rep.inflections = proportion_table(sample_inflections, pop_inflections);
  rep.neurons = proportion_table(sample_neurons, pop_neurons);

  Column c_layers{"n_layers", {}};
  Column c_neurons{"n_neurons", {}};
  Column c_mean{"mean_neurons", {}};
  Column c_std{"std_neurons", {}};
  Column c_inflections{"n_inflections", {}};
  Column c_sse{"sse", {}};
  for (const SweepCsvRow& row : rows) {
    if (row.diverged) continue;
    c_layers.values.push_back(row.features.n_layers);
    c_neurons.values.push_back(row.features.n_neurons);
    c_mean.values.push_back(row.features.mean_neurons);
    c_std.values.push_back(row.features.std_neurons);
    c_inflections.values.push_back(row.features.n_inflections);
    c_sse.values.push_back(row.sse);
  }

  const std::vector<Column> corr_cols = {c_layers, c_neurons, c_mean,
                                         c_std,    c_inflections, c_sse};
  rep.correlation = corr_matrix(corr_cols);
  rep.dropped_mean_neurons =
      std::fabs(rep.correlation.at("n_neurons", "mean_neurons")) > cfg.collinearity_threshold;

  std::vector<Column> design;
  design.push_back(c_layers);
  design.push_back(c_neurons);
  if (!rep.dropped_mean_neurons) design.push_back(c_mean);
  design.push_back(c_std);
  design.push_back(c_inflections);
  rep.ols_linear = ols(design, c_sse.values, true);

  const std::vector<Column> quad_base = {c_neurons};
  const std::vector<Column> quad = add_quadratic(quad_base, "n_neurons");
  rep.ols_quadratic = ols(quad, c_sse.values, true);
  return rep;
}

namespace {

std::string proportions_csv(const std::vector<ProportionTestRow>& rows,
                            std::string_view value_name) {
  std::string out = std::string(value_name) +
                    ",sample_count,sample_prop,pop_prop,probability,two_sided_tail_p\n";
  for (const ProportionTestRow& r : rows) {
    out += std::to_string(r.value);
    out.push_back(',');
    out += std::to_string(r.sample_count);
    out.push_back(',');
    out += format_double(r.sample_prop);
    out.push_back(',');
    out += format_double(r.pop_prop);
    out.push_back(',');
    out += format_double(r.probability);
    out.push_back(',');
    out += format_double(r.two_sided_tail_p);
    out.push_back('\n');
  }
  return out;
}

std::string correlation_csv(const CorrelationMatrix& m) {
  std::string out = "variable";
  for (const std::string& name : m.names) {
    out.push_back(',');
    out += name;
  }
  out.push_back('\n');
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    out += m.names[i];
    for (std::size_t j = 0; j < m.names.size(); ++j) {
      out.push_back(',');
      out += format_double(m.r[i][j]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string ols_csv(const RegressionReport& rep) {
  std::string out = "variable,coefficient,std_error,t_stat,p_value,ci95_low,ci95_high\n";
  for (const RegressionRow& row : rep.rows) {
    out += row.name;
    out.push_back(',');
    out += format_double(row.coefficient);
    out.push_back(',');
    out += format_double(row.std_error);
    out.push_back(',');
    out += format_double(row.t_stat);
    out.push_back(',');
    out += format_double(row.p_value);
    out.push_back(',');
    out += format_double(row.ci95_low);
    out.push_back(',');
    out += format_double(row.ci95_high);
    out.push_back('\n');
  }
  return out;
}

using ordered_json = nlohmann::ordered_json;

ordered_json proportions_json(const std::vector<ProportionTestRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const ProportionTestRow& r : rows) {
    arr.push_back({{"value", r.value},
                   {"sample_count", r.sample_count},
                   {"sample_prop", r.sample_prop},
                   {"pop_prop", r.pop_prop},
                   {"probability", r.probability},
                   {"two_sided_tail_p", r.two_sided_tail_p}});
  }
  return arr;
}

ordered_json regression_json(const RegressionReport& rep) {
  ordered_json rows = ordered_json::array();
  for (const RegressionRow& row : rep.rows) {
    rows.push_back({{"variable", row.name},
                    {"coefficient", row.coefficient},
                    {"std_error", row.std_error},
                    {"t_stat", row.t_stat},
                    {"p_value", row.p_value},
                    {"ci95_low", row.ci95_low},
                    {"ci95_high", row.ci95_high}});
  }
  return {{"rows", rows},
          {"r2", rep.r2},
          {"r2_adjusted", rep.r2_adjusted},
          {"n_obs", rep.n_obs}};
}

}  // namespace

std::string analysis_to_json(const AnalysisReport& rep) {
  const ordered_json j = {
      {"population_size", rep.population_size},
      {"sample_size", rep.sample_size},
      {"diverged_count", rep.diverged_count},
      {"proportions",
       {{"layers", proportions_json(rep.layers)},
        {"inflections", proportions_json(rep.inflections)},
        {"neurons", proportions_json(rep.neurons)}}},
      {"correlation", {{"names", rep.correlation.names}, {"matrix", rep.correlation.r}}},
      {"dropped_mean_neurons", rep.dropped_mean_neurons},
      {"ols", regression_json(rep.ols_linear)},
      {"ols_quadratic", regression_json(rep.ols_quadratic)},
  };
  return j.dump(2) + "\n";
}

void write_analysis_csvs(const AnalysisReport& report, const std::string& out_dir) {
  write_text_file(out_dir + "/proportions_layers.csv", proportions_csv(report.layers, "n_layers"));
  write_text_file(out_dir + "/proportions_inflections.csv",
                  proportions_csv(report.inflections, "n_inflections"));
  write_text_file(out_dir + "/proportions_neurons.csv", proportions_csv(report.neurons, "n_neurons"));
  write_text_file(out_dir + "/correlation.csv", correlation_csv(report.correlation));
  write_text_file(out_dir + "/ols.csv", ols_csv(report.ols_linear));
  write_text_file(out_dir + "/ols_quadratic.csv", ols_csv(report.ols_quadratic));
  write_text_file(out_dir + "/summary.json", analysis_to_json(report));
}

std::string render_report_markdown(const std::string& analysis_dir) {
  nlohmann::json summary;
  try {
    summary = nlohmann::json::parse(read_text_file(analysis_dir + "/summary.json"));
  } catch (const nlohmann::json::exception& e) {
    raise(errc::malformed_row, "summary.json: " + std::string(e.what()));
  }

  std::string out = "# Sweep analysis\n\n";
  try {
    out += "- population: " + std::to_string(summary.at("population_size").get<long long>()) +
           " architectures (" + std::to_string(summary.at("diverged_count").get<long long>()) +
           " diverged)\n";
    out += "- sample: the " + std::to_string(summary.at("sample_size").get<long long>()) +
           " best-ranked architectures\n";
    out += std::string("- mean_neurons dropped from the regression: ") +
           (summary.at("dropped_mean_neurons").get<bool>() ? "yes" : "no") + "\n";
    out += "- linear fit: adjusted R^2 " +
           format_double(summary.at("ols").at("r2_adjusted").get<double>()) + " over " +
           std::to_string(summary.at("ols").at("n_obs").get<long long>()) + " records\n";
    out += "- quadratic fit: adjusted R^2 " +
           format_double(summary.at("ols_quadratic").at("r2_adjusted").get<double>()) + "\n\n";
  } catch (const nlohmann::json::exception& e) {
    raise(errc::malformed_row, "summary.json: " + std::string(e.what()));
  }

  struct Section {
    const char* file;
    const char* title;
  };
  constexpr Section sections[] = {
      {"proportions_layers.csv", "Layer-count proportions"},
      {"proportions_inflections.csv", "Inflection-count proportions"},
      {"proportions_neurons.csv", "Total-neuron proportions"},
      {"correlation.csv", "Correlation matrix"},
      {"ols.csv", "Linear regression"},
      {"ols_quadratic.csv", "Quadratic regression"},
  };
  for (const Section& section : sections) {
    const std::string path = analysis_dir + "/" + section.file;
    const auto lines = read_lines(path);
    if (lines.empty()) raise(errc::malformed_row, path + ": empty file");
    out += "## ";
    out += section.title;
    out += "\n\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto fields = split_csv_line(lines[i]);
      out.push_back('|');
      for (const auto& field : fields) {
        out.push_back(' ');
        out += std::string(field);
        out += " |";
      }
      out.push_back('\n');
      if (i == 0) {
        out.push_back('|');
        for (std::size_t f = 0; f < fields.size(); ++f) out += " --- |";
        out.push_back('\n');
      }
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace archsweep
