#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "archsweep/analysis.hpp"
#include "archsweep/archspace.hpp"
#include "archsweep/csvio.hpp"
#include "archsweep/data.hpp"
#include "archsweep/error.hpp"
#include "archsweep/runconfig.hpp"
#include "archsweep/sweep.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace archsweep;

namespace {

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) raise(errc::io_error, "cannot create directory \"" + path + "\": " + ec.message());
}

std::string join(const std::string& dir, const char* file) {
  return (fs::path(dir) / file).string();
}

void cmd_enumerate(SpaceBounds bounds) {
  validate_bounds(bounds);
  std::string out;
  for_each_arch(bounds, [&](const ArchSpec& spec) {
    out += format_label(spec);
    out += '\n';
  });
  out += "total: " + std::to_string(count_total(bounds)) + '\n';
  std::cout << out;
}

void cmd_synth_data(std::uint64_t seed, int n_days, const std::string& out_dir) {
  const SyntheticData synth = synthesize(seed, n_days);
  ensure_dir(out_dir);
  write_price_csv(synth.asset, join(out_dir, "asset.csv"));
  for (const PriceSeries& series : synth.indices) {
    write_price_csv(series, (fs::path(out_dir) / (series.name + ".csv")).string());
  }
  std::cout << "wrote asset,idiv,sp500,icon,ifnc (" << n_days << " days) to " << out_dir << "\n";
}

void cmd_sweep(const RunConfig& cfg, bool with_timing) {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset ds = load_dataset(cfg);

  SweepConfig sc;
  sc.bounds = cfg.bounds;
  sc.train = cfg.train;
  sc.top_m = cfg.top_m;
  sc.parallelism = cfg.parallelism;
  const std::vector<SweepRecord> records = run_sweep(sc, ds);
  const RankedReport report = rank(records);

  ensure_dir(cfg.out_dir);
  write_sweep_csv(report, join(cfg.out_dir, "sweep.csv"), with_timing);

  const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  nlohmann::ordered_json manifest;
  manifest["config_hash"] = config_hash_hex(cfg);
  manifest["architectures"] = report.ranked.size() + report.diverged.size();
  manifest["ranked"] = report.ranked.size();
  manifest["diverged"] = report.diverged.size();
  manifest["wall_millis"] = wall;
  write_text_file(join(cfg.out_dir, "manifest.json"), manifest.dump(2) + "\n");

  std::cout << "swept " << records.size() << " architectures (" << report.ranked.size()
            << " ranked, " << report.diverged.size() << " diverged) -> " << cfg.out_dir
            << "/sweep.csv\n";
}

void cmd_analyze(const std::string& input, int top_m, const std::string& out_dir) {
  const std::vector<SweepCsvRow> rows = read_sweep_csv(input);
  AnalysisConfig acfg;
  acfg.top_m = top_m;
  const AnalysisReport report = analyze(rows, acfg);
  ensure_dir(out_dir);
  write_analysis_csvs(report, out_dir);
  std::cout << "analyzed " << report.population_size << " architectures (sample "
            << report.sample_size << ") -> " << out_dir << "\n";
}

void cmd_report(const std::string& input, const std::string& out_path) {
  const std::string markdown = render_report_markdown(input);
  if (out_path.empty()) {
    std::cout << markdown;
    return;
  }
  write_text_file(out_path, markdown);
  std::cout << "wrote " << out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exhaustive MLP architecture sweep over lagged market returns"};
  app.set_version_flag("--version", "1.0.0");
  app.require_subcommand(1);

  SpaceBounds enum_bounds;
  auto* enumerate = app.add_subcommand("enumerate", "list every architecture label within bounds");
  enumerate->add_option("--n-max", enum_bounds.n_max, "max neurons per layer")
      ->capture_default_str();
  enumerate->add_option("--k-max", enum_bounds.k_max, "max hidden layers")->capture_default_str();

  std::uint64_t synth_seed = 1;
  int synth_days = 750;
  std::string synth_out = "data";
  auto* synth = app.add_subcommand("synth-data", "generate a seeded synthetic price dataset");
  synth->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
  synth->add_option("--n-days", synth_days, "business days to generate (>= 30)")
      ->capture_default_str();
  synth->add_option("--out", synth_out, "output directory")->capture_default_str();

  std::string sweep_config_path;
  bool with_timing = false;
  int ov_n_max = 0, ov_k_max = 0, ov_top_m = 0, ov_parallelism = 0;
  std::uint64_t ov_seed = 0;
  std::string ov_out;
  auto* sweep = app.add_subcommand("sweep", "train every architecture and rank by test MAE");
  sweep->add_option("config", sweep_config_path, "run config JSON path")->required();
  auto* sw_n_max = sweep->add_option("--n-max", ov_n_max, "override bounds.n_max");
  auto* sw_k_max = sweep->add_option("--k-max", ov_k_max, "override bounds.k_max");
  auto* sw_seed = sweep->add_option("--seed", ov_seed, "override training.seed");
  auto* sw_top_m = sweep->add_option("--top-m", ov_top_m, "override top_m");
  auto* sw_par = sweep->add_option("--parallelism", ov_parallelism, "override parallelism");
  auto* sw_out = sweep->add_option("--out", ov_out, "override output directory");
  sweep->add_flag("--timing", with_timing,
                  "emit per-architecture wall time (makes the CSV run-dependent)");

  std::string an_input;
  int an_top_m = 40;
  std::string an_out = "analysis";
  auto* analyze_cmd = app.add_subcommand("analyze", "derive statistics tables from a sweep CSV");
  analyze_cmd->add_option("--input", an_input, "sweep CSV path")->required();
  analyze_cmd->add_option("--top-m", an_top_m, "sample size for proportion tests")
      ->capture_default_str();
  analyze_cmd->add_option("--out", an_out, "output directory")->capture_default_str();

  std::string rep_input = "analysis";
  std::string rep_out;
  auto* report = app.add_subcommand("report", "render analysis output as a markdown digest");
  report->add_option("--input", rep_input, "analysis directory")->capture_default_str();
  report->add_option("--out", rep_out, "write to file instead of stdout");

  enumerate->callback([&] { cmd_enumerate(enum_bounds); });
  synth->callback([&] { cmd_synth_data(synth_seed, synth_days, synth_out); });
  sweep->callback([&] {
    RunConfig cfg = load_run_config(sweep_config_path);
    if (*sw_n_max) cfg.bounds.n_max = ov_n_max;
    if (*sw_k_max) cfg.bounds.k_max = ov_k_max;
    if (*sw_seed) cfg.train.seed = ov_seed;
    if (*sw_top_m) cfg.top_m = ov_top_m;
    if (*sw_par) cfg.parallelism = ov_parallelism;
    if (*sw_out) cfg.out_dir = ov_out;
    validate(cfg);
    cmd_sweep(cfg, with_timing);
  });
  analyze_cmd->callback([&] { cmd_analyze(an_input, an_top_m, an_out); });
  report->callback([&] { cmd_report(rep_input, rep_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error:Usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error:" << to_string(e.code()) << ": " << e.message() << "\n";
    return is_usage_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error:Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
