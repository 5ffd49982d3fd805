// cwvsmix: batch front end for critical-window mixture analysis.
//
// Subcommands:
//   fit        fit the model to a dataset CSV and emit result tables
//   simulate   generate one synthetic benchmark dataset (+ ground truth)
//   benchmark  run a replicated method-comparison study
//   diagnose   Geweke convergence table for an existing run directory
//
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "cwvsmix/csv.hpp"
#include "cwvsmix/engine.hpp"
#include "cwvsmix/errors.hpp"
#include "cwvsmix/inference.hpp"
#include "cwvsmix/kernels.hpp"
#include "cwvsmix/outputs.hpp"
#include "cwvsmix/simstudy.hpp"

namespace {

using namespace cwvsmix;

struct CommonOpts {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string out_dir;
  std::size_t burn = 10000;
  std::size_t keep = 1000;
  std::size_t thin = 10;
  double ci = 0.90;
  double pip_threshold = 0.50;
  double main_threshold = 0.50;
  double interaction_threshold = 0.125;
  Priors priors;
};

nlohmann::json config_json(const CommonOpts& o) {
  nlohmann::json j;
  j["burn"] = o.burn;
  j["keep"] = o.keep;
  j["thin"] = o.thin;
  j["ci"] = o.ci;
  j["pip_threshold"] = o.pip_threshold;
  j["main_threshold"] = o.main_threshold;
  j["interaction_threshold"] = o.interaction_threshold;
  j["sigma2_beta"] = o.priors.sigma2_beta;
  j["alpha_phi"] = o.priors.alpha_phi;
  j["beta_phi"] = o.priors.beta_phi;
  j["sigma2_A"] = o.priors.sigma2_A;
  return j;
}

nlohmann::json base_manifest(const std::string& command, const CommonOpts& o) {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kProjectVersion;
  j["kernels"] = kernels::backend_name(kernels::active_backend());
  j["seed"] = o.seed;
  j["stream_id"] = o.stream;
  j["config"] = config_json(o);
  return j;
}

SweepConfig sweep_config(const CommonOpts& o) {
  SweepConfig cfg;
  cfg.n_burn = o.burn;
  cfg.n_keep = o.keep;
  cfg.thin = o.thin;
  return cfg;
}

int cmd_fit(const CommonOpts& o, const std::string& data_path,
            bool standardize) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExposureDataset data = ingest_csv(data_path, standardize);
  Engine engine(data, o.priors, sweep_config(o), RngStream(o.seed, o.stream));
  const ChainSamples samples = engine.run();
  const auto decisions = decide_windows(samples, o.ci, o.pip_threshold);
  const auto selection =
      select_weights(samples, o.main_threshold, o.interaction_threshold);

  nlohmann::json manifest = base_manifest("fit", o);
  manifest["data"] = data_path;
  manifest["standardize"] = standardize;
  manifest["n"] = data.n();
  manifest["m"] = data.m();
  manifest["q"] = data.q();
  manifest["wall_clock_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count();
  emit_results(o.out_dir, decisions, selection, samples, data.pollutant_names,
               data.covariate_names, manifest);
  std::size_t flagged = 0;
  for (const auto& d : decisions) flagged += d.verdict != Verdict::null;
  std::cout << "fit: " << samples.n_kept << " draws kept, " << flagged
            << " critical period(s); results in " << o.out_dir << "\n";
  return 0;
}

int cmd_simulate(const CommonOpts& o, const std::string& scenario_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimScenario scenario = load_scenario(scenario_path);
  ExposureTensor profiles;
  const ExposureTensor* profiles_ptr = nullptr;
  if (scenario.source.kind == ExposureSource::Kind::resample) {
    profiles = load_profiles(scenario.source.profile_file);
    profiles_ptr = &profiles;
  }
  RngStream rng(o.seed, o.stream);
  auto [data, truth] = generate_dataset(scenario, rng, profiles_ptr);

  std::filesystem::create_directories(o.out_dir);
  write_dataset_csv(data,
                    (std::filesystem::path(o.out_dir) / "dataset.csv").string());

  nlohmann::json tj;
  tj["window_start"] = truth.window_start + 1;  // 1-based in files
  tj["window_len"] = truth.window_len;
  tj["critical"] = truth.critical;
  tj["alpha"] = truth.alpha;
  nlohmann::json weights = nlohmann::json::array();
  const std::size_t r = r_components(scenario.q);
  for (std::size_t t = 0; t < scenario.m; ++t) {
    nlohmann::json col = nlohmann::json::object();
    for (std::size_t c = 0; c < r; ++c) {
      if (truth.weights(c, t) != 0.0) {
        col[component_label(c, scenario.q, data.pollutant_names)] =
            truth.weights(c, t);
      }
    }
    weights.push_back(col);
  }
  tj["weights"] = weights;
  {
    std::ofstream out((std::filesystem::path(o.out_dir) / "truth.json").string(),
                      std::ios::binary);
    out << tj.dump(2) << "\n";
  }

  nlohmann::json manifest = base_manifest("simulate", o);
  manifest["scenario"] = scenario_to_json(scenario);
  manifest["scenario_file"] = scenario_path;
  manifest["wall_clock_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(o.out_dir, manifest);
  std::cout << "simulate: n=" << data.n() << " m=" << data.m()
            << " q=" << data.q() << "; dataset in " << o.out_dir << "\n";
  return 0;
}

int cmd_benchmark(const CommonOpts& o, const std::string& scenario_path,
                  std::size_t replicates, const std::string& methods_csv,
                  std::size_t workers) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimScenario scenario = load_scenario(scenario_path);
  ExposureTensor profiles;
  const ExposureTensor* profiles_ptr = nullptr;
  if (scenario.source.kind == ExposureSource::Kind::resample) {
    profiles = load_profiles(scenario.source.profile_file);
    profiles_ptr = &profiles;
  }

  std::vector<Method> methods;
  std::size_t start = 0;
  while (start <= methods_csv.size()) {
    const std::size_t pos = methods_csv.find(',', start);
    const std::string name =
        methods_csv.substr(start, pos == std::string::npos ? pos : pos - start);
    if (name == "cwvsmix") {
      methods.push_back(Method::cwvsmix);
    } else if (name == "ew") {
      methods.push_back(Method::ew);
    } else if (!name.empty()) {
      throw input_error("unknown method '" + name + "' (use cwvsmix,ew)");
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (methods.empty()) throw input_error("no methods requested");

  const StudyResult study =
      run_study(scenario, replicates, methods, o.priors, sweep_config(o),
                o.seed, workers, o.ci, profiles_ptr);
  write_study_results(o.out_dir, study);

  nlohmann::json manifest = base_manifest("benchmark", o);
  manifest["scenario"] = scenario_to_json(scenario);
  manifest["scenario_file"] = scenario_path;
  manifest["replicates"] = replicates;
  manifest["methods"] = methods_csv;
  manifest["workers"] = workers;
  manifest["wall_clock_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(o.out_dir, manifest);

  for (std::size_t k = 0; k < methods.size(); ++k) {
    std::cout << method_name(methods[k])
              << ": cw_accuracy=" << study.cw_accuracy[k].mean
              << " amse_lambda_cw=" << study.amse_lambda[k].mean
              << " amse_exp_alpha=" << study.amse_exp_alpha[k].mean << "\n";
  }
  std::cout << "benchmark: results in " << o.out_dir << "\n";
  return 0;
}

// Minimal numeric CSV reader for diagnose (header + double columns).
struct PlainCsv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

PlainCsv read_plain_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  PlainCsv csv;
  std::string line;
  if (!std::getline(in, line)) throw input_error("empty file '" + path + "'");
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    std::string f = line.substr(
        start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!f.empty() && f.back() == '\r') f.pop_back();
    csv.header.push_back(f);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  csv.columns.assign(csv.header.size(), {});
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::size_t s = 0, col = 0;
    while (col < csv.header.size()) {
      const std::size_t pos = line.find(',', s);
      std::string f = line.substr(
          s, pos == std::string::npos ? std::string::npos : pos - s);
      if (!f.empty() && f.back() == '\r') f.pop_back();
      try {
        csv.columns[col].push_back(std::stod(f));
      } catch (...) {
        throw input_error("non-numeric value '" + f + "' at row " +
                          std::to_string(row) + " of " + path);
      }
      ++col;
      if (pos == std::string::npos) break;
      s = pos + 1;
    }
  }
  return csv;
}

int cmd_diagnose(const std::string& samples_dir) {
  namespace fs = std::filesystem;
  const std::string scalars_path =
      (fs::path(samples_dir) / "samples_scalars.csv").string();
  const PlainCsv scalars = read_plain_csv(scalars_path);
  std::vector<ScalarSummary> rows;
  for (std::size_t c = 1; c < scalars.header.size(); ++c) {  // skip `draw`
    rows.push_back(summarize_scalar(scalars.header[c], scalars.columns[c]));
  }
  const std::string alpha_path =
      (fs::path(samples_dir) / "samples_alpha.csv").string();
  if (fs::exists(alpha_path)) {
    const PlainCsv alpha = read_plain_csv(alpha_path);
    // Long format: draw,period,alpha,gamma -> one chain per period.
    std::size_t m = 0;
    for (double v : alpha.columns[1]) {
      m = std::max(m, static_cast<std::size_t>(v));
    }
    for (std::size_t t = 1; t <= m; ++t) {
      std::vector<double> chain;
      for (std::size_t i = 0; i < alpha.columns[1].size(); ++i) {
        if (static_cast<std::size_t>(alpha.columns[1][i]) == t) {
          chain.push_back(alpha.columns[2][i]);
        }
      }
      rows.push_back(summarize_scalar("alpha:" + std::to_string(t), chain));
    }
  }
  write_geweke_csv((fs::path(samples_dir) / "geweke.csv").string(), rows);
  std::size_t suspicious = 0;
  std::cout << "parameter\tgeweke_z\n";
  for (const auto& s : rows) {
    std::cout << s.name << "\t" << (s.geweke_ok ? format_g17(s.geweke) : "NA")
              << "\n";
    if (s.geweke_ok && std::fabs(s.geweke) > 1.96) ++suspicious;
  }
  std::cout << "diagnose: " << rows.size() << " parameters, " << suspicious
            << " with |z| > 1.96; table in " << samples_dir << "/geweke.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical-window variable selection for pollutant mixtures"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string data_path, scenario_path, samples_dir;
  bool standardize = false;
  std::size_t replicates = 100;
  std::string methods_csv = "cwvsmix,ew";
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());

  auto add_chain_opts = [&](CLI::App* cmd) {
    cmd->add_option("--burn", o.burn, "Burn-in sweeps");
    cmd->add_option("--keep", o.keep, "Kept (thinned) draws");
    cmd->add_option("--thin", o.thin, "Thinning factor");
    cmd->add_option("--ci", o.ci, "Credible-interval level")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--pip-threshold", o.pip_threshold,
                    "Window inclusion-probability threshold");
    cmd->add_option("--main-threshold", o.main_threshold,
                    "Main-effect selection threshold");
    cmd->add_option("--interaction-threshold", o.interaction_threshold,
                    "Interaction selection threshold");
    cmd->add_option("--sigma2-beta", o.priors.sigma2_beta,
                    "Prior variance of beta");
    cmd->add_option("--alpha-phi", o.priors.alpha_phi, "Gamma shape for phis");
    cmd->add_option("--beta-phi", o.priors.beta_phi, "Gamma rate for phis");
    cmd->add_option("--sigma2-A", o.priors.sigma2_A,
                    "Prior variance for A21, ln A11, ln A22");
  };

  CLI::App* fit = app.add_subcommand("fit", "Fit the model to a dataset");
  fit->add_option("--data", data_path, "Dataset CSV")->required();
  fit->add_option("--out", o.out_dir, "Output directory")->required();
  fit->add_option("--seed", o.seed, "RNG seed")->required();
  fit->add_option("--stream", o.stream, "RNG stream id (chain id)");
  fit->add_flag("--standardize", standardize,
                "Median/IQR-standardize exposures before fitting");
  add_chain_opts(fit);

  CLI::App* sim = app.add_subcommand("simulate", "Generate one dataset");
  sim->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  sim->add_option("--out", o.out_dir, "Output directory")->required();
  sim->add_option("--seed", o.seed, "RNG seed")->required();
  sim->add_option("--stream", o.stream, "RNG stream id");

  CLI::App* bench = app.add_subcommand("benchmark", "Replicated method study");
  bench->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  bench->add_option("--replicates", replicates, "Replicate count")->required();
  bench->add_option("--methods", methods_csv, "Comma list: cwvsmix,ew");
  bench->add_option("--out", o.out_dir, "Output directory")->required();
  bench->add_option("--seed", o.seed, "Master RNG seed")->required();
  bench->add_option("--workers", workers, "Worker pool size");
  add_chain_opts(bench);

  CLI::App* diag = app.add_subcommand("diagnose", "Geweke table for a run");
  diag->add_option("--samples", samples_dir, "Run output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is an input error
  }

  try {
    if (fit->parsed()) return cmd_fit(o, data_path, standardize);
    if (sim->parsed()) return cmd_simulate(o, scenario_path);
    if (bench->parsed()) {
      return cmd_benchmark(o, scenario_path, replicates, methods_csv, workers);
    }
    if (diag->parsed()) return cmd_diagnose(samples_dir);
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
