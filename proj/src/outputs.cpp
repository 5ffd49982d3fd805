#include "cwvsmix/outputs.hpp"

#include <filesystem>
#include <fstream>

#include "cwvsmix/csv.hpp"
#include "cwvsmix/errors.hpp"

namespace cwvsmix {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write '" + path + "'");
  return out;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<double> scalar_column(const ChainSamples& s, int col) {
  std::vector<double> out(s.n_kept);
  for (std::size_t k = 0; k < s.n_kept; ++k) out[k] = s.scalars(k, col);
  return out;
}

}  // namespace

std::string component_label(std::size_t c, std::size_t q,
                            const std::vector<std::string>& pollutant_names) {
  auto poll = [&](std::size_t j) {
    return j < pollutant_names.size() ? pollutant_names[j]
                                      : "p" + std::to_string(j + 1);
  };
  if (c < q) return "main:" + poll(c);
  std::size_t idx = c - q;
  for (std::size_t j = 0; j + 1 < q; ++j) {
    const std::size_t row = q - 1 - j;
    if (idx < row) return "inter:" + poll(j) + "x" + poll(j + 1 + idx);
    idx -= row;
  }
  throw input_error("component_label: index out of range");
}

void write_manifest(const std::string& out_dir, const nlohmann::json& manifest) {
  auto out = open_out(join(out_dir, "manifest.json"));
  out << manifest.dump(2) << "\n";
}

void emit_results(const std::string& out_dir,
                  const std::vector<WindowDecision>& decisions,
                  const WeightSelection& selection, const ChainSamples& samples,
                  const std::vector<std::string>& pollutant_names,
                  const std::vector<std::string>& covariate_names,
                  const nlohmann::json& manifest) {
  std::filesystem::create_directories(out_dir);

  {
    auto out = open_out(join(out_dir, "windows.csv"));
    out << "period,pip,or_cond_mean,ci_low,ci_high,verdict,"
           "n_conditional_draws\n";
    for (const auto& d : decisions) {
      out << d.period << "," << format_g17(d.pip) << ","
          << format_g17(d.or_mean) << "," << format_g17(d.ci_low) << ","
          << format_g17(d.ci_high) << "," << verdict_name(d.verdict) << ","
          << d.n_conditional_draws << "\n";
    }
  }

  {
    auto out = open_out(join(out_dir, "weights.csv"));
    out << "period,component,inclusion_prob,selected,cond_mean\n";
    for (std::size_t t = 0; t < selection.m; ++t) {
      for (std::size_t c = 0; c < selection.r; ++c) {
        out << (t + 1) << ","
            << component_label(c, selection.q, pollutant_names) << ","
            << format_g17(selection.inclusion_prob(c, t)) << ","
            << (selection.is_selected(c, t) ? 1 : 0) << ","
            << format_g17(selection.conditional_mean(c, t)) << "\n";
      }
    }
  }

  {
    auto out = open_out(join(out_dir, "chain_summary.csv"));
    out << "parameter,mean,sd,q2.5,q25,q50,q75,q97.5,geweke_z\n";
    auto row = [&](const ScalarSummary& s) {
      out << s.name << "," << format_g17(s.mean) << "," << format_g17(s.sd)
          << "," << format_g17(s.q025) << "," << format_g17(s.q25) << ","
          << format_g17(s.q50) << "," << format_g17(s.q75) << ","
          << format_g17(s.q975) << ","
          << (s.geweke_ok ? format_g17(s.geweke) : "NA") << "\n";
    };
    std::vector<double> draws(samples.n_kept);
    for (std::size_t j = 0; j < samples.p; ++j) {
      for (std::size_t k = 0; k < samples.n_kept; ++k) {
        draws[k] = samples.beta(k, j);
      }
      const std::string name = j < covariate_names.size()
                                   ? "beta:" + covariate_names[j]
                                   : "beta:" + std::to_string(j);
      row(summarize_scalar(name, draws));
    }
    static const char* scalar_names[] = {"A11", "A21",  "A22",
                                         "phi1", "phi2", "phi_lambda"};
    for (int c = 0; c < ChainSamples::kNumScalars; ++c) {
      row(summarize_scalar(scalar_names[c], scalar_column(samples, c)));
    }
    for (std::size_t t = 0; t < samples.m; ++t) {
      for (std::size_t k = 0; k < samples.n_kept; ++k) {
        draws[k] = samples.alpha(k, t);
      }
      row(summarize_scalar("alpha:" + std::to_string(t + 1), draws));
    }
  }

  {
    auto out = open_out(join(out_dir, "samples_scalars.csv"));
    out << "draw";
    for (std::size_t j = 0; j < samples.p; ++j) {
      out << ",beta:"
          << (j < covariate_names.size() ? covariate_names[j]
                                         : std::to_string(j));
    }
    out << ",A11,A21,A22,phi1,phi2,phi_lambda\n";
    for (std::size_t k = 0; k < samples.n_kept; ++k) {
      out << (k + 1);
      for (std::size_t j = 0; j < samples.p; ++j) {
        out << "," << format_g17(samples.beta(k, j));
      }
      for (int c = 0; c < ChainSamples::kNumScalars; ++c) {
        out << "," << format_g17(samples.scalars(k, c));
      }
      out << "\n";
    }
  }

  {
    auto out = open_out(join(out_dir, "samples_alpha.csv"));
    out << "draw,period,alpha,gamma\n";
    for (std::size_t k = 0; k < samples.n_kept; ++k) {
      for (std::size_t t = 0; t < samples.m; ++t) {
        out << (k + 1) << "," << (t + 1) << ","
            << format_g17(samples.alpha(k, t)) << ","
            << static_cast<int>(samples.gamma(k, t)) << "\n";
      }
    }
  }

  {
    auto out = open_out(join(out_dir, "samples_weights.csv"));
    out << "draw,period,component,weight\n";
    for (std::size_t k = 0; k < samples.n_kept; ++k) {
      for (std::size_t t = 0; t < samples.m; ++t) {
        for (std::size_t c = 0; c < samples.r; ++c) {
          out << (k + 1) << "," << (t + 1) << ","
              << component_label(c, samples.q, pollutant_names) << ","
              << format_g17(samples.weight(k, t, c)) << "\n";
        }
      }
    }
  }

  write_manifest(out_dir, manifest);
}

void write_study_results(const std::string& out_dir, const StudyResult& study) {
  std::filesystem::create_directories(out_dir);
  {
    auto out = open_out(join(out_dir, "metrics.csv"));
    out << "method,metric,mean,se,n\n";
    auto block = [&](const char* metric,
                     const std::vector<MetricSummary>& col) {
      for (std::size_t k = 0; k < study.methods.size(); ++k) {
        out << method_name(study.methods[k]) << "," << metric << ","
            << format_g17(col[k].mean) << ","
            << (col[k].se ? format_g17(*col[k].se) : "NA") << "," << col[k].n
            << "\n";
      }
    };
    block("cw_accuracy", study.cw_accuracy);
    block("amse_lambda_cw", study.amse_lambda);
    block("amse_exp_alpha", study.amse_exp_alpha);
    block("main_selection_accuracy", study.main_accuracy);
    block("interaction_selection_accuracy", study.interaction_accuracy);
  }
  {
    auto out = open_out(join(out_dir, "replicates.csv"));
    out << "replicate,method,dataset_stream,chain_stream,failed,error,"
           "cw_accuracy,amse_lambda_cw,amse_exp_alpha,main_accuracy,"
           "interaction_accuracy,amse_used_unconditional\n";
    for (const auto& r : study.replicates) {
      out << r.replicate << "," << method_name(r.method) << ","
          << r.dataset_stream << "," << r.chain_stream << ","
          << (r.failed ? 1 : 0) << "," << r.error << ","
          << format_g17(r.cw_accuracy) << "," << format_g17(r.amse_lambda)
          << "," << format_g17(r.amse_exp_alpha) << ","
          << format_g17(r.main_accuracy) << ","
          << (r.has_interactions ? format_g17(r.interaction_accuracy) : "NA")
          << "," << (r.amse_used_unconditional ? 1 : 0) << "\n";
    }
  }
}

nlohmann::json scenario_to_json(const SimScenario& sc) {
  nlohmann::json j;
  j["setting"] = sc.setting;
  j["sub_setting"] = sub_setting_name(sc.sub);
  j["n"] = sc.n;
  j["m"] = sc.m;
  j["q"] = sc.q;
  j["effect_size"] = sc.effect_size;
  j["window_len_min"] = sc.window_len_min;
  j["window_len_max"] = sc.window_len_max;
  j["interaction_prob"] = sc.interaction_prob;
  nlohmann::json src;
  if (sc.source.kind == ExposureSource::Kind::synthetic_ar1) {
    src["type"] = "synthetic_ar1";
    src["ar1"] = sc.source.ar1;
    src["cross_corr"] = sc.source.cross_corr;
  } else {
    src["type"] = "resample";
    src["file"] = sc.source.profile_file;
  }
  j["exposure"] = src;
  return j;
}

SimScenario scenario_from_json(const nlohmann::json& j) {
  SimScenario sc;
  sc.setting = j.value("setting", sc.setting);
  const std::string sub = j.value("sub_setting", std::string("A"));
  if (sub == "A") {
    sc.sub = SubSetting::A;
  } else if (sub == "B") {
    sc.sub = SubSetting::B;
  } else if (sub == "C") {
    sc.sub = SubSetting::C;
  } else {
    throw input_error("scenario: sub_setting must be A, B, or C");
  }
  sc.n = j.value("n", sc.n);
  sc.m = j.value("m", sc.m);
  sc.q = j.value("q", sc.q);
  sc.effect_size = j.value("effect_size", sc.effect_size);
  sc.window_len_min = j.value("window_len_min", sc.window_len_min);
  sc.window_len_max = j.value("window_len_max", sc.window_len_max);
  sc.interaction_prob = j.value("interaction_prob", sc.interaction_prob);
  if (j.contains("exposure")) {
    const auto& src = j.at("exposure");
    const std::string type = src.value("type", std::string("synthetic_ar1"));
    if (type == "synthetic_ar1") {
      sc.source.kind = ExposureSource::Kind::synthetic_ar1;
      sc.source.ar1 = src.value("ar1", sc.source.ar1);
      sc.source.cross_corr = src.value("cross_corr", sc.source.cross_corr);
    } else if (type == "resample") {
      sc.source.kind = ExposureSource::Kind::resample;
      sc.source.profile_file = src.value("file", std::string());
    } else {
      throw input_error("scenario: unknown exposure type '" + type + "'");
    }
  }
  sc.validate();
  return sc;
}

SimScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw input_error("scenario parse error in '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

void write_geweke_csv(const std::string& path,
                      const std::vector<ScalarSummary>& rows) {
  auto out = open_out(path);
  out << "parameter,mean,sd,geweke_z\n";
  for (const auto& s : rows) {
    out << s.name << "," << format_g17(s.mean) << "," << format_g17(s.sd)
        << "," << (s.geweke_ok ? format_g17(s.geweke) : "NA") << "\n";
  }
}

}  // namespace cwvsmix
