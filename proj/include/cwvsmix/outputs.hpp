#pragma once

#include <string>
#include <vector>

#include "cwvsmix/inference.hpp"
#include "cwvsmix/simstudy.hpp"

#include "json.hpp"

namespace cwvsmix {

inline constexpr const char* kProjectVersion = "0.1.0";

// Result artifacts for a fitted chain: windows.csv, weights.csv,
// chain_summary.csv, plot-ready long-format sample CSVs, and manifest.json.
// Every float is written at 17 significant digits; apart from the manifest's
// wall_clock_ms field, identical runs produce byte-identical files.
void emit_results(const std::string& out_dir,
                  const std::vector<WindowDecision>& decisions,
                  const WeightSelection& selection, const ChainSamples& samples,
                  const std::vector<std::string>& pollutant_names,
                  const std::vector<std::string>& covariate_names,
                  const nlohmann::json& manifest);

// Human-readable component label, e.g. "main:pm25" or "inter:pm25xno2";
// component index c is project-wide ordering (mains, then (j,k) pairs).
std::string component_label(std::size_t c, std::size_t q,
                            const std::vector<std::string>& pollutant_names);

void write_manifest(const std::string& out_dir, const nlohmann::json& manifest);

// Benchmark artifacts: metrics.csv (per method x metric mean/SE) and
// replicates.csv (per-replicate log with stream ids and failure flags).
void write_study_results(const std::string& out_dir, const StudyResult& study);

nlohmann::json scenario_to_json(const SimScenario& sc);
SimScenario scenario_from_json(const nlohmann::json& j);
SimScenario load_scenario(const std::string& path);

// Geweke table for `diagnose`: parameter, z, flag.
void write_geweke_csv(const std::string& path,
                      const std::vector<ScalarSummary>& rows);

}  // namespace cwvsmix
