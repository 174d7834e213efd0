#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etpa/estimator.hpp"
#include "etpa/run_config.hpp"
#include "etpa/version.hpp"

namespace etpa {

/// Recovered cross section against the value the simulation was
/// configured with (roundtrip and demo modes).
struct TruthComparison {
  std::string label;
  double truth_sigma_e = 0.0;      // cm^2
  double recovered_sigma_e = 0.0;  // cm^2
  double recovered_uncertainty = 0.0;
  double z_score = 0.0;  // (recovered - truth) / uncertainty
};

/// Algebraic self-check of a built-in reference row: push the quoted
/// cross section through absorption_fraction, invert back, compare.
struct ReferenceCheck {
  std::string label;
  double sigma_e = 0.0;  // cm^2, quoted
  double round_trip_rel_err = 0.0;
};

struct Report {
  RunMode mode = RunMode::analyze;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string version{tool_version};
  AnalysisReport analysis;
  std::vector<TruthComparison> truth;            // empty unless simulated truth known
  std::vector<ReferenceCheck> reference_checks;  // demo mode only
};

/// Truth rows for every analyzed sample with a matching entry (by label)
/// in the simulated sample list.
std::vector<TruthComparison> make_truth_comparisons(
    const AnalysisReport& analysis, const std::vector<SampleSpec>& samples);

enum class ReportFormat { table, kv };

/// Human-readable table: calibration line, one row per concentration
/// with sigma_E in units of 1e-18 cm^2, product and decay diagnostics.
std::string render_table(const Report& report);

/// Line-oriented key = value rendering with fixed key names; numbers in
/// shortest round-trip form, so equal runs give byte-equal output.
std::string render_kv(const Report& report);

/// Writes the report in the chosen format plus plot-data files into
/// out_dir (created if missing): pump_sweep_<label>.dat per sample,
/// absorption_<label>.dat per solute, sigma_e_vs_concentration.dat.
/// Returns the written paths.
std::vector<std::string> emit_report(const Report& report, ReportFormat format,
                                     const std::string& out_dir);

}  // namespace etpa
