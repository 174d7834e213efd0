#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "etpa/experiment_model.hpp"
#include "etpa/measurement.hpp"
#include "etpa/units.hpp"

namespace etpa {

// Which per-point uncertainty enters weighted fits: the sample standard
// deviation of the per-bin rates (the error bars a counting run reports),
// or the standard error of the series mean.
enum class Weighting { std_dev, std_error };

struct SummaryOptions {
  bool subtract_accidentals = false;
  // Coincidence window used for the per-bin accidental estimate
  // s1*s2*tau/T^2; only consulted when subtract_accidentals is set.
  Duration coincidence_window = nanoseconds(9.0);
};

// Per-series statistics of the coincidence rate. Rates are plain s^-1
// doubles: accidental subtraction can push individual bins negative.
struct SeriesSummary {
  std::string sample_label;
  Concentration concentration{0.0};
  Power pump_power{0.0};
  std::size_t n_bins = 0;
  double mean_rate = 0.0;
  double std_rate = 0.0;     // sample standard deviation, n-1 denominator
  double stderr_rate = 0.0;  // std_rate / sqrt(n_bins)
  double accidental_mean = 0.0;  // mean subtracted accidental rate, 0 if off

  double uncertainty(Weighting w) const {
    return w == Weighting::std_dev ? std_rate : stderr_rate;
  }
};

SeriesSummary summarize_series(const MeasurementSeries& series,
                               const SummaryOptions& opts = {});

struct FitResult {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;         // 0 when forced through the origin
  double intercept_stderr = 0.0;  // 0 when forced through the origin
  std::size_t n_points = 0;
  double chi2_reduced = 0.0;
  bool forced_through_origin = true;
  bool weighted = true;
};

struct RatePoint {
  Power power{0.0};
  double rate = 0.0;   // s^-1
  double sigma = 0.0;  // s^-1; <= 0 or non-finite means "missing"
};

// Weighted least squares of rate on pump power (mW). Origin-forced by
// default; through_origin=false adds a free intercept. Any missing sigma
// switches the whole fit to unweighted. Weighted slope errors follow the
// absolute-sigma convention (stderr = 1/sqrt(sum w x^2) through the
// origin); unweighted errors are residual-based and vanish on exact data.
FitResult calibrate_pump(const std::vector<RatePoint>& points,
                         bool through_origin = true);

// Rate predicted by a pump calibration at the given power.
double predict_rate(const FitResult& calibration, Power power);

struct RateDifference {
  Power pump_power{0.0};
  double value = 0.0;  // R_solvent - R_sample, s^-1; negatives retained
  double sigma = 0.0;  // quadrature of the two input uncertainties
  bool negative = false;
};

// Difference of two series means taken at the same pump power.
RateDifference compute_r_abs(const SeriesSummary& solvent,
                             const SeriesSummary& sample,
                             Weighting weighting = Weighting::std_dev);

struct FitPoint {
  double x = 0.0;
  double y = 0.0;
  double sigma_y = 0.0;  // <= 0 or non-finite means "missing"
};

// slope = sum(w x y) / sum(w x^2) with w = 1/sigma_y^2 when every point
// carries a sigma, else w = 1 for all points (unweighted mode).
FitResult fit_through_origin(const std::vector<FitPoint>& points);

struct SigmaEResult {
  CrossSectionE sigma_e{0.0};
  CrossSectionE sigma_e_uncertainty{0.0};
  Concentration concentration{0.0};
  std::string label;
};

// Inverts slope = N V sigma_E / A for sigma_E, with N the number density
// of the given molar concentration. The slope uncertainty scales by the
// same factor; geometry_rel_uncertainty (fraction) adds in quadrature.
SigmaEResult sigma_e_from_slope(const FitResult& fit, Concentration concentration,
                                const ExperimentGeometry& geometry,
                                double geometry_rel_uncertainty = 0.0,
                                std::string label = {});

struct ProductDiagnostic {
  std::string label_a;
  std::string label_b;
  double product_a = 0.0;  // sigma_e * c, cm^2 mol / L
  double product_b = 0.0;
  double rel_difference = 0.0;  // |a-b| over the pair mean
};

struct DecayViolation {
  std::string label_low;   // lower concentration
  std::string label_high;  // higher concentration with larger sigma_E
};

struct ConcentrationTable {
  std::vector<SigmaEResult> rows;  // ascending concentration
  std::vector<ProductDiagnostic> product_diagnostics;
  std::vector<DecayViolation> decay_violations;
};

ConcentrationTable concentration_series(std::vector<SigmaEResult> results);

struct AnalysisOptions {
  bool subtract_accidentals = false;
  Duration coincidence_window = nanoseconds(9.0);
  Weighting weighting = Weighting::std_dev;
  double geometry_rel_uncertainty = 0.0;
};

struct SampleAnalysis {
  std::string label;
  Concentration concentration{0.0};
  std::vector<SeriesSummary> summaries;     // one per pump power
  std::vector<RateDifference> differences;  // aligned with summaries
  std::vector<FitPoint> points;             // x = calibrated R_solvent
  FitResult fit;
  SigmaEResult sigma_e;
  std::size_t negative_r_abs_count = 0;
};

struct AnalysisReport {
  std::vector<SeriesSummary> solvent_summaries;
  FitResult calibration;
  std::vector<SampleAnalysis> samples;
  ConcentrationTable table;
};

// Full pipeline: summarize the solvent sweep, calibrate pump power to
// solvent rate, build per-sample R_abs vs calibrated R_solvent points,
// fit each through the origin and convert slopes to cross sections.
AnalysisReport analyze_dataset(const Dataset& dataset,
                               const ExperimentGeometry& geometry,
                               const AnalysisOptions& options = {});

}  // namespace etpa
