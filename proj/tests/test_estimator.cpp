#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "etpa/estimator.hpp"
#include "etpa/reference.hpp"
#include "etpa/sim_source.hpp"

using namespace etpa;

namespace {

MeasurementSeries series_from_counts(std::vector<std::uint64_t> coincidences,
                                     std::uint64_t singles = 1000,
                                     double duration = 1.0) {
  MeasurementSeries m;
  m.sample_label = "x";
  m.pump_power = milliwatts(10.0);
  m.bin_duration = seconds(duration);
  for (std::uint64_t c : coincidences) {
    m.bins.push_back({singles, singles, c});
  }
  return m;
}

SampleSpec zntpp63() {
  SampleSpec s;
  s.label = "zntpp_63uM";
  s.concentration = micromolar(63.0);
  s.sigma_e = cm2_per_molecule(5.1e-18);
  return s;
}

SigmaEResult row(const char* label, double conc, double sigma) {
  SigmaEResult r;
  r.label = label;
  r.concentration = Concentration(conc);
  r.sigma_e = CrossSectionE(sigma);
  return r;
}

}  // namespace

TEST_CASE("series summary: mean, spread, stderr") {
  const SeriesSummary s = summarize_series(series_from_counts({4, 6}));
  CHECK(s.n_bins == 2);
  CHECK(s.mean_rate == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(s.std_rate == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.stderr_rate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.accidental_mean == 0.0);
  CHECK(s.uncertainty(Weighting::std_dev) == s.std_rate);
  CHECK(s.uncertainty(Weighting::std_error) == s.stderr_rate);
}

TEST_CASE("series summary: single bin has no spread estimate") {
  const SeriesSummary s = summarize_series(series_from_counts({7}));
  CHECK(s.mean_rate == 7.0);
  CHECK(s.std_rate == 0.0);
  CHECK(s.stderr_rate == 0.0);
}

TEST_CASE("series summary: bin duration rescales rates") {
  const SeriesSummary s = summarize_series(series_from_counts({4, 6}, 1000, 2.0));
  CHECK(s.mean_rate == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("series summary: accidental subtraction") {
  // 1000 x 1000 singles in a 1 s bin with a 9 ns window: 9e-3 expected
  // accidental counts, subtracted per bin
  SummaryOptions opts;
  opts.subtract_accidentals = true;
  const SeriesSummary s = summarize_series(series_from_counts({5, 5}), opts);
  CHECK(s.mean_rate == doctest::Approx(5.0 - 9e-3).epsilon(1e-12));
  CHECK(s.accidental_mean == doctest::Approx(9e-3).epsilon(1e-12));

  // subtraction may push a bin negative; the mean keeps the sign
  opts.coincidence_window = nanoseconds(2e7);  // 0.02 s, absurd but legal input
  const SeriesSummary neg = summarize_series(series_from_counts({1, 1}), opts);
  CHECK(neg.mean_rate < 0.0);
}

TEST_CASE("series summary validates its input") {
  MeasurementSeries empty;
  empty.sample_label = "x";
  empty.bin_duration = seconds(1.0);
  CHECK_THROWS_AS(summarize_series(empty), DataError);

  MeasurementSeries bad = series_from_counts({5});
  bad.bins[0].coincidences = 2000;  // exceeds both singles channels
  CHECK_THROWS_AS(summarize_series(bad), DataError);
}

TEST_CASE("origin fit: hand-checked two-point case") {
  // unit sigmas: slope = (1*2 + 2*4)/(1 + 4) = 2, stderr = 1/sqrt(5)
  const FitResult f = fit_through_origin({{1.0, 2.0, 1.0}, {2.0, 4.0, 1.0}});
  CHECK(f.weighted);
  CHECK(f.forced_through_origin);
  CHECK(f.n_points == 2);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(f.slope_stderr == doctest::Approx(0.4472135954999579).epsilon(1e-15));
  CHECK(f.intercept == 0.0);
  CHECK(f.chi2_reduced == doctest::Approx(0.0));
}

TEST_CASE("origin fit: exact data recovers the slope exactly") {
  // dyadic slope: every product and partial sum is representable, so the
  // residual-based error is exactly zero rather than rounding noise
  std::vector<FitPoint> dyadic;
  for (int i = 1; i <= 8; ++i) {
    dyadic.push_back({static_cast<double>(i), 3.5 * i, 0.0});  // no sigma
  }
  const FitResult f = fit_through_origin(dyadic);
  CHECK_FALSE(f.weighted);
  CHECK(f.slope == 3.5);
  CHECK(f.slope_stderr == 0.0);
  CHECK(f.chi2_reduced == 0.0);

  // non-representable slope still comes back to 1e-12, stderr to rounding
  std::vector<FitPoint> pts;
  for (int i = 1; i <= 8; ++i) {
    pts.push_back({static_cast<double>(i), 3.7 * i, 0.0});
  }
  const FitResult g = fit_through_origin(pts);
  CHECK(g.slope == doctest::Approx(3.7).epsilon(1e-12));
  CHECK(g.slope_stderr <= 1e-12);
}

TEST_CASE("origin fit: one missing sigma drops all weights") {
  std::vector<FitPoint> pts = {{1.0, 2.0, 0.5}, {2.0, 4.1, 0.5}, {3.0, 5.9, 0.0}};
  const FitResult f = fit_through_origin(pts);
  CHECK_FALSE(f.weighted);

  // equal sigmas give the same slope as no sigmas at all
  std::vector<FitPoint> equal = {{1.0, 2.0, 2.0}, {2.0, 4.1, 2.0}, {3.0, 5.9, 2.0}};
  std::vector<FitPoint> none = {{1.0, 2.0, 0.0}, {2.0, 4.1, 0.0}, {3.0, 5.9, 0.0}};
  CHECK(fit_through_origin(equal).slope ==
        doctest::Approx(fit_through_origin(none).slope).epsilon(1e-15));
}

TEST_CASE("origin fit: scale equivariance") {
  const std::vector<FitPoint> pts = {{1.0, 2.1, 0.2}, {2.0, 3.9, 0.3}, {4.0, 8.2, 0.4}};
  std::vector<FitPoint> scaled = pts;
  for (FitPoint& p : scaled) {
    p.y *= 100.0;
    p.sigma_y *= 100.0;
  }
  const FitResult a = fit_through_origin(pts);
  const FitResult b = fit_through_origin(scaled);
  CHECK(b.slope == doctest::Approx(100.0 * a.slope).epsilon(1e-12));
  CHECK(b.slope_stderr == doctest::Approx(100.0 * a.slope_stderr).epsilon(1e-12));
  CHECK(b.chi2_reduced == doctest::Approx(a.chi2_reduced).epsilon(1e-12));
}

TEST_CASE("origin fit: chi2 against a known misfit") {
  // slope = (1*1 + 2*3)/5 = 1.4; residuals -0.4, +0.2; chi2 = 0.2, dof 1
  const FitResult f = fit_through_origin({{1.0, 1.0, 1.0}, {2.0, 3.0, 1.0}});
  CHECK(f.chi2_reduced == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("origin fit: degenerate designs are rejected") {
  CHECK_THROWS_AS(fit_through_origin({{1.0, 2.0, 1.0}}), FitError);
  CHECK_THROWS_AS(fit_through_origin({{0.0, 1.0, 1.0}, {0.0, 2.0, 1.0}}), FitError);
  CHECK_THROWS_AS(
      fit_through_origin({{1.0, std::nan(""), 1.0}, {2.0, 4.0, 1.0}}), FitError);
}

TEST_CASE("pump calibration: weighted line with intercept") {
  // oracle for (1,1), (2,3), (3,2), all sigma 1:
  // slope 0.5 +- 1/sqrt(2), intercept 1 +- sqrt(14/6), chi2_red 1.5
  const std::vector<RatePoint> pts = {{milliwatts(1.0), 1.0, 1.0},
                                      {milliwatts(2.0), 3.0, 1.0},
                                      {milliwatts(3.0), 2.0, 1.0}};
  const FitResult f = calibrate_pump(pts, /*through_origin=*/false);
  CHECK_FALSE(f.forced_through_origin);
  CHECK(f.weighted);
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.slope_stderr == doctest::Approx(0.7071067811865476).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept_stderr == doctest::Approx(1.5275252316519468).epsilon(1e-12));
  CHECK(f.chi2_reduced == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("pump calibration: unweighted errors are residual-based") {
  const std::vector<RatePoint> pts = {{milliwatts(1.0), 1.0, 0.0},
                                      {milliwatts(2.0), 3.0, 0.0},
                                      {milliwatts(3.0), 2.0, 0.0}};
  const FitResult f = calibrate_pump(pts, false);
  CHECK_FALSE(f.weighted);
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.slope_stderr == doctest::Approx(0.8660254037844386).epsilon(1e-12));
  CHECK(f.intercept_stderr == doctest::Approx(1.8708286933869707).epsilon(1e-12));
}

TEST_CASE("pump calibration: degenerate power designs") {
  const std::vector<RatePoint> one = {{milliwatts(5.0), 10.0, 1.0}};
  CHECK_THROWS_AS(calibrate_pump(one), FitError);
  const std::vector<RatePoint> same = {{milliwatts(5.0), 10.0, 1.0},
                                       {milliwatts(5.0), 11.0, 1.0}};
  CHECK_THROWS_AS(calibrate_pump(same), FitError);
}

TEST_CASE("predict_rate applies slope and intercept") {
  FitResult cal;
  cal.slope = 800.0;
  cal.intercept = 25.0;
  cal.forced_through_origin = false;
  CHECK(predict_rate(cal, milliwatts(10.0)) == doctest::Approx(8025.0).epsilon(1e-15));
}

TEST_CASE("r_abs difference with quadrature uncertainty") {
  SeriesSummary solvent;
  solvent.pump_power = milliwatts(10.0);
  solvent.mean_rate = 1000.0;
  solvent.std_rate = 10.0;
  solvent.stderr_rate = 10.0 / std::sqrt(60.0);
  SeriesSummary sample = solvent;
  sample.mean_rate = 800.0;

  const RateDifference d = compute_r_abs(solvent, sample);
  CHECK(d.value == doctest::Approx(200.0).epsilon(1e-15));
  CHECK(d.sigma == doctest::Approx(std::sqrt(200.0)).epsilon(1e-12));
  CHECK_FALSE(d.negative);
  CHECK(to_milliwatts(d.pump_power) == 10.0);

  // stderr weighting picks the smaller per-series uncertainty
  const RateDifference ds = compute_r_abs(solvent, sample, Weighting::std_error);
  CHECK(ds.sigma ==
        doctest::Approx(std::sqrt(2.0) * 10.0 / std::sqrt(60.0)).epsilon(1e-12));

  // negative differences are kept and flagged, not clamped
  const RateDifference neg = compute_r_abs(sample, solvent);
  CHECK(neg.value == doctest::Approx(-200.0).epsilon(1e-15));
  CHECK(neg.negative);

  SeriesSummary other = sample;
  other.pump_power = milliwatts(11.0);
  CHECK_THROWS_AS(compute_r_abs(solvent, other), DataError);
}

TEST_CASE("cross section from slope inverts the absorption fraction") {
  const ExperimentGeometry g = reference::geometry();
  FitResult fit;
  fit.slope = 0.1934913826188;  // absorption fraction of the 63 uM row
  fit.slope_stderr = 0.01;

  const SigmaEResult r = sigma_e_from_slope(fit, micromolar(63.0), g, 0.0, "z63");
  CHECK(r.sigma_e.value() == doctest::Approx(5.1e-18).epsilon(1e-12));
  CHECK(r.label == "z63");
  // uncertainty scales by the same geometric factor as the slope
  const double factor = 5.1e-18 / 0.1934913826188;
  CHECK(r.sigma_e_uncertainty.value() ==
        doctest::Approx(0.01 * factor).epsilon(1e-9));
}

TEST_CASE("cross section uncertainty folds in the geometry budget") {
  const ExperimentGeometry g = reference::geometry();
  FitResult fit;
  fit.slope = 0.2;
  fit.slope_stderr = 0.0;
  const SigmaEResult r = sigma_e_from_slope(fit, micromolar(63.0), g, 0.05);
  // with zero fit error the 5% geometry budget is the whole uncertainty
  CHECK(r.sigma_e_uncertainty.value() ==
        doctest::Approx(0.05 * r.sigma_e.value()).epsilon(1e-12));
}

TEST_CASE("cross section from slope rejects impossible inputs") {
  const ExperimentGeometry g = reference::geometry();
  FitResult fit;
  fit.slope = 0.1;
  CHECK_THROWS_AS(sigma_e_from_slope(fit, Concentration(0.0), g), DomainError);
  fit.slope = -0.1;
  CHECK_THROWS_AS(sigma_e_from_slope(fit, micromolar(63.0), g), DomainError);
}

TEST_CASE("concentration table: ordering and product diagnostics") {
  // deliberately unsorted input
  std::vector<SigmaEResult> rows = {
      row("zntpp_1400uM", 1400e-6, 0.27e-18), row("zntpp_17uM", 17e-6, 42e-18),
      row("zntpp_120uM", 120e-6, 3.2e-18),   row("zntpp_230uM", 230e-6, 1.1e-18),
      row("zntpp_63uM", 63e-6, 5.1e-18)};
  const ConcentrationTable t = concentration_series(rows);

  REQUIRE(t.rows.size() == 5);
  CHECK(t.rows.front().label == "zntpp_17uM");
  CHECK(t.rows.back().label == "zntpp_1400uM");
  CHECK(t.product_diagnostics.size() == 10);  // all pairs
  CHECK(t.decay_violations.empty());          // published series decays monotonically

  // the 120 uM / 1400 uM pair agrees to 1.6%
  bool found = false;
  for (const ProductDiagnostic& d : t.product_diagnostics) {
    if (d.label_a == "zntpp_120uM" && d.label_b == "zntpp_1400uM") {
      found = true;
      CHECK(d.product_a == doctest::Approx(3.84e-22).epsilon(1e-12));
      CHECK(d.product_b == doctest::Approx(3.78e-22).epsilon(1e-12));
      CHECK(d.rel_difference ==
            doctest::Approx(0.015748031496063).epsilon(1e-9));
    }
  }
  CHECK(found);
}

TEST_CASE("concentration table: decay violations are flagged") {
  std::vector<SigmaEResult> rows;
  for (const auto& r : reference::rhb_rows()) {
    rows.push_back(row(r.label, r.concentration_molar, r.sigma_e_cm2));
  }
  const ConcentrationTable t = concentration_series(rows);
  // sigma_E rises again from 58 mM to 110 mM
  REQUIRE(t.decay_violations.size() == 1);
  CHECK(t.decay_violations[0].label_low == "rhb_58mM");
  CHECK(t.decay_violations[0].label_high == "rhb_110mM");

  // the 0.038 / 0.19 mM product pair stays under 5%
  for (const ProductDiagnostic& d : t.product_diagnostics) {
    if (d.label_a == "rhb_0.038mM" && d.label_b == "rhb_0.19mM") {
      CHECK(d.rel_difference == doctest::Approx(0.04878048780487811).epsilon(1e-9));
    }
  }
}

TEST_CASE("concentration table rejects duplicates and empty input") {
  CHECK_THROWS_AS(concentration_series({}), DataError);
  CHECK_THROWS_AS(concentration_series(
                      {row("a", 1e-5, 1e-18), row("b", 1e-5, 2e-18)}),
                  DataError);
}

// End-to-end statistical check of the analysis pipeline on simulated
// data: the recovered cross section must close on the configured truth.
TEST_CASE("analyze_dataset recovers a simulated cross section") {
  SourceConfig cfg;
  cfg.rng_seed = 31337;
  const ExperimentGeometry g = reference::geometry();
  const Dataset ds =
      run_experiment(cfg, {SampleSpec::solvent("toluene"), zntpp63()}, g);

  const AnalysisReport rep = analyze_dataset(ds, g);
  CHECK(rep.solvent_summaries.size() == 20);
  CHECK(rep.calibration.forced_through_origin);
  CHECK(rep.calibration.slope > 0.0);
  REQUIRE(rep.samples.size() == 1);

  const SampleAnalysis& sa = rep.samples[0];
  CHECK(sa.label == "zntpp_63uM");
  CHECK(sa.points.size() == 20);
  CHECK(sa.negative_r_abs_count == 0);  // signal is ~190x the noise here

  const double sigma = sa.sigma_e.sigma_e.value();
  const double unc = sa.sigma_e.sigma_e_uncertainty.value();
  CHECK(std::abs(sigma - 5.1e-18) < 3.0 * unc);
  CHECK(std::abs(sigma - 5.1e-18) / 5.1e-18 < 0.05);
  REQUIRE(rep.table.rows.size() == 1);
  CHECK(rep.table.rows[0].label == "zntpp_63uM");
}

// Accidental coincidences inflate both the solvent and sample rates; the
// no-subtraction path therefore carries a small positive bias on the
// recovered cross section. Subtracting the per-bin estimate must remove
// it. Run both paths with stderr weighting, where the bias is resolved.
TEST_CASE("accidental subtraction removes the recovery bias") {
  const ExperimentGeometry g = reference::geometry();
  AnalysisOptions plain;
  plain.weighting = Weighting::std_error;
  AnalysisOptions subtracted = plain;
  subtracted.subtract_accidentals = true;

  double z_plain_sum = 0.0, z_sub_sum = 0.0;
  const int n_seeds = 12;
  for (int s = 0; s < n_seeds; ++s) {
    SourceConfig cfg;
    cfg.rng_seed = 5000 + static_cast<std::uint64_t>(s);
    const Dataset ds =
        run_experiment(cfg, {SampleSpec::solvent("toluene"), zntpp63()}, g);

    const SigmaEResult a = analyze_dataset(ds, g, plain).samples[0].sigma_e;
    const SigmaEResult b = analyze_dataset(ds, g, subtracted).samples[0].sigma_e;
    z_plain_sum += (a.sigma_e.value() - 5.1e-18) / a.sigma_e_uncertainty.value();
    z_sub_sum += (b.sigma_e.value() - 5.1e-18) / b.sigma_e_uncertainty.value();
  }
  const double z_plain = z_plain_sum / n_seeds;
  const double z_sub = z_sub_sum / n_seeds;
  CHECK(z_plain > 3.0);             // bias resolved many sigma away from zero
  CHECK(std::abs(z_sub) < 1.0);     // subtracted estimate is centered
  CHECK(z_sub < z_plain);
}

TEST_CASE("analyze_dataset rejects inconsistent datasets") {
  SourceConfig cfg;
  cfg.pump_powers = {milliwatts(5.0), milliwatts(10.0)};
  cfg.bins_per_point = 4;
  const ExperimentGeometry g = reference::geometry();
  Dataset ds = run_experiment(cfg, {SampleSpec::solvent("toluene"), zntpp63()}, g);

  // duplicate pump power within one run
  Dataset dup = ds;
  dup.samples[1].series.push_back(dup.samples[1].series[0]);
  CHECK_THROWS_AS(analyze_dataset(dup, g), DataError);

  // sample measured at a power the solvent never saw
  Dataset missing = ds;
  missing.samples[1].series[1].pump_power = milliwatts(15.0);
  CHECK_THROWS_AS(analyze_dataset(missing, g), DataError);

  // solvent alone is not an experiment
  Dataset only;
  only.samples.push_back(ds.samples[0]);
  CHECK_THROWS_AS(analyze_dataset(only, g), DataError);
}
