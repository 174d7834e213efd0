#include "etpa/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "etpa/errors.hpp"

namespace etpa {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool usable_sigma(double s) { return std::isfinite(s) && s > 0.0; }

void check_finite_points(const std::vector<FitPoint>& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      throw FitError("fit point " + std::to_string(i) + " is not finite");
    }
  }
}

// Weighted straight-line fit with free intercept, absolute-sigma errors.
FitResult fit_with_intercept(const std::vector<FitPoint>& points, bool weighted) {
  double s = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const FitPoint& p : points) {
    const double w = weighted ? 1.0 / (p.sigma_y * p.sigma_y) : 1.0;
    s += w;
    sx += w * p.x;
    sy += w * p.y;
    sxx += w * p.x * p.x;
    sxy += w * p.x * p.y;
  }
  const double delta = s * sxx - sx * sx;
  if (delta <= 0.0) {
    throw FitError("degenerate design: need at least 2 distinct x values");
  }

  FitResult fit;
  fit.forced_through_origin = false;
  fit.weighted = weighted;
  fit.n_points = points.size();
  fit.slope = (s * sxy - sx * sy) / delta;
  fit.intercept = (sxx * sy - sx * sxy) / delta;

  double chi2 = 0.0;
  for (const FitPoint& p : points) {
    const double w = weighted ? 1.0 / (p.sigma_y * p.sigma_y) : 1.0;
    const double r = p.y - fit.slope * p.x - fit.intercept;
    chi2 += w * r * r;
  }
  const std::size_t dof = points.size() > 2 ? points.size() - 2 : 0;
  fit.chi2_reduced = dof > 0 ? chi2 / static_cast<double>(dof) : 0.0;

  if (weighted) {
    fit.slope_stderr = std::sqrt(s / delta);
    fit.intercept_stderr = std::sqrt(sxx / delta);
  } else {
    const double resid_var = dof > 0 ? chi2 / static_cast<double>(dof) : 0.0;
    fit.slope_stderr = std::sqrt(resid_var * s / delta);
    fit.intercept_stderr = std::sqrt(resid_var * sxx / delta);
  }
  return fit;
}

}  // namespace

SeriesSummary summarize_series(const MeasurementSeries& series,
                               const SummaryOptions& opts) {
  series.validate();
  const double t = series.bin_duration.value();
  const double tau = opts.coincidence_window.value();
  const std::size_t n = series.bins.size();

  SeriesSummary out;
  out.sample_label = series.sample_label;
  out.concentration = series.concentration;
  out.pump_power = series.pump_power;
  out.n_bins = n;

  std::vector<double> rates(n);
  double acc_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const BinCounts& b = series.bins[i];
    double rate = static_cast<double>(b.coincidences) / t;
    if (opts.subtract_accidentals) {
      const double acc = static_cast<double>(b.singles1) *
                         static_cast<double>(b.singles2) * tau / (t * t);
      rate -= acc;
      acc_sum += acc;
    }
    rates[i] = rate;
  }

  double sum = 0.0;
  for (double r : rates) sum += r;
  out.mean_rate = sum / static_cast<double>(n);
  out.accidental_mean = opts.subtract_accidentals ? acc_sum / static_cast<double>(n) : 0.0;

  if (n > 1) {
    double ss = 0.0;
    for (double r : rates) {
      const double d = r - out.mean_rate;
      ss += d * d;
    }
    out.std_rate = std::sqrt(ss / static_cast<double>(n - 1));
    out.stderr_rate = out.std_rate / std::sqrt(static_cast<double>(n));
  }
  return out;
}

FitResult fit_through_origin(const std::vector<FitPoint>& points) {
  if (points.size() < 2) {
    throw FitError("origin-forced fit needs at least 2 points, got " +
                   std::to_string(points.size()));
  }
  check_finite_points(points);

  bool weighted = true;
  bool any_x = false;
  for (const FitPoint& p : points) {
    weighted = weighted && usable_sigma(p.sigma_y);
    any_x = any_x || p.x != 0.0;
  }
  if (!any_x) {
    throw FitError("degenerate design: every x is zero");
  }

  double swx2 = 0.0, swxy = 0.0;
  for (const FitPoint& p : points) {
    const double w = weighted ? 1.0 / (p.sigma_y * p.sigma_y) : 1.0;
    swx2 += w * p.x * p.x;
    swxy += w * p.x * p.y;
  }

  FitResult fit;
  fit.forced_through_origin = true;
  fit.weighted = weighted;
  fit.n_points = points.size();
  fit.slope = swxy / swx2;

  double chi2 = 0.0;
  for (const FitPoint& p : points) {
    const double w = weighted ? 1.0 / (p.sigma_y * p.sigma_y) : 1.0;
    const double r = p.y - fit.slope * p.x;
    chi2 += w * r * r;
  }
  const std::size_t dof = points.size() - 1;
  fit.chi2_reduced = chi2 / static_cast<double>(dof);

  if (weighted) {
    fit.slope_stderr = std::sqrt(1.0 / swx2);
  } else {
    fit.slope_stderr = std::sqrt(chi2 / (static_cast<double>(dof) * swx2));
  }
  return fit;
}

FitResult calibrate_pump(const std::vector<RatePoint>& points, bool through_origin) {
  if (points.size() < 2) {
    throw FitError("pump calibration needs at least 2 points, got " +
                   std::to_string(points.size()));
  }
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i; ++j) {
      seen = seen || points[j].power == points[i].power;
    }
    if (!seen) ++distinct;
  }
  if (distinct < 2) {
    throw FitError("degenerate design: pump calibration needs at least 2 "
                   "distinct powers");
  }

  std::vector<FitPoint> pts;
  pts.reserve(points.size());
  bool weighted = true;
  for (const RatePoint& p : points) {
    if (!std::isfinite(p.rate)) {
      throw FitError("pump calibration rate is not finite");
    }
    weighted = weighted && usable_sigma(p.sigma);
    pts.push_back({to_milliwatts(p.power), p.rate, p.sigma});
  }
  if (!weighted) {
    for (FitPoint& p : pts) p.sigma_y = 0.0;
  }

  return through_origin ? fit_through_origin(pts) : fit_with_intercept(pts, weighted);
}

double predict_rate(const FitResult& calibration, Power power) {
  return calibration.slope * to_milliwatts(power) + calibration.intercept;
}

RateDifference compute_r_abs(const SeriesSummary& solvent,
                             const SeriesSummary& sample, Weighting weighting) {
  if (!(solvent.pump_power == sample.pump_power)) {
    throw DataError("pump power mismatch: solvent series at " +
                    fmt_double(to_milliwatts(solvent.pump_power)) +
                    " mW, sample series at " +
                    fmt_double(to_milliwatts(sample.pump_power)) + " mW");
  }
  RateDifference d;
  d.pump_power = solvent.pump_power;
  d.value = solvent.mean_rate - sample.mean_rate;
  const double s1 = solvent.uncertainty(weighting);
  const double s2 = sample.uncertainty(weighting);
  d.sigma = std::sqrt(s1 * s1 + s2 * s2);
  d.negative = d.value < 0.0;
  return d;
}

SigmaEResult sigma_e_from_slope(const FitResult& fit, Concentration concentration,
                                const ExperimentGeometry& geometry,
                                double geometry_rel_uncertainty, std::string label) {
  if (concentration.value() == 0.0) {
    throw DomainError("cannot separate sigma_E from the sigma_E*c product at "
                      "zero concentration");
  }
  if (fit.slope < 0.0) {
    throw DomainError("absorption slope is negative (" + fmt_double(fit.slope) +
                      "); no physical cross section");
  }
  if (!(geometry_rel_uncertainty >= 0.0) || !std::isfinite(geometry_rel_uncertainty)) {
    throw DomainError("geometry relative uncertainty must be finite and >= 0");
  }

  const NumberDensity nd = molar_to_number_density(concentration);
  const double factor =
      geometry.area().value() / (nd.value() * geometry.volume().value());

  SigmaEResult out;
  out.sigma_e = CrossSectionE(fit.slope * factor);
  const double fit_unc = fit.slope_stderr * factor;
  const double geom_unc = out.sigma_e.value() * geometry_rel_uncertainty;
  out.sigma_e_uncertainty =
      CrossSectionE(std::sqrt(fit_unc * fit_unc + geom_unc * geom_unc));
  out.concentration = concentration;
  out.label = std::move(label);
  return out;
}

ConcentrationTable concentration_series(std::vector<SigmaEResult> results) {
  if (results.empty()) {
    throw DataError("concentration series needs at least 1 result");
  }
  std::sort(results.begin(), results.end(),
            [](const SigmaEResult& a, const SigmaEResult& b) {
              return a.concentration.value() < b.concentration.value();
            });
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i - 1].concentration == results[i].concentration) {
      throw DataError("duplicate concentration " +
                      fmt_double(results[i].concentration.value()) +
                      " mol/L ('" + results[i - 1].label + "' and '" +
                      results[i].label + "')");
    }
  }

  ConcentrationTable table;
  table.rows = std::move(results);

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < table.rows.size(); ++j) {
      const SigmaEResult& a = table.rows[i];
      const SigmaEResult& b = table.rows[j];
      ProductDiagnostic d;
      d.label_a = a.label;
      d.label_b = b.label;
      d.product_a = a.sigma_e.value() * a.concentration.value();
      d.product_b = b.sigma_e.value() * b.concentration.value();
      const double mean = 0.5 * (d.product_a + d.product_b);
      d.rel_difference = mean > 0.0 ? std::abs(d.product_a - d.product_b) / mean : 0.0;
      table.product_diagnostics.push_back(std::move(d));
    }
  }

  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i].sigma_e.value() > table.rows[i - 1].sigma_e.value()) {
      table.decay_violations.push_back(
          {table.rows[i - 1].label, table.rows[i].label});
    }
  }
  return table;
}

AnalysisReport analyze_dataset(const Dataset& dataset,
                               const ExperimentGeometry& geometry,
                               const AnalysisOptions& options) {
  const std::size_t solvent_idx = dataset.solvent_index();

  SummaryOptions sopts;
  sopts.subtract_accidentals = options.subtract_accidentals;
  sopts.coincidence_window = options.coincidence_window;

  auto summarize_run = [&](const SampleRun& run) {
    std::vector<SeriesSummary> sums;
    sums.reserve(run.series.size());
    for (const MeasurementSeries& s : run.series) {
      for (const SeriesSummary& prev : sums) {
        if (prev.pump_power == s.pump_power) {
          throw DataError("sample '" + run.sample.label +
                          "' has two series at " +
                          fmt_double(to_milliwatts(s.pump_power)) + " mW");
        }
      }
      sums.push_back(summarize_series(s, sopts));
    }
    return sums;
  };

  AnalysisReport report;
  report.solvent_summaries = summarize_run(dataset.samples[solvent_idx]);

  std::vector<RatePoint> cal_points;
  cal_points.reserve(report.solvent_summaries.size());
  for (const SeriesSummary& s : report.solvent_summaries) {
    cal_points.push_back({s.pump_power, s.mean_rate, s.uncertainty(options.weighting)});
  }
  report.calibration = calibrate_pump(cal_points, /*through_origin=*/true);

  std::vector<SigmaEResult> rows;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    if (i == solvent_idx) continue;
    const SampleRun& run = dataset.samples[i];
    run.sample.validate();

    SampleAnalysis sa;
    sa.label = run.sample.label;
    sa.concentration = run.sample.concentration;

    sa.summaries = summarize_run(run);
    for (const SeriesSummary& sum : sa.summaries) {
      const SeriesSummary* solvent_sum = nullptr;
      for (const SeriesSummary& s : report.solvent_summaries) {
        if (s.pump_power == sum.pump_power) {
          solvent_sum = &s;
          break;
        }
      }
      if (solvent_sum == nullptr) {
        throw DataError("sample '" + run.sample.label + "' has a series at " +
                        fmt_double(to_milliwatts(sum.pump_power)) +
                        " mW with no matching solvent series");
      }
      const RateDifference d = compute_r_abs(*solvent_sum, sum, options.weighting);
      if (d.negative) ++sa.negative_r_abs_count;
      sa.points.push_back(
          {predict_rate(report.calibration, d.pump_power), d.value, d.sigma});
      sa.differences.push_back(d);
    }

    sa.fit = fit_through_origin(sa.points);
    sa.sigma_e = sigma_e_from_slope(sa.fit, sa.concentration, geometry,
                                    options.geometry_rel_uncertainty, sa.label);
    rows.push_back(sa.sigma_e);
    report.samples.push_back(std::move(sa));
  }

  if (rows.empty()) {
    throw DataError("dataset has no sample runs besides the solvent");
  }
  report.table = concentration_series(std::move(rows));
  return report;
}

}  // namespace etpa
