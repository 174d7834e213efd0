#include "etpa/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "etpa/errors.hpp"

namespace etpa {

namespace {

std::string exact(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string rounded(double v, const char* spec = "%.4g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// micromolar below 1 mM, millimolar at and above
std::string display_concentration(Concentration c) {
  if (c.value() < 1e-3) {
    return rounded(to_micromolar(c)) + " uM";
  }
  return rounded(to_millimolar(c)) + " mM";
}

void check_renderable(const Report& report) {
  if (report.analysis.samples.empty() || report.analysis.solvent_summaries.empty()) {
    throw DataError("report is empty: no analyzed samples");
  }
}

std::string provenance_line(const Report& report) {
  return "tool " + report.version + ", config " + hash_hex(report.config_hash) +
         ", seed " + std::to_string(report.seed);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

std::string plot_header(const Report& report, const std::string& what,
                        const std::string& columns) {
  return "# " + what + "\n# columns: " + columns + "\n# " +
         provenance_line(report) + "\n";
}

}  // namespace

std::vector<TruthComparison> make_truth_comparisons(
    const AnalysisReport& analysis, const std::vector<SampleSpec>& samples) {
  std::vector<TruthComparison> rows;
  for (const SampleAnalysis& sa : analysis.samples) {
    const SampleSpec* spec = nullptr;
    for (const SampleSpec& s : samples) {
      if (s.label == sa.label) {
        spec = &s;
        break;
      }
    }
    if (spec == nullptr) continue;
    TruthComparison t;
    t.label = sa.label;
    t.truth_sigma_e = spec->sigma_e.value();
    t.recovered_sigma_e = sa.sigma_e.sigma_e.value();
    t.recovered_uncertainty = sa.sigma_e.sigma_e_uncertainty.value();
    t.z_score = t.recovered_uncertainty > 0.0
                    ? (t.recovered_sigma_e - t.truth_sigma_e) / t.recovered_uncertainty
                    : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(std::move(t));
  }
  return rows;
}

std::string render_table(const Report& report) {
  check_renderable(report);
  const AnalysisReport& a = report.analysis;

  std::string out;
  out += "entangled two-photon absorption analysis (";
  out += run_mode_name(report.mode);
  out += ")\n";
  out += provenance_line(report) + "\n\n";

  out += "solvent reference: " + a.solvent_summaries.front().sample_label + "\n";
  out += "pump calibration (origin-forced): R_solvent = " +
         rounded(a.calibration.slope) + " /s per mW  (stderr " +
         rounded(a.calibration.slope_stderr) + ", points " +
         std::to_string(a.calibration.n_points) + ", chi2/dof " +
         rounded(a.calibration.chi2_reduced) + ")\n\n";

  char row[160];
  std::snprintf(row, sizeof row, "%-20s %12s %24s\n", "sample", "conc",
                "sigma_E [1e-18 cm^2]");
  out += row;
  for (const SigmaEResult& r : a.table.rows) {
    const std::string sig = rounded(r.sigma_e.value() * 1e18, "%.2g") + " +- " +
                            rounded(r.sigma_e_uncertainty.value() * 1e18, "%.2g");
    std::snprintf(row, sizeof row, "%-20s %12s %24s\n", r.label.c_str(),
                  display_concentration(r.concentration).c_str(), sig.c_str());
    out += row;
  }

  if (!a.table.product_diagnostics.empty()) {
    out += "\nsigma_E * c products (pairwise):\n";
    for (const ProductDiagnostic& d : a.table.product_diagnostics) {
      out += "  " + d.label_a + " vs " + d.label_b + ": " + rounded(d.product_a, "%.3g") +
             " vs " + rounded(d.product_b, "%.3g") + "  (rel diff " +
             rounded(d.rel_difference * 100.0, "%.2g") + "%)\n";
    }
  }
  if (a.table.decay_violations.empty()) {
    out += "\nsigma_E decay with concentration: monotone non-increasing\n";
  } else {
    out += "\nsigma_E decay violations:\n";
    for (const DecayViolation& v : a.table.decay_violations) {
      out += "  " + v.label_low + " -> " + v.label_high +
             ": sigma_E rises with concentration\n";
    }
  }

  if (!report.truth.empty()) {
    out += "\nrecovered vs configured truth:\n";
    std::snprintf(row, sizeof row, "  %-20s %12s %22s %8s\n", "sample", "truth",
                  "recovered +- unc", "z");
    out += row;
    for (const TruthComparison& t : report.truth) {
      const std::string rec = rounded(t.recovered_sigma_e * 1e18, "%.3g") + " +- " +
                              rounded(t.recovered_uncertainty * 1e18, "%.2g");
      std::snprintf(row, sizeof row, "  %-20s %12s %22s %8s\n", t.label.c_str(),
                    rounded(t.truth_sigma_e * 1e18, "%.3g").c_str(), rec.c_str(),
                    rounded(t.z_score, "%.2g").c_str());
      out += row;
    }
    out += "(sigma_E columns in 1e-18 cm^2)\n";
  }

  if (!report.reference_checks.empty()) {
    out += "\nreference rows, absorption-fraction round trip:\n";
    for (const ReferenceCheck& c : report.reference_checks) {
      out += "  " + c.label + ": sigma_E " + rounded(c.sigma_e * 1e18, "%.2g") +
             "e-18 cm^2, rel err " + rounded(c.round_trip_rel_err, "%.2g") + "\n";
    }
  }
  return out;
}

std::string render_kv(const Report& report) {
  check_renderable(report);
  const AnalysisReport& a = report.analysis;

  std::string out;
  auto kv = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };

  kv("mode", std::string(run_mode_name(report.mode)));
  kv("version", report.version);
  kv("config_hash", hash_hex(report.config_hash));
  kv("seed", std::to_string(report.seed));
  kv("solvent.label", a.solvent_summaries.front().sample_label);
  kv("calibration.slope_per_mw", exact(a.calibration.slope));
  kv("calibration.slope_stderr", exact(a.calibration.slope_stderr));
  kv("calibration.n_points", std::to_string(a.calibration.n_points));
  kv("calibration.chi2_reduced", exact(a.calibration.chi2_reduced));

  std::string labels;
  for (const SampleAnalysis& sa : a.samples) {
    if (!labels.empty()) labels += ',';
    labels += sa.label;
  }
  kv("samples", labels);
  for (const SampleAnalysis& sa : a.samples) {
    const std::string p = "sample." + sa.label + ".";
    kv(p + "concentration_molar", exact(sa.concentration.value()));
    kv(p + "n_powers", std::to_string(sa.points.size()));
    kv(p + "slope", exact(sa.fit.slope));
    kv(p + "slope_stderr", exact(sa.fit.slope_stderr));
    kv(p + "chi2_reduced", exact(sa.fit.chi2_reduced));
    kv(p + "negative_r_abs_points", std::to_string(sa.negative_r_abs_count));
    kv(p + "sigma_e_cm2", exact(sa.sigma_e.sigma_e.value()));
    kv(p + "sigma_e_uncertainty_cm2", exact(sa.sigma_e.sigma_e_uncertainty.value()));
  }

  kv("table.rows", std::to_string(a.table.rows.size()));
  for (std::size_t i = 0; i < a.table.rows.size(); ++i) {
    const SigmaEResult& r = a.table.rows[i];
    const std::string p = "table.row." + std::to_string(i) + ".";
    kv(p + "label", r.label);
    kv(p + "concentration_molar", exact(r.concentration.value()));
    kv(p + "sigma_e_cm2", exact(r.sigma_e.value()));
    kv(p + "sigma_e_uncertainty_cm2", exact(r.sigma_e_uncertainty.value()));
  }

  kv("product.count", std::to_string(a.table.product_diagnostics.size()));
  for (std::size_t i = 0; i < a.table.product_diagnostics.size(); ++i) {
    const ProductDiagnostic& d = a.table.product_diagnostics[i];
    const std::string p = "product." + std::to_string(i) + ".";
    kv(p + "label_a", d.label_a);
    kv(p + "label_b", d.label_b);
    kv(p + "product_a", exact(d.product_a));
    kv(p + "product_b", exact(d.product_b));
    kv(p + "rel_difference", exact(d.rel_difference));
  }

  kv("decay_violation.count", std::to_string(a.table.decay_violations.size()));
  for (std::size_t i = 0; i < a.table.decay_violations.size(); ++i) {
    const DecayViolation& v = a.table.decay_violations[i];
    const std::string p = "decay_violation." + std::to_string(i) + ".";
    kv(p + "low", v.label_low);
    kv(p + "high", v.label_high);
  }

  kv("truth.count", std::to_string(report.truth.size()));
  for (std::size_t i = 0; i < report.truth.size(); ++i) {
    const TruthComparison& t = report.truth[i];
    const std::string p = "truth." + std::to_string(i) + ".";
    kv(p + "label", t.label);
    kv(p + "sigma_e_cm2", exact(t.truth_sigma_e));
    kv(p + "recovered_cm2", exact(t.recovered_sigma_e));
    kv(p + "uncertainty_cm2", exact(t.recovered_uncertainty));
    kv(p + "z", exact(t.z_score));
  }

  kv("reference_check.count", std::to_string(report.reference_checks.size()));
  for (std::size_t i = 0; i < report.reference_checks.size(); ++i) {
    const ReferenceCheck& c = report.reference_checks[i];
    const std::string p = "reference_check." + std::to_string(i) + ".";
    kv(p + "label", c.label);
    kv(p + "sigma_e_cm2", exact(c.sigma_e));
    kv(p + "rel_err", exact(c.round_trip_rel_err));
  }
  return out;
}

std::vector<std::string> emit_report(const Report& report, ReportFormat format,
                                     const std::string& out_dir) {
  check_renderable(report);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
  }
  const std::filesystem::path dir(out_dir);
  std::vector<std::string> written;

  const bool table = format == ReportFormat::table;
  const std::string report_path = (dir / (table ? "report.txt" : "report.kv")).string();
  write_file(report_path, table ? render_table(report) : render_kv(report));
  written.push_back(report_path);

  const AnalysisReport& a = report.analysis;
  auto write_sweep = [&](const std::string& label,
                         const std::vector<SeriesSummary>& sums) {
    std::string content = plot_header(report, "coincidence rate vs pump power for " + label,
                                      "pump_mW rate_per_s std_per_s");
    for (const SeriesSummary& s : sums) {
      content += exact(to_milliwatts(s.pump_power));
      content += ' ';
      content += exact(s.mean_rate);
      content += ' ';
      content += exact(s.std_rate);
      content += '\n';
    }
    const std::string path = (dir / ("pump_sweep_" + label + ".dat")).string();
    write_file(path, content);
    written.push_back(path);
  };

  write_sweep(a.solvent_summaries.front().sample_label, a.solvent_summaries);
  for (const SampleAnalysis& sa : a.samples) write_sweep(sa.label, sa.summaries);

  for (const SampleAnalysis& sa : a.samples) {
    std::string content = plot_header(report, "absorbed rate vs solvent rate for " + sa.label,
                                      "r_solvent_per_s r_abs_per_s sigma_per_s");
    for (const FitPoint& p : sa.points) {
      content += exact(p.x);
      content += ' ';
      content += exact(p.y);
      content += ' ';
      content += exact(p.sigma_y);
      content += '\n';
    }
    const std::string path = (dir / ("absorption_" + sa.label + ".dat")).string();
    write_file(path, content);
    written.push_back(path);
  }

  std::string content = plot_header(report, "cross section vs concentration",
                                    "concentration_molar sigma_e_cm2 uncertainty_cm2");
  for (const SigmaEResult& r : a.table.rows) {
    content += exact(r.concentration.value());
    content += ' ';
    content += exact(r.sigma_e.value());
    content += ' ';
    content += exact(r.sigma_e_uncertainty.value());
    content += '\n';
  }
  const std::string sig_path = (dir / "sigma_e_vs_concentration.dat").string();
  write_file(sig_path, content);
  written.push_back(sig_path);

  return written;
}

}  // namespace etpa
