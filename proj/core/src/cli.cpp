#include "etpa/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "etpa/dataset_io.hpp"
#include "etpa/errors.hpp"
#include "etpa/estimator.hpp"
#include "etpa/reference.hpp"
#include "etpa/report.hpp"
#include "etpa/run_config.hpp"
#include "etpa/sim_source.hpp"

namespace etpa {

namespace {

std::uint64_t parse_seed_text(const std::string& s) {
  std::string_view v(s);
  int base = 10;
  if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
    v.remove_prefix(2);
    base = 16;
  }
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out, base);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("seed '" + s + "' is not an unsigned integer");
  }
  return out;
}

struct CommonFlags {
  std::string config_path;
  std::string seed_text;
  std::string out_dir;
  std::string format = "table";
  std::string weights;
  bool subtract_accidentals = false;
};

void add_common_flags(CLI::App* sub, CommonFlags& f, bool with_config) {
  if (with_config) {
    sub->add_option("--config", f.config_path, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
  }
  sub->add_option("--seed", f.seed_text,
                  "RNG seed (decimal or 0x hex); overrides config and "
                  "ETPA_LAB_SEED");
  sub->add_option("--out", f.out_dir, "output directory; overrides [io] out_dir");
  sub->add_option("--format", f.format, "report format")
      ->check(CLI::IsMember({"table", "kv"}));
  sub->add_flag("--subtract-accidentals", f.subtract_accidentals,
                "subtract the per-bin accidental estimate before analysis");
  sub->add_option("--weights", f.weights,
                  "fit weighting: per-bin std or stderr of the mean")
      ->check(CLI::IsMember({"std", "stderr"}));
}

std::string resolve_path(const std::string& p, const std::string& base) {
  std::filesystem::path fp(p);
  if (fp.is_relative()) fp = std::filesystem::path(base) / fp;
  return fp.string();
}

void ensure_parent_dir(const std::string& file_path) {
  const std::filesystem::path parent = std::filesystem::path(file_path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) {
    throw IoError("cannot create directory '" + parent.string() + "': " + ec.message());
  }
}

RunConfig effective_config(RunMode mode, const CommonFlags& f) {
  RunConfig cfg = mode == RunMode::demo ? reference::demo_config()
                                        : load_run_config(f.config_path);
  cfg.mode = mode;

  if (!f.seed_text.empty()) {
    cfg.source.rng_seed = parse_seed_text(f.seed_text);
  } else if (!cfg.seed_from_config) {
    if (const char* env = std::getenv("ETPA_LAB_SEED"); env != nullptr && *env != '\0') {
      cfg.source.rng_seed = parse_seed_text(env);
    }
  }
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  if (f.subtract_accidentals) cfg.analysis.subtract_accidentals = true;
  if (f.weights == "std") cfg.analysis.weighting = Weighting::std_dev;
  if (f.weights == "stderr") cfg.analysis.weighting = Weighting::std_error;

  cfg.validate();
  return cfg;
}

std::vector<ReferenceCheck> reference_consistency() {
  std::vector<ReferenceCheck> out;
  const ExperimentGeometry g = reference::geometry();
  auto add = [&](const reference::CrossSectionRow& row) {
    const Concentration c = molar(row.concentration_molar);
    const AbsorptionFraction f =
        absorption_fraction(c, g, cm2_per_molecule(row.sigma_e_cm2));
    FitResult fit;
    fit.slope = f.value;
    const SigmaEResult back = sigma_e_from_slope(fit, c, g, 0.0, row.label);
    ReferenceCheck chk;
    chk.label = row.label;
    chk.sigma_e = row.sigma_e_cm2;
    chk.round_trip_rel_err =
        std::abs(back.sigma_e.value() - row.sigma_e_cm2) / row.sigma_e_cm2;
    out.push_back(std::move(chk));
  };
  for (const auto& row : reference::zntpp_rows()) add(row);
  for (const auto& row : reference::rhb_rows()) add(row);
  return out;
}

void print_and_emit(const Report& report, const RunConfig& cfg,
                    const CommonFlags& f) {
  const ReportFormat format =
      f.format == "kv" ? ReportFormat::kv : ReportFormat::table;
  std::cout << (format == ReportFormat::kv ? render_kv(report)
                                           : render_table(report));
  for (const std::string& path : emit_report(report, format, cfg.out_dir)) {
    std::cout << "wrote " << path << "\n";
  }
}

int dispatch(RunMode mode, const CommonFlags& f) {
  const RunConfig cfg = effective_config(mode, f);
  const ExperimentGeometry geometry = cfg.geometry.build();
  const std::uint64_t hash = cfg.config_hash();

  if (mode == RunMode::simulate) {
    const Dataset ds = run_experiment(cfg.source, cfg.samples, geometry);
    const std::string path = resolve_path(cfg.dataset_path, cfg.out_dir);
    ensure_parent_dir(path);
    save_dataset(ds, path);
    char hex[20];
    std::snprintf(hex, sizeof hex, "0x%016llx",
                  static_cast<unsigned long long>(hash));
    std::cout << "wrote " << path << " (config " << hex << ", seed "
              << cfg.source.rng_seed << ")\n";
    return 0;
  }

  Report report;
  report.mode = mode;
  report.config_hash = hash;
  report.seed = cfg.source.rng_seed;

  if (mode == RunMode::analyze) {
    const Dataset ds = load_dataset(resolve_path(cfg.dataset_path, cfg.out_dir));
    report.analysis = analyze_dataset(ds, geometry, cfg.analysis);
    print_and_emit(report, cfg, f);
    return 0;
  }

  // roundtrip and demo: simulate, persist, analyze, compare to truth
  const Dataset ds = run_experiment(cfg.source, cfg.samples, geometry);
  const std::string path = resolve_path(cfg.dataset_path, cfg.out_dir);
  ensure_parent_dir(path);
  save_dataset(ds, path);
  report.analysis = analyze_dataset(ds, geometry, cfg.analysis);
  report.truth = make_truth_comparisons(report.analysis, cfg.samples);
  if (mode == RunMode::demo) {
    report.reference_checks = reference_consistency();
  }
  print_and_emit(report, cfg, f);
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"simulate and analyze entangled-pair coincidence absorption runs"};
  app.require_subcommand(1);

  CommonFlags fsim, fana, frt, fdemo;
  CLI::App* sim = app.add_subcommand("simulate", "run the source model, write a dataset CSV");
  add_common_flags(sim, fsim, true);
  CLI::App* ana = app.add_subcommand("analyze", "estimate cross sections from a dataset CSV");
  add_common_flags(ana, fana, true);
  CLI::App* rt = app.add_subcommand("roundtrip",
                                     "simulate, analyze, and compare to configured truth");
  add_common_flags(rt, frt, true);
  CLI::App* demo = app.add_subcommand("demo", "roundtrip of the built-in reference run");
  add_common_flags(demo, fdemo, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) return dispatch(RunMode::simulate, fsim);
    if (ana->parsed()) return dispatch(RunMode::analyze, fana);
    if (rt->parsed()) return dispatch(RunMode::roundtrip, frt);
    return dispatch(RunMode::demo, fdemo);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(std::vector<std::string> args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.emplace_back("etpa-lab");
  for (std::string& a : args) full.push_back(std::move(a));
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& s : full) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace etpa
