#include "etpa/sim_source.hpp"

#include <algorithm>
#include <string>

#include "etpa/random.hpp"

namespace etpa {

namespace {

constexpr double kMaxExactCount = 0x1.0p53;

void check_unit_interval(double v, const char* name, bool zero_ok) {
  const bool ok = std::isfinite(v) && v <= 1.0 && (zero_ok ? v >= 0.0 : v > 0.0);
  if (!ok) {
    throw ConfigError(std::string(name) + " must be in " +
                      (zero_ok ? "[0, 1]" : "(0, 1]"));
  }
}

}  // namespace

std::vector<Power> default_pump_sweep() {
  std::vector<Power> powers;
  powers.reserve(20);
  for (int mw = 1; mw <= 20; ++mw) {
    powers.push_back(milliwatts(static_cast<double>(mw)));
  }
  return powers;
}

void SourceConfig::validate() const {
  if (pump_powers.empty()) {
    throw ConfigError("pump_powers must contain at least one power");
  }
  if (!(pairs_per_mw >= 0.0) || !std::isfinite(pairs_per_mw)) {
    throw ConfigError("pairs_per_mw must be finite and non-negative");
  }
  check_unit_interval(detector_efficiency, "detector_efficiency", true);
  check_unit_interval(coupling_efficiency, "coupling_efficiency", true);
  check_unit_interval(solvent_transmission, "solvent_transmission", false);
  if (coincidence_window.value() <= 0.0) {
    throw ConfigError("coincidence_window must be positive");
  }
  if (bin_duration.value() <= 0.0) {
    throw ConfigError("bin_duration must be positive");
  }
  if (bins_per_point < 1) {
    throw ConfigError("bins_per_point must be at least 1");
  }
}

Rate pair_rate_from_pump(Power pump, double pairs_per_mw) {
  if (!(pairs_per_mw >= 0.0) || !std::isfinite(pairs_per_mw)) {
    throw DomainError("pairs_per_mw must be finite and non-negative");
  }
  return Rate(pairs_per_mw * to_milliwatts(pump));
}

ExpectedRates expected_rates(const SourceConfig& config,
                             const SampleSpec& sample,
                             const ExperimentGeometry& geometry, Power pump) {
  config.validate();

  const double pairs_at_sample =
      pair_rate_from_pump(pump, config.pairs_per_mw).value() *
      config.solvent_transmission;
  const AbsorptionFraction f =
      absorption_fraction(sample.concentration, geometry, sample.sigma_e);
  // The linear model has no saturation; past breakdown the surviving
  // rate is floored at zero so Poisson means stay valid.
  const double surviving = pairs_at_sample * std::max(0.0, 1.0 - f.value);

  const double eta = config.detector_efficiency * config.coupling_efficiency;

  ExpectedRates rates;
  rates.singles1 = surviving * eta;
  rates.singles2 = surviving * eta;
  rates.true_coincidences = surviving * 0.5 * eta * eta;
  rates.accidentals =
      rates.singles1 * rates.singles2 * config.coincidence_window.value();
  rates.model_breakdown = f.model_breakdown;
  return rates;
}

FluxDensity photon_flux_density_at_sample(const SourceConfig& config,
                                          const ExperimentGeometry& geometry,
                                          Power pump) {
  const double pairs_at_sample =
      pair_rate_from_pump(pump, config.pairs_per_mw).value() *
      config.solvent_transmission;
  return FluxDensity(2.0 * pairs_at_sample / geometry.area().value());
}

MeasurementSeries simulate_point(const SourceConfig& config,
                                 const SampleSpec& sample,
                                 const ExperimentGeometry& geometry,
                                 std::size_t sample_index,
                                 std::size_t power_index) {
  if (power_index >= config.pump_powers.size()) {
    throw ConfigError("power_index out of range");
  }
  const Power pump = config.pump_powers[power_index];
  const ExpectedRates rates = expected_rates(config, sample, geometry, pump);

  const double dt = config.bin_duration.value();
  const double mean_cc = rates.true_coincidences * dt;
  const double mean_extra1 = (rates.singles1 - rates.true_coincidences) * dt;
  const double mean_extra2 = (rates.singles2 - rates.true_coincidences) * dt;
  const double mean_acc = rates.accidentals * dt;
  for (double m : {mean_cc, mean_extra1, mean_extra2, mean_acc}) {
    if (m > kMaxExactCount) {
      throw ConfigError("expected counts per bin exceed the exactly representable range");
    }
  }

  SplitMix64 rng(substream_seed(config.rng_seed, sample_index, power_index));

  MeasurementSeries series;
  series.sample_label = sample.label;
  series.concentration = sample.concentration;
  series.pump_power = pump;
  series.bin_duration = config.bin_duration;
  series.bins.reserve(config.bins_per_point);

  for (std::size_t b = 0; b < config.bins_per_point; ++b) {
    BinCounts bin;
    const std::uint64_t n_true = sample_poisson(rng, mean_cc);
    bin.singles1 = n_true + sample_poisson(rng, mean_extra1);
    bin.singles2 = n_true + sample_poisson(rng, mean_extra2);
    const std::uint64_t n_acc = sample_poisson(rng, mean_acc);
    bin.coincidences =
        std::min({n_true + n_acc, bin.singles1, bin.singles2});
    series.bins.push_back(bin);
  }
  return series;
}

std::vector<MeasurementSeries> simulate_series(const SourceConfig& config,
                                               const SampleSpec& sample,
                                               const ExperimentGeometry& geometry,
                                               std::size_t sample_index) {
  config.validate();
  sample.validate();
  std::vector<MeasurementSeries> out;
  out.reserve(config.pump_powers.size());
  for (std::size_t p = 0; p < config.pump_powers.size(); ++p) {
    out.push_back(simulate_point(config, sample, geometry, sample_index, p));
  }
  return out;
}

Dataset run_experiment(const SourceConfig& config,
                       const std::vector<SampleSpec>& samples,
                       const ExperimentGeometry& geometry) {
  config.validate();
  std::size_t solvent_count = 0;
  for (const SampleSpec& s : samples) {
    s.validate();
    if (s.is_solvent()) {
      ++solvent_count;
    }
  }
  if (solvent_count != 1) {
    throw ConfigError("experiment requires exactly one zero-concentration "
                      "solvent reference, got " +
                      std::to_string(solvent_count));
  }

  Dataset dataset;
  dataset.samples.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    SampleRun run;
    run.sample = samples[i];
    run.series = simulate_series(config, samples[i], geometry, i);
    dataset.samples.push_back(std::move(run));
  }
  return dataset;
}

}  // namespace etpa
