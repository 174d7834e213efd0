#pragma once

#include <cstdint>
#include <vector>

#include "etpa/experiment_model.hpp"
#include "etpa/measurement.hpp"
#include "etpa/units.hpp"

// Monte Carlo model of the detection chain: pump sweep, pair production,
// solvent transmission, sample absorption, 50/50 splitter routing,
// detector and coupling efficiency, coincidence windowing, and the
// repeated one-second accumulation protocol. Counts are Poisson samples
// of closed-form mean rates; no per-photon timestamps are generated.

namespace etpa {

inline constexpr std::uint64_t default_rng_seed = 0xe7fa5eedull;

/// Pump powers 1, 2, ..., 20 mW.
std::vector<Power> default_pump_sweep();

/// Source, detection and protocol parameters. The defaults put the
/// simulated instrument in the regime of a cw-pumped SPDC source read
/// out by fiber-coupled single-photon counters: at 20 mW the detected
/// singles sum to ~5e5/s and the pair flux density at the sample is
/// ~2e10 photons/(s cm^2). The efficiency product is kept high enough
/// that accidentals stay a few percent of true coincidences, so the
/// no-subtraction analysis path is close to unbiased.
struct SourceConfig {
  std::vector<Power> pump_powers = default_pump_sweep();
  /// Pairs per second arriving at the sample per mW of pump.
  double pairs_per_mw = 1e5;
  /// Single-photon detection efficiency of each counter.
  double detector_efficiency = 0.5;
  /// Fiber-coupling efficiency per photon, applied before detection.
  double coupling_efficiency = 0.25;
  Duration coincidence_window = nanoseconds(9.0);
  Duration bin_duration = seconds(1.0);
  std::size_t bins_per_point = 60;
  /// Pair transmission of the pure solvent, folded into the rate at the
  /// sample position.
  double solvent_transmission = 1.0;
  std::uint64_t rng_seed = default_rng_seed;

  /// Throws ConfigError on out-of-range parameters.
  void validate() const;
};

/// Pair production rate for pump power P: pairs_per_mw * P[mW].
Rate pair_rate_from_pump(Power pump, double pairs_per_mw);

/// Mean detector and counter rates at one pump power, per second.
/// The detection chain:
///   pairs at sample   k_cal * P * T_s
///   surviving pairs   * (1 - absorption_fraction), floored at zero
///   singles per det   * eta * eta_c          (photon basis, 50/50 split)
///   true coincidences * (1/2) * (eta*eta_c)^2
///   accidentals       singles1 * singles2 * tau
struct ExpectedRates {
  double singles1 = 0.0;
  double singles2 = 0.0;
  double true_coincidences = 0.0;
  double accidentals = 0.0;
  bool model_breakdown = false;

  double observed_coincidences() const {
    return true_coincidences + accidentals;
  }
};

ExpectedRates expected_rates(const SourceConfig& config,
                             const SampleSpec& sample,
                             const ExperimentGeometry& geometry, Power pump);

/// Photon flux density incident on the sample (two photons per pair):
/// 2 * k_cal * P * T_s / A.
FluxDensity photon_flux_density_at_sample(const SourceConfig& config,
                                          const ExperimentGeometry& geometry,
                                          Power pump);

/// One measurement point, seeded by substream_seed(config.rng_seed,
/// sample_index, power_index). Per bin the draws are, in order:
/// true coincidences, extra singles 1, extra singles 2, accidentals;
/// singles are the shared true coincidences plus the channel's extras,
/// so coincidences <= min(singles1, singles2) holds bin by bin.
MeasurementSeries simulate_point(const SourceConfig& config,
                                 const SampleSpec& sample,
                                 const ExperimentGeometry& geometry,
                                 std::size_t sample_index,
                                 std::size_t power_index);

/// All pump powers for one sample.
std::vector<MeasurementSeries> simulate_series(
    const SourceConfig& config, const SampleSpec& sample,
    const ExperimentGeometry& geometry, std::size_t sample_index = 0);

/// Full experiment over every (sample, power) point. Requires exactly
/// one zero-concentration (solvent reference) entry; sample order is
/// preserved and indexes the substream seeds.
Dataset run_experiment(const SourceConfig& config,
                       const std::vector<SampleSpec>& samples,
                       const ExperimentGeometry& geometry);

}  // namespace etpa
