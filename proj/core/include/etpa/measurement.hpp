#pragma once

#include <cstdint>
#include <vector>

#include "etpa/experiment_model.hpp"
#include "etpa/units.hpp"

namespace etpa {

/// Raw counter readings for one accumulation bin.
struct BinCounts {
  std::uint64_t singles1 = 0;
  std::uint64_t singles2 = 0;
  std::uint64_t coincidences = 0;
};

/// Counts for one (sample, pump power) measurement point: a train of
/// equal-duration bins. Per bin, coincidences never exceed either
/// singles channel; summaries are always recomputed from the bins.
struct MeasurementSeries {
  std::string sample_label;
  Concentration concentration{0.0};
  Power pump_power{0.0};
  Duration bin_duration{1.0};
  std::vector<BinCounts> bins;

  /// Throws DataError on an empty series, a non-positive bin duration,
  /// or any bin violating coincidences <= min(singles1, singles2).
  void validate() const;
};

/// All series simulated or recorded for one sample, one per pump power.
struct SampleRun {
  SampleSpec sample;
  std::vector<MeasurementSeries> series;
};

/// A full experiment: every sample swept over the pump powers, with the
/// zero-concentration sample acting as the solvent reference.
struct Dataset {
  std::vector<SampleRun> samples;

  /// Index of the unique zero-concentration reference. Throws DataError
  /// when there is none or more than one.
  std::size_t solvent_index() const;
  const SampleRun& solvent() const { return samples[solvent_index()]; }
};

}  // namespace etpa
