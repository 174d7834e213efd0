#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "etpa/estimator.hpp"
#include "etpa/experiment_model.hpp"
#include "etpa/sim_source.hpp"

namespace etpa {

enum class RunMode { simulate, analyze, roundtrip, demo };

std::string_view run_mode_name(RunMode mode);

/// Geometry as configured; the validated ExperimentGeometry is built on
/// demand so defaults can be inspected or overridden first.
struct GeometryConfig {
  Length beam_waist = microns(61.0);
  Length wavelength = nanometers(808.0);
  Length path_length = millimeters(10.0);
  std::optional<Area> area_override;

  ExperimentGeometry build() const;
};

/// Everything one run needs. Parsed from a sectioned key = value text:
/// [geometry], [source], [options], [io] at most once each, [sample]
/// repeated per sample. '#' or ';' lines are comments. Unknown sections
/// and keys are errors, with line numbers.
struct RunConfig {
  RunMode mode = RunMode::simulate;
  GeometryConfig geometry;
  SourceConfig source;
  std::vector<SampleSpec> samples;
  AnalysisOptions analysis;
  std::string dataset_path = "dataset.csv";
  std::string out_dir = ".";
  /// True when the config file itself set the seed; the CLI uses this
  /// for its seed-precedence rules.
  bool seed_from_config = false;

  /// Mode-aware consistency check; throws ConfigError.
  void validate() const;

  /// Normalized dump of the effective configuration: fixed key order,
  /// shortest round-trip numbers, pump sweep expanded to a plain list.
  std::string canonical_text() const;

  /// FNV-1a 64-bit hash of the canonical text minus the [io] section,
  /// so moving files does not change a run's identity.
  std::uint64_t config_hash() const;
};

RunConfig parse_run_config(std::string_view text);

RunConfig load_run_config(const std::string& path);

}  // namespace etpa
