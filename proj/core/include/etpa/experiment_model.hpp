#pragma once

#include <optional>
#include <string>

#include "etpa/units.hpp"

// Physical model of the interaction region and of two-photon absorption
// driven by entangled pairs: per-molecule rates, the crossover flux
// between the entangled and random regimes, and the linear relation
// between the absorbed-pair rate and the solvent-transmitted rate.

namespace etpa {

/// Transverse beam area pi * w0^2 of a Gaussian beam at its waist.
Area beam_area(Length waist);

/// Rayleigh range pi * w0^2 / lambda.
Length rayleigh_range(Length waist, Length wavelength);

/// Interaction region: a cylinder of the beam area and the cuvette path
/// length. The area defaults to pi*w0^2 and can be overridden with an
/// instrument-quoted value; the volume is always area * path_length.
class ExperimentGeometry {
 public:
  ExperimentGeometry(Length beam_waist, Length wavelength, Length path_length);
  ExperimentGeometry(Length beam_waist, Length wavelength, Length path_length,
                     Area area_override);

  Length beam_waist() const { return waist_; }
  Length wavelength() const { return wavelength_; }
  Length path_length() const { return path_; }

  Area area() const;
  bool area_overridden() const { return area_override_.has_value(); }
  Volume volume() const;
  Length rayleigh_range() const;

  /// True when the Rayleigh range covers at least half the path, so the
  /// collimated-cylinder picture of the interaction volume holds.
  /// Diagnostic only; construction never rejects short Rayleigh ranges.
  bool collimated_cylinder_ok() const;

 private:
  Length waist_;
  Length wavelength_;
  Length path_;
  std::optional<Area> area_override_;
};

/// One solution under study: concentration, cross sections, display label.
/// Zero concentration marks the pure-solvent reference.
struct SampleSpec {
  std::string label;
  Concentration concentration{0.0};
  CrossSectionE sigma_e{0.0};
  CrossSectionR delta_r{0.0};

  bool is_solvent() const { return concentration.value() == 0.0; }

  static SampleSpec solvent(std::string label);

  /// Checks the label rules (1-64 chars of [A-Za-z0-9_.+-]); labels end
  /// up in CSV fields and file names. Throws DomainError.
  void validate() const;
};

/// Per-molecule TPA rate sigma_e*phi + delta_r*phi^2 for photon flux
/// density phi.
Rate tpa_rate(FluxDensity phi, CrossSectionE sigma_e, CrossSectionR delta_r);

/// Per-molecule entangled TPA rate 2*sigma_e*phi' for pair flux density
/// phi'. Identical to tpa_rate(2*phi', sigma_e, 0).
Rate etpa_rate(FluxDensity pair_flux, CrossSectionE sigma_e);

/// Flux density at which the linear (entangled) and quadratic (random)
/// terms of the TPA rate are equal: sigma_e / delta_r.
/// Throws DomainError when delta_r is zero (no crossover exists).
FluxDensity crossover_flux(CrossSectionE sigma_e, CrossSectionR delta_r);

/// Fraction of transmitted pairs absorbed by the solute, c*V*N_A*sigma_e/A
/// with c as a number density. Values >= 1 mean the single-pass linear
/// model broke down; they are returned as-is with the flag set rather
/// than clamped.
struct AbsorptionFraction {
  double value = 0.0;
  bool model_breakdown = false;
};

AbsorptionFraction absorption_fraction(Concentration c,
                                       const ExperimentGeometry& geometry,
                                       CrossSectionE sigma_e);

/// Absorbed-pair rate: absorption_fraction * r_solvent. Carries the
/// breakdown flag of the fraction.
struct AbsorbedPairRate {
  Rate value{0.0};
  bool model_breakdown = false;
};

AbsorbedPairRate absorbed_pair_rate(Concentration c,
                                    const ExperimentGeometry& geometry,
                                    CrossSectionE sigma_e, Rate r_solvent);

}  // namespace etpa
