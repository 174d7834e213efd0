#include "etpa/experiment_model.hpp"

#include <cctype>
#include <numbers>

namespace etpa {

Area beam_area(Length waist) {
  if (waist.value() <= 0.0) {
    throw DomainError("beam waist must be positive");
  }
  return Area(std::numbers::pi * waist.value() * waist.value());
}

Length rayleigh_range(Length waist, Length wavelength) {
  if (waist.value() <= 0.0 || wavelength.value() <= 0.0) {
    throw DomainError("beam waist and wavelength must be positive");
  }
  return Length(std::numbers::pi * waist.value() * waist.value() /
                wavelength.value());
}

ExperimentGeometry::ExperimentGeometry(Length beam_waist, Length wavelength,
                                       Length path_length)
    : waist_(beam_waist), wavelength_(wavelength), path_(path_length) {
  if (waist_.value() <= 0.0 || wavelength_.value() <= 0.0 ||
      path_.value() <= 0.0) {
    throw DomainError("geometry requires positive waist, wavelength and path length");
  }
}

ExperimentGeometry::ExperimentGeometry(Length beam_waist, Length wavelength,
                                       Length path_length, Area area_override)
    : ExperimentGeometry(beam_waist, wavelength, path_length) {
  if (area_override.value() <= 0.0) {
    throw DomainError("area override must be positive");
  }
  area_override_ = area_override;
}

Area ExperimentGeometry::area() const {
  return area_override_ ? *area_override_ : beam_area(waist_);
}

Volume ExperimentGeometry::volume() const {
  return Volume(area().value() * path_.value());
}

Length ExperimentGeometry::rayleigh_range() const {
  return etpa::rayleigh_range(waist_, wavelength_);
}

bool ExperimentGeometry::collimated_cylinder_ok() const {
  return rayleigh_range().value() >= 0.5 * path_.value();
}

SampleSpec SampleSpec::solvent(std::string label) {
  SampleSpec s;
  s.label = std::move(label);
  s.validate();
  return s;
}

void SampleSpec::validate() const {
  if (label.empty() || label.size() > 64) {
    throw DomainError("sample label must be 1-64 characters");
  }
  for (unsigned char ch : label) {
    if (!(std::isalnum(ch) || ch == '_' || ch == '.' || ch == '+' || ch == '-')) {
      throw DomainError("sample label '" + label +
                        "' may contain only [A-Za-z0-9_.+-]");
    }
  }
}

Rate tpa_rate(FluxDensity phi, CrossSectionE sigma_e, CrossSectionR delta_r) {
  return Rate(sigma_e.value() * phi.value() +
              delta_r.value() * phi.value() * phi.value());
}

Rate etpa_rate(FluxDensity pair_flux, CrossSectionE sigma_e) {
  return Rate(2.0 * sigma_e.value() * pair_flux.value());
}

FluxDensity crossover_flux(CrossSectionE sigma_e, CrossSectionR delta_r) {
  if (delta_r.value() == 0.0) {
    throw DomainError("crossover flux is undefined for zero random cross section");
  }
  return FluxDensity(sigma_e.value() / delta_r.value());
}

AbsorptionFraction absorption_fraction(Concentration c,
                                       const ExperimentGeometry& geometry,
                                       CrossSectionE sigma_e) {
  const double molecules =
      molar_to_number_density(c).value() * geometry.volume().value();
  const double fraction = molecules * sigma_e.value() / geometry.area().value();
  return {fraction, fraction >= 1.0};
}

AbsorbedPairRate absorbed_pair_rate(Concentration c,
                                    const ExperimentGeometry& geometry,
                                    CrossSectionE sigma_e, Rate r_solvent) {
  const AbsorptionFraction f = absorption_fraction(c, geometry, sigma_e);
  return {Rate(f.value * r_solvent.value()), f.model_breakdown};
}

}  // namespace etpa
