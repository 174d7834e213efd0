#pragma once

#include <vector>

#include "etpa/experiment_model.hpp"
#include "etpa/run_config.hpp"

// Built-in reference values for the instrument this library models:
// an 808 nm degenerate SPDC pair source focused to a 61 um waist
// through a 10 mm cuvette, and the published cross-section series for
// the two dyes measured on it. Used by the demo mode and as fixtures
// for consistency checks.

namespace etpa::reference {

/// Interaction region with the instrument-quoted area of 2e-4 cm^2
/// overriding pi*w0^2, giving a 2e-4 cm^3 interaction volume.
ExperimentGeometry geometry();

struct CrossSectionRow {
  const char* label;
  double concentration_molar;
  double sigma_e_cm2;
  double sigma_e_uncertainty_cm2;
};

/// Zinc tetraphenylporphyrin in toluene, by concentration.
const std::vector<CrossSectionRow>& zntpp_rows();

/// Rhodamine B in methanol. The two highest concentrations break the
/// monotone decay of sigma_E, which the decay diagnostic must surface.
const std::vector<CrossSectionRow>& rhb_rows();

/// Demo run: toluene solvent plus the five ZnTPP concentrations with
/// their quoted cross sections as simulation truth.
RunConfig demo_config();

}  // namespace etpa::reference
