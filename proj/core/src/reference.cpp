#include "etpa/reference.hpp"

namespace etpa::reference {

ExperimentGeometry geometry() {
  return ExperimentGeometry(microns(61.0), nanometers(808.0), millimeters(10.0),
                            square_centimeters(2e-4));
}

const std::vector<CrossSectionRow>& zntpp_rows() {
  static const std::vector<CrossSectionRow> rows = {
      {"zntpp_17uM", 17e-6, 42e-18, 5.2e-18},
      {"zntpp_63uM", 63e-6, 5.1e-18, 0.46e-18},
      {"zntpp_120uM", 120e-6, 3.2e-18, 0.20e-18},
      {"zntpp_230uM", 230e-6, 1.1e-18, 0.07e-18},
      {"zntpp_1400uM", 1400e-6, 0.27e-18, 0.026e-18},
  };
  return rows;
}

const std::vector<CrossSectionRow>& rhb_rows() {
  static const std::vector<CrossSectionRow> rows = {
      {"rhb_0.038mM", 0.038e-3, 4.2e-18, 0.34e-18},
      {"rhb_0.19mM", 0.19e-3, 0.80e-18, 0.068e-18},
      {"rhb_4.5mM", 4.5e-3, 0.063e-18, 0.0039e-18},
      {"rhb_58mM", 58e-3, 0.011e-18, 0.00084e-18},
      {"rhb_110mM", 110e-3, 0.017e-18, 0.0018e-18},
  };
  return rows;
}

RunConfig demo_config() {
  RunConfig cfg;
  cfg.mode = RunMode::demo;
  cfg.geometry.beam_waist = microns(61.0);
  cfg.geometry.wavelength = nanometers(808.0);
  cfg.geometry.path_length = millimeters(10.0);
  cfg.geometry.area_override = square_centimeters(2e-4);
  cfg.dataset_path = "demo_dataset.csv";
  cfg.out_dir = "demo_out";

  cfg.samples.push_back(SampleSpec::solvent("toluene"));
  for (const CrossSectionRow& row : zntpp_rows()) {
    SampleSpec s;
    s.label = row.label;
    s.concentration = molar(row.concentration_molar);
    s.sigma_e = cm2_per_molecule(row.sigma_e_cm2);
    cfg.samples.push_back(std::move(s));
  }
  return cfg;
}

}  // namespace etpa::reference
