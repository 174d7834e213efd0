#pragma once

#include <string>
#include <string_view>

#include "etpa/measurement.hpp"

namespace etpa {

// Fixed CSV schema: UTF-8, LF line endings, '.' decimal separator, no
// thousands separators. Doubles are written in shortest round-trip form,
// so save -> load -> save is byte-identical.
inline constexpr std::string_view dataset_csv_header =
    "sample_label,concentration_molar,pump_power_mW,bin_index,duration_s,"
    "singles1,singles2,coincidences";

std::string dataset_to_csv(const Dataset& dataset);

// Parse errors carry the 1-based line number and the offending column name.
Dataset parse_dataset_csv(std::string_view text);

void save_dataset(const Dataset& dataset, const std::string& path);

Dataset load_dataset(const std::string& path);

}  // namespace etpa
