#include "etpa/measurement.hpp"

#include <string>

#include "etpa/errors.hpp"

namespace etpa {

void MeasurementSeries::validate() const {
  if (sample_label.empty()) {
    throw DataError("measurement series has empty sample label");
  }
  if (bin_duration.value() <= 0.0) {
    throw DataError("series '" + sample_label + "': bin duration must be positive");
  }
  if (bins.empty()) {
    throw DataError("series '" + sample_label + "': no bins");
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const BinCounts& b = bins[i];
    const std::uint64_t cap = b.singles1 < b.singles2 ? b.singles1 : b.singles2;
    if (b.coincidences > cap) {
      throw DataError("series '" + sample_label + "', bin " + std::to_string(i) +
                      ": coincidences " + std::to_string(b.coincidences) +
                      " exceed min singles " + std::to_string(cap));
    }
  }
}

std::size_t Dataset::solvent_index() const {
  std::size_t found = samples.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].sample.is_solvent()) {
      found = i;
      ++count;
    }
  }
  if (count != 1) {
    throw DataError("dataset needs exactly one pure-solvent run, found " +
                    std::to_string(count));
  }
  return found;
}

}  // namespace etpa
