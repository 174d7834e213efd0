#include "etpa/dataset_io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "etpa/errors.hpp"

namespace etpa {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_count(std::string& out, std::uint64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

[[noreturn]] void parse_fail(std::size_t line, std::string_view column,
                             const std::string& what) {
  throw DataError("line " + std::to_string(line) + ", column " +
                  std::string(column) + ": " + what);
}

double parse_double(std::string_view field, std::size_t line, std::string_view column) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    parse_fail(line, column, "'" + std::string(field) + "' is not a number");
  }
  return v;
}

std::uint64_t parse_count(std::string_view field, std::size_t line,
                          std::string_view column) {
  if (!field.empty() && field.front() == '-') {
    parse_fail(line, column, "negative count " + std::string(field));
  }
  std::uint64_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    parse_fail(line, column, "'" + std::string(field) + "' is not a count");
  }
  return v;
}

constexpr std::string_view kColumns[] = {
    "sample_label", "concentration_molar", "pump_power_mW", "bin_index",
    "duration_s",   "singles1",            "singles2",      "coincidences"};

}  // namespace

std::string dataset_to_csv(const Dataset& dataset) {
  std::string out;
  out += dataset_csv_header;
  out += '\n';

  for (const SampleRun& run : dataset.samples) {
    run.sample.validate();
    for (const MeasurementSeries& series : run.series) {
      series.validate();
      if (series.sample_label != run.sample.label ||
          !(series.concentration == run.sample.concentration)) {
        throw DataError("series labeled '" + series.sample_label +
                        "' disagrees with its run '" + run.sample.label + "'");
      }
      for (std::size_t i = 0; i < series.bins.size(); ++i) {
        const BinCounts& b = series.bins[i];
        out += run.sample.label;
        out += ',';
        append_double(out, series.concentration.value());
        out += ',';
        append_double(out, to_milliwatts(series.pump_power));
        out += ',';
        append_count(out, i);
        out += ',';
        append_double(out, series.bin_duration.value());
        out += ',';
        append_count(out, b.singles1);
        out += ',';
        append_count(out, b.singles2);
        out += ',';
        append_count(out, b.coincidences);
        out += '\n';
      }
    }
  }
  return out;
}

Dataset parse_dataset_csv(std::string_view text) {
  Dataset dataset;
  std::vector<std::string> seen_labels;

  SampleRun* run = nullptr;
  MeasurementSeries* series = nullptr;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (line.find('\r') != std::string_view::npos) {
      throw DataError("line " + std::to_string(line_no) +
                      ": CR found; the schema requires LF line endings");
    }
    if (line_no == 1) {
      if (line != dataset_csv_header) {
        throw DataError("line 1: header does not match the dataset schema");
      }
      continue;
    }
    if (line.empty()) {
      throw DataError("line " + std::to_string(line_no) + ": blank line");
    }

    std::string_view fields[8];
    std::size_t n_fields = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view f =
          line.substr(start, comma == std::string_view::npos ? comma : comma - start);
      if (n_fields < 8) fields[n_fields] = f;
      ++n_fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n_fields != 8) {
      throw DataError("line " + std::to_string(line_no) + ": expected 8 fields, got " +
                      std::to_string(n_fields));
    }

    const std::string label(fields[0]);
    const double conc = parse_double(fields[1], line_no, kColumns[1]);
    const double power_mw = parse_double(fields[2], line_no, kColumns[2]);
    const std::uint64_t bin_index = parse_count(fields[3], line_no, kColumns[3]);
    const double duration = parse_double(fields[4], line_no, kColumns[4]);
    BinCounts bin;
    bin.singles1 = parse_count(fields[5], line_no, kColumns[5]);
    bin.singles2 = parse_count(fields[6], line_no, kColumns[6]);
    bin.coincidences = parse_count(fields[7], line_no, kColumns[7]);

    if (conc < 0.0) parse_fail(line_no, kColumns[1], "negative concentration");
    if (power_mw < 0.0) parse_fail(line_no, kColumns[2], "negative power");
    if (duration <= 0.0) parse_fail(line_no, kColumns[4], "duration must be positive");

    const Concentration c{conc};
    const Power p = milliwatts(power_mw);
    const Duration t{duration};

    if (run == nullptr || label != run->sample.label) {
      for (const std::string& seen : seen_labels) {
        if (seen == label) {
          throw DataError("line " + std::to_string(line_no) + ": rows for sample '" +
                          label + "' are not contiguous");
        }
      }
      seen_labels.push_back(label);
      SampleRun new_run;
      new_run.sample.label = label;
      new_run.sample.concentration = c;
      try {
        new_run.sample.validate();
      } catch (const Error& e) {
        throw DataError("line " + std::to_string(line_no) + ": " + e.what());
      }
      dataset.samples.push_back(std::move(new_run));
      run = &dataset.samples.back();
      series = nullptr;
    } else if (!(c == run->sample.concentration)) {
      parse_fail(line_no, kColumns[1], "concentration changed within sample '" +
                                            label + "'");
    }

    if (series == nullptr || !(p == series->pump_power)) {
      for (const MeasurementSeries& prev : run->series) {
        if (prev.pump_power == p) {
          parse_fail(line_no, kColumns[2], "duplicate pump power for sample '" +
                                                label + "'");
        }
      }
      MeasurementSeries new_series;
      new_series.sample_label = label;
      new_series.concentration = c;
      new_series.pump_power = p;
      new_series.bin_duration = t;
      run->series.push_back(std::move(new_series));
      series = &run->series.back();
    } else if (!(t == series->bin_duration)) {
      parse_fail(line_no, kColumns[4], "duration changed within a series");
    }

    if (bin_index != series->bins.size()) {
      parse_fail(line_no, kColumns[3],
                 "expected bin index " + std::to_string(series->bins.size()) +
                     ", got " + std::to_string(bin_index));
    }
    if (bin.coincidences > bin.singles1 || bin.coincidences > bin.singles2) {
      parse_fail(line_no, kColumns[7], "coincidences exceed a singles channel");
    }
    series->bins.push_back(bin);
  }

  if (line_no == 0) {
    throw DataError("empty file: expected the dataset header");
  }
  if (dataset.samples.empty()) {
    throw DataError("dataset has no measurement rows");
  }
  for (const SampleRun& r : dataset.samples) {
    for (const MeasurementSeries& s : r.series) s.validate();
  }
  return dataset;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  const std::string csv = dataset_to_csv(dataset);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  out.flush();
  if (!out) {
    throw IoError("failed writing dataset to '" + path + "'");
  }
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open dataset file '" + path + "'");
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("failed reading dataset file '" + path + "'");
  }
  try {
    return parse_dataset_csv(text);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace etpa
