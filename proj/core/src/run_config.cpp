#include "etpa/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "etpa/errors.hpp"

namespace etpa {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view v, std::size_t line, std::string_view key) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    fail(line, std::string(key) + ": '" + std::string(v) + "' is not a finite number");
  }
  return out;
}

double parse_nonneg(std::string_view v, std::size_t line, std::string_view key) {
  const double d = parse_double(v, line, key);
  if (d < 0.0) fail(line, std::string(key) + " must be >= 0");
  return d;
}

std::uint64_t parse_uint(std::string_view v, std::size_t line, std::string_view key) {
  int base = 10;
  if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
    v.remove_prefix(2);
    base = 16;
  }
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out, base);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    fail(line, std::string(key) + ": '" + std::string(v) + "' is not an unsigned integer");
  }
  return out;
}

bool parse_bool(std::string_view v, std::size_t line, std::string_view key) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, std::string(key) + " must be true or false");
}

// "a:b:step" inclusive sweep or a comma-separated list, in mW.
std::vector<Power> parse_pump_powers(std::string_view v, std::size_t line) {
  std::vector<Power> out;
  if (v.find(':') != std::string_view::npos) {
    double parts[3];
    std::size_t n = 0;
    std::size_t start = 0;
    while (n < 3) {
      const std::size_t colon = v.find(':', start);
      const std::string_view f =
          v.substr(start, colon == std::string_view::npos ? colon : colon - start);
      parts[n++] = parse_double(trim(f), line, "pump_powers_mw");
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (n != 3) fail(line, "pump_powers_mw sweep must be start:stop:step");
    const double a = parts[0], b = parts[1], step = parts[2];
    if (step <= 0.0 || b < a) {
      fail(line, "pump_powers_mw sweep needs stop >= start and step > 0");
    }
    for (std::size_t i = 0;; ++i) {
      const double p = a + static_cast<double>(i) * step;
      if (p > b * (1.0 + 1e-12)) break;
      out.push_back(milliwatts(p));
      if (i > 100000) fail(line, "pump_powers_mw sweep has too many points");
    }
  } else {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = v.find(',', start);
      const std::string_view f =
          v.substr(start, comma == std::string_view::npos ? comma : comma - start);
      out.push_back(milliwatts(parse_nonneg(trim(f), line, "pump_powers_mw")));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_line(std::string& out, std::string_view key, double v) {
  out += key;
  out += " = ";
  append_double(out, v);
  out += '\n';
}

constexpr std::uint64_t fnv_offset = 0xcbf29ce484222325ull;
constexpr std::uint64_t fnv_prime = 0x100000001b3ull;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = fnv_offset;
  for (unsigned char c : text) {
    h ^= c;
    h *= fnv_prime;
  }
  return h;
}

enum class Section { none, geometry, source, options, io, sample };

}  // namespace

std::string_view run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::simulate: return "simulate";
    case RunMode::analyze: return "analyze";
    case RunMode::roundtrip: return "roundtrip";
    case RunMode::demo: return "demo";
  }
  return "unknown";
}

ExperimentGeometry GeometryConfig::build() const {
  if (area_override.has_value()) {
    return ExperimentGeometry(beam_waist, wavelength, path_length, *area_override);
  }
  return ExperimentGeometry(beam_waist, wavelength, path_length);
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  cfg.samples.clear();

  Section section = Section::none;
  bool seen_geometry = false, seen_source = false, seen_options = false,
       seen_io = false;
  std::vector<std::string> keys_in_section;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const std::string_view name = line.substr(1, line.size() - 2);
      keys_in_section.clear();
      if (name == "geometry") {
        if (seen_geometry) fail(line_no, "section [geometry] repeated");
        seen_geometry = true;
        section = Section::geometry;
      } else if (name == "source") {
        if (seen_source) fail(line_no, "section [source] repeated");
        seen_source = true;
        section = Section::source;
      } else if (name == "options") {
        if (seen_options) fail(line_no, "section [options] repeated");
        seen_options = true;
        section = Section::options;
      } else if (name == "io") {
        if (seen_io) fail(line_no, "section [io] repeated");
        seen_io = true;
        section = Section::io;
      } else if (name == "sample") {
        section = Section::sample;
        cfg.samples.emplace_back();
      } else {
        fail(line_no, "unknown section [" + std::string(name) + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(line_no, "expected key = value");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "key '" + key + "' has no value");
    if (section == Section::none) {
      fail(line_no, "key '" + key + "' appears before any section");
    }
    for (const std::string& seen : keys_in_section) {
      if (seen == key) fail(line_no, "key '" + key + "' repeated in its section");
    }
    keys_in_section.push_back(key);

    try {
      switch (section) {
        case Section::geometry:
          if (key == "beam_waist_um") {
            cfg.geometry.beam_waist = microns(parse_nonneg(value, line_no, key));
          } else if (key == "wavelength_nm") {
            cfg.geometry.wavelength = nanometers(parse_nonneg(value, line_no, key));
          } else if (key == "path_length_mm") {
            cfg.geometry.path_length = millimeters(parse_nonneg(value, line_no, key));
          } else if (key == "area_cm2") {
            cfg.geometry.area_override =
                square_centimeters(parse_nonneg(value, line_no, key));
          } else {
            fail(line_no, "unknown key '" + key + "' in [geometry]");
          }
          break;
        case Section::source:
          if (key == "pump_powers_mw") {
            cfg.source.pump_powers = parse_pump_powers(value, line_no);
          } else if (key == "pairs_per_mw") {
            cfg.source.pairs_per_mw = parse_nonneg(value, line_no, key);
          } else if (key == "detector_efficiency") {
            cfg.source.detector_efficiency = parse_nonneg(value, line_no, key);
          } else if (key == "coupling_efficiency") {
            cfg.source.coupling_efficiency = parse_nonneg(value, line_no, key);
          } else if (key == "coincidence_window_ns") {
            cfg.source.coincidence_window =
                nanoseconds(parse_nonneg(value, line_no, key));
          } else if (key == "bin_duration_s") {
            cfg.source.bin_duration = seconds(parse_nonneg(value, line_no, key));
          } else if (key == "bins_per_point") {
            cfg.source.bins_per_point =
                static_cast<std::size_t>(parse_uint(value, line_no, key));
          } else if (key == "solvent_transmission") {
            cfg.source.solvent_transmission = parse_nonneg(value, line_no, key);
          } else if (key == "seed") {
            cfg.source.rng_seed = parse_uint(value, line_no, key);
            cfg.seed_from_config = true;
          } else {
            fail(line_no, "unknown key '" + key + "' in [source]");
          }
          break;
        case Section::options:
          if (key == "subtract_accidentals") {
            cfg.analysis.subtract_accidentals = parse_bool(value, line_no, key);
          } else if (key == "weights") {
            if (value == "std") {
              cfg.analysis.weighting = Weighting::std_dev;
            } else if (value == "stderr") {
              cfg.analysis.weighting = Weighting::std_error;
            } else {
              fail(line_no, "weights must be std or stderr");
            }
          } else if (key == "geometry_rel_uncertainty") {
            cfg.analysis.geometry_rel_uncertainty =
                parse_nonneg(value, line_no, key);
          } else {
            fail(line_no, "unknown key '" + key + "' in [options]");
          }
          break;
        case Section::io:
          if (key == "dataset") {
            cfg.dataset_path = std::string(value);
          } else if (key == "out_dir") {
            cfg.out_dir = std::string(value);
          } else {
            fail(line_no, "unknown key '" + key + "' in [io]");
          }
          break;
        case Section::sample: {
          SampleSpec& s = cfg.samples.back();
          if (key == "label") {
            s.label = std::string(value);
          } else if (key == "concentration_molar") {
            s.concentration = molar(parse_nonneg(value, line_no, key));
          } else if (key == "sigma_e_cm2") {
            s.sigma_e = cm2_per_molecule(parse_nonneg(value, line_no, key));
          } else if (key == "delta_r_gm") {
            s.delta_r = gm_to_cm4s(parse_nonneg(value, line_no, key));
          } else {
            fail(line_no, "unknown key '" + key + "' in [sample]");
          }
          break;
        }
        case Section::none:
          break;
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(line_no, e.what());
    }
  }

  // The estimator's accidental model must use the instrument's window.
  cfg.analysis.coincidence_window = cfg.source.coincidence_window;
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("failed reading config file '" + path + "'");
  }
  try {
    return parse_run_config(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void RunConfig::validate() const {
  geometry.build();  // throws on inconsistent geometry
  if (dataset_path.empty()) throw ConfigError("dataset path is empty");
  if (out_dir.empty()) throw ConfigError("out_dir is empty");

  if (mode != RunMode::analyze) {
    source.validate();
    if (samples.empty()) {
      throw ConfigError(std::string(run_mode_name(mode)) +
                        " needs at least one [sample]");
    }
    std::size_t solvents = 0;
    for (const SampleSpec& s : samples) {
      s.validate();
      if (s.is_solvent()) ++solvents;
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      for (std::size_t j = i + 1; j < samples.size(); ++j) {
        if (samples[i].label == samples[j].label) {
          throw ConfigError("sample label '" + samples[i].label + "' repeated");
        }
      }
    }
    if (solvents != 1) {
      throw ConfigError("need exactly one zero-concentration [sample] as the "
                        "solvent reference, found " + std::to_string(solvents));
    }
  }
  if (!(analysis.geometry_rel_uncertainty >= 0.0) ||
      !std::isfinite(analysis.geometry_rel_uncertainty)) {
    throw ConfigError("geometry_rel_uncertainty must be finite and >= 0");
  }
}

std::string RunConfig::canonical_text() const {
  std::string out;
  out += "[geometry]\n";
  append_line(out, "beam_waist_um", to_microns(geometry.beam_waist));
  append_line(out, "wavelength_nm", to_nanometers(geometry.wavelength));
  append_line(out, "path_length_mm", to_millimeters(geometry.path_length));
  if (geometry.area_override.has_value()) {
    append_line(out, "area_cm2", geometry.area_override->value());
  }

  out += "[source]\n";
  out += "pump_powers_mw = ";
  for (std::size_t i = 0; i < source.pump_powers.size(); ++i) {
    if (i > 0) out += ',';
    append_double(out, to_milliwatts(source.pump_powers[i]));
  }
  out += '\n';
  append_line(out, "pairs_per_mw", source.pairs_per_mw);
  append_line(out, "detector_efficiency", source.detector_efficiency);
  append_line(out, "coupling_efficiency", source.coupling_efficiency);
  append_line(out, "coincidence_window_ns", to_nanoseconds(source.coincidence_window));
  append_line(out, "bin_duration_s", source.bin_duration.value());
  out += "bins_per_point = " + std::to_string(source.bins_per_point) + '\n';
  append_line(out, "solvent_transmission", source.solvent_transmission);
  out += "seed = " + std::to_string(source.rng_seed) + '\n';

  out += "[options]\n";
  out += "subtract_accidentals = ";
  out += analysis.subtract_accidentals ? "true" : "false";
  out += '\n';
  out += "weights = ";
  out += analysis.weighting == Weighting::std_dev ? "std" : "stderr";
  out += '\n';
  append_line(out, "geometry_rel_uncertainty", analysis.geometry_rel_uncertainty);

  for (const SampleSpec& s : samples) {
    out += "[sample]\n";
    out += "label = " + s.label + '\n';
    append_line(out, "concentration_molar", s.concentration.value());
    append_line(out, "sigma_e_cm2", s.sigma_e.value());
    append_line(out, "delta_r_gm", cm4s_to_gm(s.delta_r));
  }

  out += "[io]\n";
  out += "dataset = " + dataset_path + '\n';
  out += "out_dir = " + out_dir + '\n';
  return out;
}

std::uint64_t RunConfig::config_hash() const {
  const std::string text = canonical_text();
  const std::size_t io = text.rfind("[io]\n");
  return fnv1a(std::string_view(text).substr(0, io));
}

}  // namespace etpa
