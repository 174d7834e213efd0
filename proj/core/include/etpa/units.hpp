#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "etpa/errors.hpp"

// Dimensioned physical quantities in the canonical unit system of this
// library: cm, s, photons, molecules, W for optical power, mol/L for
// molar concentration. Each dimension is a distinct type, so mixing
// dimensions in arithmetic does not compile.

namespace etpa {

enum class Dim {
  Power,          // W
  Length,         // cm
  Area,           // cm^2
  Volume,         // cm^3
  Duration,       // s
  Rate,           // 1/s
  FluxDensity,    // photons / (s cm^2)
  Concentration,  // mol/L
  NumberDensity,  // molecules / cm^3
  CrossSectionE,  // cm^2 / molecule
  CrossSectionR,  // cm^4 s / (photon molecule)
};

constexpr std::string_view dim_name(Dim d) {
  switch (d) {
    case Dim::Power: return "power";
    case Dim::Length: return "length";
    case Dim::Area: return "area";
    case Dim::Volume: return "volume";
    case Dim::Duration: return "duration";
    case Dim::Rate: return "rate";
    case Dim::FluxDensity: return "flux density";
    case Dim::Concentration: return "concentration";
    case Dim::NumberDensity: return "number density";
    case Dim::CrossSectionE: return "entangled cross section";
    case Dim::CrossSectionR: return "random cross section";
  }
  return "quantity";
}

namespace detail {
inline std::string to_display(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace detail

constexpr std::string_view unit_symbol(Dim d) {
  switch (d) {
    case Dim::Power: return "W";
    case Dim::Length: return "cm";
    case Dim::Area: return "cm^2";
    case Dim::Volume: return "cm^3";
    case Dim::Duration: return "s";
    case Dim::Rate: return "1/s";
    case Dim::FluxDensity: return "photons/(s cm^2)";
    case Dim::Concentration: return "mol/L";
    case Dim::NumberDensity: return "molecules/cm^3";
    case Dim::CrossSectionE: return "cm^2/molecule";
    case Dim::CrossSectionR: return "cm^4 s/(photon molecule)";
  }
  return "";
}

/// Non-negative finite scalar tagged with a physical dimension.
///
/// value() is always in the canonical unit for the dimension (see Dim).
/// Construction rejects negative, NaN and infinite magnitudes with
/// DomainError. Addition, subtraction and ratios are defined only
/// between quantities of the same dimension; scaling by a plain
/// number is allowed.
template <Dim D>
class Quantity {
 public:
  Quantity() = default;

  explicit Quantity(double value) : value_(value) {
    if (!std::isfinite(value_) || value_ < 0.0) {
      throw DomainError(std::string(dim_name(D)) +
                        " must be a finite non-negative number, got " +
                        detail::to_display(value_) + " " +
                        std::string(unit_symbol(D)));
    }
  }

  double value() const { return value_; }
  static constexpr Dim dimension() { return D; }

  friend Quantity operator+(Quantity a, Quantity b) {
    return Quantity(a.value_ + b.value_);
  }
  // Throws if the difference would be negative; physical magnitudes
  // in this library do not go below zero.
  friend Quantity operator-(Quantity a, Quantity b) {
    return Quantity(a.value_ - b.value_);
  }
  friend Quantity operator*(Quantity a, double k) { return Quantity(a.value_ * k); }
  friend Quantity operator*(double k, Quantity a) { return Quantity(k * a.value_); }
  friend Quantity operator/(Quantity a, double k) { return Quantity(a.value_ / k); }
  /// Dimensionless ratio of two like quantities.
  friend double operator/(Quantity a, Quantity b) { return a.value_ / b.value_; }

  friend bool operator==(Quantity a, Quantity b) { return a.value_ == b.value_; }
  friend auto operator<=>(Quantity a, Quantity b) { return a.value_ <=> b.value_; }

 private:
  double value_ = 0.0;
};

using Power = Quantity<Dim::Power>;
using Length = Quantity<Dim::Length>;
using Area = Quantity<Dim::Area>;
using Volume = Quantity<Dim::Volume>;
using Duration = Quantity<Dim::Duration>;
using Rate = Quantity<Dim::Rate>;
using FluxDensity = Quantity<Dim::FluxDensity>;
using Concentration = Quantity<Dim::Concentration>;
using NumberDensity = Quantity<Dim::NumberDensity>;
using CrossSectionE = Quantity<Dim::CrossSectionE>;
using CrossSectionR = Quantity<Dim::CrossSectionR>;

namespace constants {

/// CODATA-exact Avogadro constant, molecules/mol.
inline constexpr double avogadro = 6.02214076e23;
/// One Goeppert-Mayer unit in canonical random-cross-section units.
inline constexpr double gm_in_cm4s = 1e-50;
/// Planck constant, J s (SI-exact).
inline constexpr double planck = 6.62607015e-34;
/// Speed of light, cm/s (SI-exact).
inline constexpr double speed_of_light = 2.99792458e10;
/// Energy-per-photon factor: E = hc / lambda with lambda in cm, J cm.
inline constexpr double hc = planck * speed_of_light;

}  // namespace constants

// --- named unit constructors and accessors -------------------------------
// Scaled constructors divide and accessors multiply by the same exact
// constant; under round-to-nearest the store -> display -> store cycle is
// then stable, which dataset and config serialization rely on.

inline Power watts(double v) { return Power(v); }
inline Power milliwatts(double v) { return Power(v / 1000.0); }
inline double to_milliwatts(Power p) { return p.value() * 1000.0; }

inline Length centimeters(double v) { return Length(v); }
inline Length millimeters(double v) { return Length(v / 10.0); }
inline Length microns(double v) { return Length(v / 1e4); }
inline Length nanometers(double v) { return Length(v / 1e7); }
inline double to_millimeters(Length l) { return l.value() * 10.0; }
inline double to_microns(Length l) { return l.value() * 1e4; }
inline double to_nanometers(Length l) { return l.value() * 1e7; }

inline Area square_centimeters(double v) { return Area(v); }
inline Volume cubic_centimeters(double v) { return Volume(v); }

inline Duration seconds(double v) { return Duration(v); }
inline Duration nanoseconds(double v) { return Duration(v / 1e9); }
inline double to_nanoseconds(Duration t) { return t.value() * 1e9; }

inline Rate per_second(double v) { return Rate(v); }
inline FluxDensity photons_per_s_cm2(double v) { return FluxDensity(v); }

inline Concentration molar(double v) { return Concentration(v); }
inline Concentration millimolar(double v) { return Concentration(v / 1e3); }
inline Concentration micromolar(double v) { return Concentration(v / 1e6); }
inline double to_micromolar(Concentration c) { return c.value() * 1e6; }
inline double to_millimolar(Concentration c) { return c.value() * 1e3; }

inline NumberDensity per_cm3(double v) { return NumberDensity(v); }
inline CrossSectionE cm2_per_molecule(double v) { return CrossSectionE(v); }
inline CrossSectionR cm4s_per_molecule(double v) { return CrossSectionR(v); }

// --- conversions ----------------------------------------------------------

/// Random TPA cross section from a value quoted in GM (1 GM = 1e-50 cm^4 s).
inline CrossSectionR gm_to_cm4s(double gm) {
  if (!std::isfinite(gm) || gm < 0.0) {
    throw DomainError("cross section in GM must be finite and non-negative, got " +
                      std::to_string(gm));
  }
  return CrossSectionR(gm * constants::gm_in_cm4s);
}

/// Exact inverse of gm_to_cm4s.
inline double cm4s_to_gm(CrossSectionR x) {
  return x.value() / constants::gm_in_cm4s;
}

/// Molar concentration (mol/L) to molecular number density (molecules/cm^3):
/// c * 1e-3 * N_A.
inline NumberDensity molar_to_number_density(Concentration c) {
  return NumberDensity(c.value() * 1e-3 * constants::avogadro);
}

inline Concentration number_density_to_molar(NumberDensity n) {
  return Concentration(n.value() / (1e-3 * constants::avogadro));
}

/// Photon emission rate of a beam of power P at wavelength lambda:
/// P * lambda / (h c).
inline Rate power_to_photon_rate(Power p, Length wavelength) {
  if (wavelength.value() <= 0.0) {
    throw DomainError("wavelength must be positive for photon-rate conversion");
  }
  return Rate(p.value() * wavelength.value() / constants::hc);
}

}  // namespace etpa
