#pragma once

#include <stdexcept>

// Single source of truth for physical constants (CODATA 2018) and the
// SI <-> natural-units (hbar = c = 1, lengths in meters) conversions used at
// the CLI boundary. Natural units: lengths in m, masses and accelerations in
// 1/m.

namespace unruh::units {

inline constexpr double c_light = 299792458.0;               // m/s, exact
inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double electron_mass_kg = 9.1093837015e-31; // kg
inline constexpr double standard_gravity = 9.80665;          // m/s^2, exact

// reduced Compton wavelength of the electron, hbar/(m_e c)
inline constexpr double electron_compton_reduced =
    hbar / (electron_mass_kg * c_light);

enum class QuantityKind { length, area, volume, mass, acceleration };

double si_to_natural(QuantityKind kind, double value_si);
double natural_to_si(QuantityKind kind, double value_natural);

// mass given in electron masses -> inverse meters
double electron_masses_to_natural(double m_in_electron_masses);

// sudden-birth threshold m c^3 / hbar for a mass in kg, in m/s^2
double threshold_si_from_mass_kg(double mass_kg);

}  // namespace unruh::units
