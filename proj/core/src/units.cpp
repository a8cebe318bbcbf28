#include "unruh/units.hpp"

namespace unruh::units {

double si_to_natural(QuantityKind kind, double value_si) {
  switch (kind) {
    case QuantityKind::length:
    case QuantityKind::area:
    case QuantityKind::volume:
      return value_si;  // meters pass through
    case QuantityKind::mass:
      return value_si * c_light / hbar;  // kg -> 1/m
    case QuantityKind::acceleration:
      return value_si / (c_light * c_light);  // m/s^2 -> 1/m
  }
  throw std::domain_error("si_to_natural: unknown quantity kind");
}

double natural_to_si(QuantityKind kind, double value_natural) {
  switch (kind) {
    case QuantityKind::length:
    case QuantityKind::area:
    case QuantityKind::volume:
      return value_natural;
    case QuantityKind::mass:
      return value_natural * hbar / c_light;
    case QuantityKind::acceleration:
      return value_natural * c_light * c_light;
  }
  throw std::domain_error("natural_to_si: unknown quantity kind");
}

double electron_masses_to_natural(double m_in_electron_masses) {
  return m_in_electron_masses / electron_compton_reduced;
}

double threshold_si_from_mass_kg(double mass_kg) {
  return mass_kg * c_light * c_light * c_light / hbar;
}

}  // namespace unruh::units
