#pragma once

#include <numbers>

namespace ionssh {

/// Physical constants used by the trap solver (CODATA 2018; SI units).
/// Kept as a value so tests can rescale them consistently.
struct PhysicalConstants {
  double elementary_charge = 1.602176634e-19;  // C (exact)
  double coulomb_constant = 8.9875517923e9;    // N m^2 C^-2
  double atomic_mass_unit = 1.66053906660e-27; // kg
  double electron_volt = 1.602176634e-19;      // J (exact)
};

inline constexpr PhysicalConstants kCodata{};

/// 171Yb+ ion mass in atomic mass units.
inline constexpr double kYb171MassAmu = 170.9363315;

/// First positive root of the zeroth-order Bessel function j0.
inline constexpr double kBesselZero0 = 2.404825557695773;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Cyclic frequency helpers. All internal frequencies are angular (rad/s).
constexpr double khz_to_rad_s(double khz) { return kTwoPi * khz * 1e3; }
constexpr double mhz_to_rad_s(double mhz) { return kTwoPi * mhz * 1e6; }
constexpr double rad_s_to_khz(double w) { return w / kTwoPi * 1e-3; }
constexpr double rad_s_to_mhz(double w) { return w / kTwoPi * 1e-6; }

}  // namespace ionssh
