// SPDX-License-Identifier: Apache-2.0
//
// Physical constants and the unit conventions used across the library.
//
//   lengths      : nm at the API for wavelengths and heights, µm for geometry
//   rates        : angular, rad/s (kappa = 2*pi*2.8e9 means "2π × 2.8 GHz")
//   frequencies  : THz for optical carriers, GHz for detunings
//   powers       : mW
//   potentials   : µK (energy divided by k_B)

#pragma once

#include <numbers>

namespace ringqed::units
{

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double c0 = 299792458.0;             // m/s
inline constexpr double eps0 = 8.8541878128e-12;      // F/m
inline constexpr double mu0 = 1.25663706212e-6;       // H/m
inline constexpr double eta0 = 376.730313668;         // Ohm
inline constexpr double h_planck = 6.62607015e-34;    // J s
inline constexpr double hbar = h_planck / two_pi;     // J s
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K

inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;

// Energy in joules to µK.
constexpr double joule_to_uK(double joule) { return joule / k_boltzmann * 1e6; }
constexpr double uK_to_joule(double uk) { return uk * 1e-6 * k_boltzmann; }

// Carrier frequency in THz for a vacuum wavelength in nm.
constexpr double wavelength_nm_to_THz(double lambda_nm) { return c0 / (lambda_nm * nm) * 1e-12; }

// Angular frequency in rad/s for a vacuum wavelength in nm.
constexpr double wavelength_nm_to_omega(double lambda_nm) { return two_pi * c0 / (lambda_nm * nm); }

// 2π × f[GHz] in rad/s.
constexpr double ghz_to_angular(double f_ghz) { return two_pi * f_ghz * 1e9; }
constexpr double angular_to_ghz(double w) { return w / two_pi * 1e-9; }

}  // namespace ringqed::units
