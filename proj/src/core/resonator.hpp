// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "materials.hpp"
#include "modesolver.hpp"

namespace ringqed
{

struct RingSpec
{
  double radius_um = 15.0;
  double segment_length_um = 0.0;  // each of the two straight segments
  CrossSection cross_section;

  double round_trip_um() const;
  void validate() const;
};

// Linewidth bundle. Rates are angular (rad/s); kappa() is the loaded rate.
struct CavityRates
{
  double kappa_c = 0.0;
  double kappa_i = 0.0;
  double resonance_thz = 0.0;

  double kappa() const { return kappa_c + kappa_i; }
  double q_intrinsic() const;
  double q_loaded() const;
  void validate() const;
};

// FSR in THz for group index n_g and round-trip length in µm.
double free_spectral_range(double n_g, double round_trip_um);
double free_spectral_range(const RingSpec &ring, const MaterialDb &db, double wavelength_nm);

double q_to_kappa(double q, double frequency_thz);
double kappa_to_q(double kappa, double frequency_thz);

// V_m = L * (integral of eps|E|^2) / |E(0, surface + z_t)|^2, µm^3.
double mode_volume(const ModeSolution &mode, const RingSpec &ring, double atom_height_nm);

// C = 3 λ^3 Q / (4 π^2 V_m), λ in nm and V_m in µm^3.
double cooperativity(double q, double mode_volume_um3, double wavelength_nm);

// g = sqrt(3 λ_D2^3 ω Γ / (16 π^2 V_m)) in rad/s.
double coupling_strength(double mode_volume_um3, const AtomData &atom, double frequency_thz);

inline constexpr double default_tuning_ghz_per_mw = 0.5;
double thermal_tuning(double heating_power_mw, double ghz_per_mw = default_tuning_ghz_per_mw);

struct LadderEntry
{
  double length_increment_nm = 0.0;
  int azimuthal_order = 0;
  double frequency_thz = 0.0;
  double spacing_ghz = 0.0;  // to the previous entry; 0 for the first
};

// Resonance frequencies for rings lengthened by each increment. With no
// increments, every resonance of the base ring inside the window is listed.
std::vector<LadderEntry> resonance_ladder(double n_eff, double round_trip_um,
                                          const std::vector<double> &length_increments_nm,
                                          double window_min_thz, double window_max_thz);

}  // namespace ringqed
