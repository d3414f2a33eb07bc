// SPDX-License-Identifier: Apache-2.0
//
// Two-color evanescent trap above a straight ring segment. Potentials are in
// microkelvin (U / k_B) on the node lattice of the mode-solver grid; nodes
// inside a dielectric carry NaN.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "materials.hpp"
#include "modesolver.hpp"
#include "resonator.hpp"

namespace ringqed
{

struct TrapConfig
{
  double blue_power_mw = 1.4;
  double red_power_mw = 0.17;  // per direction; two equal counter-propagating tones
  CavityRates blue_rates;
  CavityRates red_rates;
  double blue_detuning_ghz = 0.0;
  double red_detuning_ghz = 0.0;
  double blue_wavelength_nm = 794.0;
  double red_wavelength_nm = 935.0;

  void validate() const;
};

struct TrapModes
{
  ModeSolution blue;
  ModeSolution red;
  IndexStructure structure;
  std::optional<double> blue_group_index;
  std::optional<double> red_group_index;
};

// Straight-guide TM modes at both trap colors on a shared grid.
TrapModes solve_trap_modes(const RingSpec &ring, const MaterialDb &db, const TrapConfig &config,
                           bool with_group_index = false);

// Stored energy in joules for the input-output model U = κ_c P / ((κ/2)^2 + δ^2).
double intracavity_energy(const CavityRates &rates, double input_power_mw, double detuning_ghz);

// Circulating power in mW: U v_g / L with v_g = c / n_g.
double circulating_enhancement(const CavityRates &rates, double input_power_mw, double detuning_ghz,
                               const RingSpec &ring, double n_g);

struct PotentialMap
{
  Grid grid;                 // node lattice (nx+1) x (nz+1), row index is x
  std::vector<double> u_uK;  // NaN inside dielectric
  double surface_z_um = 0.0;
  std::optional<double> lattice_period_nm;

  double at(int i, int j) const { return u_uK[static_cast<size_t>(i) * (grid.nz + 1) + j]; }
  bool solid(int i, int j) const;
  PotentialMap &operator+=(const PotentialMap &other);
  PotentialMap &operator*=(double factor);
};

PotentialMap operator+(PotentialMap a, const PotentialMap &b);

// Traveling blue wave with the given circulating power.
PotentialMap blue_potential(const ModeSolution &mode, const IndexStructure &structure,
                            double circulating_power_mw, double n_g, const AtomData &atom);

// Red lattice at the antinode plane. With two equal counter-propagating
// tones the transverse field doubles there while the axial field (odd in the
// propagation direction) cancels, so |E|^2 = 4 |E_t|^2. One direction gives
// the bare traveling-wave shift.
PotentialMap red_lattice_potential(const ModeSolution &mode, const IndexStructure &structure,
                                   double circulating_power_per_direction_mw, double n_g,
                                   const AtomData &atom, int directions = 2);

// -C4 / (z^3 (z + ƛ)) in µK for an atom z nm from a planar surface.
double casimir_polder(const AtomData &atom, double z_nm);
PotentialMap casimir_polder_map(const ModeSolution &mode, const IndexStructure &structure,
                                const AtomData &atom);

PotentialMap total_potential(const TrapConfig &config, const TrapModes &modes, const RingSpec &ring,
                             const AtomData &atom);

struct MapPoint
{
  double x_nm;
  double z_nm;
  double u_uK;
};

struct TrapReport
{
  MapPoint center;
  double height_nm = 0.0;  // above the dielectric surface
  double depth_uK = 0.0;
  MapPoint weakest_saddle;
  std::vector<MapPoint> minima;
  std::vector<MapPoint> saddles;
  bool exceeds_thermal = false;  // depth above 10 µK
};

inline constexpr double thermal_threshold_uK = 10.0;

// Throws Untrapped when no local minimum sits above the core.
TrapReport analyze_trap(const PotentialMap &map, double core_half_width_nm);

struct TunePoint
{
  double ratio;
  double red_power_mw;
  double blue_power_mw;
  bool trapped;
  double height_nm;
  double depth_uK;
};

// Sweeps P_r/P_b with P_r + P_b held at total_power_mw.
std::vector<TunePoint> tune_curve(const TrapModes &modes, const RingSpec &ring, const AtomData &atom,
                                  const TrapConfig &base, const std::vector<double> &ratios,
                                  double total_power_mw);

// Ratio where the trapped branch crosses the target height (linear interpolation).
std::optional<double> ratio_at_height(const std::vector<TunePoint> &curve, double height_nm);

struct LineCut
{
  std::string axis;  // "x" or "z"
  std::vector<MapPoint> points;
};

LineCut vertical_cut(const PotentialMap &map, double x_nm);
LineCut horizontal_cut(const PotentialMap &map, double z_nm);

void write_potential_csv(const PotentialMap &map, const std::string &path);
nlohmann::json trap_report_json(const TrapReport &report);

}  // namespace ringqed
