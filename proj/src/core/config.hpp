// SPDX-License-Identifier: Apache-2.0
//
// Project configuration: one YAML file shared by every CLI subcommand.
// Unknown keys, wrong types and unresolved material names are reported as
// ConfigError with the offending line.

#pragma once

#include <string>
#include <vector>

#include "coupler.hpp"
#include "materials.hpp"
#include "membrane.hpp"
#include "resonator.hpp"
#include "trap.hpp"

namespace ringqed
{

// Rates stored as κ/2π in GHz in the file; CavityRates holds rad/s.
struct RateEntry
{
  double wavelength_nm;
  CavityRates rates;
};

struct CouplerSweep
{
  std::vector<double> wavelengths_nm{894.0, 852.0, 932.0, 795.0};
  ClRange cl;
};

struct TuneSweep
{
  double ratio_min = 0.02;
  double ratio_max = 0.3;
  int points = 30;
  double total_power_mw = 1.57;
};

struct HeightSweep
{
  double start_nm = 50.0;
  double stop_nm = 300.0;
  double step_nm = 10.0;

  std::vector<double> values() const;
};

struct SpectrumSweep
{
  double span_ghz = 20.0;  // total width centered on resonance
  int points = 401;
};

struct MembraneConfig
{
  double oxide_um = 1.72;
  double nitride_um = 0.55;
  double wavelength_nm = 935.0;
  double numerical_aperture = 0.35;
  StressWindow window;
  ThicknessRange oxide_range{1.0, 2.5, 0.01};
  ThicknessRange nitride_range{0.2, 1.0, 0.01};
};

struct BudgetConfig
{
  double facet_measured = 0.5;
  double facet_simulated = 0.7;
};

struct ProjectConfig
{
  std::string materials_path;  // empty: built-in defaults
  MaterialDb db = MaterialDb::defaults();
  RingSpec ring;
  PulleySpec pulley;
  AtomData atom;
  std::vector<RateEntry> rates;
  TrapConfig trap;  // rates are filled from `rates` by trap_config()
  double atom_height_nm = 100.0;
  MembraneConfig membrane;
  CouplerSweep coupler_sweep;
  TuneSweep tune;
  HeightSweep transparency;
  SpectrumSweep spectrum;
  BudgetConfig budget;

  static ProjectConfig defaults();
  static ProjectConfig from_yaml_file(const std::string &path);
  // Relative materials paths resolve against base_dir.
  static ProjectConfig from_yaml_string(const std::string &text, const std::string &base_dir = ".");

  void validate() const;
  // Entry whose wavelength lies within tol_nm; NotFound otherwise.
  const CavityRates &rates_near(double wavelength_nm, double tol_nm = 5.0) const;
  TrapConfig trap_config() const;
};

}  // namespace ringqed
