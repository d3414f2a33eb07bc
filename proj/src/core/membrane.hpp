// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "materials.hpp"

namespace ringqed
{

struct StackLayer
{
  Material material;
  double thickness_um = 0.0;
  std::optional<double> stress_mpa;  // overrides the material default when set
};

// Layers listed top to bottom; light arrives from the top ambient.
struct LayerStack
{
  std::vector<StackLayer> layers;
  Material top_ambient = Material::constant("vacuum", 1.0);
  Material bottom_ambient = Material::constant("vacuum", 1.0);

  void validate() const;
  LayerStack reversed() const;
  // (H_SiO, H_SiN) double layer with materials from the db.
  static LayerStack membrane(const MaterialDb &db, double oxide_um, double nitride_um);
};

struct StackResponse
{
  std::complex<double> r;
  std::complex<double> t;
  double reflectance;    // |r|^2
  double transmittance;  // |t|^2 n_out / n_in
};

// Normal-incidence characteristic-matrix solution.
StackResponse stack_response(const LayerStack &stack, double wavelength_nm);
std::complex<double> stack_reflectance(const LayerStack &stack, double wavelength_nm);

inline constexpr double min_lattice_reflectance = 0.05;  // |r| threshold

struct Microtrap
{
  bool lattice = false;              // false when |r| is below threshold
  double first_antinode_nm = 0.0;    // above the top surface
  double antinode_spacing_nm = 0.0;  // λ / 2
  double reflection_phase = 0.0;     // arg r, radians
  double reflection_magnitude = 0.0;
  double numerical_aperture = 0.0;   // carried for reference; plane-wave model
  std::string warning;

  double antinode(int k) const { return first_antinode_nm + k * antinode_spacing_nm; }
};

// Standing wave of a normally incident beam and its reflection:
// I(z) ∝ |exp(-ikz) + r exp(ikz)|^2, z measured upward from the top surface.
Microtrap microtrap_position(const LayerStack &stack, double wavelength_nm, double numerical_aperture);
Microtrap microtrap_from_reflection(std::complex<double> r, double wavelength_nm, double numerical_aperture);

struct StressWindow
{
  double min_mpa = 70.0;
  double max_mpa = 180.0;
};

struct StressVerdict
{
  double resulting_mpa;
  bool stable;
};

// Thickness-weighted mean of the layer stresses (tensile positive).
StressVerdict resulting_stress(const LayerStack &stack, const StressWindow &window = {});

struct ThicknessPoint
{
  double oxide_um;
  double nitride_um;
  double trap_height_nm;  // NaN without a lattice
  double resulting_mpa;
  bool stable;
};

struct ThicknessRange
{
  double start_um;
  double stop_um;
  double step_um;

  std::vector<double> values() const;
};

std::vector<ThicknessPoint> thickness_map(const MaterialDb &db, const ThicknessRange &oxide,
                                          const ThicknessRange &nitride, double wavelength_nm,
                                          double numerical_aperture, const StressWindow &window = {},
                                          int jobs = 1);

void write_thickness_map_csv(const std::vector<ThicknessPoint> &map, const std::string &path);

}  // namespace ringqed
