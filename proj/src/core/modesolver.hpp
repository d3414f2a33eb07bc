// SPDX-License-Identifier: Apache-2.0
//
// Full-vector finite-difference eigenmode solver for 2D waveguide cross
// sections.
//
// Coordinates: x is lateral (positive pointing away from the bend center),
// z is vertical with z = 0 on the top face of the under-layers (the bottom of
// the core), and the mode propagates along the third axis. The transverse
// electric field lives on a Yee grid with perfect-conductor outer walls; the
// axial component is recovered from the discrete divergence condition.
//
// Field normalization: the cross-section integral of eps_r |E|^2 equals 1
// with areas in µm^2, so field samples carry units of 1/µm. Integrals use the
// staggered (native) sample positions; field_at() interpolates node values.

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "materials.hpp"

namespace ringqed
{

using cplx = std::complex<double>;

struct FieldVector
{
  cplx lateral;
  cplx vertical;
  cplx axial;

  double norm2() const { return std::norm(lateral) + std::norm(vertical) + std::norm(axial); }
};

struct Layer
{
  std::string material;
  double thickness_um = 0.0;
};

struct CrossSection
{
  double core_width_nm = 750.0;
  double core_height_nm = 380.0;
  std::string core_material = "Si3N4";
  std::vector<Layer> under_layers{{"SiO2", 1.72}, {"Si3N4", 0.55}};
  std::string cladding = "vacuum";
  double margin_um = 1.5;
  double pitch_nm = 20.0;

  void validate() const;
};

// A rectangle of material painted over the background; later entries win.
struct Region
{
  double x0_um, x1_um, z0_um, z1_um;
  Material material;
};

// Generic index map on a rectangular domain. CrossSection lowers to this; the
// slab, coupled-guide and uniform-index test problems build it directly.
struct IndexStructure
{
  double x_min_um = 0.0, x_max_um = 0.0, z_min_um = 0.0, z_max_um = 0.0;
  double pitch_nm = 20.0;
  Material background = Material::constant("vacuum", 1.0);
  std::vector<Region> regions;
  // Top face of the dielectric under the atom on the vertical centerline
  // (used by mode volume and trap maps).
  double surface_z_um = 0.0;
};

IndexStructure to_structure(const CrossSection &xs, const MaterialDb &db);

struct Grid
{
  double x0_um = 0.0, z0_um = 0.0, h_um = 0.0;
  int nx = 0, nz = 0;  // cells; nodes are (nx+1) x (nz+1)

  double node_x(int i) const { return x0_um + i * h_um; }
  double node_z(int j) const { return z0_um + j * h_um; }
  bool contains(double x_um, double z_um) const;
};

struct ModeSolution
{
  double n_eff = 0.0;
  std::optional<double> n_g;
  double wavelength_nm = 0.0;
  double polarization_fraction = 0.0;  // share of transverse energy in the vertical component
  std::optional<double> bend_radius_um;
  double surface_z_um = 0.0;
  double max_index = 1.0;

  Grid grid;
  // Native Yee samples. ex: (nx) x (nz+1) at (i+1/2, j); ev: (nx+1) x (nz) at
  // (i, j+1/2); ea: (nx+1) x (nz+1) at nodes. Row index is x.
  std::vector<cplx> ex, ev, ea;
  // Physical relative permittivity at those positions, plus per cell.
  std::vector<double> eps_x, eps_v, eps_a, eps_cell;
  // Node-interpolated copies of the three components.
  std::vector<cplx> node_lateral, node_vertical, node_axial;

  bool is_tm() const { return polarization_fraction > 0.5; }
  double beta_per_um() const;

  // Cross-section integral of eps_r |E|^2 over native samples (µm^2 units).
  double energy_integral() const;
  void scale(cplx factor);

  // Bilinear interpolation of the node field; x, z in nm. Throws Range
  // outside the solved domain.
  FieldVector field_at(double x_nm, double z_nm) const;

  // Relative permittivity of the cell containing (x, z), nm.
  double eps_at(double x_nm, double z_nm) const;

  // Cross-section power flow in units where E is the normalized field and
  // H = curl E / (-i k0); multiply by |amplitude|^2 / (2 eta0) for watts.
  double poynting_integral() const;
};

struct SolveOptions
{
  int count = 1;
  std::optional<double> bend_radius_um;
  double arnoldi_tol = 1e-10;
};

// Guided modes sorted by descending n_eff. Throws NoMode when nothing is
// guided above the cladding index, NumericError on eigensolver failure.
std::vector<ModeSolution> solve_modes(const IndexStructure &structure, double wavelength_nm,
                                      const SolveOptions &opts);

std::vector<ModeSolution> solve_modes(const CrossSection &xs, const MaterialDb &db,
                                      double wavelength_nm, std::optional<double> bend_radius_um,
                                      int count);

// First mode whose vertical component dominates. Throws NoMode if none.
const ModeSolution &fundamental_tm(const std::vector<ModeSolution> &modes);
ModeSolution solve_fundamental_tm(const CrossSection &xs, const MaterialDb &db, double wavelength_nm,
                                  std::optional<double> bend_radius_um);

// n_g = n_eff - λ dn_eff/dλ by a centered difference; the mode family is
// tracked by polarization. selector picks the mode at the center wavelength:
// "tm" for the fundamental TM mode, "fundamental" for the highest-index mode.
double group_index(const IndexStructure &structure, double wavelength_nm,
                   std::optional<double> bend_radius_um, const std::string &selector = "fundamental",
                   double delta_nm = 1.0);
double group_index(const CrossSection &xs, const MaterialDb &db, double wavelength_nm,
                   std::optional<double> bend_radius_um, const std::string &selector = "tm",
                   double delta_nm = 1.0);

FieldVector field_at(const ModeSolution &mode, double x_nm, double z_nm);

// CSV grid: x_nm,z_nm,re/im of lateral, vertical, axial.
void write_mode_csv(const ModeSolution &mode, const std::string &path);

}  // namespace ringqed
