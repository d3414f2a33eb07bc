// SPDX-License-Identifier: Apache-2.0
//
// Pulley coupler between a ring and a concentric bus waveguide.
//
// Normalization of the overlap S: the ring field is scaled to one joule of
// stored energy in the whole ring and the bus field to one watt of guided
// power. S then carries units of s^-1/2 and |S * sinc * CL/R|^2 is an energy
// decay rate in rad/s.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "modesolver.hpp"
#include "resonator.hpp"

namespace ringqed
{

struct PulleySpec
{
  double gap_um = 0.21;
  double bus_width_um = 0.55;
  double bus_radius_um = 15.86;
  double coupling_length_um = 2.9;

  // Concentric geometry: R_w = R + W/2 + W_gap + W_w/2 within 1 nm.
  void validate(const RingSpec &ring) const;
  // Copy of the ring cross-section with the bus core width.
  CrossSection bus_cross_section(const RingSpec &ring) const;
  static PulleySpec concentric(const RingSpec &ring, double gap_um, double bus_width_um,
                               double coupling_length_um);
};

std::complex<double> overlap_integral(const ModeSolution &ring_mode, const ModeSolution &bus_mode,
                                      const PulleySpec &pulley, const RingSpec &ring,
                                      double wavelength_nm);

double sinc(double x);  // sin(pi x) / (pi x)

double kappa_c(std::complex<double> s, double n_ring, double n_bus, const PulleySpec &pulley,
               const RingSpec &ring, double wavelength_nm);
double kappa_c(std::complex<double> s, const ModeSolution &ring_mode, const ModeSolution &bus_mode,
               const PulleySpec &pulley, const RingSpec &ring, double wavelength_nm);

double t_res(const CavityRates &rates);

// Both κ_c/κ_i ratios producing a resonant transmission; under-coupled first.
struct RatioBranches
{
  double under_coupled;
  double over_coupled;
};
RatioBranches invert_t_res(double t);

// Everything κ_c(CL) needs at one wavelength, solved once.
struct CouplerModel
{
  double wavelength_nm = 0.0;
  std::complex<double> overlap;
  double n_ring = 0.0;
  double n_bus = 0.0;
  PulleySpec pulley;
  RingSpec ring;

  double kappa_c_at(double coupling_length_um) const;
};

CouplerModel build_coupler_model(const RingSpec &ring, const PulleySpec &pulley, const MaterialDb &db,
                                 double wavelength_nm);

// Smallest CL in [0, cl_max] with κ_c = κ_i, refined to 1 nm. Throws
// NotFoundError carrying min |κ_c - κ_i| when there is no crossing.
double find_critical_cl(const CouplerModel &model, double kappa_i, double cl_max_um = 20.0);

struct ScanRow
{
  double coupling_length_um;
  double wavelength_nm;
  double t_res;
  double kappa_c;
};

struct ScanSummary
{
  double wavelength_nm;
  double kappa_i;
  double overlap_abs;
  double n_ring;
  double n_bus;
  double argmin_cl_um;  // grid point with the lowest T_res
  double min_t_res;
};

struct DesignScan
{
  std::vector<ScanRow> rows;
  std::vector<ScanSummary> summary;
};

struct ClRange
{
  double start_um = 0.0;
  double stop_um = 8.0;
  double step_um = 0.05;

  std::vector<double> values() const;
};

DesignScan design_scan(const RingSpec &ring, const PulleySpec &pulley, const MaterialDb &db,
                       const std::vector<double> &wavelengths_nm,
                       const std::vector<double> &kappa_i, const ClRange &range, int jobs = 1);

void write_design_scan_csv(const DesignScan &scan, const std::string &path);

}  // namespace ringqed
