// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "materials.hpp"
#include "modesolver.hpp"
#include "resonator.hpp"

namespace ringqed
{

struct TransmissionSpectrum
{
  std::vector<double> detuning_ghz;
  std::vector<double> transmission;
  std::vector<double> sigma;  // optional per-point noise; empty when unknown

  void validate() const;
};

struct AtomCavityParams
{
  double g = 0.0;         // rad/s
  double gamma = 0.0;     // rad/s
  CavityRates rates;
  double detuning = 0.0;  // rad/s from the atomic (and cavity) resonance
};

// Detuning in GHz of ordinary frequency from the cavity resonance.
double empty_ring_transmission(const CavityRates &rates, double detuning_ghz);
double atom_transmission(const AtomCavityParams &params);

struct RateEstimate
{
  double kappa_c;
  double kappa_i;
  double var_kappa_c;
  double var_kappa_i;
  double cov;
};

struct FitResult
{
  RateEstimate under_coupled;  // kappa_c <= kappa_i
  RateEstimate over_coupled;   // the same fit with the roles exchanged
  double offset_ghz = 0.0;
  double offset_sigma_ghz = 0.0;
  double rms_residual = 0.0;
  int iterations = 0;
};

// Levenberg-Marquardt fit of the empty-ring model with a free resonance offset.
FitResult fit_spectrum(const TransmissionSpectrum &spectrum);

struct TransparencyPoint
{
  double height_nm;
  double mode_volume_um3;
  double g;
  double t0;
};

// T(0) at each atom height using g from the position-dependent mode volume.
std::vector<TransparencyPoint> transparency_vs_position(const ModeSolution &mode, const RingSpec &ring,
                                                        const AtomData &atom, const CavityRates &rates,
                                                        const std::vector<double> &heights_nm);

TransmissionSpectrum read_spectrum_csv(const std::string &path);
void write_spectrum_csv(const TransmissionSpectrum &spectrum, const std::string &path);

}  // namespace ringqed
