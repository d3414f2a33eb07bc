// SPDX-License-Identifier: Apache-2.0

#include "resonator.hpp"

#include <cmath>

#include "errors.hpp"
#include "units.hpp"

namespace ringqed
{

using units::c0;
using units::pi;
using units::two_pi;

double RingSpec::round_trip_um() const { return two_pi * radius_um + 2.0 * segment_length_um; }

void RingSpec::validate() const
{
  if (!(radius_um > 0.0))
    throw Error(ErrorCode::Geometry, "ring radius must be positive");
  if (segment_length_um < 0.0)
    throw Error(ErrorCode::Geometry, "linear segment length cannot be negative");
  cross_section.validate();
}

double CavityRates::q_intrinsic() const
{
  return kappa_to_q(kappa_i, resonance_thz);
}

double CavityRates::q_loaded() const { return kappa_to_q(kappa(), resonance_thz); }

void CavityRates::validate() const
{
  if (!(kappa_c >= 0.0) || !(kappa_i >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "cavity rates must be non-negative");
}

double free_spectral_range(double n_g, double round_trip_um)
{
  if (!(n_g > 0.0) || !(round_trip_um > 0.0))
    throw Error(ErrorCode::InvalidArgument, "FSR needs positive group index and length");
  return c0 / (n_g * round_trip_um * units::um) * 1e-12;
}

double free_spectral_range(const RingSpec &ring, const MaterialDb &db, double wavelength_nm)
{
  ring.validate();
  const double ng = group_index(ring.cross_section, db, wavelength_nm, ring.radius_um, "tm");
  return free_spectral_range(ng, ring.round_trip_um());
}

double q_to_kappa(double q, double frequency_thz)
{
  if (!(q > 0.0))
    throw Error(ErrorCode::InvalidArgument, "quality factor must be positive");
  return two_pi * frequency_thz * 1e12 / q;
}

double kappa_to_q(double kappa, double frequency_thz)
{
  if (!(kappa >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "decay rate must be non-negative");
  return two_pi * frequency_thz * 1e12 / kappa;
}

double mode_volume(const ModeSolution &mode, const RingSpec &ring, double atom_height_nm)
{
  if (!(atom_height_nm > 0.0))
    throw Error(ErrorCode::Range, "atom height must be above the surface");
  const double z_nm = mode.surface_z_um * 1e3 + atom_height_nm;
  const double e2 = mode.field_at(0.0, z_nm).norm2();
  if (!(e2 > 0.0))
    throw Error(ErrorCode::Singularity, "mode field vanishes at the atom position");
  return ring.round_trip_um() * mode.energy_integral() / e2;
}

double cooperativity(double q, double mode_volume_um3, double wavelength_nm)
{
  if (!(q > 0.0) || !(mode_volume_um3 > 0.0) || !(wavelength_nm > 0.0))
    throw Error(ErrorCode::InvalidArgument, "cooperativity inputs must be positive");
  const double lambda_um = wavelength_nm * 1e-3;
  return 3.0 * lambda_um * lambda_um * lambda_um * q / (4.0 * pi * pi * mode_volume_um3);
}

double coupling_strength(double mode_volume_um3, const AtomData &atom, double frequency_thz)
{
  if (!(mode_volume_um3 > 0.0))
    throw Error(ErrorCode::InvalidArgument, "mode volume must be positive");
  const double lambda = atom.d2_wavelength_nm * units::nm;
  const double omega = two_pi * frequency_thz * 1e12;
  const double vm = mode_volume_um3 * 1e-18;
  return std::sqrt(3.0 * lambda * lambda * lambda * omega * atom.gamma_d2 / (16.0 * pi * pi * vm));
}

double thermal_tuning(double heating_power_mw, double ghz_per_mw)
{
  if (heating_power_mw < 0.0)
    throw Error(ErrorCode::InvalidArgument, "heating power cannot be negative");
  return ghz_per_mw * heating_power_mw;
}

std::vector<LadderEntry> resonance_ladder(double n_eff, double round_trip_um,
                                          const std::vector<double> &length_increments_nm,
                                          double window_min_thz, double window_max_thz)
{
  if (!(n_eff > 0.0) || !(round_trip_um > 0.0) || !(window_max_thz > window_min_thz))
    throw Error(ErrorCode::InvalidArgument, "resonance ladder needs positive n_eff, length and window");
  const double center_thz = 0.5 * (window_min_thz + window_max_thz);
  auto freq = [&](int m, double length_um) { return m * c0 / (n_eff * length_um * units::um) * 1e-12; };

  std::vector<LadderEntry> out;
  if (length_increments_nm.empty())
  {
    const double per_order = freq(1, round_trip_um);
    const int m_lo = static_cast<int>(std::ceil(window_min_thz / per_order));
    const int m_hi = static_cast<int>(std::floor(window_max_thz / per_order));
    for (int m = m_lo; m <= m_hi; ++m)
      out.push_back({0.0, m, freq(m, round_trip_um), 0.0});
  }
  else
  {
    for (double dl : length_increments_nm)
    {
      const double length = round_trip_um + dl * 1e-3;
      // Nearest order to the window center; exact ties go to the lower frequency.
      const double exact = center_thz / freq(1, length);
      int m = static_cast<int>(std::floor(exact));
      if (exact - m > 0.5)
        ++m;
      out.push_back({dl, m, freq(m, length), 0.0});
    }
  }
  for (size_t k = 1; k < out.size(); ++k)
    out[k].spacing_ghz = (out[k].frequency_thz - out[k - 1].frequency_thz) * 1e3;
  return out;
}

}  // namespace ringqed
