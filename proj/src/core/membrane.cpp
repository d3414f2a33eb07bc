// SPDX-License-Identifier: Apache-2.0

#include "membrane.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "errors.hpp"
#include "parallel.hpp"
#include "units.hpp"

namespace ringqed
{

using cd = std::complex<double>;

void LayerStack::validate() const
{
  if (layers.empty())
    throw Error(ErrorCode::InvalidArgument, "layer stack needs at least one layer");
  for (const auto &l : layers)
    if (!(l.thickness_um > 0.0))
      throw Error(ErrorCode::Geometry, "layer '" + l.material.name + "' must have positive thickness");
}

LayerStack LayerStack::reversed() const
{
  LayerStack s = *this;
  std::reverse(s.layers.begin(), s.layers.end());
  std::swap(s.top_ambient, s.bottom_ambient);
  return s;
}

LayerStack LayerStack::membrane(const MaterialDb &db, double oxide_um, double nitride_um)
{
  LayerStack s;
  s.layers = {{db.get("SiO2"), oxide_um, std::nullopt}, {db.get("Si3N4"), nitride_um, std::nullopt}};
  s.top_ambient = db.get("vacuum");
  s.bottom_ambient = db.get("vacuum");
  return s;
}

StackResponse stack_response(const LayerStack &stack, double wavelength_nm)
{
  stack.validate();
  const double n_in = refractive_index(stack.top_ambient, wavelength_nm);
  const double n_out = refractive_index(stack.bottom_ambient, wavelength_nm);
  const double k0 = units::two_pi / (wavelength_nm * 1e-3);

  // exp(-iwt) convention: product of [[cos d, -i sin d / n], [-i n sin d, cos d]]
  // from the top down.
  cd m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
  for (const auto &l : stack.layers)
  {
    const double n = refractive_index(l.material, wavelength_nm);
    const double d = k0 * n * l.thickness_um;
    const cd a = std::cos(d), b = cd(0.0, -std::sin(d) / n), c = cd(0.0, -n * std::sin(d));
    const cd t00 = m00 * a + m01 * c, t01 = m00 * b + m01 * a;
    const cd t10 = m10 * a + m11 * c, t11 = m10 * b + m11 * a;
    m00 = t00, m01 = t01, m10 = t10, m11 = t11;
  }
  const cd bb = m00 + m01 * n_out;
  const cd cc = m10 + m11 * n_out;
  StackResponse out;
  out.r = (n_in * bb - cc) / (n_in * bb + cc);
  out.t = 2.0 * n_in / (n_in * bb + cc);
  out.reflectance = std::norm(out.r);
  out.transmittance = std::norm(out.t) * n_out / n_in;
  return out;
}

cd stack_reflectance(const LayerStack &stack, double wavelength_nm) { return stack_response(stack, wavelength_nm).r; }

Microtrap microtrap_from_reflection(cd r, double wavelength_nm, double numerical_aperture)
{
  Microtrap m;
  m.numerical_aperture = numerical_aperture;
  m.reflection_magnitude = std::abs(r);
  m.antinode_spacing_nm = 0.5 * wavelength_nm;
  if (m.reflection_magnitude < min_lattice_reflectance)
  {
    m.warning = "reflection too weak for a standing-wave lattice";
    m.first_antinode_nm = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  m.lattice = true;
  m.reflection_phase = std::arg(r);
  // |1 + r exp(2ikz)|^2 peaks where 2kz + arg r = 2 pi m.
  double phase = -m.reflection_phase;
  while (phase < 0.0)
    phase += units::two_pi;
  while (phase >= units::two_pi)
    phase -= units::two_pi;
  m.first_antinode_nm = phase / units::two_pi * m.antinode_spacing_nm;
  return m;
}

Microtrap microtrap_position(const LayerStack &stack, double wavelength_nm, double numerical_aperture)
{
  if (!(numerical_aperture > 0.0 && numerical_aperture < 1.0))
    throw Error(ErrorCode::InvalidArgument, "numerical aperture must lie in (0, 1)");
  return microtrap_from_reflection(stack_reflectance(stack, wavelength_nm), wavelength_nm, numerical_aperture);
}

StressVerdict resulting_stress(const LayerStack &stack, const StressWindow &window)
{
  stack.validate();
  double weighted = 0.0, total = 0.0;
  for (const auto &l : stack.layers)
  {
    const auto s = l.stress_mpa ? l.stress_mpa : l.material.stress_mpa;
    if (!s)
      throw ConfigError("layer '" + l.material.name + "' has no stress value");
    weighted += *s * l.thickness_um;
    total += l.thickness_um;
  }
  const double sigma = weighted / total;
  return {sigma, sigma >= window.min_mpa && sigma <= window.max_mpa};
}

std::vector<double> ThicknessRange::values() const
{
  if (!(step_um > 0.0) || !(start_um > 0.0) || stop_um < start_um)
    throw Error(ErrorCode::InvalidArgument, "thickness range needs 0 < start <= stop and a positive step");
  std::vector<double> out;
  const long n = std::lround(std::floor((stop_um - start_um) / step_um + 1e-9));
  for (long k = 0; k <= n; ++k)
    out.push_back(start_um + k * step_um);
  return out;
}

std::vector<ThicknessPoint> thickness_map(const MaterialDb &db, const ThicknessRange &oxide,
                                          const ThicknessRange &nitride, double wavelength_nm,
                                          double numerical_aperture, const StressWindow &window, int jobs)
{
  const auto ox = oxide.values();
  const auto ni = nitride.values();
  std::vector<ThicknessPoint> out(ox.size() * ni.size());
  parallel_for(static_cast<int>(out.size()), jobs, [&](int k) {
    const double ho = ox[k / ni.size()], hn = ni[k % ni.size()];
    const auto stack = LayerStack::membrane(db, ho, hn);
    const auto trap = microtrap_position(stack, wavelength_nm, numerical_aperture);
    const auto verdict = resulting_stress(stack, window);
    out[k] = {ho, hn, trap.first_antinode_nm, verdict.resulting_mpa, verdict.stable};
  });
  return out;
}

void write_thickness_map_csv(const std::vector<ThicknessPoint> &map, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << "oxide_um,nitride_um,trap_height_nm,resulting_stress_mpa,stable\n" << std::setprecision(10);
  for (const auto &p : map)
    out << p.oxide_um << ',' << p.nitride_um << ',' << p.trap_height_nm << ',' << p.resulting_mpa << ','
        << (p.stable ? 1 : 0) << '\n';
  if (!out)
    throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace ringqed
