// SPDX-License-Identifier: Apache-2.0

#include "coupler.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"
#include "units.hpp"

namespace ringqed
{

void PulleySpec::validate(const RingSpec &ring) const
{
  if (!(gap_um > 0.0))
    throw Error(ErrorCode::Geometry, "coupler gap must be positive");
  if (!(bus_width_um > 0.0))
    throw Error(ErrorCode::Geometry, "bus width must be positive");
  if (coupling_length_um < 0.0)
    throw Error(ErrorCode::Geometry, "coupling length cannot be negative");
  const double expected =
      ring.radius_um + 0.5 * ring.cross_section.core_width_nm * 1e-3 + gap_um + 0.5 * bus_width_um;
  if (std::abs(bus_radius_um - expected) > 1e-3)
  {
    std::ostringstream msg;
    msg << "bus radius " << bus_radius_um << " um is not concentric with the ring (expected " << expected
        << " um)";
    throw Error(ErrorCode::Geometry, msg.str());
  }
}

CrossSection PulleySpec::bus_cross_section(const RingSpec &ring) const
{
  CrossSection xs = ring.cross_section;
  xs.core_width_nm = bus_width_um * 1e3;
  return xs;
}

PulleySpec PulleySpec::concentric(const RingSpec &ring, double gap_um, double bus_width_um,
                                  double coupling_length_um)
{
  PulleySpec p;
  p.gap_um = gap_um;
  p.bus_width_um = bus_width_um;
  p.coupling_length_um = coupling_length_um;
  p.bus_radius_um = ring.radius_um + 0.5 * ring.cross_section.core_width_nm * 1e-3 + gap_um + 0.5 * bus_width_um;
  return p;
}

std::complex<double> overlap_integral(const ModeSolution &ring_mode, const ModeSolution &bus_mode,
                                      const PulleySpec &pulley, const RingSpec &ring, double wavelength_nm)
{
  pulley.validate(ring);
  const Grid &gr = ring_mode.grid;
  const Grid &gw = bus_mode.grid;
  if (std::abs(ring_mode.wavelength_nm - wavelength_nm) > 1e-9 ||
      std::abs(bus_mode.wavelength_nm - wavelength_nm) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "ring and bus modes must be solved at the overlap wavelength");

  // Bus-frame x maps to ring-frame x + offset; the two Yee lattices must coincide.
  const double h = gr.h_um;
  const double offset = pulley.bus_radius_um - ring.radius_um;
  const double shift = (gw.x0_um + offset - gr.x0_um) / h;
  const long di = std::lround(shift);
  if (std::abs(gw.h_um - h) > 1e-12 || std::abs(shift - di) > 1e-6 || std::abs(gw.z0_um - gr.z0_um) > 1e-9)
    throw Error(ErrorCode::Geometry, "bus and ring field grids are not aligned (pitch must divide the center offset)");

  const int nzr = gr.nz, nzw = gw.nz;
  auto ring_ok = [&](long i, long j, long ni, long nj) { return i >= 0 && i < ni && j >= 0 && j < nj; };

  cplx acc = 0.0;
  auto add = [&](const std::vector<cplx> &fw, const std::vector<double> &epsw, long wi_count, long wj_count,
                 const std::vector<cplx> &fr, const std::vector<double> &epsr, long ri_count, long rj_count,
                 double x_half) {
    for (long i = 0; i < wi_count; ++i)
      for (long j = 0; j < wj_count; ++j)
      {
        const size_t kw = static_cast<size_t>(i * wj_count + j);
        const long ri = i + di;
        if (!ring_ok(ri, j, ri_count, rj_count))
          continue;
        const size_t kr = static_cast<size_t>(ri * rj_count + j);
        const double deps = epsw[kw] - epsr[kr];
        if (deps <= 0.0)
          continue;
        const double x_ring = gr.x0_um + (ri + x_half) * h;
        acc += deps * fw[kw] * std::conj(fr[kr]) * (ring.radius_um + x_ring);
      }
  };
  add(bus_mode.ex, bus_mode.eps_x, gw.nx, nzw + 1, ring_mode.ex, ring_mode.eps_x, gr.nx, nzr + 1, 0.5);
  add(bus_mode.ev, bus_mode.eps_v, gw.nx + 1, nzw, ring_mode.ev, ring_mode.eps_v, gr.nx + 1, nzr, 0.0);
  add(bus_mode.ea, bus_mode.eps_a, gw.nx + 1, nzw + 1, ring_mode.ea, ring_mode.eps_a, gr.nx + 1, nzr + 1, 0.0);
  // µm^3 of r dr dz times µm^-2 of the two normalized fields.
  const cplx integral_si = acc * h * h * 1e-6;

  const double omega = units::wavelength_nm_to_omega(wavelength_nm);
  const double length_m = ring.round_trip_um() * units::um;
  const double amp_ring = std::sqrt(2.0 / (units::eps0 * length_m));
  const double power = bus_mode.poynting_integral();
  if (!(power > 0.0))
    throw Error(ErrorCode::Numeric, "bus mode carries no forward power");
  const double amp_bus = std::sqrt(2.0 * units::eta0 / power);
  return cplx(0.0, omega * units::eps0 / 4.0) * amp_bus * amp_ring * integral_si;
}

double sinc(double x)
{
  if (std::abs(x) < 1e-8)
    return 1.0 - units::pi * units::pi * x * x / 6.0;
  const double px = units::pi * x;
  return std::sin(px) / px;
}

double kappa_c(std::complex<double> s, double n_ring, double n_bus, const PulleySpec &pulley,
               const RingSpec &ring, double wavelength_nm)
{
  const double cl = pulley.coupling_length_um;
  const double r = ring.radius_um;
  const double mismatch = (n_bus * pulley.bus_radius_um - n_ring * r) * cl / (r * wavelength_nm * 1e-3);
  return std::norm(s * sinc(mismatch) * (cl / r));
}

double kappa_c(std::complex<double> s, const ModeSolution &ring_mode, const ModeSolution &bus_mode,
               const PulleySpec &pulley, const RingSpec &ring, double wavelength_nm)
{
  return kappa_c(s, ring_mode.n_eff, bus_mode.n_eff, pulley, ring, wavelength_nm);
}

double t_res(const CavityRates &rates)
{
  rates.validate();
  const double sum = rates.kappa_c + rates.kappa_i;
  if (sum == 0.0)
    throw Error(ErrorCode::Undefined, "resonant transmission undefined when both rates vanish");
  const double r = (rates.kappa_i - rates.kappa_c) / sum;
  return r * r;
}

RatioBranches invert_t_res(double t)
{
  if (!(t >= 0.0 && t < 1.0))
    throw Error(ErrorCode::Range, "resonant transmission must lie in [0, 1)");
  const double q = std::sqrt(t);
  const double under = (1.0 - q) / (1.0 + q);
  return {under, 1.0 / under};
}

double CouplerModel::kappa_c_at(double coupling_length_um) const
{
  PulleySpec p = pulley;
  p.coupling_length_um = coupling_length_um;
  return kappa_c(overlap, n_ring, n_bus, p, ring, wavelength_nm);
}

CouplerModel build_coupler_model(const RingSpec &ring, const PulleySpec &pulley, const MaterialDb &db,
                                 double wavelength_nm)
{
  ring.validate();
  pulley.validate(ring);
  const auto ring_mode = solve_fundamental_tm(ring.cross_section, db, wavelength_nm, ring.radius_um);
  const auto bus_mode =
      solve_fundamental_tm(pulley.bus_cross_section(ring), db, wavelength_nm, pulley.bus_radius_um);
  CouplerModel m;
  m.wavelength_nm = wavelength_nm;
  m.overlap = overlap_integral(ring_mode, bus_mode, pulley, ring, wavelength_nm);
  m.n_ring = ring_mode.n_eff;
  m.n_bus = bus_mode.n_eff;
  m.pulley = pulley;
  m.ring = ring;
  return m;
}

double find_critical_cl(const CouplerModel &model, double kappa_i, double cl_max_um)
{
  if (kappa_i < 0.0)
    throw Error(ErrorCode::InvalidArgument, "intrinsic loss rate cannot be negative");
  if (kappa_i == 0.0)
    return 0.0;
  const double step = 0.01;
  double best = std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double f_lo = model.kappa_c_at(0.0) - kappa_i;
  const int n = static_cast<int>(std::ceil(cl_max_um / step));
  for (int k = 1; k <= n; ++k)
  {
    const double hi = std::min(k * step, cl_max_um);
    const double f_hi = model.kappa_c_at(hi) - kappa_i;
    best = std::min({best, std::abs(f_lo), std::abs(f_hi)});
    if (f_hi >= 0.0)
    {
      double a = lo, b = hi;
      while (b - a > 1e-3)
      {
        const double mid = 0.5 * (a + b);
        (model.kappa_c_at(mid) - kappa_i >= 0.0 ? b : a) = mid;
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    f_lo = f_hi;
  }
  throw NotFoundError("coupling rate never reaches the intrinsic loss rate within the search range", best);
}

std::vector<double> ClRange::values() const
{
  if (!(step_um > 0.0) || stop_um < start_um || start_um < 0.0)
    throw Error(ErrorCode::InvalidArgument, "coupling-length range needs 0 <= start <= stop and a positive step");
  std::vector<double> out;
  const long n = std::lround(std::floor((stop_um - start_um) / step_um + 1e-9));
  for (long k = 0; k <= n; ++k)
    out.push_back(start_um + k * step_um);
  return out;
}

DesignScan design_scan(const RingSpec &ring, const PulleySpec &pulley, const MaterialDb &db,
                       const std::vector<double> &wavelengths_nm, const std::vector<double> &kappa_i,
                       const ClRange &range, int jobs)
{
  if (wavelengths_nm.size() != kappa_i.size())
    throw Error(ErrorCode::InvalidArgument, "design scan needs one intrinsic loss rate per wavelength");
  const auto cls = range.values();
  std::vector<CouplerModel> models(wavelengths_nm.size());
  parallel_for(static_cast<int>(wavelengths_nm.size()), jobs,
               [&](int k) { models[k] = build_coupler_model(ring, pulley, db, wavelengths_nm[k]); });

  DesignScan scan;
  for (size_t k = 0; k < models.size(); ++k)
  {
    ScanSummary s{wavelengths_nm[k], kappa_i[k], std::abs(models[k].overlap), models[k].n_ring,
                  models[k].n_bus, 0.0, std::numeric_limits<double>::infinity()};
    for (double cl : cls)
    {
      const double kc = models[k].kappa_c_at(cl);
      const double t = t_res({kc, kappa_i[k], 0.0});
      scan.rows.push_back({cl, wavelengths_nm[k], t, kc});
      if (t < s.min_t_res)
      {
        s.min_t_res = t;
        s.argmin_cl_um = cl;
      }
    }
    scan.summary.push_back(s);
  }
  return scan;
}

void write_design_scan_csv(const DesignScan &scan, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << "cl_um,wavelength_nm,t_res,kappa_c_rad_s\n" << std::setprecision(10);
  for (const auto &r : scan.rows)
    out << r.coupling_length_um << ',' << r.wavelength_nm << ',' << r.t_res << ',' << r.kappa_c << '\n';
  if (!out)
    throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace ringqed
