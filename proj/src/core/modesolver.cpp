// SPDX-License-Identifier: Apache-2.0

#include "modesolver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <Eigen/Sparse>

#include "arnoldi.hpp"
#include "errors.hpp"
#include "units.hpp"

namespace ringqed
{

void CrossSection::validate() const
{
  if (!(core_width_nm > 0.0) || !(core_height_nm > 0.0))
    throw Error(ErrorCode::Geometry, "core width and height must be positive");
  if (!(pitch_nm > 0.0))
    throw Error(ErrorCode::Geometry, "grid pitch must be positive");
  if (core_width_nm < pitch_nm || core_height_nm < pitch_nm)
    throw Error(ErrorCode::Geometry, "grid pitch is coarser than the core");
  for (const auto &l : under_layers)
    if (!(l.thickness_um > 0.0))
      throw Error(ErrorCode::Geometry, "under-layer thickness must be positive");
  if (margin_um < 1.5 - 1e-12)
    throw Error(ErrorCode::Geometry, "domain must extend at least 1.5 µm beyond the core");
}

IndexStructure to_structure(const CrossSection &xs, const MaterialDb &db)
{
  xs.validate();
  const double h = xs.pitch_nm * 1e-3;
  const double half = 0.5 * xs.core_width_nm * 1e-3;
  const double height = xs.core_height_nm * 1e-3;

  IndexStructure s;
  s.pitch_nm = xs.pitch_nm;
  s.x_min_um = -h * std::ceil((half + xs.margin_um) / h - 1e-9);
  s.x_max_um = -s.x_min_um;
  s.z_min_um = -h * std::ceil(xs.margin_um / h - 1e-9);
  s.z_max_um = h * std::ceil((height + xs.margin_um) / h - 1e-9);
  s.background = db.get(xs.cladding);
  double top = 0.0;
  for (const auto &l : xs.under_layers)
  {
    s.regions.push_back({s.x_min_um - 1.0, s.x_max_um + 1.0, top - l.thickness_um, top, db.get(l.material)});
    top -= l.thickness_um;
  }
  s.regions.push_back({-half, half, 0.0, height, db.get(xs.core_material)});
  s.surface_z_um = height;
  return s;
}

bool Grid::contains(double x_um, double z_um) const
{
  const double tol = 1e-9;
  return x_um >= x0_um - tol && x_um <= x0_um + nx * h_um + tol && z_um >= z0_um - tol &&
         z_um <= z0_um + nz * h_um + tol;
}

double ModeSolution::beta_per_um() const
{
  return units::two_pi / (wavelength_nm * 1e-3) * n_eff;
}

double ModeSolution::energy_integral() const
{
  double acc = 0.0;
  for (size_t k = 0; k < ex.size(); ++k)
    acc += eps_x[k] * std::norm(ex[k]);
  for (size_t k = 0; k < ev.size(); ++k)
    acc += eps_v[k] * std::norm(ev[k]);
  for (size_t k = 0; k < ea.size(); ++k)
    acc += eps_a[k] * std::norm(ea[k]);
  return acc * grid.h_um * grid.h_um;
}

void ModeSolution::scale(cplx factor)
{
  for (auto *v : {&ex, &ev, &ea, &node_lateral, &node_vertical, &node_axial})
    for (auto &x : *v)
      x *= factor;
}

namespace
{

struct Interp
{
  int i, j;
  double fx, fz;
};

Interp locate(const Grid &g, double x_um, double z_um)
{
  if (!g.contains(x_um, z_um))
  {
    std::ostringstream msg;
    msg << "point (" << x_um * 1e3 << ", " << z_um * 1e3 << ") nm lies outside the solved domain";
    throw Error(ErrorCode::Range, msg.str());
  }
  const double u = (x_um - g.x0_um) / g.h_um;
  const double w = (z_um - g.z0_um) / g.h_um;
  Interp p;
  p.i = std::clamp(static_cast<int>(std::floor(u)), 0, g.nx - 1);
  p.j = std::clamp(static_cast<int>(std::floor(w)), 0, g.nz - 1);
  p.fx = std::clamp(u - p.i, 0.0, 1.0);
  p.fz = std::clamp(w - p.j, 0.0, 1.0);
  // Snap to nodes so node queries return stored values bit-for-bit.
  if (std::abs(p.fx) < 1e-12) p.fx = 0.0;
  if (std::abs(p.fx - 1.0) < 1e-12) p.fx = 1.0;
  if (std::abs(p.fz) < 1e-12) p.fz = 0.0;
  if (std::abs(p.fz - 1.0) < 1e-12) p.fz = 1.0;
  return p;
}

cplx bilinear(const std::vector<cplx> &node, int nz1, const Interp &p)
{
  auto at = [&](int i, int j) { return node[static_cast<size_t>(i) * nz1 + j]; };
  cplx out = 0.0;
  const double wx[2] = {1.0 - p.fx, p.fx};
  const double wz[2] = {1.0 - p.fz, p.fz};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      if (wx[a] != 0.0 && wz[b] != 0.0)
        out += wx[a] * wz[b] * at(p.i + a, p.j + b);
  return out;
}

}  // namespace

FieldVector ModeSolution::field_at(double x_nm, double z_nm) const
{
  const auto p = locate(grid, x_nm * 1e-3, z_nm * 1e-3);
  const int nz1 = grid.nz + 1;
  return {bilinear(node_lateral, nz1, p), bilinear(node_vertical, nz1, p), bilinear(node_axial, nz1, p)};
}

double ModeSolution::eps_at(double x_nm, double z_nm) const
{
  const auto p = locate(grid, x_nm * 1e-3, z_nm * 1e-3);
  return eps_cell[static_cast<size_t>(p.i) * grid.nz + p.j];
}

FieldVector field_at(const ModeSolution &mode, double x_nm, double z_nm)
{
  return mode.field_at(x_nm, z_nm);
}

double ModeSolution::poynting_integral() const
{
  const int nx = grid.nx, nz = grid.nz;
  const double h = grid.h_um;
  const double k0 = units::two_pi / (wavelength_nm * 1e-3);
  const double beta = beta_per_um();
  const cplx I(0.0, 1.0);
  auto EX = [&](int i, int j) { return ex[static_cast<size_t>(i) * (nz + 1) + j]; };
  auto EV = [&](int i, int j) { return ev[static_cast<size_t>(i) * nz + j]; };
  auto EA = [&](int i, int j) { return ea[static_cast<size_t>(i) * (nz + 1) + j]; };
  double acc = 0.0;
  // H_vertical' at Ex sites: (i/k0)(-i beta Ex - d/dx Ea).
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j <= nz; ++j)
    {
      const cplx dxa = (EA(i + 1, j) - EA(i, j)) / h;
      const cplx hv = (I / k0) * (-I * beta * EX(i, j) - dxa);
      acc += std::real(EX(i, j) * std::conj(hv));
    }
  // H_lateral' at Ev sites: (i/k0)(d/dz Ea + i beta Ev).
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < nz; ++j)
    {
      const cplx dza = (EA(i, j + 1) - EA(i, j)) / h;
      const cplx hl = (I / k0) * (dza + I * beta * EV(i, j));
      acc -= std::real(EV(i, j) * std::conj(hl));
    }
  return acc * h * h;
}

namespace
{

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double overlap_1d(double a0, double a1, double b0, double b1)
{
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

struct Discretization
{
  Grid grid;
  std::vector<double> cell;                  // physical eps per cell
  std::vector<double> eps_x, eps_v, eps_a;   // physical, full staggered arrays
  double n_clad = 1.0;
  double n_max = 1.0;
};

Discretization discretize(const IndexStructure &s, double wavelength_nm)
{
  Discretization d;
  const double h = s.pitch_nm * 1e-3;
  if (!(h > 0.0))
    throw Error(ErrorCode::Geometry, "grid pitch must be positive");
  const double ex_len = s.x_max_um - s.x_min_um;
  const double ez_len = s.z_max_um - s.z_min_um;
  const long nx = std::lround(ex_len / h);
  const long nz = std::lround(ez_len / h);
  if (nx < 3 || nz < 3 || std::abs(nx * h - ex_len) > 1e-6 || std::abs(nz * h - ez_len) > 1e-6)
    throw Error(ErrorCode::Geometry, "domain extents must be a multiple of the grid pitch");
  d.grid = {s.x_min_um, s.z_min_um, h, static_cast<int>(nx), static_cast<int>(nz)};

  const double eps_bg = std::pow(refractive_index(s.background, wavelength_nm), 2);
  std::vector<double> eps_regions;
  d.n_max = std::sqrt(eps_bg);
  for (const auto &r : s.regions)
  {
    const double n = refractive_index(r.material, wavelength_nm);
    eps_regions.push_back(n * n);
    d.n_max = std::max(d.n_max, n);
  }

  d.cell.assign(static_cast<size_t>(nx * nz), eps_bg);
  for (long i = 0; i < nx; ++i)
  {
    const double x0 = s.x_min_um + i * h, x1 = x0 + h;
    for (long j = 0; j < nz; ++j)
    {
      const double z0 = s.z_min_um + j * h, z1 = z0 + h;
      double eps = eps_bg;
      for (size_t r = 0; r < s.regions.size(); ++r)
      {
        const auto &reg = s.regions[r];
        const double f = overlap_1d(x0, x1, reg.x0_um, reg.x1_um) * overlap_1d(z0, z1, reg.z0_um, reg.z1_um) / (h * h);
        if (f > 0.0)
          eps = (1.0 - f) * eps + f * eps_regions[r];
      }
      d.cell[static_cast<size_t>(i * nz + j)] = eps;
    }
  }

  auto cell = [&](long i, long j) {
    i = std::clamp(i, 0L, nx - 1);
    j = std::clamp(j, 0L, nz - 1);
    return d.cell[static_cast<size_t>(i * nz + j)];
  };
  d.eps_x.resize(static_cast<size_t>(nx * (nz + 1)));
  for (long i = 0; i < nx; ++i)
    for (long j = 0; j <= nz; ++j)
      d.eps_x[static_cast<size_t>(i * (nz + 1) + j)] = 0.5 * (cell(i, j - 1) + cell(i, j));
  d.eps_v.resize(static_cast<size_t>((nx + 1) * nz));
  for (long i = 0; i <= nx; ++i)
    for (long j = 0; j < nz; ++j)
      d.eps_v[static_cast<size_t>(i * nz + j)] = 0.5 * (cell(i - 1, j) + cell(i, j));
  d.eps_a.resize(static_cast<size_t>((nx + 1) * (nz + 1)));
  for (long i = 0; i <= nx; ++i)
    for (long j = 0; j <= nz; ++j)
      d.eps_a[static_cast<size_t>(i * (nz + 1) + j)] =
        0.25 * (cell(i - 1, j - 1) + cell(i, j - 1) + cell(i - 1, j) + cell(i, j));

  // Cladding: the largest index met on the top and bottom domain rows.
  double clad = 0.0;
  for (long i = 0; i < nx; ++i)
    clad = std::max({clad, cell(i, 0), cell(i, nz - 1)});
  d.n_clad = std::sqrt(clad);
  return d;
}

SpMat diag(const std::vector<double> &v)
{
  SpMat m(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  std::vector<Triplet> t;
  t.reserve(v.size());
  for (size_t k = 0; k < v.size(); ++k)
    t.emplace_back(static_cast<int>(k), static_cast<int>(k), v[k]);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

std::vector<ModeSolution> solve_modes(const IndexStructure &structure, double wavelength_nm,
                                      const SolveOptions &opts)
{
  if (opts.count < 1)
    throw Error(ErrorCode::InvalidArgument, "mode count must be at least 1");
  if (opts.bend_radius_um && !(*opts.bend_radius_um > 0.0))
    throw Error(ErrorCode::InvalidArgument, "bend radius must be positive");

  const Discretization d = discretize(structure, wavelength_nm);
  const int nx = d.grid.nx, nz = d.grid.nz;
  const double h = d.grid.h_um;
  const double k0 = units::two_pi / (wavelength_nm * 1e-3);

  // Unknown numbering: Ex (i in [0,nx), j in [1,nz)), Ev (i in [1,nx), j in
  // [0,nz)); auxiliary Ea nodes (interior), Hz cells.
  const int n_ex = nx * (nz - 1);
  const int n_ev = (nx - 1) * nz;
  const int n_ea = (nx - 1) * (nz - 1);
  const int n_hz = nx * nz;
  auto iex = [&](int i, int j) { return i * (nz - 1) + (j - 1); };
  auto iev = [&](int i, int j) { return (i - 1) * nz + j; };
  auto iea = [&](int i, int j) { return (i - 1) * (nz - 1) + (j - 1); };
  auto ihz = [&](int i, int j) { return i * nz + j; };

  // Conformal bend map: eps -> eps (1 + x/R)^2 at each sample's lateral position.
  auto bend = [&](double x_um) {
    if (!opts.bend_radius_um)
      return 1.0;
    const double f = 1.0 + x_um / *opts.bend_radius_um;
    return f * f;
  };
  const double x0 = d.grid.x0_um;

  std::vector<double> mx(n_ex), mv(n_ev), ma_inv(n_ea);
  double eps_max_mapped = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < nz; ++j)
    {
      const double e = d.eps_x[static_cast<size_t>(i) * (nz + 1) + j] * bend(x0 + (i + 0.5) * h);
      mx[iex(i, j)] = e;
      eps_max_mapped = std::max(eps_max_mapped, e);
    }
  for (int i = 1; i < nx; ++i)
    for (int j = 0; j < nz; ++j)
    {
      const double e = d.eps_v[static_cast<size_t>(i) * nz + j] * bend(x0 + i * h);
      mv[iev(i, j)] = e;
      eps_max_mapped = std::max(eps_max_mapped, e);
    }
  for (int i = 1; i < nx; ++i)
    for (int j = 1; j < nz; ++j)
      ma_inv[iea(i, j)] = 1.0 / (d.eps_a[static_cast<size_t>(i) * (nz + 1) + j] * bend(x0 + i * h));

  const double inv_h = 1.0 / h;
  std::vector<Triplet> t;
  SpMat ay(n_hz, n_ex), ax(n_hz, n_ev), bx(n_ex, n_ea), by(n_ev, n_ea);
  t.clear();
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nz; ++j)
    {
      if (j + 1 < nz) t.emplace_back(ihz(i, j), iex(i, j + 1), inv_h);
      if (j >= 1) t.emplace_back(ihz(i, j), iex(i, j), -inv_h);
    }
  ay.setFromTriplets(t.begin(), t.end());
  t.clear();
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nz; ++j)
    {
      if (i + 1 < nx) t.emplace_back(ihz(i, j), iev(i + 1, j), inv_h);
      if (i >= 1) t.emplace_back(ihz(i, j), iev(i, j), -inv_h);
    }
  ax.setFromTriplets(t.begin(), t.end());
  t.clear();
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < nz; ++j)
    {
      if (i + 1 < nx) t.emplace_back(iex(i, j), iea(i + 1, j), inv_h);
      if (i >= 1) t.emplace_back(iex(i, j), iea(i, j), -inv_h);
    }
  bx.setFromTriplets(t.begin(), t.end());
  t.clear();
  for (int i = 1; i < nx; ++i)
    for (int j = 0; j < nz; ++j)
    {
      if (j + 1 < nz) t.emplace_back(iev(i, j), iea(i, j + 1), inv_h);
      if (j >= 1) t.emplace_back(iev(i, j), iea(i, j), -inv_h);
    }
  by.setFromTriplets(t.begin(), t.end());

  const SpMat dx = diag(mx), dv = diag(mv), da_inv = diag(ma_inv);
  const SpMat bxt = SpMat(bx.transpose());
  const SpMat byt = SpMat(by.transpose());
  const SpMat a11 = SpMat(k0 * k0 * dx) - SpMat(ay.transpose() * ay) - SpMat(bx * da_inv * bxt * dx);
  const SpMat a12 = SpMat(ay.transpose() * ax) - SpMat(bx * da_inv * byt * dv);
  const SpMat a21 = SpMat(ax.transpose() * ay) - SpMat(by * da_inv * bxt * dx);
  const SpMat a22 = SpMat(k0 * k0 * dv) - SpMat(ax.transpose() * ax) - SpMat(by * da_inv * byt * dv);

  const int n = n_ex + n_ev;
  SpMat a(n, n);
  {
    std::vector<Triplet> all;
    all.reserve(static_cast<size_t>(a11.nonZeros() + a12.nonZeros() + a21.nonZeros() + a22.nonZeros()));
    auto add = [&](const SpMat &m, int r0, int c0) {
      for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
          all.emplace_back(static_cast<int>(it.row()) + r0, static_cast<int>(it.col()) + c0, it.value());
    };
    add(a11, 0, 0);
    add(a12, 0, n_ex);
    add(a21, n_ex, 0);
    add(a22, n_ex, n_ex);
    a.setFromTriplets(all.begin(), all.end());
  }

  const double sigma = k0 * k0 * eps_max_mapped;
  ArnoldiOptions aopts;
  aopts.tol = opts.arnoldi_tol;
  const auto pairs = eigs_shift_invert(a, sigma, opts.count + 2, aopts);

  std::vector<ModeSolution> modes;
  for (const auto &p : pairs)
  {
    if (!(p.value > 0.0))
      continue;
    const double beta = std::sqrt(p.value);
    const double n_eff = beta / k0;
    if (!(n_eff > d.n_clad + 1e-9) || !(n_eff < d.n_max))
      continue;

    ModeSolution m;
    m.n_eff = n_eff;
    m.wavelength_nm = wavelength_nm;
    m.bend_radius_um = opts.bend_radius_um;
    m.surface_z_um = structure.surface_z_um;
    m.max_index = d.n_max;
    m.grid = d.grid;
    m.eps_x = d.eps_x;
    m.eps_v = d.eps_v;
    m.eps_a = d.eps_a;
    m.eps_cell = d.cell;

    const Eigen::VectorXd vx = p.vector.head(n_ex);
    const Eigen::VectorXd vv = p.vector.tail(n_ev);
    // Ea = i (Bx^T Dx Ex + By^T Dv Ev) / (beta eps_a), with mapped eps.
    Eigen::VectorXd div = bxt * (dx * vx) + byt * (dv * vv);
    m.ex.assign(static_cast<size_t>(nx) * (nz + 1), 0.0);
    m.ev.assign(static_cast<size_t>(nx + 1) * nz, 0.0);
    m.ea.assign(static_cast<size_t>(nx + 1) * (nz + 1), 0.0);
    for (int i = 0; i < nx; ++i)
      for (int j = 1; j < nz; ++j)
        m.ex[static_cast<size_t>(i) * (nz + 1) + j] = vx[iex(i, j)];
    for (int i = 1; i < nx; ++i)
      for (int j = 0; j < nz; ++j)
        m.ev[static_cast<size_t>(i) * nz + j] = vv[iev(i, j)];
    for (int i = 1; i < nx; ++i)
      for (int j = 1; j < nz; ++j)
        m.ea[static_cast<size_t>(i) * (nz + 1) + j] = cplx(0.0, div[iea(i, j)] * ma_inv[iea(i, j)] / beta);

    double lat = 0.0, ver = 0.0;
    for (size_t k = 0; k < m.ex.size(); ++k)
      lat += m.eps_x[k] * std::norm(m.ex[k]);
    for (size_t k = 0; k < m.ev.size(); ++k)
      ver += m.eps_v[k] * std::norm(m.ev[k]);
    m.polarization_fraction = ver / (lat + ver);

    // Node copies.
    m.node_lateral.assign(static_cast<size_t>(nx + 1) * (nz + 1), 0.0);
    m.node_vertical.assign(static_cast<size_t>(nx + 1) * (nz + 1), 0.0);
    m.node_axial = m.ea;
    for (int i = 0; i <= nx; ++i)
      for (int j = 0; j <= nz; ++j)
      {
        cplx sx = 0.0;
        int cx = 0;
        if (i >= 1) { sx += m.ex[static_cast<size_t>(i - 1) * (nz + 1) + j]; ++cx; }
        if (i < nx) { sx += m.ex[static_cast<size_t>(i) * (nz + 1) + j]; ++cx; }
        cplx sv = 0.0;
        int cv = 0;
        if (j >= 1) { sv += m.ev[static_cast<size_t>(i) * nz + j - 1]; ++cv; }
        if (j < nz) { sv += m.ev[static_cast<size_t>(i) * nz + j]; ++cv; }
        m.node_lateral[static_cast<size_t>(i) * (nz + 1) + j] = sx / double(cx);
        m.node_vertical[static_cast<size_t>(i) * (nz + 1) + j] = sv / double(cv);
      }

    // Unit energy integral; dominant transverse sample made positive.
    double big = 0.0;
    cplx sign = 1.0;
    for (const auto *v : {&m.ex, &m.ev})
      for (const auto &x : *v)
        if (std::abs(x) > big)
        {
          big = std::abs(x);
          sign = x.real() < 0 ? -1.0 : 1.0;
        }
    m.scale(sign / std::sqrt(m.energy_integral()));
    modes.push_back(std::move(m));
  }

  if (modes.empty())
  {
    std::ostringstream msg;
    msg << "no guided mode above the cladding index " << d.n_clad << " at " << wavelength_nm << " nm";
    throw Error(ErrorCode::NoMode, msg.str());
  }
  std::sort(modes.begin(), modes.end(), [](const ModeSolution &l, const ModeSolution &r) { return l.n_eff > r.n_eff; });
  if (static_cast<int>(modes.size()) > opts.count)
    modes.resize(static_cast<size_t>(opts.count));
  return modes;
}

std::vector<ModeSolution> solve_modes(const CrossSection &xs, const MaterialDb &db,
                                      double wavelength_nm, std::optional<double> bend_radius_um,
                                      int count)
{
  SolveOptions opts;
  opts.count = count;
  opts.bend_radius_um = bend_radius_um;
  return solve_modes(to_structure(xs, db), wavelength_nm, opts);
}

const ModeSolution &fundamental_tm(const std::vector<ModeSolution> &modes)
{
  for (const auto &m : modes)
    if (m.is_tm())
      return m;
  throw Error(ErrorCode::NoMode, "no TM-like mode among the solved modes");
}

ModeSolution solve_fundamental_tm(const CrossSection &xs, const MaterialDb &db, double wavelength_nm,
                                  std::optional<double> bend_radius_um)
{
  return fundamental_tm(solve_modes(xs, db, wavelength_nm, bend_radius_um, 3));
}

namespace
{

const ModeSolution &pick(const std::vector<ModeSolution> &modes, const std::string &selector)
{
  if (selector == "tm")
    return fundamental_tm(modes);
  if (selector == "fundamental")
    return modes.front();
  throw Error(ErrorCode::InvalidArgument, "unknown mode selector '" + selector + "'");
}

const ModeSolution &pick_like(const std::vector<ModeSolution> &modes, const ModeSolution &ref)
{
  const ModeSolution *best = nullptr;
  double best_score = std::numeric_limits<double>::infinity();
  for (const auto &m : modes)
  {
    if (m.is_tm() != ref.is_tm())
      continue;
    const double score = std::abs(m.n_eff - ref.n_eff);
    if (score < best_score)
    {
      best_score = score;
      best = &m;
    }
  }
  if (!best)
    throw Error(ErrorCode::NoMode, "mode family lost while differentiating n_eff");
  return *best;
}

}  // namespace

double group_index(const IndexStructure &structure, double wavelength_nm,
                   std::optional<double> bend_radius_um, const std::string &selector, double delta_nm)
{
  SolveOptions opts;
  opts.count = 3;
  opts.bend_radius_um = bend_radius_um;
  const auto center = solve_modes(structure, wavelength_nm, opts);
  const ModeSolution &ref = pick(center, selector);
  const auto lo = solve_modes(structure, wavelength_nm - delta_nm, opts);
  const auto hi = solve_modes(structure, wavelength_nm + delta_nm, opts);
  const double dn_dl = (pick_like(hi, ref).n_eff - pick_like(lo, ref).n_eff) / (2.0 * delta_nm);
  return ref.n_eff - wavelength_nm * dn_dl;
}

double group_index(const CrossSection &xs, const MaterialDb &db, double wavelength_nm,
                   std::optional<double> bend_radius_um, const std::string &selector, double delta_nm)
{
  return group_index(to_structure(xs, db), wavelength_nm, bend_radius_um, selector, delta_nm);
}

void write_mode_csv(const ModeSolution &mode, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io, "cannot write " + path);
  out << std::setprecision(10);
  out << "x_nm,z_nm,re_e_lateral,im_e_lateral,re_e_vertical,im_e_vertical,re_e_axial,im_e_axial\n";
  const auto &g = mode.grid;
  for (int j = 0; j <= g.nz; ++j)
    for (int i = 0; i <= g.nx; ++i)
    {
      const size_t k = static_cast<size_t>(i) * (g.nz + 1) + j;
      out << g.node_x(i) * 1e3 << ',' << g.node_z(j) * 1e3 << ',' << mode.node_lateral[k].real() << ','
          << mode.node_lateral[k].imag() << ',' << mode.node_vertical[k].real() << ','
          << mode.node_vertical[k].imag() << ',' << mode.node_axial[k].real() << ','
          << mode.node_axial[k].imag() << '\n';
    }
}

}  // namespace ringqed
