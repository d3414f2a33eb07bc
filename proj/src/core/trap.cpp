// SPDX-License-Identifier: Apache-2.0

#include "trap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <queue>

#include "errors.hpp"
#include "units.hpp"

namespace ringqed
{

namespace
{

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Euclidean distance (µm) from a point to the nearest non-vacuum region; 0 inside.
double distance_to_dielectric(const IndexStructure &s, double wavelength_nm, double x, double z)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto &r : s.regions)
  {
    if (refractive_index(r.material, wavelength_nm) <= 1.0 + 1e-12)
      continue;
    const double dx = std::max({r.x0_um - x, 0.0, x - r.x1_um});
    const double dz = std::max({r.z0_um - z, 0.0, z - r.z1_um});
    best = std::min(best, std::hypot(dx, dz));
  }
  return best;
}

PotentialMap empty_map(const ModeSolution &mode, const IndexStructure &structure, std::vector<double> &dist)
{
  PotentialMap map;
  map.grid = mode.grid;
  map.surface_z_um = mode.surface_z_um;
  const int nx1 = map.grid.nx + 1, nz1 = map.grid.nz + 1;
  map.u_uK.assign(static_cast<size_t>(nx1) * nz1, 0.0);
  dist.assign(map.u_uK.size(), 0.0);
  for (int i = 0; i < nx1; ++i)
    for (int j = 0; j < nz1; ++j)
    {
      const size_t k = static_cast<size_t>(i) * nz1 + j;
      dist[k] = distance_to_dielectric(structure, mode.wavelength_nm, map.grid.node_x(i), map.grid.node_z(j));
      if (dist[k] <= 1e-9)
        map.u_uK[k] = nan;
    }
  return map;
}

// U = -1/4 Re α |E|^2 with |E|^2 = 2 w |e|^2 / eps0 for energy per length w
// (J/m). The weights multiply the transverse and axial parts of |e|^2.
PotentialMap optical_map(const ModeSolution &mode, const IndexStructure &structure, double energy_per_length,
                         double alpha, double transverse_weight, double axial_weight)
{
  std::vector<double> dist;
  PotentialMap map = empty_map(mode, structure, dist);
  const double field_scale = 2.0 * energy_per_length / units::eps0 * 1e12;
  for (size_t k = 0; k < map.u_uK.size(); ++k)
  {
    if (std::isnan(map.u_uK[k]))
      continue;
    const double e2 = transverse_weight * (std::norm(mode.node_lateral[k]) + std::norm(mode.node_vertical[k])) +
                      axial_weight * std::norm(mode.node_axial[k]);
    map.u_uK[k] = units::joule_to_uK(-0.25 * alpha * field_scale * e2);
  }
  return map;
}

void require_same_grid(const PotentialMap &a, const PotentialMap &b)
{
  const Grid &x = a.grid, &y = b.grid;
  if (x.nx != y.nx || x.nz != y.nz || std::abs(x.h_um - y.h_um) > 1e-12 || std::abs(x.x0_um - y.x0_um) > 1e-9 ||
      std::abs(x.z0_um - y.z0_um) > 1e-9)
    throw Error(ErrorCode::Geometry, "potential maps live on different grids");
}

}  // namespace

void TrapConfig::validate() const
{
  if (blue_power_mw < 0.0 || red_power_mw < 0.0)
    throw Error(ErrorCode::InvalidArgument, "trap powers cannot be negative");
  blue_rates.validate();
  red_rates.validate();
  if (!(blue_wavelength_nm > 0.0) || !(red_wavelength_nm > 0.0))
    throw Error(ErrorCode::InvalidArgument, "trap wavelengths must be positive");
}

TrapModes solve_trap_modes(const RingSpec &ring, const MaterialDb &db, const TrapConfig &config,
                           bool with_group_index)
{
  ring.validate();
  config.validate();
  TrapModes m;
  m.structure = to_structure(ring.cross_section, db);
  m.blue = solve_fundamental_tm(ring.cross_section, db, config.blue_wavelength_nm, std::nullopt);
  m.red = solve_fundamental_tm(ring.cross_section, db, config.red_wavelength_nm, std::nullopt);
  if (with_group_index)
  {
    m.blue_group_index = group_index(ring.cross_section, db, config.blue_wavelength_nm, std::nullopt, "tm");
    m.red_group_index = group_index(ring.cross_section, db, config.red_wavelength_nm, std::nullopt, "tm");
  }
  return m;
}

double intracavity_energy(const CavityRates &rates, double input_power_mw, double detuning_ghz)
{
  rates.validate();
  if (input_power_mw < 0.0)
    throw Error(ErrorCode::InvalidArgument, "input power cannot be negative");
  if (!(rates.kappa() > 0.0))
    throw Error(ErrorCode::InvalidArgument, "intracavity energy needs a positive total decay rate");
  const double half = 0.5 * rates.kappa();
  const double delta = units::ghz_to_angular(detuning_ghz);
  return rates.kappa_c * input_power_mw * 1e-3 / (half * half + delta * delta);
}

double circulating_enhancement(const CavityRates &rates, double input_power_mw, double detuning_ghz,
                               const RingSpec &ring, double n_g)
{
  if (!(n_g > 0.0))
    throw Error(ErrorCode::InvalidArgument, "group index must be positive");
  const double energy = intracavity_energy(rates, input_power_mw, detuning_ghz);
  return energy * (units::c0 / n_g) / (ring.round_trip_um() * units::um) * 1e3;
}

bool PotentialMap::solid(int i, int j) const { return std::isnan(at(i, j)); }

PotentialMap &PotentialMap::operator+=(const PotentialMap &other)
{
  require_same_grid(*this, other);
  for (size_t k = 0; k < u_uK.size(); ++k)
    u_uK[k] += other.u_uK[k];
  if (!lattice_period_nm)
    lattice_period_nm = other.lattice_period_nm;
  return *this;
}

PotentialMap &PotentialMap::operator*=(double factor)
{
  for (auto &u : u_uK)
    u *= factor;
  return *this;
}

PotentialMap operator+(PotentialMap a, const PotentialMap &b)
{
  a += b;
  return a;
}

PotentialMap blue_potential(const ModeSolution &mode, const IndexStructure &structure,
                            double circulating_power_mw, double n_g, const AtomData &atom)
{
  const double alpha = cs_ground_polarizability(atom, mode.wavelength_nm);
  if (!(alpha < 0.0))
    throw ConfigError("blue trap wavelength must give a negative (repulsive) polarizability");
  if (circulating_power_mw < 0.0 || !(n_g > 0.0))
    throw Error(ErrorCode::InvalidArgument, "blue potential needs non-negative power and positive group index");
  const double w = circulating_power_mw * 1e-3 * n_g / units::c0;
  return optical_map(mode, structure, w, alpha, 1.0, 1.0);
}

PotentialMap red_lattice_potential(const ModeSolution &mode, const IndexStructure &structure,
                                   double circulating_power_per_direction_mw, double n_g, const AtomData &atom,
                                   int directions)
{
  const double alpha = cs_ground_polarizability(atom, mode.wavelength_nm);
  if (!(alpha > 0.0))
    throw ConfigError("red trap wavelength must give a positive (attractive) polarizability");
  if (directions != 1 && directions != 2)
    throw Error(ErrorCode::InvalidArgument, "red lattice takes one or two propagation directions");
  if (circulating_power_per_direction_mw < 0.0 || !(n_g > 0.0))
    throw Error(ErrorCode::InvalidArgument, "red potential needs non-negative power and positive group index");
  const double w = circulating_power_per_direction_mw * 1e-3 * n_g / units::c0;
  PotentialMap map = directions == 2 ? optical_map(mode, structure, w, alpha, 4.0, 0.0)
                                     : optical_map(mode, structure, w, alpha, 1.0, 1.0);
  if (directions == 2)
    map.lattice_period_nm = mode.wavelength_nm / (2.0 * mode.n_eff);
  return map;
}

double casimir_polder(const AtomData &atom, double z_nm)
{
  if (!(z_nm > 0.0))
    throw Error(ErrorCode::Range, "Casimir-Polder distance must be positive");
  const double z = z_nm * 1e-3;
  const double lb = atom.lambda_bar_nm * 1e-3;
  const double hz = atom.c4_hz_um4 / (z * z * z * (z + lb));
  return -units::joule_to_uK(units::h_planck * hz);
}

PotentialMap casimir_polder_map(const ModeSolution &mode, const IndexStructure &structure, const AtomData &atom)
{
  std::vector<double> dist;
  PotentialMap map = empty_map(mode, structure, dist);
  for (size_t k = 0; k < map.u_uK.size(); ++k)
    if (!std::isnan(map.u_uK[k]))
      map.u_uK[k] = casimir_polder(atom, dist[k] * 1e3);
  return map;
}

PotentialMap total_potential(const TrapConfig &config, const TrapModes &modes, const RingSpec &ring,
                             const AtomData &atom)
{
  config.validate();
  const double length_m = ring.round_trip_um() * units::um;
  // Energy per unit length of the ring; equals P_circ / v_g for either color.
  const double w_blue = intracavity_energy(config.blue_rates, config.blue_power_mw, config.blue_detuning_ghz) / length_m;
  const double w_red = intracavity_energy(config.red_rates, config.red_power_mw, config.red_detuning_ghz) / length_m;
  const double alpha_b = cs_ground_polarizability(atom, modes.blue.wavelength_nm);
  const double alpha_r = cs_ground_polarizability(atom, modes.red.wavelength_nm);
  if (!(alpha_b < 0.0))
    throw ConfigError("blue trap wavelength must give a negative (repulsive) polarizability");
  if (!(alpha_r > 0.0))
    throw ConfigError("red trap wavelength must give a positive (attractive) polarizability");

  PotentialMap total = casimir_polder_map(modes.red, modes.structure, atom);
  total += optical_map(modes.blue, modes.structure, w_blue, alpha_b, 1.0, 1.0);
  PotentialMap red = optical_map(modes.red, modes.structure, w_red, alpha_r, 4.0, 0.0);
  red.lattice_period_nm = modes.red.wavelength_nm / (2.0 * modes.red.n_eff);
  total += red;
  return total;
}

namespace
{

constexpr int di8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int dj8[8] = {0, 1, 1, 1, 0, -1, -1, -1};

MapPoint point(const PotentialMap &m, int i, int j)
{
  return {m.grid.node_x(i) * 1e3, m.grid.node_z(j) * 1e3, m.at(i, j)};
}

bool interior(const PotentialMap &m, int i, int j) { return i > 0 && j > 0 && i < m.grid.nx && j < m.grid.nz; }

bool ring_clear(const PotentialMap &m, int i, int j)
{
  if (!interior(m, i, j) || m.solid(i, j))
    return false;
  for (int d = 0; d < 8; ++d)
    if (m.solid(i + di8[d], j + dj8[d]))
      return false;
  return true;
}

// Vertex parabola through three equally spaced samples; offset in steps.
double parabola_offset(double um, double u0, double up)
{
  const double den = um - 2.0 * u0 + up;
  return den > 0.0 ? std::clamp(0.5 * (um - up) / den, -0.5, 0.5) : 0.0;
}

}  // namespace

TrapReport analyze_trap(const PotentialMap &map, double core_half_width_nm)
{
  const int nx = map.grid.nx, nz = map.grid.nz;
  TrapReport rep;
  const double top_nm = map.surface_z_um * 1e3;

  int best_i = -1, best_j = -1;
  for (int i = 1; i < nx; ++i)
    for (int j = 1; j < nz; ++j)
    {
      if (!ring_clear(map, i, j))
        continue;
      const double u = map.at(i, j);
      int lower_or_equal = 0, sign_changes = 0;
      for (int d = 0; d < 8; ++d)
      {
        const double un = map.at(i + di8[d], j + dj8[d]);
        const double un_next = map.at(i + di8[(d + 1) % 8], j + dj8[(d + 1) % 8]);
        if (un <= u)
          ++lower_or_equal;
        if ((un > u) != (un_next > u))
          ++sign_changes;
      }
      if (lower_or_equal == 0)
      {
        rep.minima.push_back(point(map, i, j));
        const double x_nm = map.grid.node_x(i) * 1e3;
        const double z_nm = map.grid.node_z(j) * 1e3;
        if (std::abs(x_nm) <= core_half_width_nm + 1e-6 && z_nm > top_nm &&
            (best_i < 0 || u < map.at(best_i, best_j)))
        {
          best_i = i;
          best_j = j;
        }
      }
      else if (sign_changes >= 4)
      {
        rep.saddles.push_back(point(map, i, j));
      }
    }
  if (best_i < 0)
    throw Error(ErrorCode::Untrapped, "no bound potential minimum above the waveguide");

  const double u_min = map.at(best_i, best_j);
  rep.center = point(map, best_i, best_j);
  const double dz = parabola_offset(map.at(best_i, best_j - 1), u_min, map.at(best_i, best_j + 1));
  rep.height_nm = rep.center.z_nm + dz * map.grid.h_um * 1e3 - top_nm;

  // Minimax flood: the lowest barrier over which the basin spills to the
  // domain edge or into lower ground.
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<char> seen(map.u_uK.size(), 0);
  auto idx = [&](int i, int j) { return i * (nz + 1) + j; };
  heap.push({u_min, idx(best_i, best_j)});
  seen[idx(best_i, best_j)] = 1;
  double level = u_min;
  int level_node = idx(best_i, best_j);
  bool escaped = false;
  while (!heap.empty())
  {
    const auto [u, k] = heap.top();
    heap.pop();
    if (u > level)
    {
      level = u;
      level_node = k;
    }
    const int i = k / (nz + 1), j = k % (nz + 1);
    if (!interior(map, i, j) || u < u_min)
    {
      escaped = true;
      break;
    }
    for (int d = 0; d < 8; ++d)
    {
      const int ni = i + di8[d], nj = j + dj8[d];
      const int nk = idx(ni, nj);
      if (seen[nk] || map.solid(ni, nj))
        continue;
      seen[nk] = 1;
      heap.push({map.at(ni, nj), nk});
    }
  }
  if (!escaped)
    throw Error(ErrorCode::Untrapped, "potential basin is enclosed by dielectric; no escape path");
  rep.depth_uK = level - u_min;
  rep.weakest_saddle = point(map, level_node / (nz + 1), level_node % (nz + 1));
  rep.exceeds_thermal = rep.depth_uK > thermal_threshold_uK;
  std::sort(rep.saddles.begin(), rep.saddles.end(), [](const MapPoint &a, const MapPoint &b) { return a.u_uK < b.u_uK; });
  return rep;
}

std::vector<TunePoint> tune_curve(const TrapModes &modes, const RingSpec &ring, const AtomData &atom,
                                  const TrapConfig &base, const std::vector<double> &ratios, double total_power_mw)
{
  if (!(total_power_mw > 0.0))
    throw Error(ErrorCode::InvalidArgument, "total trap power must be positive");
  const double half_width_nm = 0.5 * ring.cross_section.core_width_nm;
  std::vector<TunePoint> out;
  for (double r : ratios)
  {
    if (!(r >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "power ratios must be non-negative");
    TrapConfig cfg = base;
    cfg.blue_power_mw = total_power_mw / (1.0 + r);
    cfg.red_power_mw = total_power_mw - cfg.blue_power_mw;
    TunePoint p{r, cfg.red_power_mw, cfg.blue_power_mw, false, nan, nan};
    try
    {
      const auto rep = analyze_trap(total_potential(cfg, modes, ring, atom), half_width_nm);
      p.trapped = true;
      p.height_nm = rep.height_nm;
      p.depth_uK = rep.depth_uK;
    }
    catch (const Error &e)
    {
      if (e.code() != ErrorCode::Untrapped)
        throw;
    }
    out.push_back(p);
  }
  return out;
}

std::optional<double> ratio_at_height(const std::vector<TunePoint> &curve, double height_nm)
{
  for (size_t k = 1; k < curve.size(); ++k)
  {
    const auto &a = curve[k - 1], &b = curve[k];
    if (!a.trapped || !b.trapped)
      continue;
    if ((a.height_nm - height_nm) * (b.height_nm - height_nm) <= 0.0 && a.height_nm != b.height_nm)
      return a.ratio + (height_nm - a.height_nm) * (b.ratio - a.ratio) / (b.height_nm - a.height_nm);
  }
  return std::nullopt;
}

LineCut vertical_cut(const PotentialMap &map, double x_nm)
{
  const int i = static_cast<int>(std::lround((x_nm * 1e-3 - map.grid.x0_um) / map.grid.h_um));
  if (i < 0 || i > map.grid.nx)
    throw Error(ErrorCode::Range, "line cut outside the map");
  LineCut cut{"z", {}};
  for (int j = 0; j <= map.grid.nz; ++j)
    if (!map.solid(i, j))
      cut.points.push_back(point(map, i, j));
  return cut;
}

LineCut horizontal_cut(const PotentialMap &map, double z_nm)
{
  const int j = static_cast<int>(std::lround((z_nm * 1e-3 - map.grid.z0_um) / map.grid.h_um));
  if (j < 0 || j > map.grid.nz)
    throw Error(ErrorCode::Range, "line cut outside the map");
  LineCut cut{"x", {}};
  for (int i = 0; i <= map.grid.nx; ++i)
    if (!map.solid(i, j))
      cut.points.push_back(point(map, i, j));
  return cut;
}

void write_potential_csv(const PotentialMap &map, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << "x_nm,z_nm,u_uK\n" << std::setprecision(10);
  for (int i = 0; i <= map.grid.nx; ++i)
    for (int j = 0; j <= map.grid.nz; ++j)
      if (!map.solid(i, j))
        out << map.grid.node_x(i) * 1e3 << ',' << map.grid.node_z(j) * 1e3 << ',' << map.at(i, j) << '\n';
  if (!out)
    throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

namespace
{
nlohmann::json point_json(const MapPoint &p) { return {{"x_nm", p.x_nm}, {"z_nm", p.z_nm}, {"u_uK", p.u_uK}}; }
}  // namespace

nlohmann::json trap_report_json(const TrapReport &r)
{
  nlohmann::json j;
  j["center"] = point_json(r.center);
  j["height_nm"] = r.height_nm;
  j["depth_uK"] = r.depth_uK;
  j["weakest_saddle"] = point_json(r.weakest_saddle);
  j["exceeds_thermal"] = r.exceeds_thermal;
  j["minima"] = nlohmann::json::array();
  for (const auto &p : r.minima)
    j["minima"].push_back(point_json(p));
  j["saddles"] = nlohmann::json::array();
  for (const auto &p : r.saddles)
    j["saddles"].push_back(point_json(p));
  return j;
}

}  // namespace ringqed
