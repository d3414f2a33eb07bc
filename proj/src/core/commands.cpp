// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>

#include "coupler.hpp"
#include "errors.hpp"
#include "membrane.hpp"
#include "modesolver.hpp"
#include "resonator.hpp"
#include "spectra.hpp"
#include "trap.hpp"
#include "units.hpp"

namespace ringqed
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double to_ghz(double w) { return units::angular_to_ghz(w); }

json rates_json(const CavityRates &r)
{
  return {{"kappa_c_over_2pi_ghz", to_ghz(r.kappa_c)},
          {"kappa_i_over_2pi_ghz", to_ghz(r.kappa_i)},
          {"kappa_c_rad_s", r.kappa_c},
          {"kappa_i_rad_s", r.kappa_i}};
}

class Params
{
public:
  Params(const std::string &command, const RunOptions &opts, const std::vector<std::string> &allowed)
    : command_(command), values_(opts.params)
  {
    for (const auto &[key, value] : values_)
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw Error(ErrorCode::InvalidArgument, "'" + command + "' does not take parameter '" + key + "'");
  }

  bool has(const std::string &key) const { return values_.count(key) != 0; }

  std::string text(const std::string &key, const std::string &fallback) const
  {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double number(const std::string &key, double fallback) const
  {
    const auto it = values_.find(key);
    if (it == values_.end())
      return fallback;
    try
    {
      size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used == it->second.size() && std::isfinite(v))
        return v;
    }
    catch (const std::exception &)
    {
    }
    throw Error(ErrorCode::InvalidArgument, command_ + ": parameter '" + key + "' must be a number");
  }

private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

struct Context
{
  ProjectConfig cfg;
  RunOptions opts;
};

using Runner = std::function<Report(const Context &, const Params &)>;

// Bent TM mode of the ring cross-section.
ModeSolution ring_mode(const ProjectConfig &cfg, double wavelength_nm)
{
  return solve_fundamental_tm(cfg.ring.cross_section, cfg.db, wavelength_nm, cfg.ring.radius_um);
}

Table mode_table(const ModeSolution &mode)
{
  Table t{"mode_field",
          {"x_nm", "z_nm", "re_e_lateral", "im_e_lateral", "re_e_vertical", "im_e_vertical", "re_e_axial",
           "im_e_axial"},
          {}};
  const auto &g = mode.grid;
  for (int j = 0; j <= g.nz; ++j)
    for (int i = 0; i <= g.nx; ++i)
    {
      const size_t k = static_cast<size_t>(i) * (g.nz + 1) + j;
      t.add_row({g.node_x(i) * 1e3, g.node_z(j) * 1e3, mode.node_lateral[k].real(), mode.node_lateral[k].imag(),
                 mode.node_vertical[k].real(), mode.node_vertical[k].imag(), mode.node_axial[k].real(),
                 mode.node_axial[k].imag()});
    }
  return t;
}

Report run_mode(const Context &c, const Params &p)
{
  const double wl = p.number("wavelength_nm", c.cfg.atom.d1_wavelength_nm);
  const std::string bend = p.text("bend", "ring");
  CrossSection xs = c.cfg.ring.cross_section;
  std::optional<double> radius;
  if (bend == "ring")
    radius = c.cfg.ring.radius_um;
  else if (bend == "bus")
  {
    xs = c.cfg.pulley.bus_cross_section(c.cfg.ring);
    radius = c.cfg.pulley.bus_radius_um;
  }
  else if (bend != "straight")
    throw Error(ErrorCode::InvalidArgument, "mode: bend must be ring, bus or straight");
  const auto mode = solve_fundamental_tm(xs, c.cfg.db, wl, radius);

  Report r{"mode", {}, {mode_table(mode)}};
  r.summary = {{"wavelength_nm", wl},
               {"bend", bend},
               {"bend_radius_um", radius ? json(*radius) : json(nullptr)},
               {"n_eff", mode.n_eff},
               {"vertical_fraction", mode.polarization_fraction},
               {"surface_z_nm", mode.surface_z_um * 1e3},
               {"grid_pitch_nm", mode.grid.h_um * 1e3},
               {"grid_nodes", {mode.grid.nx + 1, mode.grid.nz + 1}}};
  return r;
}

Report run_ring(const Context &c, const Params &p)
{
  const auto &cfg = c.cfg;
  const double wl = p.number("wavelength_nm", cfg.atom.d1_wavelength_nm);
  const double d2 = cfg.atom.d2_wavelength_nm;
  const double f_d2 = units::wavelength_nm_to_THz(d2);
  const auto mode = ring_mode(cfg, wl);
  const auto mode_d2 = std::abs(wl - d2) < 1e-9 ? mode : ring_mode(cfg, d2);
  const double n_g = group_index(cfg.ring.cross_section, cfg.db, wl, cfg.ring.radius_um, "tm");
  const double length = cfg.ring.round_trip_um();
  const double z = cfg.atom_height_nm;
  const double vm = mode_volume(mode, cfg.ring, z);
  const double vm_d2 = mode_volume(mode_d2, cfg.ring, z);
  const double g = coupling_strength(vm_d2, cfg.atom, f_d2);

  Report r{"ring", {}, {}};
  r.summary = {{"wavelength_nm", wl},
               {"radius_um", cfg.ring.radius_um},
               {"round_trip_um", length},
               {"n_eff", mode.n_eff},
               {"n_g", n_g},
               {"fsr_ghz", free_spectral_range(n_g, length) * 1e3},
               {"atom_height_nm", z},
               {"mode_volume_um3", vm},
               {"mode_volume_d2_um3", vm_d2},
               {"g_rad_s", g},
               {"g_over_2pi_mhz", to_ghz(g) * 1e3}};
  try
  {
    CavityRates rates = cfg.rates_near(wl);
    rates.resonance_thz = units::wavelength_nm_to_THz(wl);
    r.summary["rates"] = rates_json(rates);
    r.summary["q_intrinsic"] = rates.q_intrinsic();
    r.summary["q_loaded"] = rates.q_loaded();
    r.summary["cooperativity"] = cooperativity(rates.q_loaded(), vm, wl);
  }
  catch (const NotFoundError &)
  {
    r.summary["rates"] = nullptr;
  }
  try
  {
    const auto &rd2 = cfg.rates_near(d2);
    r.summary["cooperativity_d2"] = 4.0 * g * g / (rd2.kappa() * cfg.atom.gamma_d2);
  }
  catch (const NotFoundError &)
  {
    r.summary["cooperativity_d2"] = nullptr;
  }

  Table heights{"ring_heights", {"height_nm", "mode_volume_um3", "mode_volume_d2_um3", "g_rad_s"}, {}};
  for (double h : cfg.transparency.values())
  {
    const double v2 = mode_volume(mode_d2, cfg.ring, h);
    heights.add_row({h, mode_volume(mode, cfg.ring, h), v2, coupling_strength(v2, cfg.atom, f_d2)});
  }
  r.tables.push_back(std::move(heights));

  const double f = units::wavelength_nm_to_THz(wl);
  const double fsr_thz = free_spectral_range(n_g, length);
  Table ladder{"resonance_ladder", {"azimuthal_order", "frequency_thz", "spacing_ghz"}, {}};
  for (const auto &e : resonance_ladder(mode.n_eff, length, {}, f - 2.5 * fsr_thz, f + 2.5 * fsr_thz))
    ladder.add_row({static_cast<double>(e.azimuthal_order), e.frequency_thz, e.spacing_ghz});
  r.tables.push_back(std::move(ladder));
  return r;
}

Report run_coupler_scan(const Context &c, const Params &)
{
  const auto &cfg = c.cfg;
  const auto &wls = cfg.coupler_sweep.wavelengths_nm;
  if (wls.empty())
    throw ConfigError("sweeps.coupler.wavelengths_nm is empty");
  std::vector<double> kappa_i;
  for (double wl : wls)
    kappa_i.push_back(cfg.rates_near(wl).kappa_i);
  const auto scan = design_scan(cfg.ring, cfg.pulley, cfg.db, wls, kappa_i, cfg.coupler_sweep.cl, c.opts.jobs);

  Table t{"coupler_scan", {"cl_um", "wavelength_nm", "t_res", "kappa_c_rad_s"}, {}};
  for (const auto &row : scan.rows)
    t.add_row({row.coupling_length_um, row.wavelength_nm, row.t_res, row.kappa_c});

  Report r{"coupler-scan", {}, {std::move(t)}};
  r.summary["design_cl_um"] = cfg.pulley.coupling_length_um;
  r.summary["grid_pitch_nm"] = cfg.ring.cross_section.pitch_nm;
  r.summary["wavelengths"] = json::array();
  for (const auto &s : scan.summary)
  {
    const CouplerModel model{s.wavelength_nm, {s.overlap_abs, 0.0}, s.n_ring, s.n_bus, cfg.pulley, cfg.ring};
    const double kc = model.kappa_c_at(cfg.pulley.coupling_length_um);
    json w = {{"wavelength_nm", s.wavelength_nm},
              {"kappa_i_rad_s", s.kappa_i},
              {"overlap_abs", s.overlap_abs},
              {"n_eff_ring", s.n_ring},
              {"n_eff_bus", s.n_bus},
              {"kappa_c_design_rad_s", kc},
              {"t_res_design", t_res({kc, s.kappa_i, 0.0})},
              {"argmin_cl_um", s.argmin_cl_um},
              {"min_t_res", s.min_t_res}};
    try
    {
      w["critical_cl_um"] = find_critical_cl(model, s.kappa_i);
    }
    catch (const NotFoundError &e)
    {
      w["critical_cl_um"] = nullptr;
      w["critical_mismatch_rad_s"] = e.best_mismatch();
    }
    r.summary["wavelengths"].push_back(std::move(w));
  }
  return r;
}

json estimate_json(const RateEstimate &e)
{
  return {{"kappa_c_over_2pi_ghz", to_ghz(e.kappa_c)},
          {"kappa_i_over_2pi_ghz", to_ghz(e.kappa_i)},
          {"sigma_kappa_c_over_2pi_ghz", to_ghz(std::sqrt(std::max(e.var_kappa_c, 0.0)))},
          {"sigma_kappa_i_over_2pi_ghz", to_ghz(std::sqrt(std::max(e.var_kappa_i, 0.0)))},
          {"cov_rad2_s2", e.cov}};
}

Report run_fit(const Context &c, const Params &p)
{
  if (!p.has("input"))
    throw Error(ErrorCode::InvalidArgument, "fit: parameter 'input' (spectrum CSV) is required");
  const std::string regime = p.text("regime", "both");
  if (regime != "under" && regime != "over" && regime != "both")
    throw Error(ErrorCode::InvalidArgument, "fit: regime must be under, over or both");
  const double draws_d = p.number("bootstrap", 0.0);
  if (draws_d < 0.0 || draws_d != std::floor(draws_d))
    throw Error(ErrorCode::InvalidArgument, "fit: bootstrap must be a non-negative integer");
  const int draws = static_cast<int>(draws_d);

  const auto spectrum = read_spectrum_csv(p.text("input", ""));
  const auto fit = fit_spectrum(spectrum);
  const CavityRates best{fit.under_coupled.kappa_c, fit.under_coupled.kappa_i, 0.0};

  Report r{"fit", {}, {}};
  r.summary = {{"input", p.text("input", "")},
               {"points", spectrum.transmission.size()},
               {"regime", regime},
               {"offset_ghz", fit.offset_ghz},
               {"offset_sigma_ghz", fit.offset_sigma_ghz},
               {"rms_residual", fit.rms_residual},
               {"iterations", fit.iterations},
               {"t_res", t_res(best)},
               {"kappa_over_2pi_ghz", to_ghz(best.kappa())}};
  if (regime != "over")
    r.summary["under_coupled"] = estimate_json(fit.under_coupled);
  if (regime != "under")
    r.summary["over_coupled"] = estimate_json(fit.over_coupled);

  Table res{"fit_residuals", {"detuning_ghz", "transmission", "model", "residual"}, {}};
  for (size_t k = 0; k < spectrum.transmission.size(); ++k)
  {
    const double m = empty_ring_transmission(best, spectrum.detuning_ghz[k] - fit.offset_ghz);
    res.add_row({spectrum.detuning_ghz[k], spectrum.transmission[k], m, spectrum.transmission[k] - m});
  }

  if (draws > 0)
  {
    // Parametric bootstrap: refit the best model plus Gaussian noise.
    std::mt19937_64 rng(c.opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Table boot{"fit_bootstrap", {"draw", "kappa_c_rad_s", "kappa_i_rad_s", "offset_ghz"}, {}};
    int ok = 0;
    for (int d = 0; d < draws; ++d)
    {
      TransmissionSpectrum s = spectrum;
      for (size_t k = 0; k < s.transmission.size(); ++k)
      {
        const double sigma = s.sigma.empty() ? fit.rms_residual : s.sigma[k];
        s.transmission[k] = res.rows[k][2] + sigma * normal(rng);
      }
      try
      {
        const auto f = fit_spectrum(s);
        const auto &e = regime == "over" ? f.over_coupled : f.under_coupled;
        boot.add_row({static_cast<double>(d), e.kappa_c, e.kappa_i, f.offset_ghz});
        ++ok;
      }
      catch (const Error &)
      {
        boot.add_row({static_cast<double>(d), nan, nan, nan});
      }
    }
    const auto sd = [&boot, ok](int col) {
      if (ok < 2)
        return nan;
      double mean = 0.0, ss = 0.0;
      for (const auto &row : boot.rows)
        if (!std::isnan(row[col]))
          mean += row[col] / ok;
      for (const auto &row : boot.rows)
        if (!std::isnan(row[col]))
          ss += (row[col] - mean) * (row[col] - mean);
      return std::sqrt(ss / (ok - 1));
    };
    r.summary["bootstrap"] = {{"draws", draws},
                              {"converged", ok},
                              {"seed", c.opts.seed},
                              {"sd_kappa_c_over_2pi_ghz", to_ghz(sd(1))},
                              {"sd_kappa_i_over_2pi_ghz", to_ghz(sd(2))}};
    r.tables.push_back(std::move(res));
    r.tables.push_back(std::move(boot));
    return r;
  }
  r.tables.push_back(std::move(res));
  return r;
}

// Rates for the atom-cavity commands: config entry near D2, with overrides.
CavityRates atom_rates(const ProjectConfig &cfg, const Params &p)
{
  CavityRates rates;
  if (!p.has("kappa_c_ghz") || !p.has("kappa_i_ghz"))
    rates = cfg.rates_near(cfg.atom.d2_wavelength_nm);
  rates.kappa_c = units::ghz_to_angular(p.number("kappa_c_ghz", to_ghz(rates.kappa_c)));
  rates.kappa_i = units::ghz_to_angular(p.number("kappa_i_ghz", to_ghz(rates.kappa_i)));
  rates.resonance_thz = units::wavelength_nm_to_THz(cfg.atom.d2_wavelength_nm);
  rates.validate();
  return rates;
}

Report run_spectrum(const Context &c, const Params &p)
{
  const auto &cfg = c.cfg;
  const auto rates = atom_rates(cfg, p);
  double g = 0.0;
  json g_source;
  if (p.has("g_mhz"))
  {
    g = units::ghz_to_angular(p.number("g_mhz", 0.0) * 1e-3);
    g_source = "parameter";
  }
  else
  {
    const auto mode = ring_mode(cfg, cfg.atom.d2_wavelength_nm);
    const double vm = mode_volume(mode, cfg.ring, cfg.atom_height_nm);
    g = coupling_strength(vm, cfg.atom, rates.resonance_thz);
    g_source = {{"mode_volume_um3", vm}, {"atom_height_nm", cfg.atom_height_nm}};
  }
  if (!(g >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "spectrum: g must be non-negative");

  const int n = cfg.spectrum.points;
  const double span = cfg.spectrum.span_ghz;
  Table empty{"spectrum_empty", {"detuning_ghz", "transmission"}, {}};
  Table atom{"spectrum_atom", {"detuning_ghz", "transmission"}, {}};
  for (int k = 0; k < n; ++k)
  {
    const double d = -0.5 * span + span * k / (n - 1);
    empty.add_row({d, empty_ring_transmission(rates, d)});
    atom.add_row({d, atom_transmission({g, cfg.atom.gamma_d2, rates, units::ghz_to_angular(d)})});
  }

  Report r{"spectrum", {}, {std::move(empty), std::move(atom)}};
  r.summary = {{"rates", rates_json(rates)},
               {"g_rad_s", g},
               {"g_over_2pi_mhz", to_ghz(g) * 1e3},
               {"g_source", g_source},
               {"gamma_rad_s", cfg.atom.gamma_d2},
               {"cooperativity", 4.0 * g * g / (rates.kappa() * cfg.atom.gamma_d2)},
               {"t0_empty", t_res(rates)},
               {"t0_atom", atom_transmission({g, cfg.atom.gamma_d2, rates, 0.0})}};
  return r;
}

Report run_transparency(const Context &c, const Params &p)
{
  const auto &cfg = c.cfg;
  const auto rates = atom_rates(cfg, p);
  const auto mode = ring_mode(cfg, cfg.atom.d2_wavelength_nm);
  const auto points = transparency_vs_position(mode, cfg.ring, cfg.atom, rates, cfg.transparency.values());
  Table t{"transparency", {"height_nm", "mode_volume_um3", "g_rad_s", "t0"}, {}};
  for (const auto &q : points)
    t.add_row({q.height_nm, q.mode_volume_um3, q.g, q.t0});
  const auto at = transparency_vs_position(mode, cfg.ring, cfg.atom, rates, {cfg.atom_height_nm}).front();

  Report r{"transparency", {}, {std::move(t)}};
  r.summary = {{"rates", rates_json(rates)},
               {"t0_empty", t_res(rates)},
               {"atom_height_nm", at.height_nm},
               {"mode_volume_um3", at.mode_volume_um3},
               {"g_over_2pi_mhz", to_ghz(at.g) * 1e3},
               {"t0_atom", at.t0}};
  return r;
}

Table cut_table(const std::string &name, const LineCut &cut)
{
  Table t{name, {"x_nm", "z_nm", "u_uK"}, {}};
  for (const auto &q : cut.points)
    t.add_row({q.x_nm, q.z_nm, q.u_uK});
  return t;
}

Report run_trap(const Context &c, const Params &p)
{
  const auto &cfg = c.cfg;
  const auto tc = cfg.trap_config();
  const auto modes = solve_trap_modes(cfg.ring, cfg.db, tc);
  const auto map = total_potential(tc, modes, cfg.ring, cfg.atom);

  Table pot{"potential", {"x_nm", "z_nm", "u_uK"}, {}};
  for (int i = 0; i <= map.grid.nx; ++i)
    for (int j = 0; j <= map.grid.nz; ++j)
      if (!map.solid(i, j))
        pot.add_row({map.grid.node_x(i) * 1e3, map.grid.node_z(j) * 1e3, map.at(i, j)});

  Report r{"trap", {}, {std::move(pot)}};
  r.tables.push_back(cut_table("cut_vertical", vertical_cut(map, p.number("cut_x_nm", 0.0))));
  if (p.has("cut_height_nm"))
    r.tables.push_back(
        cut_table("cut_horizontal", horizontal_cut(map, map.surface_z_um * 1e3 + p.number("cut_height_nm", 0.0))));

  const double length_m = cfg.ring.round_trip_um() * units::um;
  r.summary = {{"blue",
                {{"wavelength_nm", tc.blue_wavelength_nm},
                 {"power_mw", tc.blue_power_mw},
                 {"n_eff", modes.blue.n_eff},
                 {"rates", rates_json(tc.blue_rates)},
                 {"energy_per_length_j_m",
                  intracavity_energy(tc.blue_rates, tc.blue_power_mw, tc.blue_detuning_ghz) / length_m}}},
               {"red",
                {{"wavelength_nm", tc.red_wavelength_nm},
                 {"power_per_direction_mw", tc.red_power_mw},
                 {"n_eff", modes.red.n_eff},
                 {"rates", rates_json(tc.red_rates)},
                 {"lattice_period_nm", map.lattice_period_nm.value_or(nan)},
                 {"energy_per_length_j_m",
                  intracavity_energy(tc.red_rates, tc.red_power_mw, tc.red_detuning_ghz) / length_m}}},
               {"surface_z_nm", map.surface_z_um * 1e3},
               {"grid_pitch_nm", map.grid.h_um * 1e3}};
  try
  {
    r.summary["trap"] = trap_report_json(analyze_trap(map, 0.5 * cfg.ring.cross_section.core_width_nm));
    r.summary["trapped"] = true;
  }
  catch (const Error &e)
  {
    if (e.code() != ErrorCode::Untrapped)
      throw;
    r.summary["trapped"] = false;
    r.summary["reason"] = e.what();
  }
  return r;
}

Report run_tune(const Context &c, const Params &)
{
  const auto &cfg = c.cfg;
  const auto tc = cfg.trap_config();
  const auto modes = solve_trap_modes(cfg.ring, cfg.db, tc);
  std::vector<double> ratios;
  const auto &s = cfg.tune;
  for (int k = 0; k < s.points; ++k)
    ratios.push_back(s.ratio_min + (s.ratio_max - s.ratio_min) * k / (s.points - 1));
  const auto curve = tune_curve(modes, cfg.ring, cfg.atom, tc, ratios, s.total_power_mw);

  Table t{"tune", {"ratio", "red_power_mw", "blue_power_mw", "trapped", "height_nm", "depth_uK"}, {}};
  std::vector<double> heights;
  for (const auto &q : curve)
  {
    t.add_row({q.ratio, q.red_power_mw, q.blue_power_mw, q.trapped ? 1.0 : 0.0, q.height_nm, q.depth_uK});
    if (q.trapped)
      heights.push_back(q.height_nm);
  }
  bool rising = true, falling = true;
  for (size_t k = 1; k < heights.size(); ++k)
  {
    rising = rising && heights[k] >= heights[k - 1];
    falling = falling && heights[k] <= heights[k - 1];
  }
  const auto ratio = ratio_at_height(curve, cfg.atom_height_nm);

  Report r{"tune", {}, {std::move(t)}};
  r.summary = {{"total_power_mw", s.total_power_mw},
               {"trapped_points", heights.size()},
               {"monotone", heights.size() >= 2 && (rising || falling)},
               {"target_height_nm", cfg.atom_height_nm},
               {"ratio_at_target", ratio ? json(*ratio) : json(nullptr)}};
  return r;
}

Report run_membrane(const Context &c, const Params &)
{
  const auto &cfg = c.cfg;
  const auto &m = cfg.membrane;
  const auto stack = LayerStack::membrane(cfg.db, m.oxide_um, m.nitride_um);
  const auto resp = stack_response(stack, m.wavelength_nm);
  const auto trap = microtrap_position(stack, m.wavelength_nm, m.numerical_aperture);
  const auto stress = resulting_stress(stack, m.window);
  const auto map =
      thickness_map(cfg.db, m.oxide_range, m.nitride_range, m.wavelength_nm, m.numerical_aperture, m.window, c.opts.jobs);

  Table t{"membrane_map", {"oxide_um", "nitride_um", "trap_height_nm", "resulting_stress_mpa", "stable"}, {}};
  for (const auto &q : map)
    t.add_row({q.oxide_um, q.nitride_um, q.trap_height_nm, q.resulting_mpa, q.stable ? 1.0 : 0.0});

  Report r{"membrane", {}, {std::move(t)}};
  r.summary = {{"oxide_um", m.oxide_um},
               {"nitride_um", m.nitride_um},
               {"wavelength_nm", m.wavelength_nm},
               {"reflectance", resp.reflectance},
               {"transmittance", resp.transmittance},
               {"reflection_phase_rad", trap.reflection_phase},
               {"lattice", trap.lattice},
               {"first_antinode_nm", trap.first_antinode_nm},
               {"antinode_spacing_nm", trap.antinode_spacing_nm},
               {"numerical_aperture", trap.numerical_aperture},
               {"resulting_stress_mpa", stress.resulting_mpa},
               {"stress_window_mpa", {m.window.min_mpa, m.window.max_mpa}},
               {"stable", stress.stable}};
  if (!trap.warning.empty())
    r.summary["warning"] = trap.warning;
  return r;
}

Report run_budget(const Context &c, const Params &)
{
  const auto &b = c.cfg.budget;
  Table t{"budget", {"facet_efficiency", "throughput", "loss_db"}, {}};
  json cases = json::object();
  for (const auto &[label, f] : {std::pair{"measured", b.facet_measured}, std::pair{"simulated", b.facet_simulated}})
  {
    const double through = f * f;  // input and output facet
    t.add_row({f, through, -10.0 * std::log10(through)});
    cases[label] = {{"facet_efficiency", f}, {"throughput", through}, {"loss_db", -10.0 * std::log10(through)}};
  }
  return {"budget", std::move(cases), {std::move(t)}};
}

struct Entry
{
  CommandInfo info;
  Runner run;
};

const std::vector<Entry> &registry()
{
  static const std::vector<Entry> entries = {
      {{"mode", "solve the fundamental TM mode and export its field", {"wavelength_nm", "bend"}}, run_mode},
      {{"ring", "ring figures of merit: n_g, FSR, mode volume, g, Q, cooperativity", {"wavelength_nm"}}, run_ring},
      {{"coupler-scan", "resonant transmission versus coupling length per wavelength", {}}, run_coupler_scan},
      {{"fit", "fit an empty-ring spectrum and report both coupling branches", {"input", "regime", "bootstrap"}},
       run_fit},
      {{"spectrum", "empty-ring and atom-loaded transmission versus detuning",
        {"g_mhz", "kappa_c_ghz", "kappa_i_ghz"}},
       run_spectrum},
      {{"transparency", "on-resonance transmission versus atom height", {"kappa_c_ghz", "kappa_i_ghz"}},
       run_transparency},
      {{"trap", "two-color potential map, line cuts and trap report", {"cut_x_nm", "cut_height_nm"}}, run_trap},
      {{"tune", "trap height and depth versus red/blue power ratio", {}}, run_tune},
      {{"membrane", "membrane thickness map: trap height and resulting stress", {}}, run_membrane},
      {{"budget", "through-circuit transmission from per-facet efficiencies", {}}, run_budget},
  };
  return entries;
}

}  // namespace

const std::vector<CommandInfo> &command_list()
{
  static const std::vector<CommandInfo> list = [] {
    std::vector<CommandInfo> out;
    for (const auto &e : registry())
      out.push_back(e.info);
    return out;
  }();
  return list;
}

const Table &Report::table(const std::string &name) const
{
  for (const auto &t : tables)
    if (t.name == name)
      return t;
  throw NotFoundError("report '" + command + "' has no table '" + name + "'", 0.0);
}

Report run_command(const std::string &command, const ProjectConfig &config, const RunOptions &options)
{
  for (const auto &e : registry())
  {
    if (e.info.name != command)
      continue;
    Context c{config, options};
    if (options.jobs < 1)
      throw Error(ErrorCode::InvalidArgument, "jobs must be at least 1");
    if (options.grid_pitch_nm)
    {
      if (!(*options.grid_pitch_nm > 0.0))
        throw Error(ErrorCode::InvalidArgument, "grid pitch must be positive");
      c.cfg.ring.cross_section.pitch_nm = *options.grid_pitch_nm;
    }
    const Params p(command, options, e.info.params);
    Report r = e.run(c, p);
    r.command = command;
    return r;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + command + "'");
}

nlohmann::json report_to_json(const Report &report)
{
  json j;
  j["command"] = report.command;
  j["summary"] = report.summary;
  j["tables"] = json::array();
  for (const auto &t : report.tables)
    j["tables"].push_back(table_to_json(t));
  return j;
}

Report report_from_json(const nlohmann::json &j)
{
  Report r;
  try
  {
    r.command = j.at("command").get<std::string>();
    r.summary = j.at("summary");
    for (const auto &t : j.at("tables"))
      r.tables.push_back(table_from_json(t));
  }
  catch (const json::exception &e)
  {
    throw ConfigError(std::string("malformed report JSON: ") + e.what());
  }
  return r;
}

namespace
{

void write_json_file(const json &j, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  // Non-finite numbers have no JSON form and are written as null.
  out << j.dump(2) << '\n';
  if (!out)
    throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

json read_json_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  try
  {
    return json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

}  // namespace

std::vector<std::string> write_report(const Report &report, const std::string &dir, const std::string &format)
{
  if (format != "csv" && format != "json")
    throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorCode::Io, "cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  if (format == "json")
  {
    const auto path = (fs::path(dir) / (report.command + ".json")).string();
    write_json_file(report_to_json(report), path);
    written.push_back(path);
    return written;
  }
  json manifest;
  manifest["command"] = report.command;
  manifest["summary"] = report.summary;
  manifest["table_files"] = json::array();
  for (const auto &t : report.tables)
  {
    const auto file = t.name + ".csv";
    write_csv(t, (fs::path(dir) / file).string());
    manifest["table_files"].push_back(file);
    written.push_back((fs::path(dir) / file).string());
  }
  const auto path = (fs::path(dir) / (report.command + "_summary.json")).string();
  write_json_file(manifest, path);
  written.insert(written.begin(), path);
  return written;
}

Report read_report(const std::string &path)
{
  const json j = read_json_file(path);
  if (!j.contains("table_files"))
    return report_from_json(j);
  Report r;
  r.command = j.at("command").get<std::string>();
  r.summary = j.at("summary");
  const auto dir = fs::path(path).parent_path();
  for (const auto &f : j.at("table_files"))
    r.tables.push_back(read_csv((dir / f.get<std::string>()).string()));
  return r;
}

}  // namespace ringqed
