// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "commands.hpp"
#include "config.hpp"
#include "coupler.hpp"
#include "membrane.hpp"
#include "modesolver.hpp"
#include "resonator.hpp"
#include "spectra.hpp"
#include "trap.hpp"
#include "units.hpp"

using namespace ringqed;
using nlohmann::json;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string &note)
  {
    pass = pass && ok;
    notes.push_back((ok ? "" : "!") + note);
  }
};

int failures = 0;

void report(int id, const std::string &title, const std::function<Outcome()> &body)
{
  Outcome o;
  try
  {
    o = body();
  }
  catch (const std::exception &e)
  {
    o.check(false, std::string("exception: ") + e.what());
  }
  std::string detail;
  for (const auto &n : o.notes)
    detail += (detail.empty() ? "" : "; ") + n;
  fmt::print("[{}] {} {}: {}\n", o.pass ? "PASS" : "FAIL", id, title, detail);
  std::fflush(stdout);
  failures += o.pass ? 0 : 1;
}

ProjectConfig project()
{
  return ProjectConfig::from_yaml_file(RINGQED_SOURCE_DIR "/configs/default.yaml");
}

bool within(double x, double target, double tol)
{
  return std::abs(x - target) <= tol;
}

// Fundamental even slab root of kappa tan(kappa d/2) = p gamma, p = 1 (TE) or n1²/n2² (TM).
double slab_k(double n1, double n2, double d_um, double wavelength_nm, bool tm)
{
  const double k0 = units::two_pi / (wavelength_nm * 1e-3);
  const double p = tm ? n1 * n1 / (n2 * n2) : 1.0;
  auto f = [&](double k) {
    const double kap = std::sqrt(n1 * n1 * k0 * k0 - k * k);
    const double gam = std::sqrt(k * k - n2 * n2 * k0 * k0);
    return kap * std::sin(0.5 * kap * d_um) - p * gam * std::cos(0.5 * kap * d_um);
  };
  double lo = std::sqrt(std::max(n1 * n1 * k0 * k0 - std::pow(M_PI / d_um, 2), n2 * n2 * k0 * k0)) + 1e-12;
  double hi = n1 * k0 - 1e-12;
  const bool lo_pos = f(lo) > 0.0;
  for (int k = 0; k < 200; ++k)
  {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) > 0.0) == lo_pos ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double slab_error(const MaterialDb &db)
{
  const double slab_um = 0.38, box_um = 2.0, wl = 894.0;
  IndexStructure s;
  s.pitch_nm = 10.0;
  s.x_min_um = -0.5 * box_um;
  s.x_max_um = 0.5 * box_um;
  s.z_min_um = -0.5 * slab_um - 1.6;
  s.z_max_um = 0.5 * slab_um + 1.6;
  s.regions.push_back({s.x_min_um - 1.0, s.x_max_um + 1.0, -0.5 * slab_um, 0.5 * slab_um, db.get("Si3N4")});
  s.surface_z_um = 0.5 * slab_um;
  SolveOptions opts;
  opts.count = 8;
  const auto modes = solve_modes(s, wl, opts);
  const double n1 = refractive_index(db.get("Si3N4"), wl);
  const double k0 = units::two_pi / (wl * 1e-3);
  double worst = 0.0;
  for (bool tm : {false, true})
  {
    const auto it = std::find_if(modes.begin(), modes.end(), [&](const ModeSolution &m) { return m.is_tm() == tm; });
    if (it == modes.end())
      return INFINITY;
    // TM: the vertical field vanishes on the side walls, adding k_x = pi / W.
    const double kp = slab_k(n1, 1.0, slab_um, wl, tm);
    const double kx = tm ? M_PI / box_um : 0.0;
    const double analytic = std::sqrt(kp * kp - kx * kx) / k0;
    worst = std::max(worst, std::abs(it->n_eff - analytic) / analytic);
  }
  return worst;
}

TransmissionSpectrum lorentzian(double kc_ghz, double ki_ghz, double noise, std::uint64_t seed, double half_span)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  TransmissionSpectrum s;
  const double half = 0.5 * (kc_ghz + ki_ghz);
  for (int k = 0; k < 401; ++k)
  {
    const double d = half_span * (-1.0 + 2.0 * k / 400.0);
    s.detuning_ghz.push_back(d);
    s.transmission.push_back(1.0 - kc_ghz * ki_ghz / (d * d + half * half) + noise * nd(rng));
  }
  return s;
}

double rel(double x, double target)
{
  return std::abs(x - target) / std::abs(target);
}

double loglog_slope(const AtomData &atom, double z_lo, double z_hi)
{
  const int n = 50;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < n; ++k)
  {
    const double z = z_lo * std::pow(z_hi / z_lo, static_cast<double>(k) / (n - 1));
    const double x = std::log(z), y = std::log(-casimir_polder(atom, z));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

int main()
{
  report(1, "T_res design point", [] {
    Outcome o;
    auto cfg = project();
    const auto t0 = Clock::now();
    const auto r = run_command("coupler-scan", cfg, {});
    const double secs = seconds_since(t0);
    const std::vector<std::pair<double, double>> expected = {{894, 0.02}, {852, 0.03}, {932, 0.14}, {795, 0.29}};
    std::vector<double> got;
    for (const auto &[wl, t] : expected)
    {
      double v = NAN;
      for (const auto &w : r.summary["wavelengths"])
        if (std::abs(w["wavelength_nm"].get<double>() - wl) < 1e-6)
          v = w["t_res_design"].get<double>();
      got.push_back(v);
      o.check(within(v, t, 0.10), fmt::format("{:.0f} nm T_res {:.3f} (target {:.2f})", wl, v, t));
    }
    bool ordered = true;
    for (size_t a = 0; a < expected.size(); ++a)
      for (size_t b = 0; b < expected.size(); ++b)
        if (expected[a].second < expected[b].second)
          ordered = ordered && got[a] < got[b];
    o.check(ordered, "ordering preserved");
    o.check(r.summary["grid_pitch_nm"].get<double>() == 20.0 && secs < 600.0,
            fmt::format("{:.0f} s at {} nm pitch", secs, r.summary["grid_pitch_nm"].get<double>()));
    return o;
  });

  report(2, "atom transparency", [] {
    Outcome o;
    const auto cs = AtomData::cesium();
    for (auto [kappa, target, tol] : {std::tuple{5.6, 0.66, 0.03}, std::tuple{2.0, 0.85, 0.02}})
    {
      const double k = units::ghz_to_angular(0.5 * kappa);
      const double t = atom_transmission({units::ghz_to_angular(0.176), cs.gamma_d2, {k, k, 351.7}, 0.0});
      o.check(within(t, target, tol), fmt::format("kappa/2pi {} GHz: T(0) {:.3f}", kappa, t));
    }
    return o;
  });

  report(3, "Q to kappa", [] {
    Outcome o;
    const double k = units::angular_to_ghz(q_to_kappa(3.3e5, 335.1));
    o.check(within(k, 1.02, 0.02), fmt::format("kappa_i/2pi {:.4f} GHz", k));
    return o;
  });

  report(4, "cooperativity", [] {
    Outcome o;
    const double c = cooperativity(3.3e5, 500.0, 852.0);
    const double hi = cooperativity(4e6, 500.0, 852.0);
    o.check(within(c, 31.0, 1.0), fmt::format("C {:.2f}", c));
    o.check(hi > 250.0, fmt::format("C(Q=4e6) {:.1f}", hi));
    return o;
  });

  report(5, "mode volume and coupling", [] {
    Outcome o;
    auto cfg = project();
    const auto t0 = Clock::now();
    const auto r = run_command("ring", cfg, {});
    const double secs = seconds_since(t0);
    const double vm = r.summary["mode_volume_um3"].get<double>();
    const double g = r.summary["g_over_2pi_mhz"].get<double>();
    o.check(within(vm, 500.0, 150.0), fmt::format("V_m {:.0f} um^3 at {} nm", vm, r.summary["atom_height_nm"].get<double>()));
    o.check(within(g, 176.0, 44.0), fmt::format("g/2pi {:.1f} MHz", g));
    o.check(secs < 300.0, fmt::format("{:.0f} s", secs));
    return o;
  });

  report(6, "trap reproduction", [] {
    Outcome o;
    auto cfg = project();
    const auto r = run_command("trap", cfg, {});
    if (!r.summary["trapped"].get<bool>())
    {
      o.check(false, "untrapped: " + r.summary["reason"].get<std::string>());
    }
    else
    {
      const double z = r.summary["trap"]["height_nm"].get<double>();
      const double depth = r.summary["trap"]["depth_uK"].get<double>();
      o.check(within(z, 100.0, 30.0), fmt::format("z_t {:.1f} nm", z));
      o.check(depth >= 60.0 && depth <= 240.0, fmt::format("depth {:.1f} uK", depth));
    }
    const auto tune = run_command("tune", cfg, {});
    o.check(tune.summary["monotone"].get<bool>(),
            fmt::format("tune monotone over {} trapped points", tune.summary["trapped_points"].get<int>()));
    return o;
  });

  report(7, "membrane design point", [] {
    Outcome o;
    auto cfg = project();
    const auto r = run_command("membrane", cfg, {});
    const double z = r.summary["first_antinode_nm"].get<double>();
    const double wl = r.summary["wavelength_nm"].get<double>();
    const double spacing = r.summary["antinode_spacing_nm"].get<double>();
    o.check(within(z, 150.0, 30.0), fmt::format("first antinode {:.1f} nm", z));
    o.check(rel(spacing, 0.5 * wl) <= 1e-6, fmt::format("spacing {:.9f} nm", spacing));
    return o;
  });

  report(8, "property suites", [] {
    Outcome o;
    const auto cfg = project();

    const double slab = slab_error(cfg.db);
    o.check(slab < 1e-3, fmt::format("slab n_eff rel err {:.1e}", slab));

    double noiseless = 0.0;
    for (auto [kc, ki] : {std::pair{2.8, 2.8}, std::pair{1.867, 2.8}, std::pair{5.39, 2.8}, std::pair{0.797, 2.8}})
    {
      const auto f = fit_spectrum(lorentzian(kc, ki, 0.0, 1, 20.0));
      noiseless = std::max({noiseless, rel(units::angular_to_ghz(f.under_coupled.kappa_c), std::min(kc, ki)),
                            rel(units::angular_to_ghz(f.under_coupled.kappa_i), std::max(kc, ki))});
    }
    o.check(noiseless < 1e-3, fmt::format("noiseless fit {:.1e}", noiseless));

    // Off critical coupling each seed must recover both rates. At critical
    // coupling the split is only weakly determined, so the total rate per seed
    // and the mean split over seeds are checked; the worst split is reported.
    double off = 0.0, total = 0.0, split = 0.0, mc = 0.0, mi = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
      const auto a = fit_spectrum(lorentzian(1.867, 2.8, 0.01, seed, 10.0));
      off = std::max({off, rel(units::angular_to_ghz(a.under_coupled.kappa_c), 1.867),
                      rel(units::angular_to_ghz(a.under_coupled.kappa_i), 2.8)});
      const auto b = fit_spectrum(lorentzian(2.8, 2.8, 0.01, seed, 10.0));
      const double kc = units::angular_to_ghz(b.under_coupled.kappa_c), ki = units::angular_to_ghz(b.under_coupled.kappa_i);
      total = std::max(total, rel(kc + ki, 5.6));
      split = std::max({split, rel(kc, 2.8), rel(ki, 2.8)});
      mc += kc / 100.0;
      mi += ki / 100.0;
    }
    o.check(off < 0.02, fmt::format("1% noise off-critical worst {:.2f}%", 100 * off));
    o.check(total < 0.02 && rel(mc, 2.8) < 0.02 && rel(mi, 2.8) < 0.02,
            fmt::format("critical: total worst {:.2f}%, mean ({:.3f}, {:.3f}), worst single split {:.1f}%", 100 * total,
                        mc, mi, 100 * split));

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> lr(-6.0, 6.0);
    bool tres_ok = true;
    for (int k = 0; k < 10000; ++k)
    {
      const double a = std::exp(lr(rng)), b = std::exp(lr(rng));
      const double t = t_res({a, b, 0.0});
      tres_ok = tres_ok && t >= 0.0 && t <= 1.0 && std::abs(t - t_res({b, a, 0.0})) <= 1e-15;
    }
    o.check(tres_ok, "T_res range and symmetry over 10000 draws");

    const auto cs = AtomData::cesium();
    const double l = cs.lambda_bar_nm;
    const double near = loglog_slope(cs, l / 100.0, l / 10.0), far = loglog_slope(cs, 10.0 * l, 100.0 * l);
    o.check(within(near, -3.0, 0.05) && within(far, -4.0, 0.05), fmt::format("CP slopes {:.3f}/{:.3f}", near, far));

    std::uniform_real_distribution<double> n(1.3, 3.5), d(0.05, 2.0), amb(1.0, 1.6), w(700.0, 1100.0);
    std::uniform_int_distribution<int> count(1, 6);
    double energy = 0.0;
    for (int k = 0; k < 1000; ++k)
    {
      LayerStack s;
      s.top_ambient = Material::constant("top", amb(rng));
      s.bottom_ambient = Material::constant("bottom", amb(rng));
      const int layers = count(rng);
      for (int j = 0; j < layers; ++j)
        s.layers.push_back({Material::constant("l" + std::to_string(j), n(rng)), d(rng), std::nullopt});
      const auto resp = stack_response(s, w(rng));
      energy = std::max(energy, std::abs(resp.reflectance + resp.transmittance - 1.0));
    }
    o.check(energy < 1e-9, fmt::format("TMM |R+T-1| {:.1e}", energy));

    const auto tc = cfg.trap_config();
    const auto modes = solve_trap_modes(cfg.ring, cfg.db, tc);
    TrapConfig none = tc, red = tc, blue = tc, both = tc;
    none.blue_power_mw = none.red_power_mw = red.blue_power_mw = blue.red_power_mw = 0.0;
    const auto u0 = total_potential(none, modes, cfg.ring, cfg.atom);
    const auto ur = total_potential(red, modes, cfg.ring, cfg.atom);
    const auto ub = total_potential(blue, modes, cfg.ring, cfg.atom);
    const auto ut = total_potential(both, modes, cfg.ring, cfg.atom);
    double worst = 0.0;
    for (size_t i = 0; i < ut.u_uK.size(); ++i)
    {
      if (std::isnan(ut.u_uK[i]))
        continue;
      const double scale = std::abs(ur.u_uK[i]) + std::abs(ub.u_uK[i]) + std::abs(u0.u_uK[i]);
      worst = std::max(worst, std::abs(ut.u_uK[i] - (ur.u_uK[i] + ub.u_uK[i] - u0.u_uK[i])) / scale);
    }
    o.check(worst < 1e-12, fmt::format("superposition rel err {:.1e}", worst));
    return o;
  });

  report(9, "declared non-reproducible items", [] {
    Outcome o;
    // Absolute kappa_c depends on an unstated normalization; the stress-versus-anneal
    // data and fiber efficiencies are inputs. Check the budget only echoes constants.
    auto cfg = project();
    const auto r = run_command("budget", cfg, {});
    const double f = cfg.budget.facet_measured;
    o.check(r.summary["measured"]["throughput"].get<double>() == f * f, "budget derives from configured facet constants");
    o.notes.push_back("absolute kappa_c, stress-vs-anneal data and measured fiber efficiencies are not reproduced");
    return o;
  });

  return failures == 0 ? 0 : 1;
}
