// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>

#include "errors.hpp"
#include "spectra.hpp"
#include "units.hpp"

using namespace ringqed;

namespace
{

constexpr double two_pi = units::two_pi;

CavityRates rates_ghz(double kc, double ki)
{
  return {units::ghz_to_angular(kc), units::ghz_to_angular(ki), 335.1};
}

// Input-output amplitude t = 1 - κ_c / (κ/2 - iΔ + g^2 / (Γ/2 - iΔ)).
double reference_transmission(double g, double gamma, double kc, double ki, double delta)
{
  const std::complex<double> i(0.0, 1.0);
  std::complex<double> den = 0.5 * (kc + ki) - i * delta;
  if (g > 0.0)
    den += g * g / (0.5 * gamma - i * delta);
  return std::norm(1.0 - kc / den);
}

// Lorentzian dip in GHz: T = 1 - κ_c κ_i / (Δ^2 + (κ/2)^2).
TransmissionSpectrum synthetic(double kc_ghz, double ki_ghz, double noise, std::uint64_t seed, double offset = 0.0,
                               double half_span = 10.0)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  TransmissionSpectrum s;
  const int n = 401;
  const double half = 0.5 * (kc_ghz + ki_ghz);
  for (int k = 0; k < n; ++k)
  {
    const double d = half_span * (-1.0 + 2.0 * k / (n - 1));
    const double x = d - offset;
    s.detuning_ghz.push_back(d);
    s.transmission.push_back(1.0 - kc_ghz * ki_ghz / (x * x + half * half) + noise * nd(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("empty-ring transmission")
{
  CHECK(empty_ring_transmission(rates_ghz(2.8, 2.8), 0.0) == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
  CHECK(empty_ring_transmission(rates_ghz(2.8, 2.8), 2.8) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(empty_ring_transmission(rates_ghz(1.0, 2.8), 1e6) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(empty_ring_transmission(rates_ghz(0.0, 0.0), 0.0), Error);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> r(0.0, 10.0), d(-50.0, 50.0);
  for (int k = 0; k < 1000; ++k)
  {
    const double kc = r(rng), ki = r(rng) + 1e-3, det = d(rng);
    const double t = empty_ring_transmission(rates_ghz(kc, ki), det);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
    CHECK(t == doctest::Approx(reference_transmission(0.0, 0.0, two_pi * kc, two_pi * ki, two_pi * det)).epsilon(1e-12).scale(1.0));
    CHECK(empty_ring_transmission(rates_ghz(ki, kc), det) == doctest::Approx(t).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("atom-coupled transmission matches the input-output reference")
{
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> r(0.1, 10.0), g(0.0, 0.5), d(-20.0, 20.0);
  for (int k = 0; k < 1000; ++k)
  {
    const double kc = units::ghz_to_angular(r(rng)), ki = units::ghz_to_angular(r(rng));
    const double gg = units::ghz_to_angular(g(rng)), gam = units::ghz_to_angular(0.0052);
    const double det = units::ghz_to_angular(d(rng));
    const double t = atom_transmission({gg, gam, {kc, ki, 335.1}, det});
    CHECK(t >= 0.0);
    CHECK(t <= 1.0 + 1e-12);
    CHECK(t == doctest::Approx(reference_transmission(gg, gam, kc, ki, det)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("atom-coupled transmission limits and reference values")
{
  const double g = units::ghz_to_angular(0.176), gam = units::ghz_to_angular(0.0052);
  // No atom reduces to the empty ring.
  for (double det : {0.0, 0.7, -2.1, 9.0})
    CHECK(atom_transmission({0.0, gam, rates_ghz(1.5, 2.8), units::ghz_to_angular(det)}) ==
          doctest::Approx(empty_ring_transmission(rates_ghz(1.5, 2.8), det)).epsilon(1e-12).scale(1.0));
  // Far detuned goes to one for any coupling.
  CHECK(atom_transmission({g, gam, rates_ghz(2.8, 2.8), units::ghz_to_angular(1e4)}) ==
        doctest::Approx(1.0).epsilon(1e-6));

  const double t28 = atom_transmission({g, gam, rates_ghz(2.8, 2.8), 0.0});
  const double t10 = atom_transmission({g, gam, rates_ghz(1.0, 1.0), 0.0});
  CHECK(t28 == doctest::Approx(0.656).epsilon(0.005));
  CHECK(t10 == doctest::Approx(0.85).epsilon(0.01));
  // The first-order estimate 1 - κΓ/2g² undershoots the exact value.
  const double approx = 1.0 - units::ghz_to_angular(5.6) * gam / (2.0 * g * g);
  CHECK(approx == doctest::Approx(0.53).epsilon(0.01));
  CHECK(approx < t28);
}

TEST_CASE("transparency at critical coupling whenever an atom couples")
{
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> lg(-4.0, 0.0), k(0.2, 10.0);
  const double gam = units::ghz_to_angular(0.0052);
  for (int n = 0; n < 500; ++n)
  {
    const double kk = k(rng);
    const double g = units::ghz_to_angular(std::pow(10.0, lg(rng)));
    const auto rates = rates_ghz(kk, kk);
    CHECK(atom_transmission({g, gam, rates, 0.0}) > empty_ring_transmission(rates, 0.0));
  }
}

TEST_CASE("fit recovers rates from noiseless model spectra")
{
  for (auto [kc, ki] : {std::pair{2.8, 2.8}, std::pair{1.867, 2.8}, std::pair{5.39, 2.8}, std::pair{0.797, 2.8}})
  {
    const auto f = fit_spectrum(synthetic(kc, ki, 0.0, 1, 0.37, 20.0));
    const double lo = std::min(kc, ki), hi = std::max(kc, ki);
    CHECK(units::angular_to_ghz(f.under_coupled.kappa_c) == doctest::Approx(lo).epsilon(1e-3));
    CHECK(units::angular_to_ghz(f.under_coupled.kappa_i) == doctest::Approx(hi).epsilon(1e-3));
    CHECK(units::angular_to_ghz(f.over_coupled.kappa_c) == doctest::Approx(hi).epsilon(1e-3));
    CHECK(units::angular_to_ghz(f.over_coupled.kappa_i) == doctest::Approx(lo).epsilon(1e-3));
    CHECK(f.offset_ghz == doctest::Approx(0.37).epsilon(1e-6));
    CHECK(f.rms_residual < 1e-9);
  }
}

TEST_CASE("fit with 1% noise over 100 seeds")
{
  SUBCASE("away from critical coupling each seed recovers both rates within 2%")
  {
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
      const auto f = fit_spectrum(synthetic(1.867, 2.8, 0.01, seed));
      CHECK(units::angular_to_ghz(f.under_coupled.kappa_c) == doctest::Approx(1.867).epsilon(0.02));
      CHECK(units::angular_to_ghz(f.under_coupled.kappa_i) == doctest::Approx(2.8).epsilon(0.02));
    }
  }
  SUBCASE("at critical coupling the total rate per seed and the mean split are within 2%")
  {
    // T(0) depends on (κ_i - κ_c)^2, so single-seed splits scale as sqrt(noise).
    double mean_c = 0.0, mean_i = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
      const auto f = fit_spectrum(synthetic(2.8, 2.8, 0.01, seed));
      const double kc = units::angular_to_ghz(f.under_coupled.kappa_c);
      const double ki = units::angular_to_ghz(f.under_coupled.kappa_i);
      CHECK(kc + ki == doctest::Approx(5.6).epsilon(0.02));
      mean_c += kc / 100.0;
      mean_i += ki / 100.0;
    }
    CHECK(mean_c == doctest::Approx(2.8).epsilon(0.02));
    CHECK(mean_i == doctest::Approx(2.8).epsilon(0.02));
  }
}

TEST_CASE("fit residual vanishes as the noise vanishes")
{
  double prev = 1e300;
  for (double noise : {1e-2, 1e-3, 1e-4, 1e-5})
  {
    const double rms = fit_spectrum(synthetic(1.867, 2.8, noise, 9)).rms_residual;
    CHECK(rms < prev);
    CHECK(rms < 1.5 * noise);
    prev = rms;
  }
}

TEST_CASE("a shallow-floor spectrum gives the total linewidth")
{
  // T(0) = 0.03 with κ/2π = 5.6 GHz on the under-coupled branch.
  const double q = std::sqrt(0.03), ratio = (1 - q) / (1 + q);
  const double kc = 5.6 * ratio / (1 + ratio), ki = 5.6 - kc;
  const auto f = fit_spectrum(synthetic(kc, ki, 0.01, 77));
  CHECK(units::angular_to_ghz(f.under_coupled.kappa_c + f.under_coupled.kappa_i) == doctest::Approx(5.6).epsilon(0.10));
}

TEST_CASE("fit error cases")
{
  SUBCASE("flat noise has no signal")
  {
    try
    {
      auto s = synthetic(1e-4, 2.8, 0.01, 5);
      fit_spectrum(s);
      FAIL("expected insufficient signal");
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::InsufficientSignal);
    }
  }
  SUBCASE("too few points")
  {
    TransmissionSpectrum s;
    for (int k = 0; k < 10; ++k)
      s.detuning_ghz.push_back(k), s.transmission.push_back(1.0);
    CHECK_THROWS_AS(fit_spectrum(s), Error);
  }
  SUBCASE("non-increasing detuning")
  {
    auto s = synthetic(2.8, 2.8, 0.0, 1);
    std::swap(s.detuning_ghz[3], s.detuning_ghz[4]);
    CHECK_THROWS_AS(fit_spectrum(s), Error);
  }
  SUBCASE("narrow span")
  {
    TransmissionSpectrum s;
    for (int k = 0; k < 50; ++k)
    {
      const double d = -1.0 + 2.0 * k / 49;
      s.detuning_ghz.push_back(d);
      s.transmission.push_back(1.0 - 7.84 / (d * d + 7.84));
    }
    CHECK_THROWS_AS(fit_spectrum(s), Error);
  }
}

TEST_CASE("spectrum CSV round trip")
{
  const auto dir = std::filesystem::temp_directory_path() / "ringqed_spectra_test";
  std::filesystem::create_directories(dir);
  auto s = synthetic(1.867, 2.8, 0.01, 3);
  const auto path = (dir / "s.csv").string();
  write_spectrum_csv(s, path);
  const auto back = read_spectrum_csv(path);
  CHECK(back.detuning_ghz == s.detuning_ghz);
  CHECK(back.transmission == s.transmission);
  CHECK(back.sigma.empty());

  s.sigma.assign(s.transmission.size(), 0.01);
  write_spectrum_csv(s, path);
  CHECK(read_spectrum_csv(path).sigma == s.sigma);

  CHECK_THROWS_AS(read_spectrum_csv((dir / "missing.csv").string()), Error);
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "detuning_ghz,transmission\n0,1\nnot,numbers\n";
  }
  try
  {
    read_spectrum_csv((dir / "bad.csv").string());
    FAIL("expected a parse error");
  }
  catch (const ConfigError &e)
  {
    CHECK(e.line() == 3);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("transparency versus height with a uniform mode")
{
  // A uniform field makes V_m, and so g and T(0), independent of height.
  ModeSolution m;
  m.wavelength_nm = 852.0;
  m.grid = {-0.5, -0.5, 0.1, 10, 10};
  m.ex.assign(110, 0.0);
  m.eps_x.assign(110, 1.0);
  m.ev.assign(110, 1.0);
  m.eps_v.assign(110, 1.0);
  m.ea.assign(121, 0.0);
  m.eps_a.assign(121, 1.0);
  m.node_lateral.assign(121, 0.0);
  m.node_axial.assign(121, 0.0);
  m.node_vertical.assign(121, 1.0);
  m.surface_z_um = 0.0;
  RingSpec ring;
  const auto atom = AtomData::cesium();
  const auto pts = transparency_vs_position(m, ring, atom, rates_ghz(2.8, 2.8), {50.0, 100.0, 300.0});
  REQUIRE(pts.size() == 3);
  for (const auto &p : pts)
  {
    CHECK(p.mode_volume_um3 == doctest::Approx(ring.round_trip_um() * 1.1).epsilon(1e-12));
    CHECK(p.t0 == doctest::Approx(pts[0].t0).epsilon(1e-14));
    CHECK(p.t0 == doctest::Approx(atom_transmission({p.g, atom.gamma_d2, rates_ghz(2.8, 2.8), 0.0})).epsilon(1e-14));
  }
}
