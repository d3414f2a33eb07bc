// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "modesolver.hpp"
#include "resonator.hpp"
#include "units.hpp"

using namespace ringqed;

namespace
{

// Only the vertical component is populated, uniformly.
ModeSolution uniform_mode(double value)
{
  ModeSolution m;
  m.wavelength_nm = 894.0;
  m.grid = {-0.5, -0.5, 0.1, 10, 10};
  const size_t nodes = 11 * 11;
  m.ex.assign(10 * 11, 0.0);
  m.eps_x.assign(10 * 11, 1.0);
  m.ev.assign(11 * 10, value);
  m.eps_v.assign(11 * 10, 1.0);
  m.ea.assign(nodes, 0.0);
  m.eps_a.assign(nodes, 1.0);
  m.node_lateral.assign(nodes, 0.0);
  m.node_axial.assign(nodes, 0.0);
  m.node_vertical.assign(nodes, value);
  m.surface_z_um = 0.0;
  return m;
}

const ModeSolution &paper_mode()
{
  static const ModeSolution mode = [] {
    RingSpec ring;
    return solve_fundamental_tm(ring.cross_section, MaterialDb::defaults(), 894.0, ring.radius_um);
  }();
  return mode;
}

}  // namespace

TEST_CASE("round-trip length and spec validation")
{
  RingSpec ring;
  CHECK(ring.round_trip_um() == doctest::Approx(2 * M_PI * 15.0).epsilon(1e-15));
  ring.segment_length_um = 3.0;
  CHECK(ring.round_trip_um() == doctest::Approx(2 * M_PI * 15.0 + 6.0).epsilon(1e-15));
  ring.radius_um = -1.0;
  CHECK_THROWS_AS(ring.validate(), Error);
}

TEST_CASE("free spectral range formula and scaling")
{
  CHECK(free_spectral_range(2.0, 100.0) == doctest::Approx(1.49896229).epsilon(1e-8));
  CHECK(free_spectral_range(2.0, 200.0) == doctest::Approx(0.5 * free_spectral_range(2.0, 100.0)).epsilon(1e-15));
}

TEST_CASE("free spectral range of the default ring")
{
  RingSpec ring;
  const double fsr = free_spectral_range(ring, MaterialDb::defaults(), 894.0);
  CHECK(fsr > 1.0);
  CHECK(fsr < 2.0);
  // Frozen from the solved group index at 20 nm pitch.
  CHECK(fsr == doctest::Approx(1.413403624174).epsilon(1e-6));
}

TEST_CASE("Q and kappa conversions")
{
  // kappa_i / 2pi for Q = 3.3e5 at 335.1 THz.
  CHECK(units::angular_to_ghz(q_to_kappa(3.3e5, 335.1)) == doctest::Approx(1.0155).epsilon(1e-4));
  CHECK(kappa_to_q(units::ghz_to_angular(2.8), 335.1) == doctest::Approx(1.197e5).epsilon(1e-3));
  CHECK(q_to_kappa(1e30, 335.1) < 1e-12);
  CHECK_THROWS_AS(q_to_kappa(0.0, 335.1), Error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lq(3.0, 8.0), f(300.0, 400.0);
  for (int k = 0; k < 200; ++k)
  {
    const double q = std::pow(10.0, lq(rng)), fr = f(rng);
    CHECK(kappa_to_q(q_to_kappa(q, fr), fr) == doctest::Approx(q).epsilon(1e-14));
  }
}

TEST_CASE("cavity rates")
{
  CavityRates r{1.0, 2.0, 335.0};
  CHECK(r.kappa() == 3.0);
  CHECK(r.q_loaded() == doctest::Approx(kappa_to_q(3.0, 335.0)).epsilon(1e-15));
  CHECK_THROWS_AS((CavityRates{-1.0, 1.0, 335.0}.validate()), Error);
}

TEST_CASE("cooperativity values and scaling")
{
  CHECK(cooperativity(3.3e5, 500.0, 852.0) == doctest::Approx(31.02).epsilon(1e-3));
  CHECK(cooperativity(1e5, 500.0, 894.0) == doctest::Approx(10.86).epsilon(1e-3));
  CHECK(cooperativity(4e6, 500.0, 852.0) > 250.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int k = 0; k < 100; ++k)
  {
    const double q = 1e5 * u(rng), v = 100.0 * u(rng), s = u(rng);
    const double c = cooperativity(q, v, 852.0);
    CHECK(cooperativity(s * q, v, 852.0) == doctest::Approx(s * c).epsilon(1e-13));
    CHECK(cooperativity(q, s * v, 852.0) == doctest::Approx(c / s).epsilon(1e-13));
  }
}

TEST_CASE("coupling strength values and scaling")
{
  const auto cs = AtomData::cesium();
  const double f = units::wavelength_nm_to_THz(cs.d2_wavelength_nm);
  CHECK(units::angular_to_ghz(coupling_strength(500.0, cs, f)) * 1e3 == doctest::Approx(207.4).epsilon(2e-3));
  CHECK(coupling_strength(2000.0, cs, f) == doctest::Approx(0.5 * coupling_strength(500.0, cs, f)).epsilon(1e-14));
}

TEST_CASE("cooperativity computed two ways agrees")
{
  const auto cs = AtomData::cesium();
  const double f = units::wavelength_nm_to_THz(cs.d2_wavelength_nm);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lq(4.0, 7.0), lv(1.0, 4.0);
  for (int k = 0; k < 100; ++k)
  {
    const double q = std::pow(10.0, lq(rng)), v = std::pow(10.0, lv(rng));
    const double g = coupling_strength(v, cs, f);
    const double kappa = q_to_kappa(q, f);
    const double c_identity = 4.0 * g * g / (kappa * cs.gamma_d2);
    CHECK(c_identity == doctest::Approx(cooperativity(q, v, cs.d2_wavelength_nm)).epsilon(0.01));
  }
}

TEST_CASE("mode volume of a uniform field is length times area")
{
  RingSpec ring;
  const auto m = uniform_mode(2.5);
  const double area = 11 * 10 * 0.1 * 0.1;  // vertical samples times cell area
  CHECK(mode_volume(m, ring, 100.0) == doctest::Approx(ring.round_trip_um() * area).epsilon(1e-12));
  CHECK_THROWS_AS(mode_volume(uniform_mode(0.0), ring, 100.0), Error);
  CHECK_THROWS_AS(mode_volume(m, ring, -5.0), Error);
}

TEST_CASE("mode volume of the solved ring mode")
{
  RingSpec ring;
  ModeSolution m = paper_mode();
  const double v100 = mode_volume(m, ring, 100.0);
  double prev = 0.0;
  for (double z = 20.0; z <= 400.0; z += 20.0)
  {
    const double v = mode_volume(m, ring, z);
    CHECK(v > prev);
    prev = v;
  }
  m.scale(std::polar(3.7, 0.9));
  CHECK(mode_volume(m, ring, 100.0) == doctest::Approx(v100).epsilon(1e-12));
}

TEST_CASE("thermal tuning")
{
  CHECK(thermal_tuning(0.0) == 0.0);
  CHECK(thermal_tuning(2.0) == doctest::Approx(1.0));
  CHECK(thermal_tuning(10.0) == doctest::Approx(5.0));
  CHECK(thermal_tuning(2.0, 0.8) == doctest::Approx(1.6));
  CHECK_THROWS_AS(thermal_tuning(-1.0), Error);
}

TEST_CASE("resonance ladder")
{
  const double n = 1.72, length = 94.25;
  const double f0 = units::wavelength_nm_to_THz(894.0);
  const double fsr = units::c0 / (n * length * units::um) * 1e-12;

  SUBCASE("no increments lists every order in the window")
  {
    const auto l = resonance_ladder(n, length, {}, f0 - 3.0 * fsr, f0 + 3.0 * fsr);
    CHECK((l.size() == 6 || l.size() == 7));
    for (size_t k = 1; k < l.size(); ++k)
    {
      CHECK(l[k].azimuthal_order == l[k - 1].azimuthal_order + 1);
      CHECK(l[k].spacing_ghz == doctest::Approx(fsr * 1e3).epsilon(1e-9));
    }
  }
  SUBCASE("a small length step shifts the line by -f dL / L")
  {
    const double dl_nm = 5.0;
    const auto l = resonance_ladder(n, length, {0.0, dl_nm}, f0 - 0.4 * fsr, f0 + 0.4 * fsr);
    REQUIRE(l.size() == 2);
    REQUIRE(l[0].azimuthal_order == l[1].azimuthal_order);
    const double expected = -l[0].frequency_thz * dl_nm * 1e-3 / length;
    CHECK((l[1].frequency_thz - l[0].frequency_thz) == doctest::Approx(expected).epsilon(1e-3));
  }
  SUBCASE("increments spanning lambda / n_eff cover one free spectral range")
  {
    const int steps = 40;
    const double span_nm = 894.0 / n;
    std::vector<double> inc;
    for (int k = 0; k <= steps; ++k)
      inc.push_back(span_nm * k / steps);
    const auto l = resonance_ladder(n, length, inc, f0 - 0.5 * fsr, f0 + 0.5 * fsr);
    double lo = 1e300, hi = -1e300;
    for (const auto &e : l)
      lo = std::min(lo, e.frequency_thz), hi = std::max(hi, e.frequency_thz);
    // Nearest-order folding keeps every line within one FSR of the others;
    // the discrete steps leave at most two steps' worth uncovered.
    CHECK(hi - lo <= fsr * (1.0 + 1e-9));
    CHECK(hi - lo >= fsr * (1.0 - 2.0 / steps));
  }
}
