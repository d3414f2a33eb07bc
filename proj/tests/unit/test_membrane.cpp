// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "errors.hpp"
#include "membrane.hpp"
#include "units.hpp"

using namespace ringqed;

namespace
{

using cd = std::complex<double>;

StackLayer film(double n, double thickness_um, std::optional<double> stress = std::nullopt)
{
  return {Material::constant("film" + std::to_string(n), n), thickness_um, stress};
}

// Airy summation for one film between two ambients, e^{-iωt} convention.
cd airy(double n1, double n2, double n3, double d_um, double wavelength_nm)
{
  const cd r12 = (n1 - n2) / (n1 + n2), r23 = (n2 - n3) / (n2 + n3);
  const cd e = std::exp(cd(0.0, 2.0 * units::two_pi * n2 * d_um / (wavelength_nm * 1e-3)));
  return (r12 + r23 * e) / (1.0 + r12 * r23 * e);
}

LayerStack random_stack(std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> n(1.3, 3.5), d(0.05, 2.0);
  std::uniform_int_distribution<int> count(1, 6);
  LayerStack s;
  const int layers = count(rng);
  for (int k = 0; k < layers; ++k)
    s.layers.push_back(film(n(rng), d(rng)));
  return s;
}

}  // namespace

TEST_CASE("index-matched stack does not reflect")
{
  LayerStack s;
  s.layers = {film(1.0, 0.3), film(1.0, 1.1)};
  const auto r = stack_response(s, 935.0);
  CHECK(std::abs(r.r) < 1e-15);
  CHECK(r.transmittance == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("single film matches the Airy formula")
{
  const double n = 2.0, wl = 935.0;
  LayerStack q;
  q.layers = {film(n, wl / (4.0 * n) * 1e-3)};
  const double quarter = std::pow((1.0 - n * n) / (1.0 + n * n), 2);
  CHECK(std::abs(stack_response(q, wl).reflectance - quarter) < 1e-9);

  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> ni(1.2, 3.5), d(0.01, 3.0), a(1.0, 1.6), w(700.0, 1100.0);
  for (int k = 0; k < 500; ++k)
  {
    const double n1 = a(rng), n2 = ni(rng), n3 = a(rng), dd = d(rng), wl_k = w(rng);
    LayerStack s;
    s.top_ambient = Material::constant("top", n1);
    s.bottom_ambient = Material::constant("bottom", n3);
    s.layers = {film(n2, dd)};
    const cd r = stack_response(s, wl_k).r;
    CHECK(std::abs(r - airy(n1, n2, n3, dd, wl_k)) < 1e-9);
  }
}

TEST_CASE("lossless stacks conserve energy and are reciprocal")
{
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> a(1.0, 1.6), w(700.0, 1100.0);
  for (int k = 0; k < 500; ++k)
  {
    auto s = random_stack(rng);
    s.top_ambient = Material::constant("top", a(rng));
    s.bottom_ambient = Material::constant("bottom", a(rng));
    const double wl = w(rng);
    const auto fwd = stack_response(s, wl);
    CHECK(std::abs(fwd.reflectance + fwd.transmittance - 1.0) < 1e-9);
    const auto rev = stack_response(s.reversed(), wl);
    CHECK(std::abs(rev.reflectance + rev.transmittance - 1.0) < 1e-9);
    CHECK(std::abs(fwd.transmittance - rev.transmittance) < 1e-9);
    CHECK(std::abs(fwd.reflectance - rev.reflectance) < 1e-9);
  }
}

TEST_CASE("standing-wave antinodes from the reflection phase")
{
  const double wl = 935.0;
  const auto mirror = microtrap_from_reflection(cd(-1.0, 0.0), wl, 0.35);
  CHECK(mirror.lattice);
  CHECK(mirror.first_antinode_nm == doctest::Approx(wl / 4.0).epsilon(1e-14));
  CHECK(microtrap_from_reflection(cd(1.0, 0.0), wl, 0.35).first_antinode_nm == doctest::Approx(0.0).scale(1.0));

  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> mag(0.06, 1.0), ph(-M_PI, M_PI);
  for (int k = 0; k < 200; ++k)
  {
    const cd r = std::polar(mag(rng), ph(rng));
    const auto m = microtrap_from_reflection(r, wl, 0.35);
    CHECK(m.first_antinode_nm >= 0.0);
    CHECK(m.first_antinode_nm < wl / 2.0);
    for (int j = 0; j < 5; ++j)
      CHECK(m.antinode(j + 1) - m.antinode(j) == doctest::Approx(wl / 2.0).epsilon(1e-6));
    // The intensity |exp(-ikz) + r exp(ikz)|^2 peaks at the reported antinode.
    const double kz = units::two_pi / wl;
    auto intensity = [&](double z) { return std::norm(std::exp(cd(0, -kz * z)) + r * std::exp(cd(0, kz * z))); };
    const double z0 = m.first_antinode_nm;
    CHECK(intensity(z0) == doctest::Approx(std::pow(1.0 + std::abs(r), 2)).epsilon(1e-12));
  }

  const auto weak = microtrap_from_reflection(cd(0.01, 0.0), wl, 0.35);
  CHECK_FALSE(weak.lattice);
  CHECK_FALSE(weak.warning.empty());
  CHECK_THROWS_AS(microtrap_position(LayerStack::membrane(MaterialDb::defaults(), 1.72, 0.55), wl, 1.2), Error);
}

TEST_CASE("trap height is periodic in the oxide thickness")
{
  const auto db = MaterialDb::defaults();
  const double wl = 935.0;
  const double period_um = wl * 1e-3 / (2.0 * refractive_index(db.get("SiO2"), wl));
  for (double h : {1.2, 1.5, 1.72, 2.0})
  {
    const double z1 = microtrap_position(LayerStack::membrane(db, h, 0.55), wl, 0.35).first_antinode_nm;
    const double z2 = microtrap_position(LayerStack::membrane(db, h + period_um, 0.55), wl, 0.35).first_antinode_nm;
    CHECK(std::remainder(z1 - z2, wl / 2.0) == doctest::Approx(0.0).scale(1e-6));
  }
}

TEST_CASE("membrane design point")
{
  const auto db = MaterialDb::defaults();
  const auto s = LayerStack::membrane(db, 1.72, 0.55);
  const auto m = microtrap_position(s, 935.0, 0.35);
  CHECK(m.lattice);
  CHECK(m.numerical_aperture == 0.35);
  // Frozen.
  CHECK(stack_response(s, 935.0).reflectance == doctest::Approx(0.226260452418959).epsilon(1e-12));
  CHECK(m.first_antinode_nm == doctest::Approx(148.633386897952).epsilon(1e-12));
  const auto v = resulting_stress(s);
  CHECK(v.resulting_mpa == doctest::Approx((1000.0 * 0.55 - 200.0 * 1.72) / 2.27).epsilon(1e-14));
  CHECK(v.stable);
}

TEST_CASE("resulting stress")
{
  LayerStack s;
  s.layers = {film(1.5, 0.4, 120.0), film(2.0, 1.3, 120.0), film(1.7, 0.2, 120.0)};
  CHECK(resulting_stress(s).resulting_mpa == doctest::Approx(120.0).epsilon(1e-15));

  s.layers = {film(1.5, 1.0, 180.0)};
  CHECK(resulting_stress(s).stable);
  s.layers = {film(1.5, 1.0, -100.0)};
  CHECK_FALSE(resulting_stress(s).stable);
  s.layers = {film(1.5, 1.0, 70.0)};
  CHECK(resulting_stress(s).stable);
  s.layers = {film(1.5, 1.0, 69.9)};
  CHECK_FALSE(resulting_stress(s).stable);
  s.layers = {film(1.5, 1.0, 180.1)};
  CHECK_FALSE(resulting_stress(s).stable);

  // Linear in each layer's stress.
  std::mt19937_64 rng(54);
  std::uniform_real_distribution<double> sig(-300.0, 1200.0), d(0.1, 2.0), c(-3.0, 3.0);
  for (int k = 0; k < 200; ++k)
  {
    const double h1 = d(rng), h2 = d(rng), s1 = sig(rng), s2 = sig(rng), ds = sig(rng), a = c(rng);
    LayerStack base, bumped, scaled;
    base.layers = {film(1.5, h1, s1), film(2.0, h2, s2)};
    bumped.layers = {film(1.5, h1, s1 + ds), film(2.0, h2, s2)};
    scaled.layers = {film(1.5, h1, a * s1), film(2.0, h2, a * s2)};
    const double r0 = resulting_stress(base).resulting_mpa;
    CHECK(resulting_stress(bumped).resulting_mpa - r0 == doctest::Approx(ds * h1 / (h1 + h2)).epsilon(1e-9).scale(1e-9));
    CHECK(resulting_stress(scaled).resulting_mpa == doctest::Approx(a * r0).epsilon(1e-12).scale(1e-9));
  }

  // Constant-stress contours are rays through the origin.
  const auto db = MaterialDb::defaults();
  const double sigma = resulting_stress(LayerStack::membrane(db, 1.0, 0.5)).resulting_mpa;
  for (double t : {0.5, 2.0, 3.7})
    CHECK(resulting_stress(LayerStack::membrane(db, t, 0.5 * t)).resulting_mpa == doctest::Approx(sigma).epsilon(1e-13));

  s.layers = {film(1.5, 1.0)};
  CHECK_THROWS_AS(resulting_stress(s), ConfigError);
}

TEST_CASE("thickness map")
{
  const auto db = MaterialDb::defaults();
  const auto map = thickness_map(db, {1.6, 1.8, 0.04}, {0.5, 0.6, 0.05}, 935.0, 0.35);
  CHECK(map.size() == 6 * 3);
  for (const auto &p : map)
  {
    const auto s = LayerStack::membrane(db, p.oxide_um, p.nitride_um);
    CHECK(p.resulting_mpa == doctest::Approx(resulting_stress(s).resulting_mpa).epsilon(1e-14));
    CHECK(p.trap_height_nm == doctest::Approx(microtrap_position(s, 935.0, 0.35).first_antinode_nm).epsilon(1e-14));
  }
  const auto parallel = thickness_map(db, {1.6, 1.8, 0.04}, {0.5, 0.6, 0.05}, 935.0, 0.35, {}, 4);
  REQUIRE(parallel.size() == map.size());
  for (size_t k = 0; k < map.size(); ++k)
    CHECK(parallel[k].trap_height_nm == map[k].trap_height_nm);
  CHECK_THROWS_AS((ThicknessRange{0.0, 1.0, 0.1}.values()), Error);
}

TEST_CASE("stack validation")
{
  LayerStack s;
  CHECK_THROWS_AS(s.validate(), Error);
  s.layers = {film(1.5, -0.1)};
  CHECK_THROWS_AS(s.validate(), Error);
}
