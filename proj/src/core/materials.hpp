// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ringqed
{

// One Sellmeier pole: B * λ² / (λ² - C), λ in µm, C in µm².
struct SellmeierTerm
{
  double b = 0.0;
  double c_um2 = 0.0;
};

// n²(λ) = a + Σ terms. Vacuum is a = 1 with no terms.
struct Sellmeier
{
  double a = 1.0;
  std::vector<SellmeierTerm> terms;

  double n_squared(double lambda_um) const;
};

struct Material
{
  std::string name;
  Sellmeier dispersion;
  std::optional<double> stress_mpa;  // intrinsic film stress, tensile positive
  double band_min_nm = 600.0;
  double band_max_nm = 1100.0;

  static Material constant(std::string name, double index);
};

// Real refractive index from the Sellmeier model. Throws Range outside the
// material's validity band.
double refractive_index(const Material &material, double wavelength_nm);

class MaterialDb
{
public:
  // Shipped defaults: Si3N4 (LPCVD), SiO2 (fused), Si, vacuum.
  static MaterialDb defaults();
  static MaterialDb from_yaml_file(const std::string &path);
  static MaterialDb from_yaml_string(const std::string &text);

  const Material &get(const std::string &name) const;
  bool contains(const std::string &name) const { return materials_.count(name) != 0; }
  void put(Material material);
  std::vector<std::string> names() const;

private:
  std::map<std::string, Material> materials_;
};

extern const char *const default_materials_yaml;

// Cesium line data plus surface-interaction constants.
struct AtomData
{
  double d1_wavelength_nm = 894.593;
  double d2_wavelength_nm = 852.347;
  double gamma_d1 = 2.0 * 3.14159265358979323846 * 4.575e6;  // rad/s
  double gamma_d2 = 2.0 * 3.14159265358979323846 * 5.2e6;    // rad/s
  double magic_blue_nm = 794.0;
  double magic_red_nm = 935.0;
  double c4_hz_um4 = 267.0;  // C4 / h
  double lambda_bar_nm = 136.0;

  static AtomData cesium() { return {}; }
  void validate() const;
};

void to_json(nlohmann::json &j, const AtomData &a);
void from_json(const nlohmann::json &j, AtomData &a);

// Scalar ground-state polarizability in SI units (C m²/V) from the D1 and D2
// lines, counter-rotating terms included. Positive means the atom is pulled
// toward high intensity. Throws Singularity within 1 nm of either line.
double cs_ground_polarizability(const AtomData &atom, double wavelength_nm);

// Atomic unit of polarizability in SI.
inline constexpr double polarizability_au = 1.64877727436e-41;

}  // namespace ringqed
