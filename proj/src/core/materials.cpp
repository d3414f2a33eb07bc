// SPDX-License-Identifier: Apache-2.0

#include "materials.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "errors.hpp"
#include "units.hpp"

namespace ringqed
{

const char *error_code_name(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Range: return "range";
    case ErrorCode::NoMode: return "no-mode";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::Geometry: return "geometry";
    case ErrorCode::Config: return "config";
    case ErrorCode::Singularity: return "singularity";
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::Fit: return "fit";
    case ErrorCode::InsufficientSignal: return "insufficient-signal";
    case ErrorCode::Untrapped: return "untrapped";
    case ErrorCode::Undefined: return "undefined";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

// Si3N4: Luke et al. LPCVD film fit. SiO2: Malitson fused silica.
// Si: Salzberg-Villa (extrapolated below 1.36 µm; absorption ignored).
// Stresses are representative post-anneal values; override them with
// measured film data.
const char *const default_materials_yaml = R"(materials:
  vacuum:
    a: 1.0
  Si3N4:
    a: 1.0
    sellmeier:
      - [3.0249, 0.018317322]
      - [40314.0, 1537208.1]
    stress_mpa: 1000.0
  SiO2:
    a: 1.0
    sellmeier:
      - [0.6961663, 0.0046791482]
      - [0.4079426, 0.0135120631]
      - [0.8974794, 97.9340025]
    stress_mpa: -200.0
  Si:
    a: 1.0
    sellmeier:
      - [10.6684293, 0.0909121907]
      - [0.0030434748, 1.2876604]
      - [1.54133408, 1218816.0]
)";

double Sellmeier::n_squared(double lambda_um) const
{
  const double l2 = lambda_um * lambda_um;
  double n2 = a;
  for (const auto &t : terms)
    n2 += t.b * l2 / (l2 - t.c_um2);
  return n2;
}

Material Material::constant(std::string name, double index)
{
  Material m;
  m.name = std::move(name);
  m.dispersion.a = index * index;
  return m;
}

double refractive_index(const Material &material, double wavelength_nm)
{
  if (!(wavelength_nm >= material.band_min_nm && wavelength_nm <= material.band_max_nm))
  {
    std::ostringstream msg;
    msg << "wavelength " << wavelength_nm << " nm outside the validity band ["
        << material.band_min_nm << ", " << material.band_max_nm << "] nm of " << material.name;
    throw Error(ErrorCode::Range, msg.str());
  }
  const double n2 = material.dispersion.n_squared(wavelength_nm * 1e-3);
  if (!(n2 >= 1.0))
    throw Error(ErrorCode::Range, "Sellmeier model for " + material.name + " gives n < 1");
  return std::sqrt(n2);
}

namespace
{

int line_of(const YAML::Node &node) { return node.Mark().line + 1; }

double as_double(const YAML::Node &node, const std::string &what)
{
  try
  {
    return node.as<double>();
  }
  catch (const YAML::Exception &)
  {
    throw ConfigError(what + " must be a number", line_of(node));
  }
}

Material parse_material(const std::string &name, const YAML::Node &node)
{
  if (!node.IsMap())
    throw ConfigError("material '" + name + "' must be a mapping", line_of(node));
  for (const auto &kv : node)
  {
    const auto key = kv.first.as<std::string>();
    if (key != "a" && key != "sellmeier" && key != "stress_mpa" && key != "band_nm")
      throw ConfigError("unknown key '" + key + "' in material '" + name + "'", line_of(kv.first));
  }
  Material m;
  m.name = name;
  if (node["a"])
    m.dispersion.a = as_double(node["a"], name + ".a");
  if (const auto terms = node["sellmeier"])
  {
    if (!terms.IsSequence())
      throw ConfigError(name + ".sellmeier must be a list of [B, C_um2] pairs", line_of(terms));
    for (const auto &t : terms)
    {
      if (!t.IsSequence() || t.size() != 2)
        throw ConfigError(name + ".sellmeier entries must be [B, C_um2]", line_of(t));
      m.dispersion.terms.push_back({as_double(t[0], "B"), as_double(t[1], "C")});
    }
  }
  if (const auto s = node["stress_mpa"]; s && !s.IsNull())
    m.stress_mpa = as_double(s, name + ".stress_mpa");
  if (node["band_nm"])
  {
    const auto band = node["band_nm"];
    if (!band.IsSequence() || band.size() != 2)
      throw ConfigError(name + ".band_nm must be [min, max]", line_of(band));
    m.band_min_nm = as_double(band[0], "band min");
    m.band_max_nm = as_double(band[1], "band max");
  }
  // Poles inside the band would make n(λ) blow up mid-sweep.
  for (const auto &t : m.dispersion.terms)
  {
    const double pole_nm = std::sqrt(std::abs(t.c_um2)) * 1e3;
    if (t.c_um2 > 0 && pole_nm >= m.band_min_nm && pole_nm <= m.band_max_nm)
      throw ConfigError("Sellmeier pole of " + name + " at " + std::to_string(pole_nm) +
                          " nm lies inside its validity band",
                        line_of(node));
  }
  return m;
}

MaterialDb parse_db(const YAML::Node &root)
{
  const auto mats = root["materials"];
  if (!mats || !mats.IsMap())
    throw ConfigError("materials database needs a top-level 'materials' mapping", line_of(root));
  for (const auto &kv : root)
    if (kv.first.as<std::string>() != "materials")
      throw ConfigError("unknown top-level key '" + kv.first.as<std::string>() + "'", line_of(kv.first));
  MaterialDb db;
  for (const auto &kv : mats)
    db.put(parse_material(kv.first.as<std::string>(), kv.second));
  return db;
}

}  // namespace

MaterialDb MaterialDb::defaults() { return from_yaml_string(default_materials_yaml); }

MaterialDb MaterialDb::from_yaml_string(const std::string &text)
{
  try
  {
    return parse_db(YAML::Load(text));
  }
  catch (const YAML::ParserException &e)
  {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
}

MaterialDb MaterialDb::from_yaml_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open materials database " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_yaml_string(buf.str());
}

const Material &MaterialDb::get(const std::string &name) const
{
  const auto it = materials_.find(name);
  if (it == materials_.end())
    throw ConfigError("unknown material '" + name + "'");
  return it->second;
}

void MaterialDb::put(Material material)
{
  auto key = material.name;
  materials_[key] = std::move(material);
}

std::vector<std::string> MaterialDb::names() const
{
  std::vector<std::string> out;
  for (const auto &kv : materials_)
    out.push_back(kv.first);
  return out;
}

void AtomData::validate() const
{
  const double values[] = {d1_wavelength_nm, d2_wavelength_nm, gamma_d1,      gamma_d2,
                           magic_blue_nm,    magic_red_nm,     c4_hz_um4,     lambda_bar_nm};
  for (double v : values)
    if (!(v > 0.0))
      throw ConfigError("atom data entries must all be positive");
  if (!(d2_wavelength_nm < d1_wavelength_nm))
    throw ConfigError("atom data: D2 wavelength must be shorter than D1");
  if (!(magic_blue_nm < d2_wavelength_nm && d2_wavelength_nm < magic_red_nm))
    throw ConfigError("atom data: magic wavelengths must bracket the D2 line");
}

void to_json(nlohmann::json &j, const AtomData &a)
{
  j = nlohmann::json{{"d1_wavelength_nm", a.d1_wavelength_nm},
                     {"d2_wavelength_nm", a.d2_wavelength_nm},
                     {"gamma_d1", a.gamma_d1},
                     {"gamma_d2", a.gamma_d2},
                     {"magic_blue_nm", a.magic_blue_nm},
                     {"magic_red_nm", a.magic_red_nm},
                     {"c4_hz_um4", a.c4_hz_um4},
                     {"lambda_bar_nm", a.lambda_bar_nm}};
}

void from_json(const nlohmann::json &j, AtomData &a)
{
  j.at("d1_wavelength_nm").get_to(a.d1_wavelength_nm);
  j.at("d2_wavelength_nm").get_to(a.d2_wavelength_nm);
  j.at("gamma_d1").get_to(a.gamma_d1);
  j.at("gamma_d2").get_to(a.gamma_d2);
  j.at("magic_blue_nm").get_to(a.magic_blue_nm);
  j.at("magic_red_nm").get_to(a.magic_red_nm);
  j.at("c4_hz_um4").get_to(a.c4_hz_um4);
  j.at("lambda_bar_nm").get_to(a.lambda_bar_nm);
}

double cs_ground_polarizability(const AtomData &atom, double wavelength_nm)
{
  for (double line : {atom.d1_wavelength_nm, atom.d2_wavelength_nm})
    if (std::abs(wavelength_nm - line) < 1.0)
      throw Error(ErrorCode::Singularity, "wavelength " + std::to_string(wavelength_nm) +
                                            " nm is within 1 nm of a D line");

  using namespace units;
  const double w = wavelength_nm_to_omega(wavelength_nm);
  // alpha_j = 2π ε0 c³ (2J'+1)/(2J+1) Γ_j / ω_j² / (ω_j² - ω²), J = 1/2.
  auto line = [&](double lambda_j, double gamma_j, double weight) {
    const double wj = wavelength_nm_to_omega(lambda_j);
    return two_pi * eps0 * c0 * c0 * c0 * weight * gamma_j / (wj * wj) / (wj * wj - w * w);
  };
  return line(atom.d1_wavelength_nm, atom.gamma_d1, 1.0) +
         line(atom.d2_wavelength_nm, atom.gamma_d2, 2.0);
}

}  // namespace ringqed
