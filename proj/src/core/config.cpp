// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "errors.hpp"
#include "units.hpp"

namespace ringqed
{

namespace
{

int line_of(const YAML::Node &n) { return n.Mark().line + 1; }

// Mapping wrapper that rejects keys it was not asked about.
class Section
{
public:
  Section(const YAML::Node &node, std::string path, std::set<std::string> allowed)
    : node_(node), path_(std::move(path))
  {
    if (!node_.IsMap())
      throw ConfigError(path_ + " must be a mapping", line_of(node_));
    for (const auto &kv : node_)
    {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key))
        throw ConfigError("unknown key '" + key + "' in " + path_, line_of(kv.first));
    }
  }

  bool has(const std::string &key) const { return static_cast<bool>(node_[key]); }
  YAML::Node get(const std::string &key) const { return node_[key]; }
  const std::string &path() const { return path_; }

  void number(const std::string &key, double &out) const
  {
    if (const auto n = node_[key])
    {
      try
      {
        out = n.as<double>();
      }
      catch (const YAML::Exception &)
      {
        throw ConfigError(path_ + "." + key + " must be a number", line_of(n));
      }
      if (!std::isfinite(out))
        throw ConfigError(path_ + "." + key + " must be finite", line_of(n));
    }
  }

  void integer(const std::string &key, int &out) const
  {
    if (const auto n = node_[key])
    {
      try
      {
        out = n.as<int>();
      }
      catch (const YAML::Exception &)
      {
        throw ConfigError(path_ + "." + key + " must be an integer", line_of(n));
      }
    }
  }

  void text(const std::string &key, std::string &out) const
  {
    if (const auto n = node_[key])
    {
      if (!n.IsScalar())
        throw ConfigError(path_ + "." + key + " must be a string", line_of(n));
      out = n.as<std::string>();
    }
  }

  void numbers(const std::string &key, std::vector<double> &out) const
  {
    if (const auto n = node_[key])
    {
      if (!n.IsSequence())
        throw ConfigError(path_ + "." + key + " must be a list of numbers", line_of(n));
      out.clear();
      for (const auto &v : n)
      {
        try
        {
          out.push_back(v.as<double>());
        }
        catch (const YAML::Exception &)
        {
          throw ConfigError(path_ + "." + key + " entries must be numbers", line_of(v));
        }
      }
    }
  }

  int line() const { return line_of(node_); }

private:
  YAML::Node node_;
  std::string path_;
};

void require_material(const MaterialDb &db, const std::string &name, int line)
{
  if (!db.contains(name))
    throw ConfigError("material '" + name + "' is not in the materials database", line);
}

void require_positive(double v, const std::string &what, int line)
{
  if (!(v > 0.0))
    throw ConfigError(what + " must be positive", line);
}

void parse_ring(const Section &s, ProjectConfig &c)
{
  auto &xs = c.ring.cross_section;
  s.number("radius_um", c.ring.radius_um);
  s.number("segment_length_um", c.ring.segment_length_um);
  s.number("core_width_nm", xs.core_width_nm);
  s.number("core_height_nm", xs.core_height_nm);
  s.text("core_material", xs.core_material);
  s.text("cladding", xs.cladding);
  s.number("margin_um", xs.margin_um);
  s.number("pitch_nm", xs.pitch_nm);
  if (s.has("under_layers"))
  {
    const auto list = s.get("under_layers");
    if (!list.IsSequence())
      throw ConfigError("ring.under_layers must be a list", line_of(list));
    xs.under_layers.clear();
    for (const auto &item : list)
    {
      Section l(item, "ring.under_layers[]", {"material", "thickness_um"});
      Layer layer;
      l.text("material", layer.material);
      l.number("thickness_um", layer.thickness_um);
      require_material(c.db, layer.material, l.line());
      require_positive(layer.thickness_um, "under-layer thickness", l.line());
      xs.under_layers.push_back(layer);
    }
  }
  require_material(c.db, xs.core_material, s.line());
  require_material(c.db, xs.cladding, s.line());
  try
  {
    c.ring.validate();
  }
  catch (const Error &e)
  {
    throw ConfigError(std::string("ring: ") + e.what(), s.line());
  }
}

void parse_pulley(const Section &s, ProjectConfig &c)
{
  bool radius_given = s.has("bus_radius_um");
  s.number("gap_um", c.pulley.gap_um);
  s.number("bus_width_um", c.pulley.bus_width_um);
  s.number("coupling_length_um", c.pulley.coupling_length_um);
  if (radius_given)
    s.number("bus_radius_um", c.pulley.bus_radius_um);
  else
    c.pulley = PulleySpec::concentric(c.ring, c.pulley.gap_um, c.pulley.bus_width_um, c.pulley.coupling_length_um);
}

void parse_atom(const Section &s, ProjectConfig &c)
{
  auto &a = c.atom;
  double g1 = units::angular_to_ghz(a.gamma_d1) * 1e3, g2 = units::angular_to_ghz(a.gamma_d2) * 1e3;
  s.number("d1_wavelength_nm", a.d1_wavelength_nm);
  s.number("d2_wavelength_nm", a.d2_wavelength_nm);
  s.number("gamma_d1_mhz", g1);
  s.number("gamma_d2_mhz", g2);
  s.number("magic_blue_nm", a.magic_blue_nm);
  s.number("magic_red_nm", a.magic_red_nm);
  s.number("c4_hz_um4", a.c4_hz_um4);
  s.number("lambda_bar_nm", a.lambda_bar_nm);
  a.gamma_d1 = units::ghz_to_angular(g1 * 1e-3);
  a.gamma_d2 = units::ghz_to_angular(g2 * 1e-3);
  try
  {
    a.validate();
  }
  catch (const Error &e)
  {
    throw ConfigError(e.what(), s.line());
  }
}

void parse_rates(const YAML::Node &list, ProjectConfig &c)
{
  if (!list.IsSequence())
    throw ConfigError("rates must be a list of {wavelength_nm, kappa_c_ghz, kappa_i_ghz}", line_of(list));
  c.rates.clear();
  for (const auto &item : list)
  {
    Section s(item, "rates[]", {"wavelength_nm", "kappa_c_ghz", "kappa_i_ghz"});
    double wl = 0.0, kc = -1.0, ki = -1.0;
    s.number("wavelength_nm", wl);
    s.number("kappa_c_ghz", kc);
    s.number("kappa_i_ghz", ki);
    require_positive(wl, "rates[].wavelength_nm", s.line());
    if (kc < 0.0 || ki < 0.0 || kc + ki <= 0.0)
      throw ConfigError("rates[] needs non-negative kappa_c_ghz and kappa_i_ghz, not both zero", s.line());
    c.rates.push_back({wl, {units::ghz_to_angular(kc), units::ghz_to_angular(ki), units::wavelength_nm_to_THz(wl)}});
  }
}

void parse_trap(const Section &s, ProjectConfig &c)
{
  auto &t = c.trap;
  s.number("blue_power_mw", t.blue_power_mw);
  s.number("red_power_mw", t.red_power_mw);
  s.number("blue_wavelength_nm", t.blue_wavelength_nm);
  s.number("red_wavelength_nm", t.red_wavelength_nm);
  s.number("blue_detuning_ghz", t.blue_detuning_ghz);
  s.number("red_detuning_ghz", t.red_detuning_ghz);
  s.number("atom_height_nm", c.atom_height_nm);
  if (t.blue_power_mw < 0.0 || t.red_power_mw < 0.0)
    throw ConfigError("trap powers cannot be negative", s.line());
  require_positive(c.atom_height_nm, "trap.atom_height_nm", s.line());
}

ThicknessRange parse_range(const Section &s, const std::string &key, ThicknessRange fallback)
{
  std::vector<double> v;
  s.numbers(key, v);
  if (v.empty())
    return fallback;
  if (v.size() != 3)
    throw ConfigError(s.path() + "." + key + " must be [start, stop, step]", line_of(s.get(key)));
  return {v[0], v[1], v[2]};
}

void parse_membrane(const Section &s, ProjectConfig &c)
{
  auto &m = c.membrane;
  s.number("oxide_um", m.oxide_um);
  s.number("nitride_um", m.nitride_um);
  s.number("wavelength_nm", m.wavelength_nm);
  s.number("numerical_aperture", m.numerical_aperture);
  std::vector<double> window;
  s.numbers("stress_window_mpa", window);
  if (!window.empty())
  {
    if (window.size() != 2 || window[0] > window[1])
      throw ConfigError("membrane.stress_window_mpa must be [min, max]", line_of(s.get("stress_window_mpa")));
    m.window = {window[0], window[1]};
  }
  m.oxide_range = parse_range(s, "oxide_range_um", m.oxide_range);
  m.nitride_range = parse_range(s, "nitride_range_um", m.nitride_range);
  double so = NAN, sn = NAN;
  s.number("oxide_stress_mpa", so);
  s.number("nitride_stress_mpa", sn);
  if (!std::isnan(so))
  {
    Material mat = c.db.get("SiO2");
    mat.stress_mpa = so;
    c.db.put(mat);
  }
  if (!std::isnan(sn))
  {
    Material mat = c.db.get("Si3N4");
    mat.stress_mpa = sn;
    c.db.put(mat);
  }
  require_positive(m.oxide_um, "membrane.oxide_um", s.line());
  require_positive(m.nitride_um, "membrane.nitride_um", s.line());
  if (!(m.numerical_aperture > 0.0 && m.numerical_aperture < 1.0))
    throw ConfigError("membrane.numerical_aperture must lie in (0, 1)", s.line());
}

void parse_sweeps(const Section &s, ProjectConfig &c)
{
  if (s.has("coupler"))
  {
    Section k(s.get("coupler"), "sweeps.coupler", {"wavelengths_nm", "cl_start_um", "cl_stop_um", "cl_step_um"});
    k.numbers("wavelengths_nm", c.coupler_sweep.wavelengths_nm);
    k.number("cl_start_um", c.coupler_sweep.cl.start_um);
    k.number("cl_stop_um", c.coupler_sweep.cl.stop_um);
    k.number("cl_step_um", c.coupler_sweep.cl.step_um);
  }
  if (s.has("tune"))
  {
    Section k(s.get("tune"), "sweeps.tune", {"ratio_min", "ratio_max", "points", "total_power_mw"});
    k.number("ratio_min", c.tune.ratio_min);
    k.number("ratio_max", c.tune.ratio_max);
    k.integer("points", c.tune.points);
    k.number("total_power_mw", c.tune.total_power_mw);
    if (!(c.tune.ratio_min > 0.0) || c.tune.ratio_max < c.tune.ratio_min || c.tune.points < 2)
      throw ConfigError("sweeps.tune needs 0 < ratio_min <= ratio_max and at least 2 points", k.line());
  }
  if (s.has("transparency"))
  {
    Section k(s.get("transparency"), "sweeps.transparency", {"height_start_nm", "height_stop_nm", "height_step_nm"});
    k.number("height_start_nm", c.transparency.start_nm);
    k.number("height_stop_nm", c.transparency.stop_nm);
    k.number("height_step_nm", c.transparency.step_nm);
  }
  if (s.has("spectrum"))
  {
    Section k(s.get("spectrum"), "sweeps.spectrum", {"span_ghz", "points"});
    k.number("span_ghz", c.spectrum.span_ghz);
    k.integer("points", c.spectrum.points);
    if (!(c.spectrum.span_ghz > 0.0) || c.spectrum.points < 2)
      throw ConfigError("sweeps.spectrum needs a positive span and at least 2 points", k.line());
  }
}

ProjectConfig parse(const YAML::Node &root, const std::string &base_dir)
{
  ProjectConfig c = ProjectConfig::defaults();
  if (!root || root.IsNull())
    return c;
  Section top(root, "config", {"materials", "ring", "pulley", "atom", "rates", "trap", "membrane", "sweeps", "budget"});
  if (top.has("materials"))
  {
    top.text("materials", c.materials_path);
    std::filesystem::path p(c.materials_path);
    if (p.is_relative())
      p = std::filesystem::path(base_dir) / p;
    c.materials_path = p.lexically_normal().string();
    c.db = MaterialDb::from_yaml_file(c.materials_path);
  }
  if (top.has("ring"))
    parse_ring(Section(top.get("ring"), "ring",
                       {"radius_um", "segment_length_um", "core_width_nm", "core_height_nm", "core_material",
                        "cladding", "under_layers", "margin_um", "pitch_nm"}),
               c);
  const bool pulley_given = top.has("pulley");
  if (pulley_given)
    parse_pulley(Section(top.get("pulley"), "pulley", {"gap_um", "bus_width_um", "bus_radius_um", "coupling_length_um"}), c);
  else
    c.pulley = PulleySpec::concentric(c.ring, c.pulley.gap_um, c.pulley.bus_width_um, c.pulley.coupling_length_um);
  try
  {
    c.pulley.validate(c.ring);
  }
  catch (const Error &e)
  {
    throw ConfigError(std::string("pulley: ") + e.what(), pulley_given ? line_of(top.get("pulley")) : 0);
  }
  if (top.has("atom"))
    parse_atom(Section(top.get("atom"), "atom",
                       {"d1_wavelength_nm", "d2_wavelength_nm", "gamma_d1_mhz", "gamma_d2_mhz", "magic_blue_nm",
                        "magic_red_nm", "c4_hz_um4", "lambda_bar_nm"}),
               c);
  if (top.has("rates"))
    parse_rates(top.get("rates"), c);
  if (top.has("trap"))
    parse_trap(Section(top.get("trap"), "trap",
                       {"blue_power_mw", "red_power_mw", "blue_wavelength_nm", "red_wavelength_nm",
                        "blue_detuning_ghz", "red_detuning_ghz", "atom_height_nm"}),
               c);
  if (top.has("membrane"))
    parse_membrane(Section(top.get("membrane"), "membrane",
                           {"oxide_um", "nitride_um", "wavelength_nm", "numerical_aperture", "stress_window_mpa",
                            "oxide_range_um", "nitride_range_um", "oxide_stress_mpa", "nitride_stress_mpa"}),
                   c);
  if (top.has("sweeps"))
    parse_sweeps(Section(top.get("sweeps"), "sweeps", {"coupler", "tune", "transparency", "spectrum"}), c);
  if (top.has("budget"))
  {
    Section b(top.get("budget"), "budget", {"facet_efficiency_measured", "facet_efficiency_simulated"});
    b.number("facet_efficiency_measured", c.budget.facet_measured);
    b.number("facet_efficiency_simulated", c.budget.facet_simulated);
    for (double f : {c.budget.facet_measured, c.budget.facet_simulated})
      if (!(f > 0.0 && f <= 1.0))
        throw ConfigError("facet efficiencies must lie in (0, 1]", b.line());
  }
  return c;
}

}  // namespace

std::vector<double> HeightSweep::values() const
{
  if (!(start_nm > 0.0) || stop_nm < start_nm || !(step_nm > 0.0))
    throw Error(ErrorCode::InvalidArgument, "height sweep needs 0 < start <= stop and a positive step");
  std::vector<double> out;
  const long n = std::lround(std::floor((stop_nm - start_nm) / step_nm + 1e-9));
  for (long k = 0; k <= n; ++k)
    out.push_back(start_nm + k * step_nm);
  return out;
}

ProjectConfig ProjectConfig::defaults()
{
  ProjectConfig c;
  // κ/2π = 2.8 GHz intrinsic everywhere; κ_c from the measured resonant dips.
  const struct
  {
    double wl, kc, ki;
  } table[] = {{894.0, 2.8, 2.8}, {852.0, 1.867, 2.8}, {932.0, 5.390, 2.8}, {795.0, 0.797, 2.8}};
  for (const auto &e : table)
    c.rates.push_back(
        {e.wl, {units::ghz_to_angular(e.kc), units::ghz_to_angular(e.ki), units::wavelength_nm_to_THz(e.wl)}});
  return c;
}

ProjectConfig ProjectConfig::from_yaml_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return from_yaml_string(buf.str(), dir.empty() ? "." : dir.string());
}

ProjectConfig ProjectConfig::from_yaml_string(const std::string &text, const std::string &base_dir)
{
  YAML::Node root;
  try
  {
    root = YAML::Load(text);
  }
  catch (const YAML::ParserException &e)
  {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  return parse(root, base_dir);
}

void ProjectConfig::validate() const
{
  ring.validate();
  pulley.validate(ring);
  atom.validate();
  trap.validate();
}

const CavityRates &ProjectConfig::rates_near(double wavelength_nm, double tol_nm) const
{
  const RateEntry *best = nullptr;
  for (const auto &e : rates)
    if (std::abs(e.wavelength_nm - wavelength_nm) <= tol_nm &&
        (!best || std::abs(e.wavelength_nm - wavelength_nm) < std::abs(best->wavelength_nm - wavelength_nm)))
      best = &e;
  if (!best)
  {
    std::ostringstream msg;
    msg << "no measured rates within " << tol_nm << " nm of " << wavelength_nm << " nm";
    throw NotFoundError(msg.str(), std::numeric_limits<double>::infinity());
  }
  return best->rates;
}

TrapConfig ProjectConfig::trap_config() const
{
  TrapConfig t = trap;
  t.blue_rates = rates_near(t.blue_wavelength_nm);
  t.red_rates = rates_near(t.red_wavelength_nm);
  return t;
}

}  // namespace ringqed
