// SPDX-License-Identifier: Apache-2.0

#include "spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Dense>

#include "errors.hpp"
#include "units.hpp"

namespace ringqed
{

using units::two_pi;

void TransmissionSpectrum::validate() const
{
  if (detuning_ghz.size() != transmission.size())
    throw Error(ErrorCode::InvalidArgument, "spectrum columns differ in length");
  if (!sigma.empty() && sigma.size() != transmission.size())
    throw Error(ErrorCode::InvalidArgument, "noise column length does not match the spectrum");
  for (size_t k = 1; k < detuning_ghz.size(); ++k)
    if (!(detuning_ghz[k] > detuning_ghz[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "detunings must be strictly increasing");
  for (double t : transmission)
    if (!std::isfinite(t) || t < -0.2 || t > 1.2)
      throw Error(ErrorCode::Range, "transmission sample outside the physical range");
  for (double s : sigma)
    if (!(s > 0.0))
      throw Error(ErrorCode::InvalidArgument, "noise values must be positive");
}

double empty_ring_transmission(const CavityRates &rates, double detuning_ghz)
{
  rates.validate();
  if (!(rates.kappa() > 0.0))
    throw Error(ErrorCode::InvalidArgument, "empty-ring transmission needs a positive total decay rate");
  const std::complex<double> id(0.0, two_pi * detuning_ghz * 1e9);
  return std::norm((id + 0.5 * (rates.kappa_i - rates.kappa_c)) / (id + 0.5 * rates.kappa()));
}

double atom_transmission(const AtomCavityParams &p)
{
  p.rates.validate();
  if (p.g < 0.0 || p.gamma < 0.0)
    throw Error(ErrorCode::InvalidArgument, "coupling and atomic decay rates must be non-negative");
  const std::complex<double> id(0.0, p.detuning);
  const double g2 = p.g * p.g;
  const auto atom = id + 0.5 * p.gamma;
  const auto num = g2 + atom * (id + 0.5 * (p.rates.kappa_i - p.rates.kappa_c));
  const auto den = g2 + atom * (id + 0.5 * p.rates.kappa());
  if (std::abs(den) == 0.0)
    throw Error(ErrorCode::Undefined, "transmission undefined for a lossless, uncoupled system on resonance");
  return std::norm(num / den);
}

namespace
{

// Model in frequency units of rad/ns: T = (D^2 + u) / (D^2 + y^2) with
// D = 2 pi (f - f0), u = ((κ_i - κ_c)/2)^2, y = κ/2.
struct Model
{
  double u, y, f0;
};

double model_value(const Model &m, double f)
{
  const double d = two_pi * (f - m.f0);
  return (d * d + m.u) / (d * d + m.y * m.y);
}

Eigen::Vector3d model_gradient(const Model &m, double f)
{
  const double d = two_pi * (f - m.f0);
  const double den = d * d + m.y * m.y;
  Eigen::Vector3d g;
  g[0] = 1.0 / den;
  g[1] = -2.0 * m.y * (d * d + m.u) / (den * den);
  g[2] = -two_pi * 2.0 * d * (m.y * m.y - m.u) / (den * den);
  return g;
}

double median(std::vector<double> v)
{
  if (v.empty())
    return 0.0;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

double noise_level(const TransmissionSpectrum &s)
{
  if (!s.sigma.empty())
    return median(s.sigma);
  // Second differences cancel the smooth lineshape; MAD scaled to a Gaussian sigma.
  std::vector<double> d2;
  for (size_t k = 1; k + 1 < s.transmission.size(); ++k)
    d2.push_back(std::abs(s.transmission[k + 1] - 2.0 * s.transmission[k] + s.transmission[k - 1]));
  return median(d2) / (0.6745 * std::sqrt(6.0));
}

RateEstimate branch(double u, double y, const Eigen::Matrix2d &cov_uy, bool under)
{
  const double root = std::sqrt(std::max(u, 0.0));
  const double droot = 0.5 / std::max(root, 1e-12 * std::max(y, 1e-300));
  // κ_c = y ∓ root, κ_i = y ± root.
  const double sgn = under ? 1.0 : -1.0;
  Eigen::Matrix2d j;
  j << -sgn * droot, 1.0, sgn * droot, 1.0;
  const Eigen::Matrix2d c = j * cov_uy * j.transpose() * 1e18;
  RateEstimate e;
  e.kappa_c = (y - sgn * root) * 1e9;
  e.kappa_i = (y + sgn * root) * 1e9;
  e.var_kappa_c = c(0, 0);
  e.var_kappa_i = c(1, 1);
  e.cov = c(0, 1);
  return e;
}

}  // namespace

FitResult fit_spectrum(const TransmissionSpectrum &s)
{
  s.validate();
  const size_t n = s.transmission.size();
  if (n < 20)
    throw Error(ErrorCode::InvalidArgument, "spectrum fit needs at least 20 points");

  // Baseline from the outer fifth on each side, dip from a 3-point running mean.
  std::vector<double> outer;
  const size_t edge = std::max<size_t>(2, n / 10);
  for (size_t k = 0; k < edge; ++k)
  {
    outer.push_back(s.transmission[k]);
    outer.push_back(s.transmission[n - 1 - k]);
  }
  const double baseline = median(outer);
  size_t kmin = 1;
  double tmin = 1e300;
  for (size_t k = 1; k + 1 < n; ++k)
  {
    const double avg = (s.transmission[k - 1] + s.transmission[k] + s.transmission[k + 1]) / 3.0;
    if (avg < tmin)
    {
      tmin = avg;
      kmin = k;
    }
  }
  const double sigma = noise_level(s);
  const double depth = baseline - tmin;
  if (!(depth > 3.0 * sigma) || depth <= 0.0)
  {
    std::ostringstream msg;
    msg << "dip depth " << depth << " does not exceed three times the noise level " << sigma;
    throw Error(ErrorCode::InsufficientSignal, msg.str());
  }

  // Half-depth crossings give the FWHM; the dip of the Lorentzian sits at 1 - depth.
  const double level = baseline - 0.5 * depth;
  size_t lo = kmin, hi = kmin;
  while (lo > 0 && s.transmission[lo] < level)
    --lo;
  while (hi + 1 < n && s.transmission[hi] < level)
    ++hi;
  const double fwhm = std::max(s.detuning_ghz[hi] - s.detuning_ghz[lo],
                               2.0 * (s.detuning_ghz[1] - s.detuning_ghz[0]));
  const double span = s.detuning_ghz.back() - s.detuning_ghz.front();
  if (span < 3.0 * fwhm)
    throw Error(ErrorCode::InvalidArgument, "spectrum must span at least three linewidths");

  Model m;
  m.y = two_pi * 0.5 * fwhm;
  m.u = std::clamp(tmin, 0.0, 1.0) * m.y * m.y;
  m.f0 = s.detuning_ghz[kmin];

  std::vector<double> w(n, 1.0);
  if (!s.sigma.empty())
    for (size_t k = 0; k < n; ++k)
      w[k] = 1.0 / (s.sigma[k] * s.sigma[k]);

  auto cost = [&](const Model &mm) {
    double c = 0.0;
    for (size_t k = 0; k < n; ++k)
    {
      const double r = s.transmission[k] - model_value(mm, s.detuning_ghz[k]);
      c += w[k] * r * r;
    }
    return c;
  };

  // Iterate on v = sqrt(u) so the u >= 0 bound never binds.
  double v = std::max(std::sqrt(m.u), 0.05 * m.y);
  m.u = v * v;
  double lambda = 1e-3;
  double c_now = cost(m);
  int it = 0;
  bool converged = false;
  const int max_iter = 500;
  for (; it < max_iter && !converged; ++it)
  {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (size_t k = 0; k < n; ++k)
    {
      auto g = model_gradient(m, s.detuning_ghz[k]);
      g[0] *= 2.0 * v;
      const double r = s.transmission[k] - model_value(m, s.detuning_ghz[k]);
      jtj += w[k] * g * g.transpose();
      jtr += w[k] * g * r;
    }
    bool accepted = false;
    for (int tries = 0; tries < 40 && !accepted; ++tries)
    {
      Eigen::Matrix3d a = jtj;
      for (int d = 0; d < 3; ++d)
        a(d, d) = a(d, d) * (1.0 + lambda) + 1e-30;
      const Eigen::Vector3d step = a.ldlt().solve(jtr);
      const double v_trial = v + step[0];
      Model trial{v_trial * v_trial, std::abs(m.y + step[1]), m.f0 + step[2]};
      const double c_trial = cost(trial);
      if (std::isfinite(c_trial) && c_trial <= c_now)
      {
        const double rel = (step.cwiseAbs().array() / Eigen::Array3d(m.y, m.y, std::max(fwhm, 1e-12))).maxCoeff();
        converged = rel < 1e-12 || (c_now - c_trial) <= 1e-15 * c_now || c_trial == 0.0;
        m = trial;
        v = v_trial;
        c_now = c_trial;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
      }
      else
      {
        lambda *= 10.0;
      }
    }
    if (!accepted)
      converged = true;  // no downhill step left at any damping
  }
  if (!converged)
  {
    std::ostringstream msg;
    msg << "spectrum fit did not converge after " << it << " iterations (cost " << c_now << ")";
    throw Error(ErrorCode::Fit, msg.str());
  }

  Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
  for (size_t k = 0; k < n; ++k)
  {
    const auto g = model_gradient(m, s.detuning_ghz[k]);
    jtj += w[k] * g * g.transpose();
  }
  const double dof = static_cast<double>(n > 3 ? n - 3 : 1);
  const double scale = s.sigma.empty() ? c_now / dof : 1.0;
  Eigen::Matrix3d cov = jtj.completeOrthogonalDecomposition().pseudoInverse() * scale;

  FitResult out;
  const Eigen::Matrix2d cov_uy = cov.topLeftCorner<2, 2>();
  out.under_coupled = branch(m.u, m.y, cov_uy, true);
  out.over_coupled = branch(m.u, m.y, cov_uy, false);
  out.offset_ghz = m.f0;
  out.offset_sigma_ghz = std::sqrt(std::max(cov(2, 2), 0.0));
  double ss = 0.0;
  for (size_t k = 0; k < n; ++k)
  {
    const double r = s.transmission[k] - model_value(m, s.detuning_ghz[k]);
    ss += r * r;
  }
  out.rms_residual = std::sqrt(ss / n);
  out.iterations = it;
  return out;
}

std::vector<TransparencyPoint> transparency_vs_position(const ModeSolution &mode, const RingSpec &ring,
                                                        const AtomData &atom, const CavityRates &rates,
                                                        const std::vector<double> &heights_nm)
{
  std::vector<TransparencyPoint> out;
  const double f_thz = units::wavelength_nm_to_THz(atom.d2_wavelength_nm);
  for (double z : heights_nm)
  {
    TransparencyPoint p;
    p.height_nm = z;
    p.mode_volume_um3 = mode_volume(mode, ring, z);
    p.g = coupling_strength(p.mode_volume_um3, atom, f_thz);
    p.t0 = atom_transmission({p.g, atom.gamma_d2, rates, 0.0});
    out.push_back(p);
  }
  return out;
}

TransmissionSpectrum read_spectrum_csv(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open spectrum file '" + path + "'");
  TransmissionSpectrum s;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.empty() || line[0] == '#')
      continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double f = 0.0, t = 0.0, sg = 0.0;
    if (!(ls >> f >> t))
    {
      if (s.detuning_ghz.empty() && line_no == 1)
        continue;  // header row
      throw ConfigError("expected 'detuning_ghz,transmission[,sigma]'", line_no);
    }
    s.detuning_ghz.push_back(f);
    s.transmission.push_back(t);
    if (ls >> sg)
      s.sigma.push_back(sg);
  }
  if (!s.sigma.empty() && s.sigma.size() != s.transmission.size())
    throw Error(ErrorCode::InvalidArgument, "noise column present on some rows only");
  s.validate();
  return s;
}

void write_spectrum_csv(const TransmissionSpectrum &s, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << (s.sigma.empty() ? "detuning_ghz,transmission\n" : "detuning_ghz,transmission,sigma\n");
  out << std::setprecision(17);
  for (size_t k = 0; k < s.transmission.size(); ++k)
  {
    out << s.detuning_ghz[k] << ',' << s.transmission[k];
    if (!s.sigma.empty())
      out << ',' << s.sigma[k];
    out << '\n';
  }
  if (!out)
    throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace ringqed
