#include "ionssh/floquet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ionssh/bessel.hpp"
#include "ionssh/error.hpp"

namespace ionssh {

using std::numbers::pi;

double FloquetDrive::site_phase(int j) const noexcept { return 0.5 * pi * j + phi; }

double FloquetDrive::amplitude() const noexcept {
  return eta_bar * z0 * omega / std::numbers::sqrt2;
}

double FloquetDrive::eta() const noexcept { return z0 * eta_bar / std::numbers::sqrt2; }

void FloquetDrive::validate() const {
  if (!(omega > 0.0)) throw ConfigError("drive: omega must be > 0");
  if (!(eta_bar >= 0.0)) throw ConfigError("drive: eta_bar must be >= 0");
  if (!std::isfinite(b0) || !std::isfinite(phi)) throw ConfigError("drive: b0 and phi must be finite");
}

double drive_field(const FloquetDrive& drive, int j, double t) {
  return drive.b0 + drive.amplitude() * std::cos(drive.omega * t) * std::cos(drive.site_phase(j));
}

double dressing_factor(double eta_bar, double phi, int i, int j) {
  const double eta = kBesselZero0 * eta_bar / std::numbers::sqrt2;
  const double arg = 2.0 * eta * std::sin(0.25 * pi * (i + j) + phi) * std::sin(0.25 * pi * (i - j));
  return bessel_j0(arg);
}

CouplingMatrix dressed_matrix(const CouplingMatrix& cm, double eta_bar, double phi) {
  const std::size_t l = cm.size();
  RealMatrix v(l, l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = i + 1; j < l; ++j) {
      const double f = dressing_factor(eta_bar, phi, static_cast<int>(i + 1), static_cast<int>(j + 1));
      v(i, j) = cm.values(i, j) * f;
      v(j, i) = v(i, j);
    }
  std::ostringstream label;
  label << cm.label << "+dressed(eta_bar=" << eta_bar << ",phi=" << phi << ")";
  CouplingMatrix out;
  out.mean_nn = mean_nearest_neighbour(v);
  out.values = std::move(v);
  out.label = label.str();
  return out;
}

CouplingMatrix dressed_matrix(const CouplingMatrix& cm, const FloquetDrive& drive) {
  drive.validate();
  return dressed_matrix(cm, drive.eta_bar, drive.phi);
}

double Dimerization::cross(int d) const {
  if (!has_cross(d)) throw ConfigError("dimerization: cross distance out of range");
  return cross_values[d - cross_min];
}

bool Dimerization::has_cross(int d) const noexcept {
  return d >= cross_min && d - cross_min < static_cast<int>(cross_values.size());
}

namespace {

int cross_lo(int range) { return -((range - 1) / 2); }
int cross_hi(int range) { return (range + 1) / 2; }

}  // namespace

Dimerization drive_dimerization(double eta_bar, double phi, int range) {
  if (range < 1) throw ConfigError("drive_dimerization: range must be >= 1");
  Dimerization dim;
  const int same = range / 2;
  dim.same_a.assign(same + 1, 1.0);
  dim.same_b.assign(same + 1, 1.0);
  for (int d = 1; d <= same; ++d) {
    dim.same_a[d] = dressing_factor(eta_bar, phi, 1, 1 + 2 * d);
    dim.same_b[d] = dressing_factor(eta_bar, phi, 2, 2 + 2 * d);
  }
  dim.cross_min = cross_lo(range);
  for (int d = dim.cross_min; d <= cross_hi(range); ++d)
    dim.cross_values.push_back(dressing_factor(eta_bar, phi, 1, 2 - 2 * d));
  return dim;
}

Dimerization uniform_dimerization(int range) {
  if (range < 1) throw ConfigError("uniform_dimerization: range must be >= 1");
  Dimerization dim;
  dim.same_a.assign(range / 2 + 1, 1.0);
  dim.same_b = dim.same_a;
  dim.cross_min = cross_lo(range);
  dim.cross_values.assign(cross_hi(range) - dim.cross_min + 1, 1.0);
  return dim;
}

SublatticeBlocks sublattice_blocks(const CouplingMatrix& dressed, const CouplingMatrix& bare) {
  const std::size_t l = dressed.size();
  if (l % 2 != 0) throw ConfigError("sublattice_blocks: L must be even");
  if (bare.size() != l) throw ConfigError("sublattice_blocks: bare and dressed sizes differ");
  const std::size_t h = l / 2;
  // 0-based: A_n = site 2n, B_n = site 2n + 1.
  SublatticeBlocks out;
  out.aa = RealMatrix(h, h);
  out.bb = RealMatrix(h, h);
  out.ab = RealMatrix(h, h);
  out.ba = RealMatrix(h, h);
  double scale = 0.0, mismatch = 0.0;
  for (std::size_t n = 0; n < h; ++n)
    for (std::size_t m = 0; m < h; ++m) {
      out.aa(n, m) = dressed.values(2 * n, 2 * m);
      out.bb(n, m) = dressed.values(2 * n + 1, 2 * m + 1);
      out.ab(n, m) = dressed.values(2 * n, 2 * m + 1);
      out.ba(n, m) = dressed.values(2 * n + 1, 2 * m);
      mismatch = std::max(mismatch, std::abs(out.aa(n, m) - out.bb(n, m)));
      scale = std::max(scale, std::abs(out.ab(n, m)));
      scale = std::max(scale, std::abs(out.aa(n, m)));
    }
  out.aa_bb_mismatch = scale > 0.0 ? mismatch / scale : 0.0;

  // Homogeneity of the bare bands.
  bool homogeneous = true;
  for (std::size_t r = 1; r < l && homogeneous; ++r) {
    double mean = 0.0;
    for (std::size_t i = 0; i + r < l; ++i) mean += bare.values(i, i + r);
    mean /= static_cast<double>(l - r);
    for (std::size_t i = 0; i + r < l; ++i)
      if (std::abs(bare.values(i, i + r) - mean) > 0.05 * std::abs(mean)) homogeneous = false;
    if (mean == 0.0) homogeneous = false;
  }
  out.available = homogeneous;
  if (!homogeneous) return out;

  auto ratio = [&](std::size_t i, std::size_t j) { return dressed.values(i, j) / bare.values(i, j); };
  const int range = static_cast<int>(l) - 1;
  Dimerization& dim = out.dimerization;
  dim.same_a.assign(h, 1.0);
  dim.same_b.assign(h, 1.0);
  for (std::size_t d = 1; d < h; ++d) {
    double sa = 0.0, sb = 0.0;
    for (std::size_t n = 0; n + d < h; ++n) {
      sa += ratio(2 * n, 2 * (n + d));
      sb += ratio(2 * n + 1, 2 * (n + d) + 1);
    }
    dim.same_a[d] = sa / static_cast<double>(h - d);
    dim.same_b[d] = sb / static_cast<double>(h - d);
  }
  // Cross bonds A_n -- B_{n-d} present in the chain; site distance |2d - 1| <= L - 1.
  dim.cross_min = cross_lo(range);
  for (int d = dim.cross_min; d <= cross_hi(range); ++d) {
    double s = 0.0;
    int cnt = 0;
    for (int n = 0; n < static_cast<int>(h); ++n) {
      const int m = n - d;
      if (m < 0 || m >= static_cast<int>(h)) continue;
      s += ratio(2 * n, 2 * m + 1);
      ++cnt;
    }
    if (cnt == 0) break;  // only the top distance can be absent from a finite chain
    dim.cross_values.push_back(s / cnt);
  }
  return out;
}

BlochMatrix bloch_matrix(const std::vector<double>& jbar, const Dimerization& dim, double k) {
  const int range = static_cast<int>(jbar.size()) - 1;
  double ea = 0.0, eb = 0.0;
  for (int d = 1; 2 * d <= range; ++d) {
    const double c = 2.0 * jbar[2 * d] * std::cos(k * d);
    if (d < static_cast<int>(dim.same_a.size())) ea += c * dim.same_a[d];
    if (d < static_cast<int>(dim.same_b.size())) eb += c * dim.same_b[d];
  }
  cplx delta{0.0, 0.0};
  for (int d = dim.cross_min; d <= dim.cross_max(); ++d) {
    const int r = std::abs(2 * d - 1);
    if (r > range) continue;
    delta += jbar[r] * dim.cross(d) * std::polar(1.0, k * d);
  }
  BlochMatrix b;
  b.k = k;
  b.e_k = 0.5 * (ea + eb);
  b.mass = 0.5 * (ea - eb);
  b.delta_k = delta;
  b.matrix = ComplexMatrix(2, 2);
  b.matrix(0, 0) = ea;
  b.matrix(1, 1) = eb;
  b.matrix(0, 1) = delta;
  b.matrix(1, 0) = std::conj(delta);
  return b;
}

std::vector<double> band_profile(const CouplingMatrix& cm) {
  const int l = static_cast<int>(cm.size());
  std::vector<double> jbar(l, 0.0);
  for (int d = 1; d < l; ++d) jbar[d] = average_bond_strength(cm, d);
  return jbar;
}

namespace {

// Lower-band eigenvector of [[e + m, delta], [conj(delta), e - m]].
std::array<cplx, 2> lower_state(double m, cplx delta) {
  const double r = std::hypot(m, std::abs(delta));
  std::array<cplx, 2> v1{delta, cplx(-(m + r))};
  std::array<cplx, 2> v2{cplx(r - m), -std::conj(delta)};
  const double n1 = std::norm(v1[0]) + std::norm(v1[1]);
  const double n2 = std::norm(v2[0]) + std::norm(v2[1]);
  auto& v = n1 >= n2 ? v1 : v2;
  const double nrm = std::sqrt(std::max(n1, n2));
  return {v[0] / nrm, v[1] / nrm};
}

}  // namespace

ZakResult zak_phase(const std::vector<double>& jbar, const Dimerization& dim, int n_k) {
  if (n_k < 4) throw ConfigError("zak_phase: n_k must be >= 4");
  std::vector<std::array<cplx, 2>> states(n_k);
  double min_gap = std::numeric_limits<double>::infinity(), max_gap = 0.0;
  for (int i = 0; i < n_k; ++i) {
    const double k = -pi + 2.0 * pi * i / n_k;
    const BlochMatrix b = bloch_matrix(jbar, dim, k);
    const double gap = 2.0 * std::hypot(b.mass, std::abs(b.delta_k));
    min_gap = std::min(min_gap, gap);
    max_gap = std::max(max_gap, gap);
    states[i] = lower_state(b.mass, b.delta_k);
  }
  if (!(max_gap > 0.0) || min_gap < 1e-9 * max_gap) {
    std::ostringstream msg;
    msg << "zak_phase: gapless, Zak phase undefined (min gap " << min_gap << ")";
    throw NumericalError(msg.str(), min_gap);
  }
  cplx prod{1.0, 0.0};
  for (int i = 0; i < n_k; ++i) {
    const auto& a = states[i];
    const auto& b = states[(i + 1) % n_k];
    prod *= std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
    prod /= std::abs(prod);
  }
  double phase = -std::arg(prod);
  // Fold values within rounding of -pi onto +pi.
  if (phase <= -pi + 1e-12) phase = std::min(phase + 2.0 * pi, pi);
  return {phase, min_gap};
}

std::vector<ZakSweepRow> zak_sweep(const std::vector<double>& jbar, const std::vector<double>& phis,
                                   const std::vector<double>& eta_bars, int n_k) {
  const int range = static_cast<int>(jbar.size()) - 1;
  std::vector<ZakSweepRow> rows;
  for (double phi : phis)
    for (double eb : eta_bars) {
      ZakSweepRow row{phi, eb, std::numeric_limits<double>::quiet_NaN(), 0.0};
      try {
        const ZakResult z = zak_phase(jbar, drive_dimerization(eb, phi, range), n_k);
        row.zak_phase = z.phase;
        row.min_gap = z.min_gap;
      } catch (const NumericalError& e) {
        row.min_gap = e.residual();
      }
      rows.push_back(row);
    }
  return rows;
}

}  // namespace ionssh
