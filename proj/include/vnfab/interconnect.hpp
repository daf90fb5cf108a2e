#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "vnfab/config.hpp"

// Stochastic wire-length distribution for a 2-D gate array and its 3-D
// stacked-gate extension. Lengths are an integer lattice of horizontal gate
// pitches; the vertical pitch is rounded to the nearest integer number of
// horizontal pitches inside the step functions, while the raw ratio enters
// the maximum-length formula.

namespace vnfab::interconnect {

inline std::int64_t l_max_2d(double n_gates) {
  if (!(n_gates >= 2)) throw std::domain_error("l_max_2d: n_gates must be >= 2");
  return static_cast<std::int64_t>(std::floor(2.0 * (std::sqrt(n_gates) - 1.0)));
}

inline std::int64_t l_max_3d(double n_gates, int gz, double p_z_pitches) {
  if (gz < 1) throw std::domain_error("l_max_3d: gz must be >= 1");
  if (!(n_gates / gz >= 1.0)) throw std::domain_error("l_max_3d: n_gates/gz must be >= 1");
  double v = 2.0 * (std::sqrt(n_gates / gz) - 1.0) + (gz - 1) * p_z_pitches;
  return static_cast<std::int64_t>(std::floor(v));
}

// Gate-pair count at separation l on a square array, continuous approximation.
// Branch one is the unique cubic of the printed family that is continuous
// with branch two at l_max/2.
inline double m_2d(double l, double l_max) {
  if (!(l >= 1.0 && l <= l_max)) throw std::domain_error("m_2d: l outside [1, l_max]");
  if (l < l_max / 2.0) return l * l * l / 3.0 - l_max * l * l + (l_max * l_max / 2.0) * l;
  double d = l_max - l;
  return d * d * d / 3.0;
}

inline double m_2d_or_zero(double l, double l_max) {
  if (l < 1.0 || l > l_max) return 0.0;
  return m_2d(l, l_max);
}

// 3-D gate-pair count: sum of per-layer-offset terms; the i = 0 term carries
// multiplicity gz.
inline double m_3d(double l, double l_max_2d_per_layer, int gz, std::int64_t p_z) {
  if (!(l >= 1.0)) throw std::domain_error("m_3d: l must be >= 1");
  double s = 0.0;
  for (int i = 0; i < gz; ++i) {
    double x = l - static_cast<double>(i) * static_cast<double>(p_z);
    if (x >= 1.0) s += (gz - i) * m_2d_or_zero(x, l_max_2d_per_layer);
  }
  return s;
}

struct BlockCounts {
  double n_a = 1.0;
  double n_b = 0.0;
  double n_c = 0.0;
};

inline BlockCounts block_counts_2d(double l) {
  if (!(l >= 1.0)) throw std::domain_error("block_counts_2d: l must be >= 1");
  return {1.0, l * (l - 1.0), 2.0 * l};
}

inline BlockCounts block_counts_3d(double l, int gz, std::int64_t p_z) {
  BlockCounts b = block_counts_2d(l);
  for (int i = 1; i < gz; ++i) {
    double x = l - static_cast<double>(i) * static_cast<double>(p_z);
    if (x >= 1.0) {
      BlockCounts b2 = block_counts_2d(x);
      b.n_b += 2.0 * (gz - i) * b2.n_b / gz;
      b.n_c += 2.0 * (gz - i) * b2.n_c / gz;
    }
  }
  return b;
}

// Interconnect count between a gate pair at separation l (partial Manhattan
// circle). Returns 0 by convention when N_C vanishes.
inline double i_of_l(const BlockCounts& b, double k, double p, double a) {
  if (b.n_c <= 0.0) return 0.0;
  double term = std::pow(b.n_a + b.n_b, p) - std::pow(b.n_b, p) +
                std::pow(b.n_b + b.n_c, p) - std::pow(b.n_a + b.n_b + b.n_c, p);
  return (a * k / b.n_c) * term;
}

inline double i_total(double k, double p, double a, double n_gates) {
  return a * k * n_gates * (1.0 - std::pow(n_gates, p - 1.0));
}

struct InterconnectDistribution {
  std::vector<std::int64_t> lengths; // 1..l_max
  std::vector<double> counts;        // f(l)
  std::int64_t l_max = 0;
  double gamma = 0.0;
  double i_total = 0.0;
  double gate_pitch_h_nm = 0.0;

  double count_at(std::int64_t l) const {
    if (l < 1 || l > l_max) return 0.0;
    return counts[static_cast<std::size_t>(l - 1)];
  }

  // Largest l with f(l) >= threshold; ties resolved to the largest such l.
  std::int64_t longest_at_least(double threshold = 1.0) const {
    for (std::size_t i = counts.size(); i-- > 0;)
      if (counts[i] >= threshold) return static_cast<std::int64_t>(i + 1);
    return 0;
  }
};

// Full f(l) = Gamma * I(l) * M(l) for l = 1..L_max. For gz = 1 this is the
// plain 2-D model; the summation order is fixed left-to-right so results are
// reproducible bit for bit.
inline InterconnectDistribution distribution(const FabricParams& fp) {
  fp.validate("distribution");
  const double n = static_cast<double>(fp.n_gates);
  const double a = alpha(fp.fan_out);
  const bool threed = fp.gz > 1;
  const double pz_ratio = threed ? fp.gate_pitch_v_nm / fp.gate_pitch_h_nm : 0.0;
  const std::int64_t pz_int = threed ? std::llround(pz_ratio) : 0;

  InterconnectDistribution d;
  d.gate_pitch_h_nm = fp.gate_pitch_h_nm;
  d.l_max = threed ? l_max_3d(n, fp.gz, pz_ratio) : l_max_2d(n);
  const double l2d = threed ? 2.0 * (std::sqrt(n / fp.gz) - 1.0) : 2.0 * (std::sqrt(n) - 1.0);

  d.lengths.resize(static_cast<std::size_t>(d.l_max));
  d.counts.resize(static_cast<std::size_t>(d.l_max));
  std::vector<double> mi(static_cast<std::size_t>(d.l_max));
  double sum = 0.0;
  for (std::int64_t l = 1; l <= d.l_max; ++l) {
    double lf = static_cast<double>(l);
    double m = threed ? m_3d(lf, l2d, fp.gz, pz_int) : m_2d_or_zero(lf, l2d);
    BlockCounts b = threed ? block_counts_3d(lf, fp.gz, pz_int) : block_counts_2d(lf);
    double v = m * i_of_l(b, fp.rent_k, fp.rent_p, a);
    mi[static_cast<std::size_t>(l - 1)] = v;
    sum += v;
    d.lengths[static_cast<std::size_t>(l - 1)] = l;
  }
  if (!(sum > 0.0)) throw std::runtime_error("distribution: degenerate model, sum of M(l)*I(l) is zero");
  d.i_total = i_total(fp.rent_k, fp.rent_p, a, n);
  d.gamma = d.i_total / sum;
  for (std::size_t i = 0; i < mi.size(); ++i) d.counts[i] = d.gamma * mi[i];
  return d;
}

// ---------------------------------------------------------------------------
// Rent-parameter fitting

struct RentDataPoint {
  std::int64_t n = 1; // gate count of a sub-module
  double t = 0.0;     // terminal count
};

// Least-squares fit of log t = log k + p log n. Points sharing a gate count
// are collapsed to the geometric mean of their terminal counts first.
inline std::pair<double, double> rent_fit(std::span<const RentDataPoint> data) {
  std::map<std::int64_t, std::pair<double, int>> groups; // n -> (sum log t, count)
  for (const auto& d : data) {
    if (d.n < 1 || !(d.t > 0)) throw std::domain_error("rent_fit: points require n >= 1, t > 0");
    auto& g = groups[d.n];
    g.first += std::log(d.t);
    g.second += 1;
  }
  if (groups.size() < 2) throw std::domain_error("rent_fit: need at least 2 distinct gate counts");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(groups.size());
  for (const auto& [n, g] : groups) {
    double x = std::log(static_cast<double>(n));
    double y = g.first / g.second; // log of geometric mean
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double denom = m * sxx - sx * sx;
  double p = (m * sxy - sx * sy) / denom;
  double logk = (sy - p * sx) / m;
  return {std::exp(logk), p};
}

// ---------------------------------------------------------------------------
// Gate-pitch extraction from module footprints

struct ModuleFootprint {
  double area_nm2 = 0.0;
  std::int64_t n_gates = 1;
  int stacking = 1;
};

inline double gate_pitch(std::span<const ModuleFootprint> modules) {
  if (modules.empty()) throw std::domain_error("gate_pitch: no modules");
  double sum = 0.0;
  for (const auto& m : modules) {
    if (!(m.area_nm2 > 0) || m.n_gates < 1 || m.stacking < 1)
      throw std::domain_error("gate_pitch: module requires area > 0, n_gates >= 1, stacking >= 1");
    sum += std::sqrt(m.stacking * m.area_nm2 / static_cast<double>(m.n_gates));
  }
  return sum / static_cast<double>(modules.size());
}

} // namespace vnfab::interconnect
