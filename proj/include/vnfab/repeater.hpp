#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnfab/config.hpp"
#include "vnfab/interconnect.hpp"

// Interconnect delay modeling, optimal repeater sizing/spacing, tier
// classification and repeater-count estimation.

namespace vnfab::repeater {

inline constexpr double kEps0 = 8.8541878128e-12; // F/m

enum class Mode { cmos, skybridge };

inline Mode mode_from_string(const std::string& s) {
  if (s == "cmos") return Mode::cmos;
  if (s == "skybridge") return Mode::skybridge;
  throw std::invalid_argument("mode must be cmos or skybridge");
}

struct WireRC {
  double r_per_m = 0.0; // ohm/m
  double c_per_m = 0.0; // F/m
  Tier tier = Tier::local;
};

// Wire width = pitch/2, height = width * aspect ratio. Capacitance comes from
// a parallel-plate + coupling model unless the tier carries a direct
// per-length override.
inline WireRC wire_rc(const TierParams& t, const CapacitanceModel& cm) {
  t.validate("wire_rc");
  double w = t.pitch_nm / 2.0 * 1e-9;
  double h = w * t.aspect_ratio;
  WireRC rc;
  rc.tier = t.tier;
  rc.r_per_m = t.resistivity_uohm_cm * 1e-8 / (w * h);
  if (t.c_per_nm)
    rc.c_per_m = *t.c_per_nm * 1e9;
  else
    rc.c_per_m = kEps0 * cm.eps_r * (2.0 * t.aspect_ratio * cm.kappa_coupling + cm.kappa_ground);
  return rc;
}

// Segment delay: tau = b*Rtr*(CL+Cp) + b*(c*Rtr + r*CL)*l + a*r*c*l^2,
// with Rtr = r0/s, CL = s*c0, Cp = s*cp.
inline double segment_delay(double l_m, double s, const DriverParams& d, const WireRC& w) {
  if (!(l_m >= 0)) throw std::domain_error("segment_delay: l must be >= 0");
  if (!(s >= 1.0)) throw std::domain_error("segment_delay: size must be >= 1");
  double rtr = d.r0_ohm / s;
  double cl = s * d.c0_f;
  double cp = s * d.cp_f;
  return d.b * rtr * (cl + cp) + d.b * (w.c_per_m * rtr + w.r_per_m * cl) * l_m +
         d.a * w.r_per_m * w.c_per_m * l_m * l_m;
}

struct OptimalSegment {
  double l_opt_m = 0.0;
  double s_opt = 1.0;
};

inline OptimalSegment optimal_segment(const DriverParams& d, const WireRC& w) {
  OptimalSegment o;
  o.l_opt_m = std::sqrt(d.b * d.r0_ohm * (d.c0_f + d.cp_f) / (d.a * w.r_per_m * w.c_per_m));
  o.s_opt = std::sqrt(d.r0_ohm * w.c_per_m / (w.r_per_m * d.c0_f));
  return o;
}

// Number of segments a wire of length l is broken into: 1 below l_opt.
inline int segment_count(double l_m, double l_opt_m) {
  if (l_m <= l_opt_m) return 1;
  return static_cast<int>(std::ceil(l_m / l_opt_m));
}

// Repeater convention: the first segment is driven by the logic gate itself,
// so a wire needs segments-minus-one repeaters.
inline int repeaters_for_length(double l_m, double l_opt_m) {
  return segment_count(l_m, l_opt_m) - 1;
}

// Segmented total delay: n equal segments at optimal sizing; the plain
// quadratic segment delay below l_opt.
inline double total_wire_delay(double l_m, const DriverParams& d, const WireRC& w) {
  OptimalSegment o = optimal_segment(d, w);
  int n = segment_count(l_m, o.l_opt_m);
  if (n == 1) return segment_delay(l_m, o.s_opt, d, w);
  return n * segment_delay(l_m / n, o.s_opt, d, w);
}

inline double unsegmented_delay(double l_m, const DriverParams& d, const WireRC& w) {
  return segment_delay(l_m, 1.0, d, w);
}

// Continuous per-length objective used for the optimality checks: delay of a
// long wire split into L/l segments of length l at size s, divided by L.
inline double delay_per_length(double l_m, double s, const DriverParams& d, const WireRC& w) {
  return segment_delay(l_m, s, d, w) / l_m;
}

struct TierBoundaries {
  std::int64_t l_max_local = 1;       // gate pitches
  std::int64_t l_max_semi_global = 1;
  std::int64_t l_max_global = 1;
};

namespace detail {

// Tier delay curve used for boundary solving. Local wires in skybridge mode
// are never segmented (they are implemented with bridges, not repeaters).
inline double tier_delay(std::int64_t l, double gp_m, const DriverParams& d, const WireRC& w,
                         Mode mode, Tier tier) {
  double l_m = static_cast<double>(l) * gp_m;
  if (mode == Mode::skybridge && tier == Tier::local) return unsegmented_delay(l_m, d, w);
  return total_wire_delay(l_m, d, w);
}

// Largest l in [1, hi] whose delay does not exceed target; the curve is
// monotone in l, so integer bisection applies.
inline std::int64_t solve_boundary(double target, std::int64_t hi, double gp_m,
                                   const DriverParams& d, const WireRC& w, Mode mode, Tier tier) {
  if (tier_delay(1, gp_m, d, w, mode, tier) > target) return 1; // infeasible: boundary at l=1
  std::int64_t lo = 1;
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (tier_delay(mid, gp_m, d, w, mode, tier) <= target) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

} // namespace detail

// Classify the distribution into tiers. The global boundary is the largest l
// with f(l) >= 1; the local/semi-global boundaries satisfy the delay
// criterion: beta-ratio scaling in cmos mode, delay equality in skybridge
// mode (beta = 1 everywhere).
inline TierBoundaries classify(const interconnect::InterconnectDistribution& dist,
                               const Config& cfg, Mode mode) {
  const DriverParams drv = (mode == Mode::cmos) ? cfg.driver_cmos() : cfg.driver_dynamic();
  const double gp_m = dist.gate_pitch_h_nm * 1e-9;
  TierBoundaries b;
  b.l_max_global = dist.longest_at_least(1.0);
  if (b.l_max_global < 1) b.l_max_global = 1;

  WireRC rc_global = wire_rc(cfg.tier_global, cfg.cap_model);
  double tau_global = detail::tier_delay(b.l_max_global, gp_m, drv, rc_global, mode, Tier::global_);

  auto bound_for = [&](const TierParams& tp) {
    double frac = (mode == Mode::cmos) ? tp.beta / cfg.tier_global.beta : 1.0;
    WireRC rc = wire_rc(tp, cfg.cap_model);
    return detail::solve_boundary(frac * tau_global, b.l_max_global, gp_m, drv, rc, mode, tp.tier);
  };
  b.l_max_local = bound_for(cfg.tier_local);
  b.l_max_semi_global = bound_for(cfg.tier_semi_global);

  // Boundaries are monotone by construction of the tier wire parameters, but
  // clamp so local <= semi_global <= global always holds.
  b.l_max_semi_global = std::max(b.l_max_semi_global, b.l_max_local);
  b.l_max_semi_global = std::min(b.l_max_semi_global, b.l_max_global);
  b.l_max_local = std::min(b.l_max_local, b.l_max_semi_global);
  return b;
}

struct TierReport {
  Tier tier = Tier::local;
  std::int64_t l_from = 0;   // tier length range, gate pitches
  std::int64_t l_to = 0;
  double l_opt_nm = 0.0;
  double s_opt = 1.0;
  double repeaters = 0.0;    // sum over f(l) * R(l)
};

struct RepeaterReport {
  TierReport local, semi_global, global_;
  double total = 0.0;

  const TierReport& tier(Tier t) const {
    switch (t) {
      case Tier::local: return local;
      case Tier::semi_global: return semi_global;
      default: return global_;
    }
  }
};

// Per tier i, wires in the tier's length range longer than l_opt_i get
// ceil(l/l_opt)-1 optimally sized repeaters; skybridge local interconnects
// contribute none by rule.
inline RepeaterReport repeater_counts(const interconnect::InterconnectDistribution& dist,
                                      const TierBoundaries& b, const Config& cfg, Mode mode) {
  const DriverParams drv = (mode == Mode::cmos) ? cfg.driver_cmos() : cfg.driver_dynamic();
  const double gp_m = dist.gate_pitch_h_nm * 1e-9;
  RepeaterReport rep;

  struct Range { Tier t; std::int64_t lo, hi; TierReport* out; };
  rep.local.tier = Tier::local;
  rep.semi_global.tier = Tier::semi_global;
  rep.global_.tier = Tier::global_;
  const Range ranges[3] = {
      {Tier::local, 1, b.l_max_local, &rep.local},
      {Tier::semi_global, b.l_max_local + 1, b.l_max_semi_global, &rep.semi_global},
      {Tier::global_, b.l_max_semi_global + 1, b.l_max_global, &rep.global_},
  };
  for (const auto& r : ranges) {
    WireRC rc = wire_rc(cfg.tier(r.t), cfg.cap_model);
    OptimalSegment o = optimal_segment(drv, rc);
    r.out->l_from = r.lo;
    r.out->l_to = r.hi;
    r.out->l_opt_nm = o.l_opt_m * 1e9;
    r.out->s_opt = o.s_opt;
    if (mode == Mode::skybridge && r.t == Tier::local) continue; // bridges, no repeaters
    double sum = 0.0;
    for (std::int64_t l = r.lo; l <= r.hi && l <= dist.l_max; ++l) {
      int n = repeaters_for_length(static_cast<double>(l) * gp_m, o.l_opt_m);
      if (n > 0) sum += dist.count_at(l) * n;
    }
    r.out->repeaters = sum;
  }
  rep.total = rep.local.repeaters + rep.semi_global.repeaters + rep.global_.repeaters;
  return rep;
}

} // namespace vnfab::repeater
