#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>

#include "vnfab/config.hpp"
#include "vnfab/interconnect.hpp"
#include "vnfab/repeater.hpp"

using namespace vnfab;
using namespace vnfab::interconnect;
using namespace vnfab::repeater;

TEST_CASE("alpha") {
  CHECK(alpha(1.0) == Catch::Approx(0.5));
  CHECK(alpha(3.0) == Catch::Approx(0.75));
  CHECK(alpha(2.018) == Catch::Approx(0.6687).margin(5e-5));
  CHECK_THROWS_AS(alpha(0.0), std::domain_error);
  CHECK_THROWS_AS(alpha(-1.0), std::domain_error);
  double prev = 0.0;
  for (double fo = 0.1; fo < 50.0; fo += 0.3) {
    double a = alpha(fo);
    CHECK(a > prev);
    CHECK(a > 0.0);
    CHECK(a < 1.0);
    prev = a;
  }
}

TEST_CASE("config defaults and validation") {
  Config cfg;
  REQUIRE_NOTHROW(cfg.validate());
  CHECK(cfg.skybridge.rent_p == Catch::Approx(0.577));
  CHECK(cfg.skybridge.rent_k == Catch::Approx(5.39));
  CHECK(cfg.skybridge.fan_out == Catch::Approx(2.018));
  CHECK(cfg.cmos_set2.rent_k == Catch::Approx(3.416));
  CHECK(cfg.materials.channel.conductivity == Catch::Approx(13.0));
  CHECK(cfg.materials.heat_junction.conductivity == Catch::Approx(30.0));
  CHECK(cfg.tier_global.pitch_nm == Catch::Approx(152.0));
  CHECK(cfg.tier_global.beta == Catch::Approx(0.9));

  Config bad = cfg;
  bad.skybridge.rent_p = 1.2;
  try {
    bad.validate();
    FAIL("expected validation error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("rent_p") != std::string::npos);
  }
}

TEST_CASE("config json round trip") {
  Config cfg;
  cfg.skybridge.n_gates = 123456;
  cfg.thermal.rail_access_k_per_w = 2.5e8;
  cfg.tier_local.c_per_nm = 2e-19;
  json j = config_to_json(cfg);
  Config back = config_from_json(j);
  CHECK(config_to_json(back) == j);

  // unknown keys are rejected, naming the offender
  json junk = j;
  junk["params"]["skybridge"]["rentp"] = 0.5;
  CHECK_THROWS_AS(config_from_json(junk), ConfigError);

  CHECK_THROWS_AS(load_config("/does/not/exist.json"), ConfigError);
}

TEST_CASE("config file round trip") {
  Config cfg;
  std::string path = "/tmp/vnfab_test_config.json";
  save_config(cfg, path);
  Config back = load_config(path);
  CHECK(config_to_json(back) == config_to_json(cfg));
  std::remove(path.c_str());
}

TEST_CASE("maximum lengths") {
  CHECK(l_max_2d(16) == 6);
  CHECK(l_max_2d(4) == 2);
  // 2(sqrt(1e7)-1) = 6322.55
  CHECK(l_max_2d(1e7) == 6322);
  CHECK_THROWS_AS(l_max_2d(1), std::domain_error);

  CHECK(l_max_3d(16, 1, 0.0) == 6);
  CHECK(l_max_3d(8, 2, 1.0) == 3);
  CHECK(l_max_3d(1e7, 2, 448.0 / 150.0) == 4473);
  CHECK_THROWS_AS(l_max_3d(1, 2, 1.0), std::domain_error);
}

TEST_CASE("pair count m_2d") {
  const double L = 14.0;
  CHECK(m_2d(L, L) == 0.0);
  // branch continuity at L/2: both give L^3/24 exactly
  double exact = L * L * L / 24.0;
  CHECK(m_2d(L / 2.0, L) == Catch::Approx(exact).epsilon(1e-15));
  CHECK(m_2d(std::nextafter(L / 2.0, 0.0), L) == Catch::Approx(exact).epsilon(1e-12));
  CHECK(m_2d(3.0, L) == Catch::Approx(177.0));
  CHECK_THROWS_AS(m_2d(0.5, L), std::domain_error);
  CHECK_THROWS_AS(m_2d(15.0, L), std::domain_error);
  for (double l = 1; l <= L; ++l) CHECK(m_2d(l, L) >= 0.0);
}

TEST_CASE("pair count m_3d reductions") {
  const double L = 30.0;
  for (double l = 1; l <= L; ++l)
    CHECK(m_3d(l, L, 1, 0) == m_2d(l, L)); // gz = 1 degenerates to 2-D
  // below the vertical pitch only the i = 0 term survives
  for (double l = 1; l < 5; ++l) CHECK(m_3d(l, L, 2, 5) == Catch::Approx(2.0 * m_2d(l, L)));
}

TEST_CASE("block counts") {
  BlockCounts b1 = block_counts_2d(1);
  CHECK(b1.n_a == 1.0);
  CHECK(b1.n_b == 0.0);
  CHECK(b1.n_c == 2.0);
  BlockCounts b3 = block_counts_2d(3);
  CHECK(b3.n_b == 6.0);
  CHECK(b3.n_c == 6.0);
  // 3-D equals 2-D below the vertical pitch
  BlockCounts c = block_counts_3d(2, 2, 5);
  CHECK(c.n_b == block_counts_2d(2).n_b);
  CHECK(c.n_c == block_counts_2d(2).n_c);
  BlockCounts d = block_counts_3d(7, 2, 5);
  CHECK(d.n_b > block_counts_2d(7).n_b);
}

TEST_CASE("interconnects per pair") {
  // p -> 1 telescopes to zero
  BlockCounts b = block_counts_2d(5);
  CHECK(std::abs(i_of_l(b, 4.0, 1.0 - 1e-13, 0.75)) < 1e-9);
  // spot value at l = 1 with cmos literature parameters: blocks are
  // (N_A, N_B, N_C) = (1, 0, 2), so the bracket is 1 - 0 + 2^p - 3^p
  double v = i_of_l(block_counts_2d(1), 4.0, 0.66, 0.75);
  double expect = (0.75 * 4.0 / 2.0) *
                  (1.0 - 0.0 + std::pow(2.0, 0.66) - std::pow(3.0, 0.66));
  CHECK(v == Catch::Approx(expect));
  // monotone decreasing over the first half of the range
  double prev = 1e300;
  for (double l = 1; l <= 3000; l += 7) {
    double x = i_of_l(block_counts_2d(l), 4.0, 0.66, 0.75);
    CHECK(x <= prev);
    CHECK(x >= 0.0);
    prev = x;
  }
}

TEST_CASE("i_total example") {
  CHECK(i_total(1.0, 0.5, 0.5, 2.0) == Catch::Approx(0.5 * 2.0 * (1.0 - std::pow(2.0, -0.5))));
}

// Independent small-N oracle: recompute the whole distribution from the raw
// formulas without the library's bookkeeping.
static std::vector<double> direct_distribution_2d(double n, double k, double p, double fo) {
  double a = fo / (1 + fo);
  double L = 2.0 * (std::sqrt(n) - 1.0);
  auto m = [&](double l) {
    if (l < 1 || l > L) return 0.0;
    if (l < L / 2) return l * l * l / 3 - L * l * l + L * L / 2 * l;
    return (L - l) * (L - l) * (L - l) / 3.0;
  };
  auto i = [&](double l) {
    double nb = l * (l - 1), nc = 2 * l;
    return a * k / nc *
           (std::pow(1 + nb, p) - std::pow(nb, p) + std::pow(nb + nc, p) - std::pow(1 + nb + nc, p));
  };
  std::int64_t lmax = static_cast<std::int64_t>(std::floor(L));
  double itot = a * k * n * (1 - std::pow(n, p - 1));
  double s = 0;
  for (std::int64_t l = 1; l <= lmax; ++l) s += m(static_cast<double>(l)) * i(static_cast<double>(l));
  std::vector<double> f;
  for (std::int64_t l = 1; l <= lmax; ++l)
    f.push_back(itot / s * m(static_cast<double>(l)) * i(static_cast<double>(l)));
  return f;
}

TEST_CASE("distribution vs independent oracle, small N") {
  FabricParams fp{4.0, 0.66, 3.0, 100.0, 0.0, 1, 64};
  InterconnectDistribution d = distribution(fp);
  auto oracle = direct_distribution_2d(64, 4.0, 0.66, 3.0);
  REQUIRE(d.counts.size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i)
    CHECK(d.counts[i] == Catch::Approx(oracle[i]).epsilon(1e-12));
}

TEST_CASE("distribution normalization and reduction") {
  Config cfg;
  for (const FabricParams* fp : {&cfg.skybridge, &cfg.cmos_set1, &cfg.cmos_set2}) {
    FabricParams p = *fp;
    p.n_gates = 200000; // keep the test quick; acceptance runs the full size
    InterconnectDistribution d = distribution(p);
    double s = 0;
    for (double v : d.counts) {
      CHECK(v >= 0.0);
      CHECK(std::isfinite(v));
      s += v;
    }
    CHECK(std::abs(s - d.i_total) / d.i_total < 1e-3);
    CHECK(d.gamma > 0.0);
  }

  // gz = 1 with cmos parameters matches the plain 2-D model bit for bit
  FabricParams flat = cfg.cmos_set1;
  flat.n_gates = 10000;
  FabricParams as3d = flat;
  as3d.gz = 1;
  InterconnectDistribution a = distribution(flat), b = distribution(as3d);
  REQUIRE(a.counts.size() == b.counts.size());
  for (std::size_t i = 0; i < a.counts.size(); ++i) CHECK(a.counts[i] == b.counts[i]);
}

TEST_CASE("longest length ties take the largest l") {
  InterconnectDistribution d;
  d.l_max = 5;
  d.lengths = {1, 2, 3, 4, 5};
  d.counts = {10.0, 1.0, 0.5, 1.0, 0.2};
  CHECK(d.longest_at_least(1.0) == 4);
  CHECK(d.longest_at_least(20.0) == 0);
}

TEST_CASE("rent fit") {
  // exact power law recovers parameters to machine precision
  std::vector<RentDataPoint> pts;
  for (std::int64_t n : {2, 4, 16, 64, 256})
    pts.push_back({n, 4.0 * std::pow(static_cast<double>(n), 0.66)});
  auto [k, p] = rent_fit(pts);
  CHECK(k == Catch::Approx(4.0).epsilon(1e-12));
  CHECK(p == Catch::Approx(0.66).epsilon(1e-12));

  // duplicate gate counts collapse by geometric mean before fitting
  std::vector<RentDataPoint> dup = {{8, 2.0}, {8, 8.0}, {1, 1.0}};
  auto [k2, p2] = rent_fit(dup);
  CHECK(k2 == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(p2 == Catch::Approx(std::log(4.0) / std::log(8.0)).epsilon(1e-12));

  // 1% multiplicative noise recovers within 2%
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  std::vector<RentDataPoint> noisy;
  for (std::int64_t n = 2; n <= 4096; n *= 2)
    noisy.push_back({n, 4.0 * std::pow(static_cast<double>(n), 0.66) * (1.0 + noise(rng))});
  auto [k3, p3] = rent_fit(noisy);
  CHECK(k3 == Catch::Approx(4.0).epsilon(0.02));
  CHECK(p3 == Catch::Approx(0.66).epsilon(0.02));

  std::vector<RentDataPoint> degenerate = {{8, 2.0}, {8, 4.0}};
  CHECK_THROWS_AS(rent_fit(degenerate), std::domain_error);
}

TEST_CASE("gate pitch extraction") {
  std::vector<ModuleFootprint> mods = {{2.0, 4, 2}};
  CHECK(gate_pitch(mods) == Catch::Approx(1.0));
  std::vector<ModuleFootprint> unit = {{16.0, 16, 1}};
  CHECK(gate_pitch(unit) == Catch::Approx(1.0));
  std::vector<ModuleFootprint> two = {{2.0, 4, 2}, {36.0, 4, 1}};
  CHECK(gate_pitch(two) == Catch::Approx((1.0 + 3.0) / 2.0));
  std::vector<ModuleFootprint> bad = {{-1.0, 4, 1}};
  CHECK_THROWS_AS(gate_pitch(bad), std::domain_error);
}

TEST_CASE("wire rc") {
  Config cfg;
  WireRC g = wire_rc(cfg.tier_global, cfg.cap_model);
  CHECK(g.r_per_m == Catch::Approx(3.892e6).epsilon(0.005)); // ~3.89 ohm/um
  WireRC l = wire_rc(cfg.tier_local, cfg.cap_model);
  CHECK(l.r_per_m == Catch::Approx(9.64e7).epsilon(0.005)); // ~96.4 ohm/um
  CHECK(g.c_per_m > 0.0);

  TierParams wide = cfg.tier_global;
  wide.pitch_nm *= 2.0;
  CHECK(wire_rc(wide, cfg.cap_model).r_per_m == Catch::Approx(g.r_per_m / 4.0));

  TierParams forced = cfg.tier_local;
  forced.c_per_nm = 2e-19;
  CHECK(wire_rc(forced, cfg.cap_model).c_per_m == Catch::Approx(2e-10));
}

TEST_CASE("segment delay") {
  Config cfg;
  DriverParams cmos = cfg.driver_cmos();
  DriverParams dyn = cfg.driver_dynamic();
  WireRC w = wire_rc(cfg.tier_global, cfg.cap_model);

  // zero-length wire: b*r0*(c0+cp) independent of size
  double t1 = segment_delay(0.0, 1.0, cmos, w);
  double t4 = segment_delay(0.0, 4.0, cmos, w);
  CHECK(t1 == Catch::Approx(cmos.b * cmos.r0_ohm * (cmos.c0_f + cmos.cp_f)));
  CHECK(t1 == Catch::Approx(t4));

  // independent re-evaluation of the three-term expression for both swings
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> len(1e-6, 1e-3);
  std::uniform_real_distribution<double> size(1.0, 60.0);
  for (int i = 0; i < 200; ++i) {
    double l = len(rng), s = size(rng);
    for (const DriverParams& d : {cmos, dyn}) {
      double rtr = d.r0_ohm / s, cl = s * d.c0_f, cp = s * d.cp_f;
      double expect = d.b * rtr * (cl + cp) + d.b * (w.c_per_m * rtr + w.r_per_m * cl) * l +
                      d.a * w.r_per_m * w.c_per_m * l * l;
      CHECK(segment_delay(l, s, d, w) == Catch::Approx(expect).epsilon(1e-14));
    }
  }

  // monotone and convex in length
  double prev = segment_delay(0.0, 2.0, cmos, w), prev_d = 0.0;
  for (double l = 1e-5; l < 2e-3; l += 1e-5) {
    double t = segment_delay(l, 2.0, cmos, w);
    CHECK(t > prev);
    double d1 = t - prev;
    CHECK(d1 >= prev_d - 1e-30);
    prev = t;
    prev_d = d1;
  }
}

TEST_CASE("optimal segment") {
  Config cfg;
  DriverParams d = cfg.driver_cmos();
  WireRC w = wire_rc(cfg.tier_global, cfg.cap_model);
  OptimalSegment o = optimal_segment(d, w);

  WireRC w4 = w;
  w4.r_per_m *= 4.0;
  w4.c_per_m *= 4.0;
  OptimalSegment o4 = optimal_segment(d, w4);
  CHECK(o4.l_opt_m == Catch::Approx(o.l_opt_m / 4.0)); // r*c x16 quarters l_opt
  CHECK(o4.s_opt == Catch::Approx(o.s_opt));           // c/r unchanged

  // resistance alone x4 halves both the segment length and the sizing
  WireRC wr = w;
  wr.r_per_m *= 4.0;
  OptimalSegment orr = optimal_segment(d, wr);
  CHECK(orr.l_opt_m == Catch::Approx(o.l_opt_m / 2.0));
  CHECK(orr.s_opt == Catch::Approx(o.s_opt / 2.0));

  // balanced case: r0*c == r*c0 gives unit sizing
  WireRC wb = w;
  wb.r_per_m = d.r0_ohm * wb.c_per_m / d.c0_f;
  CHECK(optimal_segment(d, wb).s_opt == Catch::Approx(1.0));

  // local optimality along a 100 l_opt wire
  double base = 100.0 * o.l_opt_m;
  auto total = [&](double seg_len, double s) {
    double n = base / seg_len;
    return n * segment_delay(seg_len, s, d, w);
  };
  double at_opt = total(o.l_opt_m, o.s_opt);
  CHECK(total(0.9 * o.l_opt_m, o.s_opt) >= at_opt);
  CHECK(total(1.1 * o.l_opt_m, o.s_opt) >= at_opt);
}

TEST_CASE("total wire delay") {
  Config cfg;
  DriverParams d = cfg.driver_cmos();
  WireRC w = wire_rc(cfg.tier_global, cfg.cap_model);
  OptimalSegment o = optimal_segment(d, w);

  CHECK(total_wire_delay(o.l_opt_m, d, w) == Catch::Approx(segment_delay(o.l_opt_m, o.s_opt, d, w)));
  // segmentation beats the quadratic for long wires
  double l = 50.0 * o.l_opt_m;
  CHECK(total_wire_delay(l, d, w) < unsegmented_delay(l, d, w));
  // near-linear growth beyond l_opt: doubling length at most ~doubles delay
  double t2 = total_wire_delay(20 * o.l_opt_m, d, w);
  double t4 = total_wire_delay(40 * o.l_opt_m, d, w);
  CHECK(t4 / t2 == Catch::Approx(2.0).epsilon(0.1));
}

TEST_CASE("repeater convention") {
  CHECK(repeaters_for_length(3.0, 1.0) == 2);  // exactly 3 l_opt: segments minus the driver
  CHECK(repeaters_for_length(3.1, 1.0) == 3);
  CHECK(repeaters_for_length(0.5, 1.0) == 0);
}

TEST_CASE("classification") {
  Config cfg;
  FabricParams sb = cfg.skybridge;
  sb.n_gates = 1000000;
  auto d = distribution(sb);
  auto b = classify(d, cfg, Mode::skybridge);
  CHECK(b.l_max_local <= b.l_max_semi_global);
  CHECK(b.l_max_semi_global <= b.l_max_global);
  CHECK(b.l_max_global == d.longest_at_least(1.0));

  // skybridge criterion: all tier-boundary delays equal the global one
  // within the +-1 gate-pitch quantization of the integer bisection
  const double gp = d.gate_pitch_h_nm * 1e-9;
  DriverParams drv = cfg.driver_dynamic();
  WireRC rc_g = wire_rc(cfg.tier_global, cfg.cap_model);
  double tau_g = total_wire_delay(b.l_max_global * gp, drv, rc_g);
  WireRC rc_l = wire_rc(cfg.tier_local, cfg.cap_model);
  double at = unsegmented_delay(b.l_max_local * gp, drv, rc_l);
  double next = unsegmented_delay((b.l_max_local + 1) * gp, drv, rc_l);
  CHECK(at <= tau_g);
  CHECK(next > tau_g);

  // cmos criterion: local boundary delay tracks (beta_local/beta_global)
  FabricParams c1 = cfg.cmos_set1;
  c1.n_gates = 1000000;
  auto dc = distribution(c1);
  auto bc = classify(dc, cfg, Mode::cmos);
  DriverParams drvc = cfg.driver_cmos();
  double tg = total_wire_delay(bc.l_max_global * dc.gate_pitch_h_nm * 1e-9, drvc, rc_g);
  double target = (cfg.tier_local.beta / cfg.tier_global.beta) * tg;
  double tl = total_wire_delay(bc.l_max_local * dc.gate_pitch_h_nm * 1e-9, drvc, rc_l);
  double tl_next = total_wire_delay((bc.l_max_local + 1) * dc.gate_pitch_h_nm * 1e-9, drvc, rc_l);
  CHECK(tl <= target);
  CHECK(tl_next > target);

  // degenerate flat distribution pushes every boundary to l = 1
  InterconnectDistribution flat;
  flat.l_max = 10;
  flat.gate_pitch_h_nm = 150.0;
  for (int l = 1; l <= 10; ++l) {
    flat.lengths.push_back(l);
    flat.counts.push_back(l == 1 ? 5.0 : 0.0);
  }
  auto bf = classify(flat, cfg, Mode::skybridge);
  CHECK(bf.l_max_global == 1);
  CHECK(bf.l_max_local == 1);
  CHECK(bf.l_max_semi_global == 1);
}

TEST_CASE("repeater counts") {
  Config cfg;
  // all interconnects shorter than l_opt: zero repeaters
  InterconnectDistribution tiny;
  tiny.l_max = 3;
  tiny.gate_pitch_h_nm = 150.0;
  tiny.lengths = {1, 2, 3};
  tiny.counts = {100.0, 10.0, 1.0};
  TierBoundaries tb{1, 2, 3};
  auto rep = repeater_counts(tiny, tb, cfg, Mode::cmos);
  CHECK(rep.total == 0.0);

  // skybridge local tier never carries repeaters
  FabricParams sb = cfg.skybridge;
  sb.n_gates = 1000000;
  auto d = distribution(sb);
  auto b = classify(d, cfg, Mode::skybridge);
  auto r = repeater_counts(d, b, cfg, Mode::skybridge);
  CHECK(r.local.repeaters == 0.0);
  CHECK(r.total >= 0.0);

  // totals are monotone non-decreasing in the design size
  double prev = -1.0;
  for (double n : {1e5, 1e6, 1e7}) {
    FabricParams c1 = cfg.cmos_set1;
    c1.n_gates = static_cast<std::int64_t>(n);
    auto dd = distribution(c1);
    auto bb = classify(dd, cfg, Mode::cmos);
    auto rr = repeater_counts(dd, bb, cfg, Mode::cmos);
    CHECK(rr.total >= prev);
    prev = rr.total;
  }
}
