#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vnfab/config.hpp"
#include "vnfab/thermal.hpp"

using namespace vnfab;
using namespace vnfab::thermal;

TEST_CASE("resistor from geometry") {
  // thin-silicon channel: 16nm through 16x16 nm^2 at k = 13
  CHECK(resistor_from_geometry(16, 16 * 16, 13.0) == Catch::Approx(4.808e6).epsilon(0.001));
  // Ti drain electrode: 10nm through 16x12 at k = 21
  CHECK(resistor_from_geometry(10, 16 * 12, 21.0) == Catch::Approx(2.480e6).epsilon(0.001));
  // doubling area halves resistance
  CHECK(resistor_from_geometry(16, 2 * 16 * 16, 13.0) ==
        Catch::Approx(resistor_from_geometry(16, 16 * 16, 13.0) / 2.0));
  CHECK_THROWS_AS(resistor_from_geometry(0, 1, 1), std::domain_error);
  CHECK_THROWS_AS(resistor_from_geometry(1, -1, 1), std::domain_error);
}

TEST_CASE("heat q") {
  CHECK(heat_q(3.2e-5, 0.8) == Catch::Approx(25.6e-6));
  CHECK(heat_q(0.0, 0.8) == 0.0);
  CHECK(heat_q(2.7e-5, 0.8) == Catch::Approx(21.6e-6));
  CHECK_THROWS_AS(heat_q(-1.0, 0.5), std::domain_error);
}

TEST_CASE("two node network") {
  ThermalNetwork net;
  int ref = net.add_node("ref", NodeKind::reference, 350.0);
  int a = net.add_node("a");
  net.add_resistor(ref, a, 1e6);
  net.add_source(a, 1e-5);
  ThermalSolution sol = solve(net);
  CHECK(sol.temperature_k[static_cast<std::size_t>(a)] == Catch::Approx(360.0));
  CHECK(std::abs(sol.injected_w - sol.absorbed_w) / sol.injected_w < 1e-9);
}

TEST_CASE("star network vs hand solution") {
  ThermalNetwork net;
  int r1 = net.add_node("r1", NodeKind::reference, 350.0);
  int r2 = net.add_node("r2", NodeKind::reference, 350.0);
  int c = net.add_node("center");
  net.add_resistor(c, r1, 1e6);
  net.add_resistor(c, r2, 3e6);
  net.add_source(c, 1e-5);
  ThermalSolution sol = solve(net);
  // T = 350 + Q / (1/R1 + 1/R2)
  double expect = 350.0 + 1e-5 / (1e-6 + 1.0 / 3e6);
  CHECK(sol.temperature_k[static_cast<std::size_t>(c)] == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("network validation") {
  ThermalNetwork net;
  int a = net.add_node("a");
  CHECK_THROWS_AS(net.add_resistor(a, a, 1e3), std::invalid_argument);
  CHECK_THROWS_AS(net.add_resistor(a, a + 999, 1e3), std::out_of_range);

  int island = net.add_node("island");
  int ref = net.add_node("ref", NodeKind::reference, 350.0);
  net.add_resistor(a, ref, 1e3);
  net.add_source(island, 1e-6);
  try {
    solve(net);
    FAIL("expected disconnected-island error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("island") != std::string::npos);
  }
}

TEST_CASE("single transistor fragment") {
  Config cfg;
  // no gate conduction: no gate branch nodes exist
  ThermalNetwork bare = build_transistor(cfg.materials, cfg.thermal, 0.0, 25.6e-6);
  for (const auto& n : bare.nodes) CHECK(n.label.find("gate") == std::string::npos);
  ThermalNetwork gated = build_transistor(cfg.materials, cfg.thermal, 1.0, 25.6e-6);
  bool has_gate = false;
  for (const auto& n : gated.nodes)
    if (n.label.find("gate") != std::string::npos) has_gate = true;
  CHECK(has_gate);

  // drain-region temperature rises monotonically with drain voltage
  double prev = 0.0;
  for (double vds = 0.1; vds <= 0.81; vds += 0.1) {
    ThermalNetwork net = build_transistor(cfg.materials, cfg.thermal, 0.0,
                                          heat_q(3.2e-5, vds));
    ThermalSolution sol = solve(net);
    CHECK(sol.peak_k > prev);
    prev = sol.peak_k;
    CHECK(sol.peak_k >= cfg.thermal.reference_k);
  }
}

TEST_CASE("stack construction shares interface nodes") {
  Config cfg;
  ThermalSettings ts = cfg.thermal;
  ts.fan_in = 1;
  ts.gates_per_nanowire = 1;
  ThermalNetwork net = build_nanowire_stack(cfg.materials, ts, 0.0, 1.0);
  // three transistors, seven resistors each, no duplicated ports
  CHECK(net.transistor_channel.size() == 3);
  CHECK(net.resistors.size() == 3 * 7);
  CHECK(net.nodes.size() == 1 + 3 * 7);
}

TEST_CASE("bare stack properties and calibration") {
  Config cfg;
  double scalar = calibrate_heat_scalar(cfg.materials, cfg.thermal);
  ThermalNetwork net = build_nanowire_stack(cfg.materials, cfg.thermal, 0.0, scalar);
  ThermalSolution sol = solve(net);
  CHECK(sol.peak_k == Catch::Approx(cfg.thermal.calibration_peak_k).margin(1e-6));
  CHECK(sol.topmost_k == Catch::Approx(sol.peak_k)); // hottest at the top evaluate transistor
  // temperatures decrease monotonically from the hottest transistor to the
  // bottom reference
  for (std::size_t i = 1; i < sol.transistor_temp_k.size(); ++i)
    CHECK(sol.transistor_temp_k[i] >= sol.transistor_temp_k[i - 1]);
  CHECK(std::abs(sol.injected_w - sol.absorbed_w) / sol.injected_w < 1e-9);
  CHECK(sol.residual < 1e-9);
}

TEST_CASE("gate conduction scenario ordering") {
  Config cfg;
  double scalar = calibrate_heat_scalar(cfg.materials, cfg.thermal);
  auto peak = [&](double gate) {
    ThermalNetwork net = build_nanowire_stack(cfg.materials, cfg.thermal, gate, scalar);
    return solve(net).peak_k;
  };
  double p0 = peak(0.0), p05 = peak(0.5), p1 = peak(1.0);
  CHECK(p0 >= p05);
  CHECK(p05 >= p1);
  CHECK(p1 >= cfg.thermal.reference_k);
  // full gate conduction lands near the published bare-stack value
  CHECK(p1 > 480.0 * 0.85);
  CHECK(p1 < 480.0 * 1.15);
}

TEST_CASE("half-gate alternative reading") {
  Config cfg;
  cfg.thermal.half_gate = HalfGateMode::mid_temperature;
  double scalar = calibrate_heat_scalar(cfg.materials, cfg.thermal);
  ThermalNetwork net = build_nanowire_stack(cfg.materials, cfg.thermal, 0.5, scalar);
  ThermalSolution sol = solve(net);
  CHECK(sol.peak_k > cfg.thermal.reference_k);
}

TEST_CASE("power pillars never heat any node") {
  Config cfg;
  double scalar = calibrate_heat_scalar(cfg.materials, cfg.thermal);
  ThermalNetwork bare = build_nanowire_stack(cfg.materials, cfg.thermal, 0.0, scalar);
  ThermalSolution sb = solve(bare);
  ThermalNetwork with = build_nanowire_stack(cfg.materials, cfg.thermal, 0.0, scalar);
  attach_hdpp(with, cfg.materials, cfg.thermal);
  ThermalSolution sw = solve(with);
  for (std::size_t i = 0; i < sb.transistor_temp_k.size(); ++i)
    CHECK(sw.transistor_temp_k[i] <= sb.transistor_temp_k[i] + 1e-9);

  // with an extremely long bridge the pillar path vanishes
  ThermalNetwork far = build_nanowire_stack(cfg.materials, cfg.thermal, 0.0, scalar);
  attach_hdpp(far, cfg.materials, cfg.thermal, 10000000);
  ThermalSolution sf = solve(far);
  CHECK(sf.peak_k == Catch::Approx(sb.peak_k).epsilon(1e-3));
}

TEST_CASE("heat extraction junctions") {
  Config cfg;
  double scalar = calibrate_heat_scalar(cfg.materials, cfg.thermal);

  // empty position list leaves the network unchanged
  ThermalNetwork net = build_nanowire_stack(cfg.materials, cfg.thermal, 0.0, scalar);
  std::size_t nodes = net.nodes.size(), res = net.resistors.size();
  attach_hej(net, cfg.materials, cfg.thermal, {});
  CHECK(net.nodes.size() == nodes);
  CHECK(net.resistors.size() == res);

  CHECK_THROWS_AS(attach_hej(net, cfg.materials, cfg.thermal, {99}), std::out_of_range);

  // junction positions default to the evaluate transistor of each gate
  auto pos = default_hej_positions(cfg.thermal, 2);
  REQUIRE(pos.size() == 2);
  CHECK(pos[0] == 20);
  CHECK(pos[1] == 10);

  ThermalNetwork bare = build_nanowire_stack(cfg.materials, cfg.thermal, 0.0, scalar);
  ThermalSolution sb = solve(bare);
  ThermalNetwork h = build_nanowire_stack(cfg.materials, cfg.thermal, 0.0, scalar);
  attach_hdpp(h, cfg.materials, cfg.thermal);
  attach_hej(h, cfg.materials, cfg.thermal, {20});
  ThermalSolution sh = solve(h);
  // the previously hottest site cools by at least 85%
  CHECK((sb.topmost_k - sh.topmost_k) / sb.topmost_k >= 0.85);
  for (std::size_t i = 0; i < sb.transistor_temp_k.size(); ++i)
    CHECK(sh.transistor_temp_k[i] <= sb.transistor_temp_k[i] + 1e-9);
}

TEST_CASE("lateral dissipation switch") {
  Config cfg;
  cfg.thermal.lateral_ild = true;
  double scalar = calibrate_heat_scalar(cfg.materials, cfg.thermal);
  ThermalNetwork net = build_nanowire_stack(cfg.materials, cfg.thermal, 0.0, scalar);
  ThermalSolution sol = solve(net);
  CHECK(sol.peak_k == Catch::Approx(cfg.thermal.calibration_peak_k).margin(1e-6));
}
