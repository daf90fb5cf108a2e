#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "vnfab/designs/cla.hpp"
#include "vnfab/designs/wisp.hpp"
#include "vnfab/layout.hpp"

using namespace vnfab;
using namespace vnfab::layout;

namespace {

dynlogic::Netlist two_gate_netlist() {
  dynlogic::Netlist nl;
  nl.input("a");
  nl.input("b");
  nl.nand(0, nl.net("x"), {nl.find("a"), nl.find("b")});
  nl.nand(1, nl.net("y"), {nl.find("x")});
  return nl;
}

} // namespace

TEST_CASE("two-gate netlist occupies one logic nanowire plus its quota") {
  Config cfg;
  dynlogic::Netlist nl = two_gate_netlist();
  LayoutPlan plan = place(nl, cfg.rules);
  CHECK(plan.gates_placed == 2);
  CHECK(plan.logic_nanowires == 1);
  CHECK(plan.signal_nanowires == 1); // 1:1 interleave
  CHECK(plan.x_pitches > 0);
  CHECK(area_um2(plan, cfg.rules) > 0.0);
}

TEST_CASE("empty netlist yields an empty plan") {
  Config cfg;
  dynlogic::Netlist nl;
  LayoutPlan plan = place(nl, cfg.rules);
  CHECK(plan.empty());
  CHECK(plan.x_pitches == 0);
  CHECK(area_um2(plan, cfg.rules) == 0.0);
}

TEST_CASE("gate conservation") {
  Config cfg;
  for (int width : {4, 8, 16}) {
    designs::ClaDesign d = designs::gen_cla(width);
    LayoutPlan plan = place(d.netlist, cfg.rules);
    CHECK(plan.gates_placed == d.netlist.gate_count());
    int total = std::accumulate(plan.gates_per_slot.begin(), plan.gates_per_slot.end(), 0);
    CHECK(static_cast<std::size_t>(total) == plan.gates_placed);
    // every slot sits on a nanowire, two slots per wire
    CHECK(plan.logic_nanowires ==
          (plan.gate_slots + cfg.rules.gates_per_nanowire - 1) / cfg.rules.gates_per_nanowire);
  }
}

TEST_CASE("fan-in over the usable limit is rejected") {
  Config cfg;
  dynlogic::Netlist nl;
  std::vector<int> ins;
  for (int i = 0; i < 9; ++i) ins.push_back(nl.input("i" + std::to_string(i)));
  nl.nand(0, nl.net("y"), ins); // nine electrical inputs, one slot is the junction's
  CHECK_THROWS_AS(place(nl, cfg.rules), FanInError);
}

TEST_CASE("area monotonicity") {
  Config cfg;
  double a4 = area_um2(place(designs::gen_cla(4).netlist, cfg.rules), cfg.rules);
  double a8 = area_um2(place(designs::gen_cla(8).netlist, cfg.rules), cfg.rules);
  double a16 = area_um2(place(designs::gen_cla(16).netlist, cfg.rules), cfg.rules);
  CHECK(a4 < a8);
  CHECK(a8 < a16);

  DesignRules wider = cfg.rules;
  wider.nanowire_pitch_nm *= 2.0;
  double a4w = area_um2(place(designs::gen_cla(4).netlist, wider), wider);
  CHECK(a4w == Catch::Approx(4.0 * a4)); // doubling pitch quadruples raw area
}

TEST_CASE("overhead calibration hits the anchor") {
  Config cfg;
  designs::ClaDesign anchor = designs::gen_cla(4);
  DesignRules rules = cfg.rules;
  rules.overhead_factor = calibrate_overhead(anchor.netlist, rules, 0.76);
  CHECK(area_um2(place(anchor.netlist, rules), rules) == Catch::Approx(0.76).margin(1e-9));
}

TEST_CASE("identity sweep reproduces the baseline exactly") {
  Config cfg;
  designs::ClaDesign d = designs::gen_cla(4);
  double base = area_um2(place(d.netlist, cfg.rules), cfg.rules);
  auto rows = sensitivity_sweep(d.netlist, cfg.rules, SweepAxis::spacing,
                                {cfg.rules.nanowire_spacing_nm});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].area_quadratic_um2 == Catch::Approx(base).epsilon(1e-12));
  CHECK(rows[0].area_linear_um2 == Catch::Approx(base).epsilon(1e-12));
}

TEST_CASE("spacing sweep reports both scaling models") {
  Config cfg;
  designs::ClaDesign d = designs::gen_cla(4);
  auto rows = sensitivity_sweep(d.netlist, cfg.rules, SweepAxis::spacing, {16.0, 32.0, 48.0});
  REQUIRE(rows.size() == 3);
  // tripling the 16 nm spacing doubles the pitch: linear model 2x, quadratic 4x
  CHECK(rows[2].area_linear_um2 / rows[0].area_linear_um2 == Catch::Approx(2.0));
  CHECK(rows[2].area_quadratic_um2 / rows[0].area_quadratic_um2 == Catch::Approx(4.0));
}

TEST_CASE("feature-size sweep tracks the pitch") {
  Config cfg;
  designs::ClaDesign d = designs::gen_cla(4);
  auto rows = sensitivity_sweep(d.netlist, cfg.rules, SweepAxis::feature_size, {16.0, 22.0, 32.0});
  CHECK(rows[1].area_linear_um2 / rows[0].area_linear_um2 == Catch::Approx(22.0 / 16.0));
  CHECK(rows[2].area_linear_um2 / rows[0].area_linear_um2 == Catch::Approx(2.0));
}

TEST_CASE("aspect-ratio sweep halves the gates per nanowire") {
  Config cfg;
  designs::ClaDesign d = designs::gen_cla(4);
  auto rows = sensitivity_sweep(d.netlist, cfg.rules, SweepAxis::aspect_ratio, {54.0, 27.0});
  REQUIRE(rows.size() == 2);
  // half-height nanowires hold one gate slot instead of two
  CHECK(rows[1].logic_nanowires >= 2 * rows[0].logic_nanowires - 1);
  CHECK(rows[1].area_quadratic_um2 > rows[0].area_quadratic_um2);
}

TEST_CASE("site grid is consistent with the wire counts") {
  Config cfg;
  designs::ClaDesign d = designs::gen_cla(8);
  LayoutPlan plan = place(d.netlist, cfg.rules);
  int logic = 0, signal = 0;
  for (auto k : plan.core_sites) {
    if (k == SiteKind::logic) ++logic;
    if (k == SiteKind::signal) ++signal;
  }
  CHECK(logic == plan.logic_nanowires);
  CHECK(signal == plan.signal_nanowires);
  CHECK(plan.x_pitches == plan.core_x + 2 * cfg.rules.block_margin_pitches);
  CHECK(plan.hdpp_pillars >= 1);
}
