#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnfab/config.hpp"
#include "vnfab/dynlogic.hpp"

// Maps netlists onto the vertical-nanowire grid and estimates footprint
// area.
//
// Packing model: each NAND term is a transistor stack of fan-in + 2 devices
// (inputs plus the two clock transistors); a latch contributes its mux and
// feedback gates (8 devices). Stacks pack into gate slots of up to
// max_usable_fan_in + 3 devices (a full stage: nine stack positions, one of
// which is reserved for the heat junction, plus two clock devices), members
// of one compound packed adjacently. A logic nanowire carries
// gates_per_nanowire slots; signal nanowires interleave at the configured
// ratio; the block periphery adds a margin ring that carries the power
// pillars and I/O landing sites. Area = footprint * pitch^2 * overhead,
// with the overhead factor calibrated once on a reference design.

namespace vnfab::layout {

enum class SiteKind : std::uint8_t { empty, logic, signal, hdpp };

struct LayoutPlan {
  int core_x = 0, core_y = 0;      // core grid, pitches
  int x_pitches = 0, y_pitches = 0; // footprint including the margin ring
  int logic_nanowires = 0;
  int signal_nanowires = 0;
  int hdpp_pillars = 0;
  int gate_slots = 0;
  std::size_t gates_placed = 0;        // NAND terms + latch primitive gates
  std::vector<int> gates_per_slot;     // conservation bookkeeping
  std::vector<SiteKind> core_sites;    // row-major core grid
  double overhead_factor = 1.0;

  bool empty() const { return gates_placed == 0; }
};

class FanInError : public std::runtime_error {
public:
  explicit FanInError(const std::string& m) : std::runtime_error(m) {}
};

inline int slot_capacity_devices(const DesignRules& r) { return r.max_usable_fan_in + 3; }

// Greedy row-major assignment. Gates of one compound stay adjacent (they
// share an output and are packed consecutively); small gate pairs such as
// dynamic buffers share a slot when they fit.
inline LayoutPlan place(const dynlogic::Netlist& nl, const DesignRules& rules) {
  rules.validate();
  LayoutPlan plan;
  plan.overhead_factor = rules.overhead_factor;

  const int cap = slot_capacity_devices(rules);
  int slot_fill = -1; // devices in the currently open slot; -1 = none
  auto open_slot = [&]() {
    plan.gates_per_slot.push_back(0);
    slot_fill = 0;
  };
  auto pack_gate = [&](int devices) {
    if (slot_fill < 0 || slot_fill + devices > cap) open_slot();
    slot_fill += devices;
    ++plan.gates_per_slot.back();
    ++plan.gates_placed;
  };

  for (const auto& g : nl.compounds()) {
    for (int tid : g.term_ids) {
      const auto& t = nl.terms[static_cast<std::size_t>(tid)];
      int fi = static_cast<int>(t.inputs.size());
      if (fi > rules.max_usable_fan_in)
        throw FanInError("gate '" + nl.nets[static_cast<std::size_t>(t.output)].name +
                         "' has fan-in " + std::to_string(fi) + " > usable " +
                         std::to_string(rules.max_usable_fan_in));
      pack_gate(fi + 2);
    }
  }
  for (const auto& l : nl.latches) {
    (void)l;
    pack_gate(4); // 2:1 multiplexer gate
    pack_gate(4); // feedback gate
  }

  plan.gate_slots = static_cast<int>(plan.gates_per_slot.size());
  if (plan.gate_slots == 0) return plan; // empty netlist, zero footprint

  plan.logic_nanowires =
      (plan.gate_slots + rules.gates_per_nanowire - 1) / rules.gates_per_nanowire;
  plan.signal_nanowires = static_cast<int>(
      std::ceil(plan.logic_nanowires * rules.logic_signal_ratio));

  int core = plan.logic_nanowires + plan.signal_nanowires;
  plan.core_x = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(core))));
  plan.core_y = (core + plan.core_x - 1) / plan.core_x;
  const int w = rules.block_margin_pitches;
  plan.x_pitches = plan.core_x + 2 * w;
  plan.y_pitches = plan.core_y + 2 * w;

  // pillars sit on the periphery ring, one 2x2 pillar per spacing interval
  int perimeter = 2 * (plan.x_pitches + plan.y_pitches) - 4;
  plan.hdpp_pillars = std::max(1, perimeter / (2 * rules.hdpp_spacing_pitches));

  // interleaved site grid (logic and signal alternate, row-major)
  plan.core_sites.assign(static_cast<std::size_t>(plan.core_x) * plan.core_y, SiteKind::empty);
  int need_logic = plan.logic_nanowires, need_signal = plan.signal_nanowires;
  for (std::size_t i = 0; i < plan.core_sites.size(); ++i) {
    bool prefer_logic = (i % 2 == 0);
    if (prefer_logic && need_logic > 0) { plan.core_sites[i] = SiteKind::logic; --need_logic; }
    else if (need_signal > 0) { plan.core_sites[i] = SiteKind::signal; --need_signal; }
    else if (need_logic > 0) { plan.core_sites[i] = SiteKind::logic; --need_logic; }
  }
  return plan;
}

inline double area_um2(const LayoutPlan& plan, const DesignRules& rules) {
  if (plan.empty()) return 0.0;
  double pitch_um = rules.nanowire_pitch_nm * 1e-3;
  return plan.x_pitches * pitch_um * plan.y_pitches * pitch_um * plan.overhead_factor;
}

// Overhead factor such that the anchor netlist's area equals target_um2.
inline double calibrate_overhead(const dynlogic::Netlist& anchor, const DesignRules& rules,
                                 double target_um2) {
  DesignRules r = rules;
  r.overhead_factor = 1.0;
  LayoutPlan plan = place(anchor, r);
  double raw = area_um2(plan, r);
  if (!(raw > 0)) throw std::runtime_error("calibrate_overhead: anchor produces zero area");
  double f = target_um2 / raw;
  if (f < 1.0) f = 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// Manufacturing-sensitivity sweeps

enum class SweepAxis { spacing, feature_size, aspect_ratio };

inline SweepAxis axis_from_string(const std::string& s) {
  if (s == "spacing") return SweepAxis::spacing;
  if (s == "feature_size") return SweepAxis::feature_size;
  if (s == "aspect_ratio") return SweepAxis::aspect_ratio;
  throw std::invalid_argument("sweep axis must be spacing, feature_size or aspect_ratio");
}

struct SweepRow {
  double value = 0.0;
  double area_quadratic_um2 = 0.0; // isotropic pitch^2 scaling
  double area_linear_um2 = 0.0;    // reported linear-in-pitch alternative
  int logic_nanowires = 0;
  int x_pitches = 0, y_pitches = 0;
};

// Re-places and re-areas the netlist under each modified rule value. The
// spacing and feature-size axes report the area under both scaling models
// (the geometric quadratic one and the linear claim); the aspect-ratio axis
// switches gates-per-nanowire (tall wires hold two gate slots, half-height
// wires one) and doubles the nanowire width below aspect 20.
inline std::vector<SweepRow> sensitivity_sweep(const dynlogic::Netlist& nl, const DesignRules& rules,
                                               SweepAxis axis, const std::vector<double>& values) {
  std::vector<SweepRow> out;
  const double base_pitch = rules.nanowire_width_nm + rules.nanowire_spacing_nm;
  for (double v : values) {
    if (!(v > 0)) throw std::domain_error("sweep values must be positive");
    DesignRules r = rules;
    double pitch_ratio = 1.0;
    switch (axis) {
      case SweepAxis::spacing:
        pitch_ratio = (r.nanowire_width_nm + v) / base_pitch;
        r.nanowire_spacing_nm = v;
        break;
      case SweepAxis::feature_size:
        // lithographic feature scales both the wire and its spacing
        pitch_ratio = v / rules.nanowire_width_nm;
        r.nanowire_width_nm = v;
        r.nanowire_spacing_nm = rules.nanowire_spacing_nm * pitch_ratio;
        break;
      case SweepAxis::aspect_ratio: {
        r.gates_per_nanowire = v >= 40.0 ? 2 : 1;
        if (v < 20.0) {
          r.nanowire_width_nm = 2.0 * rules.nanowire_width_nm;
          pitch_ratio = (r.nanowire_width_nm + rules.nanowire_spacing_nm) / base_pitch;
        }
        break;
      }
    }
    r.nanowire_pitch_nm = rules.nanowire_pitch_nm * pitch_ratio;
    LayoutPlan plan = place(nl, r);
    SweepRow row;
    row.value = v;
    row.area_quadratic_um2 = area_um2(plan, r);
    // linear model: area grows with pitch, not pitch squared
    DesignRules rl = r;
    rl.nanowire_pitch_nm = rules.nanowire_pitch_nm;
    row.area_linear_um2 = area_um2(plan, rl) * pitch_ratio;
    row.logic_nanowires = plan.logic_nanowires;
    row.x_pitches = plan.x_pitches;
    row.y_pitches = plan.y_pitches;
    out.push_back(row);
  }
  return out;
}

} // namespace vnfab::layout
