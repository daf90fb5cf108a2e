#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vnfab/config.hpp"

// Transistor-granularity steady-state thermal resistance networks for logic
// nanowires, plus the architected heat-extraction features (power-pillar
// bridges and heat-extraction junctions). Solved as a nodal conductance
// system G*T = P with reference temperatures as Dirichlet constraints.

namespace vnfab::thermal {

// Thermal resistance of a slab: L / (k * A), inputs in nm and W/(m*K).
inline double resistor_from_geometry(double length_nm, double area_nm2, double conductivity) {
  if (!(length_nm > 0 && area_nm2 > 0 && conductivity > 0))
    throw std::domain_error("resistor_from_geometry: inputs must be > 0");
  return length_nm * 1e-9 / (conductivity * area_nm2 * 1e-18);
}

inline double material_resistance(const MaterialProps& m) {
  return resistor_from_geometry(m.length_nm, m.width_nm * m.thickness_nm, m.conductivity);
}

// Static heat approximation Q = Ids * Vds.
inline double heat_q(double i_ds, double v_ds) {
  if (i_ds < 0 || v_ds < 0) throw std::domain_error("heat_q: negative input");
  return i_ds * v_ds;
}

enum class NodeKind { internal, reference };

struct ThermalNode {
  int id = -1;
  std::string label;
  NodeKind kind = NodeKind::internal;
  double fixed_temp_k = 0.0; // reference nodes only
};

struct ThermalResistor {
  int node_a = -1;
  int node_b = -1;
  double resistance_k_per_w = 0.0;
};

struct HeatSource {
  int node = -1;
  double q_w = 0.0;
};

struct StackScenario {
  double gate_conduction = 0.0;    // 0, 0.5 or 1
  bool hdpp = false;
  std::vector<int> hej_positions;  // transistor indices, 1 = bottom
  int bridge_pitches = 10;
};

class ThermalNetwork {
public:
  std::vector<ThermalNode> nodes;
  std::vector<ThermalResistor> resistors;
  std::vector<HeatSource> sources;
  StackScenario scenario;

  // Stack bookkeeping: channel node of each transistor (1-based from the
  // substrate end) and the rail contact nodes.
  std::vector<int> transistor_channel;
  int rail_top = -1, rail_mid = -1, rail_bottom = -1;

  int add_node(const std::string& label, NodeKind kind = NodeKind::internal, double temp = 0.0) {
    if (kind == NodeKind::reference && !(temp >= 0))
      throw std::domain_error("reference node temperature must be >= 0 K");
    int id = static_cast<int>(nodes.size());
    nodes.push_back({id, label, kind, temp});
    return id;
  }

  void add_resistor(int a, int b, double r) {
    if (a == b) throw std::invalid_argument("thermal resistor: self loop at node " + nodes.at(a).label);
    if (!(r > 0)) throw std::domain_error("thermal resistor: resistance must be > 0");
    nodes.at(static_cast<std::size_t>(a));
    nodes.at(static_cast<std::size_t>(b));
    resistors.push_back({a, b, r});
  }

  void add_source(int node, double q) {
    if (q < 0) throw std::domain_error("heat source: q must be >= 0");
    nodes.at(static_cast<std::size_t>(node));
    sources.push_back({node, q});
  }

  // Every node must reach a reference node through the resistor graph.
  std::vector<int> unreachable_nodes() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (const auto& r : resistors) {
      adj[static_cast<std::size_t>(r.node_a)].push_back(r.node_b);
      adj[static_cast<std::size_t>(r.node_b)].push_back(r.node_a);
    }
    std::vector<char> seen(nodes.size(), 0);
    std::queue<int> q;
    for (const auto& n : nodes)
      if (n.kind == NodeKind::reference) { seen[static_cast<std::size_t>(n.id)] = 1; q.push(n.id); }
    while (!q.empty()) {
      int u = q.front(); q.pop();
      for (int v : adj[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(v)]) { seen[static_cast<std::size_t>(v)] = 1; q.push(v); }
    }
    std::vector<int> bad;
    for (const auto& n : nodes)
      if (!seen[static_cast<std::size_t>(n.id)]) bad.push_back(n.id);
    return bad;
  }
};

struct ThermalSolution {
  std::vector<double> temperature_k;       // per node
  std::vector<double> transistor_temp_k;   // channel temperature, index 0 = transistor 1 (bottom)
  double peak_k = 0.0;                     // max over transistor channels
  double average_k = 0.0;                  // mean over transistor channels
  double topmost_k = 0.0;                  // channel of the topmost transistor
  double injected_w = 0.0;
  double absorbed_w = 0.0;                 // into reference nodes
  double residual = 0.0;                   // relative nodal residual
};

// Direct sparse solve of the nodal system. Reference nodes enter as
// Dirichlet constraints; the reduced system is symmetric positive definite.
inline ThermalSolution solve(const ThermalNetwork& net) {
  auto bad = net.unreachable_nodes();
  if (!bad.empty()) {
    std::string msg = "thermal solve: nodes disconnected from every reference:";
    for (int id : bad) msg += " " + net.nodes[static_cast<std::size_t>(id)].label;
    throw std::runtime_error(msg);
  }

  const int n = static_cast<int>(net.nodes.size());
  std::vector<int> idx(static_cast<std::size_t>(n), -1);
  int m = 0;
  for (const auto& node : net.nodes)
    if (node.kind == NodeKind::internal) idx[static_cast<std::size_t>(node.id)] = m++;

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (const auto& r : net.resistors) {
    double g = 1.0 / r.resistance_k_per_w;
    int ia = idx[static_cast<std::size_t>(r.node_a)];
    int ib = idx[static_cast<std::size_t>(r.node_b)];
    if (ia >= 0) trips.emplace_back(ia, ia, g);
    if (ib >= 0) trips.emplace_back(ib, ib, g);
    if (ia >= 0 && ib >= 0) {
      trips.emplace_back(ia, ib, -g);
      trips.emplace_back(ib, ia, -g);
    } else if (ia >= 0) {
      rhs[ia] += g * net.nodes[static_cast<std::size_t>(r.node_b)].fixed_temp_k;
    } else if (ib >= 0) {
      rhs[ib] += g * net.nodes[static_cast<std::size_t>(r.node_a)].fixed_temp_k;
    }
  }
  for (const auto& s : net.sources) {
    int i = idx[static_cast<std::size_t>(s.node)];
    if (i >= 0) rhs[i] += s.q_w;
  }

  Eigen::SparseMatrix<double> G(m, m);
  G.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(G);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("thermal solve: factorization failed (singular system)");
  Eigen::VectorXd t = ldlt.solve(rhs);

  ThermalSolution sol;
  sol.temperature_k.resize(static_cast<std::size_t>(n));
  for (const auto& node : net.nodes) {
    int i = idx[static_cast<std::size_t>(node.id)];
    sol.temperature_k[static_cast<std::size_t>(node.id)] = (i >= 0) ? t[i] : node.fixed_temp_k;
  }

  // Conservation bookkeeping and residual on the full nodal equations.
  double denom = 0.0, num = 0.0;
  Eigen::VectorXd resid = G * t - rhs;
  num = resid.norm();
  denom = std::max(rhs.norm(), 1e-300);
  sol.residual = num / denom;
  for (const auto& s : net.sources) sol.injected_w += s.q_w;
  for (const auto& r : net.resistors) {
    const auto& na = net.nodes[static_cast<std::size_t>(r.node_a)];
    const auto& nb = net.nodes[static_cast<std::size_t>(r.node_b)];
    double ta = sol.temperature_k[static_cast<std::size_t>(r.node_a)];
    double tb = sol.temperature_k[static_cast<std::size_t>(r.node_b)];
    if (na.kind == NodeKind::reference && nb.kind != NodeKind::reference)
      sol.absorbed_w += (tb - ta) / r.resistance_k_per_w;
    else if (nb.kind == NodeKind::reference && na.kind != NodeKind::reference)
      sol.absorbed_w += (ta - tb) / r.resistance_k_per_w;
  }

  if (!net.transistor_channel.empty()) {
    for (int ch : net.transistor_channel)
      sol.transistor_temp_k.push_back(sol.temperature_k[static_cast<std::size_t>(ch)]);
    sol.peak_k = *std::max_element(sol.transistor_temp_k.begin(), sol.transistor_temp_k.end());
    sol.average_k = 0.0;
    for (double v : sol.transistor_temp_k) sol.average_k += v;
    sol.average_k /= static_cast<double>(sol.transistor_temp_k.size());
    sol.topmost_k = sol.transistor_temp_k.back();
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Stack construction

namespace detail {

struct FragmentPorts {
  int drain = -1;  // upper contact node
  int source = -1; // lower contact node
  int channel_drain = -1;
};

// One transistor, drain side up: Ti electrode, silicide, spacer, channel
// (drain-side heat source), spacer, silicide, Ti electrode. The gate branch
// leaves the drain-side channel node through the oxide and the electrode run.
inline FragmentPorts append_transistor(ThermalNetwork& net, const MaterialTable& mat,
                                       const ThermalSettings& ts, int index, int top_port,
                                       double gate_conduction) {
  const std::string p = "t" + std::to_string(index) + ".";
  FragmentPorts f;
  f.drain = top_port;
  int dsil = net.add_node(p + "drain_silicide");
  int dsp = net.add_node(p + "drain_spacer");
  f.channel_drain = net.add_node(p + "channel");
  int chs = net.add_node(p + "channel_source");
  int ssp = net.add_node(p + "source_spacer");
  int ssil = net.add_node(p + "source_silicide");
  f.source = net.add_node(p + "source");

  double r_ti = material_resistance(mat.drain_electrode);
  double r_sil = material_resistance(mat.drain_silicide);
  double r_sp = material_resistance(mat.spacer);
  double r_ch = material_resistance(mat.channel);
  net.add_resistor(f.drain, dsil, r_ti);
  net.add_resistor(dsil, dsp, r_sil);
  net.add_resistor(dsp, f.channel_drain, r_sp);
  net.add_resistor(f.channel_drain, chs, r_ch);
  net.add_resistor(chs, ssp, r_sp);
  net.add_resistor(ssp, ssil, r_sil);
  net.add_resistor(ssil, f.source, r_ti);

  if (gate_conduction > 0.0) {
    double mult = gate_conduction >= 1.0 ? 1.0 : 2.0; // 50% conduction = doubled resistance
    // heat crosses the thin oxide radially: thickness through the L x W face
    double r_ox = resistor_from_geometry(mat.gate_oxide.thickness_nm,
                                         mat.gate_oxide.length_nm * mat.gate_oxide.width_nm,
                                         mat.gate_oxide.conductivity);
    double r_el = resistor_from_geometry(ts.gate_electrode_run_nm,
                                         mat.gate_electrode.width_nm * mat.gate_electrode.thickness_nm,
                                         mat.gate_electrode.conductivity);
    int gox = net.add_node(p + "gate_oxide");
    int gc;
    if (ts.half_gate == HalfGateMode::mid_temperature && gate_conduction < 1.0) {
      // alternative 50% reading: nominal branch to a mid-temperature boundary
      mult = 1.0;
      gc = net.add_node(p + "gate_contact", NodeKind::reference,
                        ts.reference_k + (ts.calibration_peak_k - ts.reference_k) / 2.0);
    } else {
      gc = net.add_node(p + "gate_contact", NodeKind::reference, ts.reference_k);
    }
    net.add_resistor(f.channel_drain, gox, r_ox * mult);
    net.add_resistor(gox, gc, r_el * mult);
  }
  if (ts.lateral_ild) {
    int far = net.add_node(p + "ild_far", NodeKind::reference, ts.reference_k);
    net.add_resistor(f.channel_drain, far, material_resistance(mat.interlayer));
  }
  return f;
}

} // namespace detail

// Single-transistor network with reference contacts at drain, source and
// (per scenario) gate; heat source on the drain side of the channel.
inline ThermalNetwork build_transistor(const MaterialTable& mat, const ThermalSettings& ts,
                                       double gate_conduction, double q_w) {
  ThermalNetwork net;
  net.scenario.gate_conduction = gate_conduction;
  int top = net.add_node("drain_contact", NodeKind::reference, ts.reference_k);
  auto f = detail::append_transistor(net, mat, ts, 1, top, gate_conduction);
  // standalone device: source contact is also at reference
  net.nodes[static_cast<std::size_t>(f.source)].kind = NodeKind::reference;
  net.nodes[static_cast<std::size_t>(f.source)].fixed_temp_k = ts.reference_k;
  net.add_source(f.channel_drain, q_w);
  net.transistor_channel.push_back(f.channel_drain);
  return net;
}

// Logic-nanowire stack: gates_per_nanowire gates of (fan_in + 2) transistors
// each (inputs plus the two clock transistors), evaluate transistor at the
// hot end of each gate. GND rail contacts sit at the top and bottom of the
// nanowire, VDD mid-stack; only the bottom is tied to the substrate
// reference until pillar bridges are attached.
//
// Worst-case static dissipation: every transistor carries the on-current at
// v_ds = VDD / n_series, scaled by heat_scalar (see calibrate_heat_scalar).
inline ThermalNetwork build_nanowire_stack(const MaterialTable& mat, const ThermalSettings& ts,
                                           double gate_conduction, double heat_scalar = 1.0) {
  if (ts.fan_in < 1) throw ConfigError("build_nanowire_stack: fan_in must be >= 1");
  const int per_gate = ts.fan_in + 2;
  const int nt = per_gate * ts.gates_per_nanowire;
  const double q = heat_scalar * heat_q(ts.on_current_a, ts.vdd_v / per_gate);

  ThermalNetwork net;
  net.scenario.gate_conduction = gate_conduction;
  std::vector<int> ports(static_cast<std::size_t>(nt) + 1, -1);
  ports[static_cast<std::size_t>(nt)] = net.add_node("rail.gnd_top");
  for (int t = nt; t >= 1; --t) {
    auto f = detail::append_transistor(net, mat, ts, t, ports[static_cast<std::size_t>(t)],
                                       gate_conduction);
    ports[static_cast<std::size_t>(t - 1)] = f.source;
    net.add_source(f.channel_drain, q);
    net.transistor_channel.push_back(f.channel_drain);
  }
  std::reverse(net.transistor_channel.begin(), net.transistor_channel.end()); // index 0 = bottom
  net.rail_top = ports[static_cast<std::size_t>(nt)];
  net.rail_mid = ports[static_cast<std::size_t>(nt / 2)];
  net.rail_bottom = ports[0];
  net.nodes[static_cast<std::size_t>(net.rail_bottom)].label = "rail.gnd_bottom.substrate";
  net.nodes[static_cast<std::size_t>(net.rail_bottom)].kind = NodeKind::reference;
  net.nodes[static_cast<std::size_t>(net.rail_bottom)].fixed_temp_k = ts.reference_k;
  net.nodes[static_cast<std::size_t>(net.rail_mid)].label = "rail.vdd_mid";
  return net;
}

inline double bridge_resistance(const MaterialTable& mat, const ThermalSettings& ts, int pitches) {
  return resistor_from_geometry(pitches * ts.nanowire_pitch_nm,
                                mat.bridge.width_nm * mat.bridge.thickness_nm,
                                mat.bridge.conductivity);
}

// Tungsten bridges from the top and middle rail contacts to pillar nodes at
// reference temperature. The rail contact couples into the bridge through
// the configured access constriction.
inline void attach_hdpp(ThermalNetwork& net, const MaterialTable& mat, const ThermalSettings& ts,
                        int bridge_pitches = 0) {
  if (net.rail_top < 0 || net.rail_mid < 0)
    throw std::runtime_error("attach_hdpp: network has no rail contacts");
  int pitches = bridge_pitches > 0 ? bridge_pitches : ts.bridge_pitches;
  double r_b = bridge_resistance(mat, ts, pitches);
  auto hook = [&](int rail, const std::string& nm) {
    int c = net.add_node("hdpp." + nm + ".contact");
    int pil = net.add_node("hdpp." + nm + ".pillar", NodeKind::reference, ts.reference_k);
    net.add_resistor(rail, c, ts.rail_access_k_per_w);
    net.add_resistor(c, pil, r_b);
  };
  hook(net.rail_top, "top");
  hook(net.rail_mid, "mid");
  net.scenario.hdpp = true;
  net.scenario.bridge_pitches = pitches;
}

// Alumina heat-extraction junctions at the given transistor positions
// (1 = bottom of the stack), each bridged to a grounded pillar.
inline void attach_hej(ThermalNetwork& net, const MaterialTable& mat, const ThermalSettings& ts,
                       const std::vector<int>& positions, int bridge_pitches = 0) {
  int pitches = bridge_pitches > 0 ? bridge_pitches : ts.bridge_pitches;
  double r_b = bridge_resistance(mat, ts, pitches);
  double r_j = material_resistance(mat.heat_junction);
  for (int pos : positions) {
    if (pos < 1 || pos > static_cast<int>(net.transistor_channel.size()))
      throw std::out_of_range("attach_hej: transistor position " + std::to_string(pos) +
                              " out of range");
    int ch = net.transistor_channel[static_cast<std::size_t>(pos - 1)];
    std::string nm = "hej" + std::to_string(pos);
    int j = net.add_node(nm + ".junction");
    int pil = net.add_node(nm + ".pillar", NodeKind::reference, ts.reference_k);
    net.add_resistor(ch, j, r_j);
    net.add_resistor(j, pil, r_b);
    net.scenario.hej_positions.push_back(pos);
  }
  net.scenario.bridge_pitches = pitches;
}

// The two hottest positions: the evaluate transistor at the top of each gate
// segment.
inline std::vector<int> default_hej_positions(const ThermalSettings& ts, int count) {
  const int per_gate = ts.fan_in + 2;
  std::vector<int> pos;
  for (int g = ts.gates_per_nanowire; g >= 1 && static_cast<int>(pos.size()) < count; --g)
    pos.push_back(g * per_gate);
  return pos;
}

// Single documented calibration: a global scalar on the per-transistor heat,
// fitted once so the bare-stack gate=0 peak matches the configured value.
// All other scenarios reuse the same scalar.
inline double calibrate_heat_scalar(const MaterialTable& mat, const ThermalSettings& ts) {
  ThermalNetwork net = build_nanowire_stack(mat, ts, 0.0, 1.0);
  ThermalSolution sol = solve(net);
  double rise = sol.peak_k - ts.reference_k;
  if (!(rise > 0)) throw std::runtime_error("calibrate_heat_scalar: degenerate stack");
  return (ts.calibration_peak_k - ts.reference_k) / rise;
}

// Convenience: build a full scenario (stack + features) with the calibrated
// scalar and solve it.
inline ThermalNetwork build_scenario(const MaterialTable& mat, const ThermalSettings& ts,
                                     const StackScenario& sc, double heat_scalar) {
  ThermalNetwork net = build_nanowire_stack(mat, ts, sc.gate_conduction, heat_scalar);
  if (sc.hdpp) attach_hdpp(net, mat, ts, sc.bridge_pitches);
  if (!sc.hej_positions.empty()) attach_hej(net, mat, ts, sc.hej_positions, sc.bridge_pitches);
  net.scenario.gate_conduction = sc.gate_conduction;
  return net;
}

} // namespace vnfab::thermal
