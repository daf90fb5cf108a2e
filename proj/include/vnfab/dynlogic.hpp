#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

// Phase-accurate Boolean simulator for the fabric's clocked dynamic circuit
// style: NAND terms gated by PRE/EVA/HOLD phases, compound AND-of-NAND wired
// outputs, dual- and single-rail cascades, latches with slot-granular
// feedback. Precharge drives an output to logical 0; evaluation produces the
// NAND truth function; a compound output is the AND of its member NANDs.

namespace vnfab::dynlogic {

enum class Logic : std::uint8_t { zero = 0, one = 1, floating = 2 };

inline Logic from_bool(bool b) { return b ? Logic::one : Logic::zero; }
inline bool to_bool(Logic v) {
  if (v == Logic::floating) throw std::logic_error("to_bool on floating value");
  return v == Logic::one;
}
inline char logic_char(Logic v) { return v == Logic::floating ? 'X' : (v == Logic::one ? '1' : '0'); }

enum class Phase : std::uint8_t { pre, eva, hold, idle };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::pre: return "PRE";
    case Phase::eva: return "EVA";
    case Phase::hold: return "HOLD";
    default: return "IDLE";
  }
}

enum class DriverKind : std::uint8_t { gate_output, primary_input, rail };

class PhaseError : public std::runtime_error {
public:
  explicit PhaseError(const std::string& m) : std::runtime_error(m) {}
};

class NetlistError : public std::runtime_error {
public:
  explicit NetlistError(const std::string& m) : std::runtime_error(m) {}
};

struct Net {
  int id = -1;
  std::string name;
  DriverKind kind = DriverKind::gate_output;
  Logic rail_value = Logic::zero;      // rails only
  int producer_stage = -1;             // gate_output nets
  bool produced_by_latch = false;
  bool feedback = false;               // declared feedback net, exempt from ordering checks
  std::optional<Logic> init;           // pre-seeded value, readable until first drive
};

struct NandTerm {
  int id = -1;
  int stage = 0;
  int output = -1;
  std::vector<int> inputs; // fan-in 1..9
};

struct LatchElem {
  int id = -1;
  int stage = 0;
  int out = -1;
  int out_n = -1;
  int sel = -1;
  int data = -1;
  bool init_state = false;
};

// A compound gate is the set of NAND terms sharing one output net.
struct CompoundGate {
  int output = -1;
  int stage = 0;
  std::vector<int> term_ids;
};

inline constexpr int kMaxFanIn = 9;

class Netlist {
public:
  std::vector<Net> nets;
  std::vector<NandTerm> terms;
  std::vector<LatchElem> latches;
  std::vector<int> primary_inputs;
  std::vector<int> primary_outputs;
  std::map<std::string, int> by_name;
  std::map<int, int> stage_start_override; // stage -> first active slot
  int num_stages = 0;

  int net(const std::string& name, DriverKind kind = DriverKind::gate_output) {
    auto it = by_name.find(name);
    if (it != by_name.end()) return it->second;
    int id = static_cast<int>(nets.size());
    Net n;
    n.id = id;
    n.name = name;
    n.kind = kind;
    nets.push_back(n);
    by_name[name] = id;
    return id;
  }

  int find(const std::string& name) const {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw NetlistError("unknown net: " + name);
    return it->second;
  }

  int input(const std::string& name) {
    int id = net(name, DriverKind::primary_input);
    nets[static_cast<std::size_t>(id)].kind = DriverKind::primary_input;
    primary_inputs.push_back(id);
    return id;
  }

  int rail(const std::string& name, Logic value) {
    int id = net(name, DriverKind::rail);
    nets[static_cast<std::size_t>(id)].kind = DriverKind::rail;
    nets[static_cast<std::size_t>(id)].rail_value = value;
    return id;
  }

  void mark_output(int id) { primary_outputs.push_back(id); }

  int nand(int stage, int output, std::vector<int> inputs) {
    if (inputs.empty() || static_cast<int>(inputs.size()) > kMaxFanIn)
      throw NetlistError("nand '" + nets.at(static_cast<std::size_t>(output)).name +
                         "': fan-in must be 1.." + std::to_string(kMaxFanIn));
    Net& out = nets.at(static_cast<std::size_t>(output));
    if (out.kind != DriverKind::gate_output)
      throw NetlistError("nand output '" + out.name + "' is not a gate-output net");
    if (out.producer_stage >= 0 && out.producer_stage != stage)
      throw NetlistError("compound members of '" + out.name + "' must share one stage");
    if (out.produced_by_latch)
      throw NetlistError("net '" + out.name + "' already driven by a latch");
    out.producer_stage = stage;
    NandTerm t;
    t.id = static_cast<int>(terms.size());
    t.stage = stage;
    t.output = output;
    t.inputs = std::move(inputs);
    terms.push_back(t);
    num_stages = std::max(num_stages, stage + 1);
    return t.id;
  }

  int latch(int stage, int out, int out_n, int sel, int data, bool init_state = false) {
    for (int o : {out, out_n}) {
      Net& n = nets.at(static_cast<std::size_t>(o));
      if (n.producer_stage >= 0) throw NetlistError("latch output '" + n.name + "' already driven");
      n.producer_stage = stage;
      n.produced_by_latch = true;
    }
    LatchElem l;
    l.id = static_cast<int>(latches.size());
    l.stage = stage;
    l.out = out;
    l.out_n = out_n;
    l.sel = sel;
    l.data = data;
    l.init_state = init_state;
    latches.push_back(l);
    num_stages = std::max(num_stages, stage + 1);
    return l.id;
  }

  // Dynamic buffer: a 1-input NAND pair carrying a dual-rail signal forward
  // one stage (each rail inverted once from the opposite rail).
  void buffer_pair(int stage, int out, int out_n, int in, int in_n) {
    nand(stage, out, {in_n});
    nand(stage, out_n, {in});
  }

  void set_init(int net_id, Logic v) { nets.at(static_cast<std::size_t>(net_id)).init = v; }

  void set_feedback(int net_id) { nets.at(static_cast<std::size_t>(net_id)).feedback = true; }

  std::vector<CompoundGate> compounds() const {
    std::map<int, CompoundGate> by_out;
    for (const auto& t : terms) {
      auto& g = by_out[t.output];
      g.output = t.output;
      g.stage = t.stage;
      g.term_ids.push_back(t.id);
    }
    std::vector<CompoundGate> out;
    out.reserve(by_out.size());
    for (auto& [k, v] : by_out) out.push_back(std::move(v));
    return out;
  }

  // Structural invariants: fan-in bounds hold by construction; here we check
  // that term-to-term dataflow only goes forward (latch feedback is the
  // declared exception) and that compound members share a stage.
  void validate() const {
    for (const auto& t : terms) {
      for (int in : t.inputs) {
        const Net& n = nets.at(static_cast<std::size_t>(in));
        if (n.kind != DriverKind::gate_output) continue;
        if (n.producer_stage < 0)
          throw NetlistError("net '" + n.name + "' read by a term but never driven");
        if (!n.produced_by_latch && !n.feedback && n.producer_stage >= t.stage)
          throw NetlistError("term at stage " + std::to_string(t.stage) + " reads '" + n.name +
                             "' from stage " + std::to_string(n.producer_stage) +
                             " (only earlier stages or latch outputs are legal)");
      }
    }
    for (const auto& l : latches) {
      for (int in : {l.sel, l.data}) {
        const Net& n = nets.at(static_cast<std::size_t>(in));
        if (n.kind == DriverKind::gate_output && n.producer_stage < 0)
          throw NetlistError("latch reads undriven net '" + n.name + "'");
      }
    }
  }

  std::size_t gate_count() const { return terms.size() + 2 * latches.size(); }
};

// ---------------------------------------------------------------------------
// Clock-phase schedule

enum class RailMode { dual, single };

// Dual-rail: a 3-slot cycle, stage s rotated by s (PRE, EVA, HOLD). Single
// rail: two overlapping 3-phase sequences of 2 slots each over a 6-slot
// cycle, supporting the two-stage cascades it is used for. Stages are
// dormant before their start slot so a pipeline fills front to back; rings
// seed their nets and override the start.
struct PhaseSchedule {
  RailMode rail = RailMode::dual;
  int num_stages = 0;
  std::map<int, int> start_override;

  static PhaseSchedule dual_rail(int num_stages) {
    PhaseSchedule s;
    s.rail = RailMode::dual;
    s.num_stages = num_stages;
    return s;
  }

  static PhaseSchedule single_rail(int num_stages) {
    if (num_stages > 2)
      throw NetlistError("single-rail schedule supports at most 2 cascaded stages");
    PhaseSchedule s;
    s.rail = RailMode::single;
    s.num_stages = num_stages;
    return s;
  }

  int cycle_slots() const { return rail == RailMode::dual ? 3 : 6; }

  int start_slot(int stage) const {
    auto it = start_override.find(stage);
    if (it != start_override.end()) return it->second;
    return rail == RailMode::dual ? stage : 2 * stage;
  }

  bool dormant(int stage, int slot) const { return slot < start_slot(stage); }

  Phase phase(int stage, int slot) const {
    if (rail == RailMode::dual) {
      int r = ((slot - stage) % 3 + 3) % 3;
      return r == 0 ? Phase::pre : (r == 1 ? Phase::eva : Phase::hold);
    }
    int r = ((slot - 2 * stage) % 6 + 6) % 6;
    return r < 2 ? Phase::pre : (r < 4 ? Phase::eva : Phase::hold);
  }

  // Slot at which the n-th token's value appears on a stage-s output (its
  // evaluation slot), for streaming one input vector per cycle.
  int token_eval_slot(int stage, int token) const {
    if (rail == RailMode::dual) return 3 * token + stage + 1;
    return 6 * token + 2 * stage + 2;
  }
};

// ---------------------------------------------------------------------------
// Simulation

struct SimTrace {
  std::vector<std::vector<Logic>> values; // [slot][net]
  int slots = 0;

  Logic at(int slot, int net) const {
    return values.at(static_cast<std::size_t>(slot)).at(static_cast<std::size_t>(net));
  }
};

using InputVector = std::map<std::string, Logic>;

class Simulator {
public:
  Simulator(const Netlist& nl, PhaseSchedule sched)
      : nl_(nl), sched_(std::move(sched)), value_(nl.nets.size(), Logic::floating),
        latch_state_(nl.latches.size(), false) {
    nl_.validate();
    compounds_ = nl_.compounds();
    by_stage_.resize(static_cast<std::size_t>(nl_.num_stages));
    latches_by_stage_.resize(static_cast<std::size_t>(nl_.num_stages));
    for (std::size_t i = 0; i < compounds_.size(); ++i)
      by_stage_[static_cast<std::size_t>(compounds_[i].stage)].push_back(i);
    for (std::size_t i = 0; i < nl_.latches.size(); ++i)
      latches_by_stage_[static_cast<std::size_t>(nl_.latches[i].stage)].push_back(i);
    for (const auto& n : nl_.nets) {
      if (n.kind == DriverKind::rail) value_[static_cast<std::size_t>(n.id)] = n.rail_value;
      if (n.init) value_[static_cast<std::size_t>(n.id)] = *n.init;
    }
    for (const auto& l : nl_.latches) {
      latch_state_[static_cast<std::size_t>(l.id)] = l.init_state;
      value_[static_cast<std::size_t>(l.out)] = from_bool(l.init_state);
      value_[static_cast<std::size_t>(l.out_n)] = from_bool(!l.init_state);
    }
    if (sched_.num_stages == 0) sched_.num_stages = nl_.num_stages;
    for (const auto& [stage, slot] : nl_.stage_start_override) sched_.start_override[stage] = slot;
  }

  const Netlist& netlist() const { return nl_; }
  const PhaseSchedule& schedule() const { return sched_; }

  void set_inputs(const InputVector& in) {
    for (const auto& [name, v] : in) {
      int id = nl_.find(name);
      if (nl_.nets[static_cast<std::size_t>(id)].kind != DriverKind::primary_input)
        throw NetlistError("'" + name + "' is not a primary input");
      value_[static_cast<std::size_t>(id)] = v;
    }
  }

  // Advance one slot: precharge, evaluate, hold or float every stage's
  // outputs according to the schedule.
  void step(int slot) {
    for (int stage = 0; stage < nl_.num_stages; ++stage) {
      if (sched_.dormant(stage, slot)) continue;
      Phase ph = sched_.phase(stage, slot);
      switch (ph) {
        case Phase::pre:
          for (std::size_t gi : by_stage_[static_cast<std::size_t>(stage)])
            value_[static_cast<std::size_t>(compounds_[gi].output)] = Logic::zero;
          break;
        case Phase::eva:
          for (std::size_t gi : by_stage_[static_cast<std::size_t>(stage)])
            evaluate_compound(compounds_[gi], slot);
          for (std::size_t li : latches_by_stage_[static_cast<std::size_t>(stage)])
            evaluate_latch(nl_.latches[li], slot);
          break;
        case Phase::hold:
          break;
        case Phase::idle:
          for (std::size_t gi : by_stage_[static_cast<std::size_t>(stage)])
            value_[static_cast<std::size_t>(compounds_[gi].output)] = Logic::floating;
          break;
      }
    }
  }

  // Run `slots` steps, applying one input vector per clock cycle (the last
  // vector is held once the stream is exhausted).
  SimTrace run(const std::vector<InputVector>& input_stream, int slots) {
    SimTrace trace;
    trace.slots = slots;
    trace.values.reserve(static_cast<std::size_t>(slots));
    const int cycle = sched_.cycle_slots();
    for (int slot = 0; slot < slots; ++slot) {
      if (!input_stream.empty()) {
        std::size_t v = static_cast<std::size_t>(slot / cycle);
        if (v >= input_stream.size()) v = input_stream.size() - 1;
        set_inputs(input_stream[v]);
      }
      step(slot);
      trace.values.push_back(value_);
    }
    return trace;
  }

  Logic value(int net) const { return value_.at(static_cast<std::size_t>(net)); }
  Logic value(const std::string& name) const { return value(nl_.find(name)); }
  bool latch_state(int latch_id) const { return latch_state_.at(static_cast<std::size_t>(latch_id)); }

private:
  Logic read(int net_id, int reader_stage, int slot) const {
    const Net& n = nl_.nets[static_cast<std::size_t>(net_id)];
    Logic v = value_[static_cast<std::size_t>(net_id)];
    switch (n.kind) {
      case DriverKind::rail:
        return n.rail_value;
      case DriverKind::primary_input:
        if (v == Logic::floating)
          throw PhaseError("primary input '" + n.name + "' undriven at slot " + std::to_string(slot));
        return v;
      case DriverKind::gate_output:
        break;
    }
    if (n.produced_by_latch) return v; // storage output, defined from t = 0
    if (sched_.dormant(n.producer_stage, slot)) {
      if (n.init) return v;
      throw PhaseError("stage " + std::to_string(reader_stage) + " reads floating net '" + n.name +
                       "' (producer stage " + std::to_string(n.producer_stage) +
                       " not started) at slot " + std::to_string(slot));
    }
    Phase ph = sched_.phase(n.producer_stage, slot);
    if (ph != Phase::hold)
      throw PhaseError("stage " + std::to_string(reader_stage) + " in EVA reads net '" + n.name +
                       "' while its stage " + std::to_string(n.producer_stage) + " is in " +
                       phase_name(ph) + " at slot " + std::to_string(slot) + " (schedule bug)");
    if (v == Logic::floating)
      throw PhaseError("net '" + n.name + "' is floating during its hold window at slot " +
                       std::to_string(slot));
    return v;
  }

  void evaluate_compound(const CompoundGate& g, int slot) {
    bool out = true; // AND over member NANDs
    for (int tid : g.term_ids) {
      const NandTerm& t = nl_.terms[static_cast<std::size_t>(tid)];
      bool all = true;
      for (int in : t.inputs)
        if (!to_bool(read(in, t.stage, slot))) { all = false; break; }
      out = out && !all;
      if (!out) break;
    }
    value_[static_cast<std::size_t>(g.output)] = from_bool(out);
  }

  void evaluate_latch(const LatchElem& l, int slot) {
    Logic sel = read(l.sel, l.stage, slot);
    if (to_bool(sel)) {
      Logic d = read(l.data, l.stage, slot);
      latch_state_[static_cast<std::size_t>(l.id)] = to_bool(d);
    }
    bool s = latch_state_[static_cast<std::size_t>(l.id)];
    value_[static_cast<std::size_t>(l.out)] = from_bool(s);
    value_[static_cast<std::size_t>(l.out_n)] = from_bool(!s);
  }

  Netlist nl_;
  PhaseSchedule sched_;
  std::vector<Logic> value_;
  std::vector<bool> latch_state_;
  std::vector<CompoundGate> compounds_;
  std::vector<std::vector<std::size_t>> by_stage_;
  std::vector<std::vector<std::size_t>> latches_by_stage_;
};

// ---------------------------------------------------------------------------
// Electrical estimators

// Elmore delay of an m-deep series stack driving c_load:
// tau = sum_{i=1..m} i*r_on*c_node + m*r_on*c_load.
inline double stack_delay(int m, double r_on, double c_load, double c_node) {
  if (m < 1) throw std::domain_error("stack_delay: fan-in must be >= 1");
  double tau = 0.0;
  for (int i = 1; i <= m; ++i) tau += i * r_on * c_node;
  return tau + m * r_on * c_load;
}

// Post-transition floating-node voltage under a full-swing aggressor;
// shielding is modeled by folding the shield capacitance into c_self.
inline double charge_share(double v0, double c_self, double c_couple) {
  if (c_self < 0 || c_couple < 0) throw std::domain_error("charge_share: capacitance must be >= 0");
  if (c_self + c_couple == 0.0) return v0;
  return v0 * c_self / (c_self + c_couple);
}

// ---------------------------------------------------------------------------
// Line-oriented netlist interchange
//
//   # comment
//   input a a_n
//   output s cout
//   rail0 gnd
//   rail1 vdd
//   nand <stage> <out> <in>...          (repeat an output net for compounds)
//   buffer <stage> <out> <out_n> <in> <in_n>
//   latch <stage> <out> <out_n> <sel> <data> [init0|init1]
//   init <net> <0|1>
//   start <stage> <slot>

inline Netlist parse_netlist(std::istream& in) {
  Netlist nl;
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string& m) {
    throw NetlistError("netlist line " + std::to_string(lineno) + ": " + m);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string kw;
    if (!(ss >> kw)) continue;
    if (kw == "input") {
      std::string n;
      while (ss >> n) nl.input(n);
    } else if (kw == "output") {
      std::string n;
      while (ss >> n) nl.mark_output(nl.net(n));
    } else if (kw == "rail0" || kw == "rail1") {
      std::string n;
      while (ss >> n) nl.rail(n, kw == "rail1" ? Logic::one : Logic::zero);
    } else if (kw == "nand") {
      int stage;
      std::string out, n;
      if (!(ss >> stage >> out)) bad("nand needs: stage out in...");
      std::vector<int> ins;
      while (ss >> n) ins.push_back(nl.net(n));
      if (ins.empty()) bad("nand needs at least one input");
      nl.nand(stage, nl.net(out), std::move(ins));
    } else if (kw == "buffer") {
      int stage;
      std::string o, on, i, in_n;
      if (!(ss >> stage >> o >> on >> i >> in_n)) bad("buffer needs: stage out out_n in in_n");
      nl.buffer_pair(stage, nl.net(o), nl.net(on), nl.net(i), nl.net(in_n));
    } else if (kw == "latch") {
      int stage;
      std::string o, on, sel, data, opt;
      if (!(ss >> stage >> o >> on >> sel >> data)) bad("latch needs: stage out out_n sel data");
      bool init = false;
      if (ss >> opt) {
        if (opt == "init1") init = true;
        else if (opt != "init0") bad("latch option must be init0 or init1");
      }
      nl.latch(stage, nl.net(o), nl.net(on), nl.net(sel), nl.net(data), init);
    } else if (kw == "init") {
      std::string n;
      int v;
      if (!(ss >> n >> v)) bad("init needs: net 0|1");
      nl.set_init(nl.net(n), v ? Logic::one : Logic::zero);
    } else if (kw == "feedback") {
      std::string n;
      while (ss >> n) nl.set_feedback(nl.net(n));
    } else if (kw == "start") {
      int stage, slot;
      if (!(ss >> stage >> slot)) bad("start needs: stage slot");
      nl.stage_start_override[stage] = slot;
    } else if (kw == "stages") {
      int n;
      if (!(ss >> n)) bad("stages needs a count");
      nl.num_stages = std::max(nl.num_stages, n);
    } else {
      bad("unknown keyword '" + kw + "'");
    }
  }
  nl.validate();
  return nl;
}

inline void write_netlist(const Netlist& nl, std::ostream& out) {
  out << "stages " << nl.num_stages << "\n";
  for (int id : nl.primary_inputs) out << "input " << nl.nets[static_cast<std::size_t>(id)].name << "\n";
  for (int id : nl.primary_outputs) out << "output " << nl.nets[static_cast<std::size_t>(id)].name << "\n";
  for (const auto& n : nl.nets)
    if (n.kind == DriverKind::rail)
      out << (n.rail_value == Logic::one ? "rail1 " : "rail0 ") << n.name << "\n";
  for (const auto& t : nl.terms) {
    out << "nand " << t.stage << " " << nl.nets[static_cast<std::size_t>(t.output)].name;
    for (int in : t.inputs) out << " " << nl.nets[static_cast<std::size_t>(in)].name;
    out << "\n";
  }
  for (const auto& l : nl.latches)
    out << "latch " << l.stage << " " << nl.nets[static_cast<std::size_t>(l.out)].name << " "
        << nl.nets[static_cast<std::size_t>(l.out_n)].name << " "
        << nl.nets[static_cast<std::size_t>(l.sel)].name << " "
        << nl.nets[static_cast<std::size_t>(l.data)].name << (l.init_state ? " init1" : " init0")
        << "\n";
  for (const auto& n : nl.nets)
    if (n.init) out << "init " << n.name << " " << (*n.init == Logic::one ? 1 : 0) << "\n";
  for (const auto& n : nl.nets)
    if (n.feedback) out << "feedback " << n.name << "\n";
  for (const auto& [stage, slot] : nl.stage_start_override) out << "start " << stage << " " << slot << "\n";
}

// Stimulus: one line per cycle of whitespace-separated name=0|1 pairs.
inline std::vector<InputVector> parse_stimulus(std::istream& in) {
  std::vector<InputVector> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tok;
    InputVector v;
    while (ss >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 >= tok.size())
        throw NetlistError("stimulus line " + std::to_string(lineno) + ": expected name=0|1");
      v[tok.substr(0, eq)] = tok[eq + 1] == '1' ? Logic::one : Logic::zero;
    }
    if (!v.empty()) out.push_back(std::move(v));
  }
  return out;
}

} // namespace vnfab::dynlogic
