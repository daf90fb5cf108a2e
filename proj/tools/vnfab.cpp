// Command-line front end: configuration loading, scenario execution and CSV
// emission for the fabric models, plus the acceptance-suite runner.
//
// Exit codes: 0 ok, 1 analysis failure, 2 usage or configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vnfab/acceptance.hpp"
#include "vnfab/config.hpp"
#include "vnfab/csv.hpp"
#include "vnfab/designs/cla.hpp"
#include "vnfab/designs/multiplier.hpp"
#include "vnfab/designs/wisp.hpp"
#include "vnfab/dynlogic.hpp"
#include "vnfab/interconnect.hpp"
#include "vnfab/layout.hpp"
#include "vnfab/repeater.hpp"
#include "vnfab/thermal.hpp"

namespace {

using namespace vnfab;

struct Common {
  std::string config_path;
  std::string out_dir = ".";
};

Config load_or_default(const Common& c) {
  if (c.config_path.empty()) return Config{};
  return load_config(c.config_path);
}

std::ofstream open_out(const Common& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  std::filesystem::path p = std::filesystem::path(c.out_dir) / name;
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

FabricParams select_params(const Config& cfg, const std::string& mode, const std::string& set,
                           double n_override) {
  std::string key = set;
  if (key.empty()) key = (mode == "cmos") ? "1" : "skybridge";
  if (mode == "cmos" && key == "skybridge")
    throw ConfigError("--param-set skybridge conflicts with --mode cmos");
  FabricParams p = cfg.param_set(key);
  if (n_override > 0) p.n_gates = static_cast<std::int64_t>(n_override);
  return p;
}

void write_distribution_csv(std::ostream& os, const RunManifest& man,
                            const interconnect::InterconnectDistribution& d) {
  CsvWriter w(os, man);
  w.header({"l_gate_pitches", "f_l_count", "cumulative_count"});
  double cum = 0.0;
  for (std::size_t i = 0; i < d.counts.size(); ++i) {
    cum += d.counts[i];
    w.row(d.lengths[i], d.counts[i], cum);
  }
}

void write_summary_csv(std::ostream& os, const RunManifest& man,
                       const interconnect::InterconnectDistribution& d,
                       const repeater::TierBoundaries& b, const repeater::RepeaterReport& rep) {
  CsvWriter w(os, man);
  w.header({"quantity", "value", "unit"});
  w.row("l_max_model", d.l_max, "gate_pitches");
  w.row("longest_f_ge_1", d.longest_at_least(1.0), "gate_pitches");
  w.row("gamma", d.gamma, "1");
  w.row("i_total", d.i_total, "interconnects");
  w.row("l_max_local", b.l_max_local, "gate_pitches");
  w.row("l_max_semi_global", b.l_max_semi_global, "gate_pitches");
  w.row("l_max_global", b.l_max_global, "gate_pitches");
  w.row("repeaters_total", rep.total, "repeaters");
}

void write_repeater_csv(std::ostream& os, const RunManifest& man,
                        const repeater::RepeaterReport& rep) {
  CsvWriter w(os, man);
  w.header({"tier", "l_from_gp", "l_to_gp", "l_opt_nm", "s_opt", "repeaters"});
  for (const auto* t : {&rep.local, &rep.semi_global, &rep.global_})
    w.row(tier_name(t->tier), t->l_from, t->l_to, t->l_opt_nm, t->s_opt, t->repeaters);
  w.row("total", "", "", "", "", rep.total);
}

int cmd_interconnect(const Common& common, const std::string& mode, const std::string& set,
                     double n_override, bool compare) {
  Config cfg = load_or_default(common);
  FabricParams p = select_params(cfg, mode, set, n_override);
  auto d = interconnect::distribution(p);
  auto m = repeater::mode_from_string(mode);
  auto b = repeater::classify(d, cfg, m);
  auto rep = repeater::repeater_counts(d, b, cfg, m);

  RunManifest man = RunManifest::make("interconnect", common.config_path, cfg,
                                      "mode=" + mode + " n=" + std::to_string(p.n_gates));
  {
    auto f = open_out(common, "distribution.csv");
    write_distribution_csv(f, man, d);
  }
  {
    auto f = open_out(common, "summary.csv");
    write_summary_csv(f, man, d, b, rep);
  }
  std::cout << "l_max " << d.l_max << " gate pitches, longest f(l)>=1 at " << d.longest_at_least(1.0)
            << " (" << d.longest_at_least(1.0) * p.gate_pitch_h_nm / 1000.0 << " um), gamma "
            << d.gamma << ", I_total " << d.i_total << "\n";

  if (compare) {
    auto d_sb = interconnect::distribution(cfg.skybridge);
    auto d_c1 = interconnect::distribution(cfg.cmos_set1);
    double sb_um = d_sb.longest_at_least(1.0) * cfg.skybridge.gate_pitch_h_nm / 1000.0;
    double c1_um = d_c1.longest_at_least(1.0) * cfg.cmos_set1.gate_pitch_h_nm / 1000.0;
    auto f = open_out(common, "comparison.csv");
    CsvWriter w(f, man);
    w.header({"fabric", "longest_f_ge_1_gp", "longest_um", "ratio_vs_skybridge"});
    w.row("skybridge", d_sb.longest_at_least(1.0), sb_um, 1.0);
    w.row("cmos_set1", d_c1.longest_at_least(1.0), c1_um, c1_um / sb_um);
    std::cout << "longest interconnect: cmos set 1 is " << c1_um / sb_um
              << "x the skybridge length\n";
  }
  return 0;
}

int cmd_repeaters(const Common& common, const std::string& mode, const std::string& set,
                  double n_override) {
  Config cfg = load_or_default(common);
  FabricParams p = select_params(cfg, mode, set, n_override);
  auto d = interconnect::distribution(p);
  auto m = repeater::mode_from_string(mode);
  auto b = repeater::classify(d, cfg, m);
  auto rep = repeater::repeater_counts(d, b, cfg, m);
  RunManifest man = RunManifest::make("repeaters", common.config_path, cfg,
                                      "mode=" + mode + " n=" + std::to_string(p.n_gates));
  auto f = open_out(common, "repeaters.csv");
  write_repeater_csv(f, man, rep);
  std::cout << "repeaters: local " << rep.local.repeaters << ", semi-global "
            << rep.semi_global.repeaters << ", global " << rep.global_.repeaters << ", total "
            << rep.total << "\n";
  return 0;
}

int cmd_thermal(const Common& common, double gate, bool hdpp, int hej, int bridge_pitches) {
  Config cfg = load_or_default(common);
  const auto& mat = cfg.materials;
  const auto& ts = cfg.thermal;
  double scalar = thermal::calibrate_heat_scalar(mat, ts);
  thermal::StackScenario sc;
  sc.gate_conduction = gate;
  sc.hdpp = hdpp || hej > 0; // junctions drain through the pillar network
  if (hej > 0) sc.hej_positions = thermal::default_hej_positions(ts, hej);
  if (bridge_pitches > 0) sc.bridge_pitches = bridge_pitches;
  auto net = thermal::build_scenario(mat, ts, sc, scalar);
  auto sol = thermal::solve(net);

  std::string scen = "gate=" + std::to_string(gate) + " hdpp=" + std::to_string(sc.hdpp) +
                     " hej=" + std::to_string(hej);
  RunManifest man = RunManifest::make("thermal", common.config_path, cfg, scen);
  {
    auto f = open_out(common, "nodes.csv");
    CsvWriter w(f, man);
    w.header({"node", "kind", "temperature_k"});
    for (const auto& n : net.nodes)
      w.row(n.label, n.kind == thermal::NodeKind::reference ? "reference" : "internal",
            sol.temperature_k[static_cast<std::size_t>(n.id)]);
  }
  {
    auto f = open_out(common, "profile.csv");
    CsvWriter w(f, man);
    w.header({"transistor_index_from_bottom", "channel_temperature_k"});
    for (std::size_t i = 0; i < sol.transistor_temp_k.size(); ++i)
      w.row(i + 1, sol.transistor_temp_k[i]);
  }
  std::cout << "calibration scalar " << scalar << ", peak " << sol.peak_k << " K, topmost "
            << sol.topmost_k << " K, average " << sol.average_k << " K, conservation residual "
            << std::abs(sol.injected_w - sol.absorbed_w) / std::max(sol.injected_w, 1e-300) << "\n";
  return 0;
}

int cmd_simulate(const Common& common, const std::string& netlist_path,
                 const std::string& stimulus_path, int cycles) {
  Config cfg = load_or_default(common);
  std::ifstream nf(netlist_path);
  if (!nf) throw ConfigError("cannot open netlist " + netlist_path);
  dynlogic::Netlist nl = dynlogic::parse_netlist(nf);
  std::vector<dynlogic::InputVector> stim;
  if (!stimulus_path.empty()) {
    std::ifstream sf(stimulus_path);
    if (!sf) throw ConfigError("cannot open stimulus " + stimulus_path);
    stim = dynlogic::parse_stimulus(sf);
  }
  dynlogic::Simulator sim(nl, dynlogic::PhaseSchedule::dual_rail(nl.num_stages));
  int slots = 3 * (cycles > 0 ? cycles : static_cast<int>(stim.size()) + nl.num_stages + 2);
  auto trace = sim.run(stim, slots);

  RunManifest man = RunManifest::make("simulate", common.config_path, cfg,
                                      netlist_path + " slots=" + std::to_string(slots));
  auto f = open_out(common, "trace.csv");
  CsvWriter w(f, man);
  w.header({"slot", "net", "value"});
  for (int s = 0; s < trace.slots; ++s)
    for (const auto& n : nl.nets)
      w.row(s, n.name, std::string(1, dynlogic::logic_char(trace.at(s, n.id))));
  std::cout << "simulated " << slots << " slots, " << nl.nets.size() << " nets\n";
  return 0;
}

int cmd_wisp(const Common& common, const std::string& asm_path) {
  std::ifstream in(asm_path);
  if (!in) throw ConfigError("cannot open program " + asm_path);
  auto prog = designs::assemble(in);
  designs::WispMachine machine(prog);
  std::int64_t writes = designs::count_writes(prog, static_cast<int>(prog.size()));
  machine.run_until_retired(writes);
  if (writes == 0) machine.run_cycles(machine.design().fill_cycles + 20);
  auto regs = machine.registers();
  std::cout << "registers:";
  for (int r = 0; r < 4; ++r)
    std::cout << " R" << r << "=" << static_cast<int>(regs[static_cast<std::size_t>(r)]);
  std::cout << "\ncycles: " << machine.cycles() << ", retired " << machine.retired()
            << " writing instructions, debug product " << static_cast<int>(machine.debug_product())
            << "\n";
  return 0;
}

dynlogic::Netlist design_netlist(const std::string& name) {
  if (name == "cla4") return designs::gen_cla(4).netlist;
  if (name == "cla8") return designs::gen_cla(8).netlist;
  if (name == "cla16") return designs::gen_cla(16).netlist;
  if (name == "mult4") return designs::gen_multiplier4().netlist;
  if (name == "wisp4")
    return designs::gen_wisp4(designs::assemble_text(
                                  "MOVI R0,#3\nMOVI R1,#2\nNOP\nNOP\nADD R0,R1\nNOP\nNOP\nMULT R0,R1\n"))
        .netlist;
  throw ConfigError("unknown design '" + name + "' (cla4, cla8, cla16, mult4, wisp4)");
}

int cmd_layout(const Common& common, const std::string& design, const std::string& netlist_path,
               const std::string& sweep_axis, std::vector<double> sweep_values) {
  Config cfg = load_or_default(common);
  dynlogic::Netlist nl;
  std::string what = design;
  if (!netlist_path.empty()) {
    std::ifstream nf(netlist_path);
    if (!nf) throw ConfigError("cannot open netlist " + netlist_path);
    nl = dynlogic::parse_netlist(nf);
    what = netlist_path;
  } else {
    nl = design_netlist(design);
  }

  DesignRules rules = cfg.rules;
  // the 4-bit adder anchors the calibrated overhead factor
  rules.overhead_factor = layout::calibrate_overhead(designs::gen_cla(4).netlist, rules, 0.76);
  layout::LayoutPlan plan = layout::place(nl, rules);
  double area = layout::area_um2(plan, rules);

  RunManifest man = RunManifest::make("layout", common.config_path, cfg, what);
  {
    auto f = open_out(common, "plan.csv");
    CsvWriter w(f, man);
    w.header({"quantity", "value", "unit"});
    w.row("gates_placed", plan.gates_placed, "gates");
    w.row("gate_slots", plan.gate_slots, "slots");
    w.row("logic_nanowires", plan.logic_nanowires, "nanowires");
    w.row("signal_nanowires", plan.signal_nanowires, "nanowires");
    w.row("hdpp_pillars", plan.hdpp_pillars, "pillars");
    w.row("footprint_x", plan.x_pitches, "pitches");
    w.row("footprint_y", plan.y_pitches, "pitches");
    w.row("overhead_factor", plan.overhead_factor, "1");
    w.row("area", area, "um^2");
  }
  {
    auto f = open_out(common, "sites.csv");
    CsvWriter w(f, man);
    w.header({"x_pitch", "y_pitch", "kind"});
    for (int y = 0; y < plan.core_y; ++y)
      for (int x = 0; x < plan.core_x; ++x) {
        auto k = plan.core_sites[static_cast<std::size_t>(y) * plan.core_x + x];
        const char* nm = k == layout::SiteKind::logic ? "logic"
                         : k == layout::SiteKind::signal ? "signal"
                         : k == layout::SiteKind::hdpp ? "hdpp" : "empty";
        w.row(x, y, nm);
      }
  }
  std::cout << what << ": " << plan.logic_nanowires << " logic + " << plan.signal_nanowires
            << " signal nanowires, footprint " << plan.x_pitches << "x" << plan.y_pitches
            << " pitches, area " << area << " um^2\n";

  if (!sweep_axis.empty()) {
    auto axis = layout::axis_from_string(sweep_axis);
    if (sweep_values.empty()) throw ConfigError("--values required with --sweep");
    auto rows = layout::sensitivity_sweep(nl, rules, axis, sweep_values);
    auto f = open_out(common, "sweep.csv");
    CsvWriter w(f, man);
    w.header({"value", "area_quadratic_um2", "area_linear_um2", "logic_nanowires", "x_pitches",
              "y_pitches"});
    for (const auto& r : rows)
      w.row(r.value, r.area_quadratic_um2, r.area_linear_um2, r.logic_nanowires, r.x_pitches,
            r.y_pitches);
    std::cout << "sweep over " << sweep_axis << " written (" << rows.size() << " rows)\n";
  }
  return 0;
}

int cmd_accept(const Common& common, const std::string& programs_dir) {
  Config cfg = load_or_default(common);
  accept::Options opt;
  opt.programs_dir = programs_dir;
  auto results = accept::run_all(cfg, opt);
  std::cout << accept::render(results);
  if (!accept::all_pass(results)) {
    std::cout << "acceptance: FAILED\n";
    return 1;
  }
  std::cout << "acceptance: all criteria pass\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"vertical-nanowire fabric modeling toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "JSON configuration file (defaults built in)");
  app.add_option("--out", common.out_dir, "output directory for CSV files");

  auto* ic = app.add_subcommand("interconnect", "wire-length distribution and summary");
  std::string ic_mode = "skybridge", ic_set;
  double ic_n = 0;
  bool ic_compare = false;
  ic->add_option("--mode", ic_mode, "cmos or skybridge")->check(CLI::IsMember({"cmos", "skybridge"}));
  ic->add_option("--param-set", ic_set, "parameter set: skybridge, 1 or 2");
  ic->add_option("--n", ic_n, "override total gate count");
  ic->add_flag("--compare", ic_compare, "emit skybridge vs cmos set 1 comparison");

  auto* rp = app.add_subcommand("repeaters", "tier classification and repeater counts");
  std::string rp_mode = "skybridge", rp_set;
  double rp_n = 0;
  rp->add_option("--mode", rp_mode, "cmos or skybridge")->check(CLI::IsMember({"cmos", "skybridge"}));
  rp->add_option("--param-set", rp_set, "parameter set: skybridge, 1 or 2");
  rp->add_option("--n", rp_n, "override total gate count");

  auto* th = app.add_subcommand("thermal", "logic-nanowire thermal scenario");
  double th_gate = 0.0;
  bool th_hdpp = false;
  int th_hej = 0, th_bridge = 0;
  th->add_option("--gate-conduction", th_gate, "gate conduction: 0, 0.5 or 1")
      ->check(CLI::IsMember({0.0, 0.5, 1.0}));
  th->add_flag("--hdpp", th_hdpp, "attach power-pillar bridges");
  th->add_option("--hej", th_hej, "number of heat-extraction junctions (at the hottest sites)");
  th->add_option("--bridge-pitches", th_bridge, "bridge routing distance in nanowire pitches");

  auto* si = app.add_subcommand("simulate", "run a dynamic-logic netlist");
  std::string si_netlist, si_stim;
  int si_cycles = 0;
  si->add_option("netlist", si_netlist, "netlist file")->required();
  si->add_option("stimulus", si_stim, "stimulus file (name=0|1 per cycle)");
  si->add_option("--cycles", si_cycles, "cycles to simulate");

  auto* wi = app.add_subcommand("wisp", "assemble and run a processor program");
  std::string wi_verb, wi_asm;
  wi->add_option("verb", wi_verb, "run")->required()->check(CLI::IsMember({"run"}));
  wi->add_option("program", wi_asm, "assembly file")->required();

  auto* la = app.add_subcommand("layout", "place a design and estimate area");
  std::string la_design = "cla4", la_netlist, la_axis;
  std::vector<double> la_values;
  la->add_option("--design", la_design, "cla4, cla8, cla16, mult4 or wisp4");
  la->add_option("--netlist", la_netlist, "place a netlist file instead");
  la->add_option("--sweep", la_axis, "sensitivity axis: spacing, feature_size, aspect_ratio");
  la->add_option("--values", la_values, "sweep values");

  auto* ac = app.add_subcommand("accept", "run the acceptance suite");
  std::string ac_programs = "programs";
  ac->add_option("--programs", ac_programs, "directory with the shipped assembly programs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ic->parsed()) return cmd_interconnect(common, ic_mode, ic_set, ic_n, ic_compare);
    if (rp->parsed()) return cmd_repeaters(common, rp_mode, rp_set, rp_n);
    if (th->parsed()) return cmd_thermal(common, th_gate, th_hdpp, th_hej, th_bridge);
    if (si->parsed()) return cmd_simulate(common, si_netlist, si_stim, si_cycles);
    if (wi->parsed()) return cmd_wisp(common, wi_asm);
    if (la->parsed()) return cmd_layout(common, la_design, la_netlist, la_axis, la_values);
    if (ac->parsed()) return cmd_accept(common, ac_programs);
  } catch (const vnfab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
