#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

// Shared parameter types for the vertical-nanowire fabric toolkit. Every
// tunable constant lives in one Config bundle so a run is reproducible from a
// single file. Units are fixed per field: nm, ohm, F, uOhm-cm, W/(m*K), K.

namespace vnfab {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Fabric / interconnect parameters

struct FabricParams {
  double rent_k = 0.0;        // Rent coefficient k
  double rent_p = 0.0;        // Rent exponent p, in (0,1)
  double fan_out = 0.0;       // average fan-out
  double gate_pitch_h_nm = 0; // average horizontal gate pitch
  double gate_pitch_v_nm = 0; // vertical gate pitch p_z (0 for 2-D)
  int gz = 1;                 // gates stacked per nanowire
  std::int64_t n_gates = 2;   // total gate count

  void validate(const std::string& where) const {
    auto fail = [&](const std::string& m) { throw ConfigError(where + ": " + m); };
    if (!(rent_k >= 0)) fail("rent_k must be >= 0");
    if (!(rent_p > 0.0 && rent_p < 1.0)) fail("rent_p out of (0,1)");
    if (!(fan_out > 0)) fail("fan_out must be > 0");
    if (!(gate_pitch_h_nm > 0)) fail("gate_pitch_h must be > 0 nm");
    if (gz < 1) fail("gz must be >= 1");
    if (gz > 1 && !(gate_pitch_v_nm > 0)) fail("gate_pitch_v must be > 0 nm when gz > 1");
    if (n_gates < 2) fail("n_gates must be >= 2");
  }
};

// alpha = f.o. / (1 + f.o.); strictly increasing in fan_out, bounded in (0,1).
inline double alpha(double fan_out) {
  if (!(fan_out > 0)) throw std::domain_error("alpha: fan_out must be > 0");
  return fan_out / (1.0 + fan_out);
}

enum class Tier { local, semi_global, global_ };

inline const char* tier_name(Tier t) {
  switch (t) {
    case Tier::local: return "local";
    case Tier::semi_global: return "semi_global";
    default: return "global";
  }
}

struct TierParams {
  Tier tier = Tier::local;
  double resistivity_uohm_cm = 0; // effective resistivity
  double aspect_ratio = 0;        // wire height / width
  double pitch_nm = 0;
  double beta = 1.0;              // max delay as clock-period fraction
  std::optional<double> c_per_nm; // direct capacitance override, F/nm

  void validate(const std::string& where) const {
    auto fail = [&](const std::string& m) { throw ConfigError(where + ": " + m); };
    if (!(resistivity_uohm_cm > 0)) fail("resistivity must be > 0");
    if (!(aspect_ratio > 0)) fail("aspect_ratio must be > 0");
    if (!(pitch_nm > 0)) fail("pitch must be > 0 nm");
    if (!(beta > 0 && beta <= 1.0)) fail("beta out of (0,1]");
    if (c_per_nm && !(*c_per_nm > 0)) fail("c_per_nm override must be > 0");
  }
};

// Minimum-inverter electricals plus the swing constants a(x), b(x).
// r0/c0/cp are required inputs: they come from a device model this toolkit
// does not recompute. The shipped defaults are documented example values.
struct DriverParams {
  double r0_ohm = 0;
  double c0_f = 0;
  double cp_f = 0;
  double a = 0;
  double b = 0;

  void validate(const std::string& where) const {
    auto fail = [&](const std::string& m) { throw ConfigError(where + ": " + m); };
    if (!(r0_ohm > 0)) fail("r0 must be > 0");
    if (!(c0_f > 0)) fail("c0 must be > 0");
    if (!(cp_f > 0)) fail("cp must be > 0");
    if (!(a > 0)) fail("a must be > 0");
    if (!(b > 0)) fail("b must be > 0");
  }
};

// Per-unit-length capacitance model: c = eps0*eps_r*(2*AR*k_coupling + k_ground).
// A per-tier c override replaces the model when supplied.
struct CapacitanceModel {
  double eps_r = 2.2; // interlayer dielectric (C-doped oxide)
  double kappa_coupling = 1.0;
  double kappa_ground = 1.0;

  void validate(const std::string& where) const {
    if (!(eps_r > 0) || !(kappa_coupling > 0) || !(kappa_ground > 0))
      throw ConfigError(where + ": capacitance model constants must be > 0");
  }
};

// ---------------------------------------------------------------------------
// Thermal material table

struct MaterialProps {
  std::string name;
  double conductivity = 0;  // W/(m*K)
  double length_nm = 0;     // conduction-path length
  double width_nm = 0;
  double thickness_nm = 0;

  void validate(const std::string& where) const {
    auto fail = [&](const std::string& m) { throw ConfigError(where + ": " + m); };
    if (!(conductivity > 0)) fail("conductivity must be > 0");
    if (!(length_nm > 0 && width_nm > 0 && thickness_nm > 0)) fail("dims must be > 0");
  }
};

struct MaterialTable {
  MaterialProps drain_electrode{"Ti", 21.0, 10, 16, 12};
  MaterialProps drain_silicide{"silicide", 45.9, 10, 16, 16};
  MaterialProps spacer{"Si3N4", 1.5, 5, 16, 18.5};
  MaterialProps channel{"doped Si", 13.0, 16, 16, 16};
  MaterialProps gate_oxide{"HfO2", 0.52, 16, 18, 2};
  MaterialProps gate_electrode{"TiN", 1.9, 10, 16, 6};
  MaterialProps heat_junction{"Al2O3", 30.0, 4, 16, 18.5};
  MaterialProps interlayer{"C-doped SiO2", 0.6, 100, 16, 16};
  MaterialProps bridge{"W", 167.0, 43.5, 58, 16};

  void validate() const {
    drain_electrode.validate("materials.drain_electrode");
    drain_silicide.validate("materials.drain_silicide");
    spacer.validate("materials.spacer");
    channel.validate("materials.channel");
    gate_oxide.validate("materials.gate_oxide");
    gate_electrode.validate("materials.gate_electrode");
    heat_junction.validate("materials.heat_junction");
    interlayer.validate("materials.interlayer");
    bridge.validate("materials.bridge");
  }
};

// ---------------------------------------------------------------------------
// Thermal scenario settings

enum class HalfGateMode { doubled_resistance, mid_temperature };

struct ThermalSettings {
  double vdd_v = 0.8;
  double on_current_a = 3.2e-5;
  double reference_k = 350.0;
  int fan_in = 8;                  // inputs per logic stage in the stack
  int gates_per_nanowire = 2;
  double nanowire_pitch_nm = 66.0; // bridge-length unit
  int bridge_pitches = 10;         // default routing distance to a pillar
  double calibration_peak_k = 4307.0; // bare-stack gate=0 peak the heat scalar is fitted to

  // Geometry reconstruction constants (the source tables do not pin these):
  // run length of the gate-electrode branch from channel to its contact, and
  // the effective constriction between a power-rail contact and its bridge.
  double gate_electrode_run_nm = 40.0;
  double rail_access_k_per_w = 1.0e9;

  bool lateral_ild = false;        // per-transistor lateral path through the ILD
  HalfGateMode half_gate = HalfGateMode::doubled_resistance;

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("thermal: " + m); };
    if (!(vdd_v > 0) || !(on_current_a > 0)) fail("vdd/on_current must be > 0");
    if (!(reference_k >= 0)) fail("reference temperature must be >= 0 K");
    if (fan_in < 1) fail("fan_in must be >= 1");
    if (gates_per_nanowire < 1) fail("gates_per_nanowire must be >= 1");
    if (!(nanowire_pitch_nm > 0)) fail("nanowire_pitch must be > 0");
    if (bridge_pitches < 1) fail("bridge_pitches must be >= 1");
    if (!(gate_electrode_run_nm > 0)) fail("gate_electrode_run must be > 0");
    if (!(rail_access_k_per_w > 0)) fail("rail_access must be > 0");
  }
};

// ---------------------------------------------------------------------------
// Layout design rules

struct FeatureRule {
  double width_nm = 0;
  double length_nm = 0;
  double thickness_nm = 0;
  double spacing_nm = 0; // 0 where the rule set leaves it unspecified
};

struct DesignRules {
  FeatureRule bridge{16, 16, 16, 16};
  FeatureRule transistor_channel{16, 16, 16, 58};
  FeatureRule gate_electrode{29, 16, 11.5, 0};
  FeatureRule contact{26, 16, 16, 39};
  FeatureRule heat_junction{22, 16, 6, 0};
  FeatureRule coaxial_si_m1{37, 0, 37, 4};
  FeatureRule coaxial_m1_m2{58, 0, 58, 4};

  double nanowire_width_nm = 16.0;
  double nanowire_height_nm = 868.0; // the quantitative aspect-ratio source; 886 also appears upstream
  double nanowire_pitch_nm = 66.0;
  double nanowire_spacing_nm = 50.0; // pitch - width
  int gates_per_nanowire = 2;        // stack slots per logic nanowire at 1:54
  double logic_signal_ratio = 1.0;   // signal nanowires per logic nanowire
  int block_margin_pitches = 2;      // periphery ring: HDPP sites + I/O landing
  int hdpp_spacing_pitches = 10;
  int max_usable_fan_in = 8;         // one of 9 stack inputs is reserved for the HEJ
  double overhead_factor = 1.0;      // calibrated signal/routing overhead multiplier

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("design_rules: " + m); };
    if (!(nanowire_width_nm > 0) || !(nanowire_height_nm > 0)) fail("nanowire dims must be > 0");
    if (!(nanowire_pitch_nm >= nanowire_width_nm)) fail("pitch must be >= width + spacing");
    if (gates_per_nanowire < 1) fail("gates_per_nanowire must be >= 1");
    if (!(logic_signal_ratio >= 0)) fail("logic_signal_ratio must be >= 0");
    if (block_margin_pitches < 0) fail("block_margin must be >= 0");
    if (hdpp_spacing_pitches < 1) fail("hdpp_spacing must be >= 1");
    if (max_usable_fan_in < 1 || max_usable_fan_in > 9) fail("max_usable_fan_in out of [1,9]");
    if (!(overhead_factor >= 1.0)) fail("overhead_factor must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// The full bundle

struct Config {
  // Named fabric parameter sets for the interconnect model.
  FabricParams skybridge{5.39, 0.577, 2.018, 150.0, 448.0, 2, 10'000'000};
  FabricParams cmos_set1{4.0, 0.66, 3.0, 803.87, 0.0, 1, 10'000'000};
  FabricParams cmos_set2{3.416, 0.473, 1.7, 803.87, 0.0, 1, 10'000'000};

  TierParams tier_local{Tier::local, 6.96, 2.0, 38.0, 0.25, std::nullopt};
  TierParams tier_semi_global{Tier::semi_global, 6.96, 2.0, 76.0, 0.25, std::nullopt};
  TierParams tier_global{Tier::global_, 5.26, 2.34, 152.0, 0.9, std::nullopt};

  // Example 16nm minimum-inverter electricals; override with measured values.
  double driver_r0_ohm = 1.0e4;
  double driver_c0_f = 1.0e-16;
  double driver_cp_f = 5.0e-17;
  // Swing constants: 50% propagation for static logic, 10-90% for dynamic.
  double swing_cmos_a = 0.4, swing_cmos_b = 0.7;
  double swing_dynamic_a = 0.9, swing_dynamic_b = 2.2;

  CapacitanceModel cap_model;
  MaterialTable materials;
  ThermalSettings thermal;
  DesignRules rules;

  DriverParams driver_cmos() const { return {driver_r0_ohm, driver_c0_f, driver_cp_f, swing_cmos_a, swing_cmos_b}; }
  DriverParams driver_dynamic() const { return {driver_r0_ohm, driver_c0_f, driver_cp_f, swing_dynamic_a, swing_dynamic_b}; }

  const TierParams& tier(Tier t) const {
    switch (t) {
      case Tier::local: return tier_local;
      case Tier::semi_global: return tier_semi_global;
      default: return tier_global;
    }
  }

  const FabricParams& param_set(const std::string& name) const {
    if (name == "skybridge") return skybridge;
    if (name == "1" || name == "cmos1" || name == "cmos") return cmos_set1;
    if (name == "2" || name == "cmos2") return cmos_set2;
    throw ConfigError("unknown parameter set '" + name + "' (expected skybridge, 1 or 2)");
  }

  void validate() const {
    skybridge.validate("params.skybridge");
    cmos_set1.validate("params.cmos_set1");
    cmos_set2.validate("params.cmos_set2");
    tier_local.validate("tiers.local");
    tier_semi_global.validate("tiers.semi_global");
    tier_global.validate("tiers.global");
    driver_cmos().validate("driver(cmos swing)");
    driver_dynamic().validate("driver(dynamic swing)");
    cap_model.validate("capacitance");
    materials.validate();
    thermal.validate();
    rules.validate();
  }
};

// ---------------------------------------------------------------------------
// JSON (de)serialization. Unknown keys are rejected so typos surface early.

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline void fabric_from_json(const json& j, FabricParams& p, const std::string& where) {
  check_keys(j, {"rent_k", "rent_p", "fan_out", "gate_pitch_h_nm", "gate_pitch_v_nm", "gz", "n_gates"}, where);
  get_if(j, "rent_k", p.rent_k);
  get_if(j, "rent_p", p.rent_p);
  get_if(j, "fan_out", p.fan_out);
  get_if(j, "gate_pitch_h_nm", p.gate_pitch_h_nm);
  get_if(j, "gate_pitch_v_nm", p.gate_pitch_v_nm);
  get_if(j, "gz", p.gz);
  get_if(j, "n_gates", p.n_gates);
}

inline json fabric_to_json(const FabricParams& p) {
  return {{"rent_k", p.rent_k}, {"rent_p", p.rent_p}, {"fan_out", p.fan_out},
          {"gate_pitch_h_nm", p.gate_pitch_h_nm}, {"gate_pitch_v_nm", p.gate_pitch_v_nm},
          {"gz", p.gz}, {"n_gates", p.n_gates}};
}

inline void tier_from_json(const json& j, TierParams& t, const std::string& where) {
  check_keys(j, {"resistivity_uohm_cm", "aspect_ratio", "pitch_nm", "beta", "c_per_nm"}, where);
  get_if(j, "resistivity_uohm_cm", t.resistivity_uohm_cm);
  get_if(j, "aspect_ratio", t.aspect_ratio);
  get_if(j, "pitch_nm", t.pitch_nm);
  get_if(j, "beta", t.beta);
  if (j.contains("c_per_nm")) t.c_per_nm = j.at("c_per_nm").get<double>();
}

inline json tier_to_json(const TierParams& t) {
  json j = {{"resistivity_uohm_cm", t.resistivity_uohm_cm}, {"aspect_ratio", t.aspect_ratio},
            {"pitch_nm", t.pitch_nm}, {"beta", t.beta}};
  if (t.c_per_nm) j["c_per_nm"] = *t.c_per_nm;
  return j;
}

inline void material_from_json(const json& j, MaterialProps& m, const std::string& where) {
  check_keys(j, {"name", "conductivity", "length_nm", "width_nm", "thickness_nm"}, where);
  get_if(j, "name", m.name);
  get_if(j, "conductivity", m.conductivity);
  get_if(j, "length_nm", m.length_nm);
  get_if(j, "width_nm", m.width_nm);
  get_if(j, "thickness_nm", m.thickness_nm);
}

inline json material_to_json(const MaterialProps& m) {
  return {{"name", m.name}, {"conductivity", m.conductivity}, {"length_nm", m.length_nm},
          {"width_nm", m.width_nm}, {"thickness_nm", m.thickness_nm}};
}

inline void rule_from_json(const json& j, FeatureRule& r, const std::string& where) {
  check_keys(j, {"width_nm", "length_nm", "thickness_nm", "spacing_nm"}, where);
  get_if(j, "width_nm", r.width_nm);
  get_if(j, "length_nm", r.length_nm);
  get_if(j, "thickness_nm", r.thickness_nm);
  get_if(j, "spacing_nm", r.spacing_nm);
}

inline json rule_to_json(const FeatureRule& r) {
  return {{"width_nm", r.width_nm}, {"length_nm", r.length_nm},
          {"thickness_nm", r.thickness_nm}, {"spacing_nm", r.spacing_nm}};
}

} // namespace detail

inline Config config_from_json(const json& j) {
  Config c;
  detail::check_keys(j, {"params", "tiers", "driver", "capacitance", "materials", "thermal", "design_rules"},
                     "config");
  if (j.contains("params")) {
    const json& p = j.at("params");
    detail::check_keys(p, {"skybridge", "cmos_set1", "cmos_set2"}, "params");
    if (p.contains("skybridge")) detail::fabric_from_json(p.at("skybridge"), c.skybridge, "params.skybridge");
    if (p.contains("cmos_set1")) detail::fabric_from_json(p.at("cmos_set1"), c.cmos_set1, "params.cmos_set1");
    if (p.contains("cmos_set2")) detail::fabric_from_json(p.at("cmos_set2"), c.cmos_set2, "params.cmos_set2");
  }
  if (j.contains("tiers")) {
    const json& t = j.at("tiers");
    detail::check_keys(t, {"local", "semi_global", "global"}, "tiers");
    if (t.contains("local")) detail::tier_from_json(t.at("local"), c.tier_local, "tiers.local");
    if (t.contains("semi_global")) detail::tier_from_json(t.at("semi_global"), c.tier_semi_global, "tiers.semi_global");
    if (t.contains("global")) detail::tier_from_json(t.at("global"), c.tier_global, "tiers.global");
  }
  if (j.contains("driver")) {
    const json& d = j.at("driver");
    detail::check_keys(d, {"r0_ohm", "c0_f", "cp_f", "swing_cmos_a", "swing_cmos_b",
                           "swing_dynamic_a", "swing_dynamic_b"}, "driver");
    detail::get_if(d, "r0_ohm", c.driver_r0_ohm);
    detail::get_if(d, "c0_f", c.driver_c0_f);
    detail::get_if(d, "cp_f", c.driver_cp_f);
    detail::get_if(d, "swing_cmos_a", c.swing_cmos_a);
    detail::get_if(d, "swing_cmos_b", c.swing_cmos_b);
    detail::get_if(d, "swing_dynamic_a", c.swing_dynamic_a);
    detail::get_if(d, "swing_dynamic_b", c.swing_dynamic_b);
  }
  if (j.contains("capacitance")) {
    const json& k = j.at("capacitance");
    detail::check_keys(k, {"eps_r", "kappa_coupling", "kappa_ground"}, "capacitance");
    detail::get_if(k, "eps_r", c.cap_model.eps_r);
    detail::get_if(k, "kappa_coupling", c.cap_model.kappa_coupling);
    detail::get_if(k, "kappa_ground", c.cap_model.kappa_ground);
  }
  if (j.contains("materials")) {
    const json& m = j.at("materials");
    detail::check_keys(m, {"drain_electrode", "drain_silicide", "spacer", "channel", "gate_oxide",
                           "gate_electrode", "heat_junction", "interlayer", "bridge"}, "materials");
    auto row = [&](const char* key, MaterialProps& dst) {
      if (m.contains(key)) detail::material_from_json(m.at(key), dst, std::string("materials.") + key);
    };
    row("drain_electrode", c.materials.drain_electrode);
    row("drain_silicide", c.materials.drain_silicide);
    row("spacer", c.materials.spacer);
    row("channel", c.materials.channel);
    row("gate_oxide", c.materials.gate_oxide);
    row("gate_electrode", c.materials.gate_electrode);
    row("heat_junction", c.materials.heat_junction);
    row("interlayer", c.materials.interlayer);
    row("bridge", c.materials.bridge);
  }
  if (j.contains("thermal")) {
    const json& t = j.at("thermal");
    detail::check_keys(t, {"vdd_v", "on_current_a", "reference_k", "fan_in", "gates_per_nanowire",
                           "nanowire_pitch_nm", "bridge_pitches", "calibration_peak_k",
                           "gate_electrode_run_nm", "rail_access_k_per_w", "lateral_ild", "half_gate"},
                       "thermal");
    auto& s = c.thermal;
    detail::get_if(t, "vdd_v", s.vdd_v);
    detail::get_if(t, "on_current_a", s.on_current_a);
    detail::get_if(t, "reference_k", s.reference_k);
    detail::get_if(t, "fan_in", s.fan_in);
    detail::get_if(t, "gates_per_nanowire", s.gates_per_nanowire);
    detail::get_if(t, "nanowire_pitch_nm", s.nanowire_pitch_nm);
    detail::get_if(t, "bridge_pitches", s.bridge_pitches);
    detail::get_if(t, "calibration_peak_k", s.calibration_peak_k);
    detail::get_if(t, "gate_electrode_run_nm", s.gate_electrode_run_nm);
    detail::get_if(t, "rail_access_k_per_w", s.rail_access_k_per_w);
    detail::get_if(t, "lateral_ild", s.lateral_ild);
    if (t.contains("half_gate")) {
      std::string hg = t.at("half_gate").get<std::string>();
      if (hg == "doubled_resistance") s.half_gate = HalfGateMode::doubled_resistance;
      else if (hg == "mid_temperature") s.half_gate = HalfGateMode::mid_temperature;
      else throw ConfigError("thermal.half_gate: expected doubled_resistance or mid_temperature");
    }
  }
  if (j.contains("design_rules")) {
    const json& r = j.at("design_rules");
    detail::check_keys(r, {"bridge", "transistor_channel", "gate_electrode", "contact", "heat_junction",
                           "coaxial_si_m1", "coaxial_m1_m2", "nanowire_width_nm", "nanowire_height_nm",
                           "nanowire_pitch_nm", "nanowire_spacing_nm", "gates_per_nanowire",
                           "logic_signal_ratio", "block_margin_pitches", "hdpp_spacing_pitches",
                           "max_usable_fan_in", "overhead_factor"}, "design_rules");
    auto& d = c.rules;
    auto feat = [&](const char* key, FeatureRule& dst) {
      if (r.contains(key)) detail::rule_from_json(r.at(key), dst, std::string("design_rules.") + key);
    };
    feat("bridge", d.bridge);
    feat("transistor_channel", d.transistor_channel);
    feat("gate_electrode", d.gate_electrode);
    feat("contact", d.contact);
    feat("heat_junction", d.heat_junction);
    feat("coaxial_si_m1", d.coaxial_si_m1);
    feat("coaxial_m1_m2", d.coaxial_m1_m2);
    detail::get_if(r, "nanowire_width_nm", d.nanowire_width_nm);
    detail::get_if(r, "nanowire_height_nm", d.nanowire_height_nm);
    detail::get_if(r, "nanowire_pitch_nm", d.nanowire_pitch_nm);
    detail::get_if(r, "nanowire_spacing_nm", d.nanowire_spacing_nm);
    detail::get_if(r, "gates_per_nanowire", d.gates_per_nanowire);
    detail::get_if(r, "logic_signal_ratio", d.logic_signal_ratio);
    detail::get_if(r, "block_margin_pitches", d.block_margin_pitches);
    detail::get_if(r, "hdpp_spacing_pitches", d.hdpp_spacing_pitches);
    detail::get_if(r, "max_usable_fan_in", d.max_usable_fan_in);
    detail::get_if(r, "overhead_factor", d.overhead_factor);
  }
  c.validate();
  return c;
}

inline json config_to_json(const Config& c) {
  json j;
  j["params"] = {{"skybridge", detail::fabric_to_json(c.skybridge)},
                 {"cmos_set1", detail::fabric_to_json(c.cmos_set1)},
                 {"cmos_set2", detail::fabric_to_json(c.cmos_set2)}};
  j["tiers"] = {{"local", detail::tier_to_json(c.tier_local)},
                {"semi_global", detail::tier_to_json(c.tier_semi_global)},
                {"global", detail::tier_to_json(c.tier_global)}};
  j["driver"] = {{"r0_ohm", c.driver_r0_ohm}, {"c0_f", c.driver_c0_f}, {"cp_f", c.driver_cp_f},
                 {"swing_cmos_a", c.swing_cmos_a}, {"swing_cmos_b", c.swing_cmos_b},
                 {"swing_dynamic_a", c.swing_dynamic_a}, {"swing_dynamic_b", c.swing_dynamic_b}};
  j["capacitance"] = {{"eps_r", c.cap_model.eps_r}, {"kappa_coupling", c.cap_model.kappa_coupling},
                      {"kappa_ground", c.cap_model.kappa_ground}};
  j["materials"] = {{"drain_electrode", detail::material_to_json(c.materials.drain_electrode)},
                    {"drain_silicide", detail::material_to_json(c.materials.drain_silicide)},
                    {"spacer", detail::material_to_json(c.materials.spacer)},
                    {"channel", detail::material_to_json(c.materials.channel)},
                    {"gate_oxide", detail::material_to_json(c.materials.gate_oxide)},
                    {"gate_electrode", detail::material_to_json(c.materials.gate_electrode)},
                    {"heat_junction", detail::material_to_json(c.materials.heat_junction)},
                    {"interlayer", detail::material_to_json(c.materials.interlayer)},
                    {"bridge", detail::material_to_json(c.materials.bridge)}};
  j["thermal"] = {{"vdd_v", c.thermal.vdd_v}, {"on_current_a", c.thermal.on_current_a},
                  {"reference_k", c.thermal.reference_k}, {"fan_in", c.thermal.fan_in},
                  {"gates_per_nanowire", c.thermal.gates_per_nanowire},
                  {"nanowire_pitch_nm", c.thermal.nanowire_pitch_nm},
                  {"bridge_pitches", c.thermal.bridge_pitches},
                  {"calibration_peak_k", c.thermal.calibration_peak_k},
                  {"gate_electrode_run_nm", c.thermal.gate_electrode_run_nm},
                  {"rail_access_k_per_w", c.thermal.rail_access_k_per_w},
                  {"lateral_ild", c.thermal.lateral_ild},
                  {"half_gate", c.thermal.half_gate == HalfGateMode::doubled_resistance
                                    ? "doubled_resistance" : "mid_temperature"}};
  j["design_rules"] = {{"bridge", detail::rule_to_json(c.rules.bridge)},
                       {"transistor_channel", detail::rule_to_json(c.rules.transistor_channel)},
                       {"gate_electrode", detail::rule_to_json(c.rules.gate_electrode)},
                       {"contact", detail::rule_to_json(c.rules.contact)},
                       {"heat_junction", detail::rule_to_json(c.rules.heat_junction)},
                       {"coaxial_si_m1", detail::rule_to_json(c.rules.coaxial_si_m1)},
                       {"coaxial_m1_m2", detail::rule_to_json(c.rules.coaxial_m1_m2)},
                       {"nanowire_width_nm", c.rules.nanowire_width_nm},
                       {"nanowire_height_nm", c.rules.nanowire_height_nm},
                       {"nanowire_pitch_nm", c.rules.nanowire_pitch_nm},
                       {"nanowire_spacing_nm", c.rules.nanowire_spacing_nm},
                       {"gates_per_nanowire", c.rules.gates_per_nanowire},
                       {"logic_signal_ratio", c.rules.logic_signal_ratio},
                       {"block_margin_pitches", c.rules.block_margin_pitches},
                       {"hdpp_spacing_pitches", c.rules.hdpp_spacing_pitches},
                       {"max_usable_fan_in", c.rules.max_usable_fan_in},
                       {"overhead_factor", c.rules.overhead_factor}};
  return j;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

inline void save_config(const Config& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << config_to_json(c).dump(2) << "\n";
}

} // namespace vnfab
