#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vnfab/designs/builder.hpp"
#include "vnfab/designs/cla.hpp"
#include "vnfab/designs/multiplier.hpp"
#include "vnfab/dynlogic.hpp"

// WISP-4: a 4-bit, five-stage pipelined wire-streaming processor.
//
// Instruction word (9 bits): opcode[8:6] rd[5:4] rs[3:2] / imm[3:0].
// Opcodes: NOP=000, MOV=001, MOVI=010, ADD=011, MULT=100 (a documented
// assignment; all tools share this table). The destination register is the
// first operand; MULT writes the low nibble of the 8-bit product, the full
// product appears on a debug port.
//
// Pipeline: Instruction Fetch, Decode, Register Access, Execute, Write Back;
// fourteen dynamic stages clocked one slot apart; the first instruction
// retires at the start of the fifth cycle. The program counter is a latch ring incremented by a
// single-stage +1 compound; there are no hazard interlocks, so dependent
// instructions need two NOPs between them (the write-back distance).

namespace vnfab::designs {

enum class Opcode : std::uint8_t { NOP = 0, MOV = 1, MOVI = 2, ADD = 3, MULT = 4 };

inline const char* opcode_name(Opcode op) {
  switch (op) {
    case Opcode::NOP: return "NOP";
    case Opcode::MOV: return "MOV";
    case Opcode::MOVI: return "MOVI";
    case Opcode::ADD: return "ADD";
    case Opcode::MULT: return "MULT";
  }
  return "?";
}

struct WispInstruction {
  Opcode op = Opcode::NOP;
  int rd = 0;  // 2 bits
  int rs = 0;  // 2 bits
  int imm = 0; // 4 bits, MOVI only
};

class AsmError : public std::runtime_error {
public:
  explicit AsmError(const std::string& m) : std::runtime_error(m) {}
};

inline std::uint16_t encode(const WispInstruction& in) {
  std::uint16_t w = static_cast<std::uint16_t>(static_cast<int>(in.op) << 6);
  w |= static_cast<std::uint16_t>((in.rd & 3) << 4);
  if (in.op == Opcode::MOVI)
    w |= static_cast<std::uint16_t>(in.imm & 0xF);
  else
    w |= static_cast<std::uint16_t>((in.rs & 3) << 2);
  return w;
}

inline WispInstruction decode(std::uint16_t w) {
  int opv = (w >> 6) & 7;
  if (opv > 4) throw AsmError("illegal opcode " + std::to_string(opv));
  WispInstruction in;
  in.op = static_cast<Opcode>(opv);
  in.rd = (w >> 4) & 3;
  if (in.op == Opcode::MOVI) in.imm = w & 0xF;
  else in.rs = (w >> 2) & 3;
  return in;
}

// ---------------------------------------------------------------------------
// Assembler: one instruction per line, `;` comments.
//   MOVI R1,#7   MOV R0,R3   ADD R0,R1   MULT R2,R3   NOP

inline std::vector<std::uint16_t> assemble(std::istream& in) {
  std::vector<std::uint16_t> words;
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string& m) {
    throw AsmError("line " + std::to_string(lineno) + ": " + m);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto sc = line.find(';');
    if (sc != std::string::npos) line.erase(sc);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    std::string mn;
    if (!(ss >> mn)) continue;
    for (char& c : mn) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    auto reg = [&](const std::string& tok) {
      if (tok.size() != 2 || (tok[0] != 'R' && tok[0] != 'r') || tok[1] < '0' || tok[1] > '3')
        bad("expected register R0..R3, got '" + tok + "'");
      return tok[1] - '0';
    };
    WispInstruction i;
    std::string t1, t2;
    if (mn == "NOP") {
      i.op = Opcode::NOP;
    } else if (mn == "MOV" || mn == "ADD" || mn == "MULT") {
      if (!(ss >> t1 >> t2)) bad(mn + " needs two registers");
      i.op = mn == "MOV" ? Opcode::MOV : (mn == "ADD" ? Opcode::ADD : Opcode::MULT);
      i.rd = reg(t1);
      i.rs = reg(t2);
    } else if (mn == "MOVI") {
      if (!(ss >> t1 >> t2)) bad("MOVI needs a register and an immediate");
      i.op = Opcode::MOVI;
      i.rd = reg(t1);
      if (t2.empty() || t2[0] != '#') bad("immediate must start with '#'");
      int v = 0;
      try {
        v = std::stoi(t2.substr(1));
      } catch (...) {
        bad("bad immediate '" + t2 + "'");
      }
      if (v < 0 || v > 15) bad("immediate out of 0..15");
      i.imm = v;
    } else {
      bad("unknown mnemonic '" + mn + "'");
    }
    std::string extra;
    if (ss >> extra) bad("trailing token '" + extra + "'");
    words.push_back(encode(i));
  }
  if (words.size() > 16) throw AsmError("program exceeds the 16-word instruction store");
  return words;
}

inline std::vector<std::uint16_t> assemble_text(const std::string& text) {
  std::istringstream ss(text);
  return assemble(ss);
}

// ---------------------------------------------------------------------------
// Sequential reference interpreter (the equivalence oracle)

struct WispState {
  int pc = 0;
  std::array<std::uint16_t, 16> rom{};
  std::array<std::uint8_t, 4> regs{};
  std::uint8_t last_product = 0; // full 8-bit product of the latest MULT
};

inline WispState wisp_reference(const std::vector<std::uint16_t>& program, int n_instructions) {
  if (program.size() > 16) throw AsmError("program exceeds 16 instructions");
  WispState st;
  for (std::size_t i = 0; i < program.size(); ++i) st.rom[i] = program[i];
  for (int k = 0; k < n_instructions; ++k) {
    WispInstruction in = decode(st.rom[static_cast<std::size_t>(st.pc)]);
    switch (in.op) {
      case Opcode::NOP: break;
      case Opcode::MOV:
        st.regs[static_cast<std::size_t>(in.rd)] = st.regs[static_cast<std::size_t>(in.rs)];
        break;
      case Opcode::MOVI:
        st.regs[static_cast<std::size_t>(in.rd)] = static_cast<std::uint8_t>(in.imm);
        break;
      case Opcode::ADD:
        st.regs[static_cast<std::size_t>(in.rd)] = static_cast<std::uint8_t>(
            (st.regs[static_cast<std::size_t>(in.rd)] + st.regs[static_cast<std::size_t>(in.rs)]) & 0xF);
        break;
      case Opcode::MULT: {
        int prod = st.regs[static_cast<std::size_t>(in.rd)] * st.regs[static_cast<std::size_t>(in.rs)];
        st.last_product = static_cast<std::uint8_t>(prod & 0xFF);
        st.regs[static_cast<std::size_t>(in.rd)] = static_cast<std::uint8_t>(prod & 0xF);
        break;
      }
    }
    st.pc = (st.pc + 1) & 0xF;
  }
  return st;
}

// ---------------------------------------------------------------------------
// Pipeline netlist generator

struct WispDesign {
  dynlogic::Netlist netlist;
  std::vector<std::uint16_t> rom;
  std::array<std::array<int, 4>, 4> reg_latch; // [reg][bit] latch ids
  std::array<int, 4> pc_latch{};               // latch ids
  std::array<int, 4> wsel_net{};               // write-select nets (stage 13)
  std::array<int, 8> debug_product_net{};      // stage 13
  int reg_latch_stage = 8;
  int writeback_stage = 13;
  int stages = 14;
  int fill_cycles = 5;      // first retirement lands at the start of cycle 5
  int raw_hazard_nops = 2;  // NOPs between a writer and a dependent reader
};

namespace wisp_detail {

// pc + 1 in one stage: bit i flips when all lower bits are 1.
inline DualNet increment_bit(Builder& b, int stage, const std::string& nm,
                             const std::vector<DualNet>& pc, int i) {
  if (i == 0) return b.sop(stage, nm, {{pc[0].n}}, {{pc[0].p}});
  std::vector<Term> pos, neg;
  for (int j = 0; j < i; ++j) pos.push_back({pc[static_cast<std::size_t>(i)].p,
                                             pc[static_cast<std::size_t>(j)].n});
  Term carry_all = {pc[static_cast<std::size_t>(i)].n};
  for (int j = 0; j < i; ++j) carry_all.push_back(pc[static_cast<std::size_t>(j)].p);
  pos.push_back(std::move(carry_all));
  Term all_ones = {pc[static_cast<std::size_t>(i)].p};
  for (int j = 0; j < i; ++j) all_ones.push_back(pc[static_cast<std::size_t>(j)].p);
  neg.push_back(std::move(all_ones));
  for (int j = 0; j < i; ++j) neg.push_back({pc[static_cast<std::size_t>(i)].n,
                                             pc[static_cast<std::size_t>(j)].n});
  return b.sop(stage, nm, pos, neg);
}

} // namespace wisp_detail

inline WispDesign gen_wisp4(const std::vector<std::uint16_t>& program) {
  if (program.size() > 16) throw AsmError("program exceeds the 16-word instruction store");
  WispDesign d;
  d.rom = program;
  d.rom.resize(16, encode({Opcode::NOP, 0, 0, 0})); // unused words read as NOP
  Netlist& nl = d.netlist;
  Builder b(nl);
  Pipeliner pipe(b);

  // --- IF: program counter ring (stages 0-2) and fetch (3-4) -------------
  std::vector<DualNet> pc(4);
  std::array<int, 4> pc_out{}, pc_out_n{};
  for (int i = 0; i < 4; ++i) {
    pc[static_cast<std::size_t>(i)] = {nl.net("pc" + std::to_string(i)),
                                       nl.net("pc" + std::to_string(i) + "_n")};
    pc_out[static_cast<std::size_t>(i)] = pc[static_cast<std::size_t>(i)].p;
    pc_out_n[static_cast<std::size_t>(i)] = pc[static_cast<std::size_t>(i)].n;
  }
  std::vector<DualNet> inc(4), incb(4);
  for (int i = 0; i < 4; ++i)
    inc[static_cast<std::size_t>(i)] =
        wisp_detail::increment_bit(b, 0, "pcinc" + std::to_string(i), pc, i);
  for (int i = 0; i < 4; ++i)
    incb[static_cast<std::size_t>(i)] = b.buf(1, "pcincb" + std::to_string(i),
                                              inc[static_cast<std::size_t>(i)]);
  for (int i = 0; i < 4; ++i) {
    // init 1111 so the first update latches 0000; the ring starts at slot 3
    d.pc_latch[static_cast<std::size_t>(i)] =
        nl.latch(2, pc_out[static_cast<std::size_t>(i)], pc_out_n[static_cast<std::size_t>(i)],
                 b.vcc(), incb[static_cast<std::size_t>(i)].p, true);
  }
  nl.stage_start_override[2] = 3;

  // stage 3: 4:16 word decoder (one-hot)
  std::vector<int> wline(16);
  for (int code = 0; code < 16; ++code) {
    int wn = nl.net("w" + std::to_string(code));
    for (int i = 0; i < 4; ++i)
      nl.nand(3, wn, {((code >> i) & 1) ? pc[static_cast<std::size_t>(i)].n
                                        : pc[static_cast<std::size_t>(i)].p});
    wline[static_cast<std::size_t>(code)] = wn;
  }

  // stage 4: instruction store, dual-rail bits
  std::vector<DualNet> ins(9);
  for (int bit = 0; bit < 9; ++bit) {
    DualNet net = b.fresh("ins" + std::to_string(bit));
    bool any0 = false, any1 = false;
    for (int wd = 0; wd < 16; ++wd) {
      bool v = (d.rom[static_cast<std::size_t>(wd)] >> bit) & 1;
      if (!v) { nl.nand(4, net.p, {wline[static_cast<std::size_t>(wd)]}); any0 = true; }
      else { nl.nand(4, net.n, {wline[static_cast<std::size_t>(wd)]}); any1 = true; }
    }
    if (!any0) nl.nand(4, net.p, {b.gnd()});
    if (!any1) nl.nand(4, net.n, {b.gnd()});
    ins[static_cast<std::size_t>(bit)] = net;
  }

  // --- ID (stage 5): opcode/operand decode -------------------------------
  DualNet ob0 = ins[6], ob1 = ins[7], ob2 = ins[8];
  auto onehot3 = [&](const std::string& nm, int code) {
    Term t = {(code & 1) ? ob0.p : ob0.n, (code & 2) ? ob1.p : ob1.n, (code & 4) ? ob2.p : ob2.n};
    std::vector<Term> pos = {t};
    std::vector<Term> neg;
    for (int lit = 0; lit < 3; ++lit) {
      DualNet v = lit == 0 ? ob0 : (lit == 1 ? ob1 : ob2);
      neg.push_back({(code >> lit) & 1 ? v.n : v.p});
    }
    // one-hot: true iff every literal matches
    return b.sop(5, nm, pos, neg);
  };
  DualNet op_mov = onehot3("op_mov", static_cast<int>(Opcode::MOV));
  DualNet op_movi = onehot3("op_movi", static_cast<int>(Opcode::MOVI));
  DualNet op_add = onehot3("op_add", static_cast<int>(Opcode::ADD));
  DualNet op_mult = onehot3("op_mult", static_cast<int>(Opcode::MULT));
  // write enable: any of the four register-writing opcodes
  std::vector<Term> we_pos, we_neg;
  for (int code : {1, 2, 3, 4})
    we_pos.push_back({(code & 1) ? ob0.p : ob0.n, (code & 2) ? ob1.p : ob1.n,
                      (code & 4) ? ob2.p : ob2.n});
  for (int code : {0, 5, 6, 7})
    we_neg.push_back({(code & 1) ? ob0.p : ob0.n, (code & 2) ? ob1.p : ob1.n,
                      (code & 4) ? ob2.p : ob2.n});
  DualNet we = b.sop(5, "we", we_pos, we_neg);

  auto onehot2 = [&](const std::string& nm, DualNet b0, DualNet b1, int code) {
    std::vector<Term> pos = {{(code & 1) ? b0.p : b0.n, (code & 2) ? b1.p : b1.n}};
    std::vector<Term> neg = {{(code & 1) ? b0.n : b0.p}, {(code & 2) ? b1.n : b1.p}};
    return b.sop(5, nm, pos, neg);
  };
  std::vector<DualNet> rdh(4), rsh(4);
  for (int r = 0; r < 4; ++r) {
    rdh[static_cast<std::size_t>(r)] = onehot2("rd" + std::to_string(r), ins[4], ins[5], r);
    rsh[static_cast<std::size_t>(r)] = onehot2("rs" + std::to_string(r), ins[2], ins[3], r);
  }
  for (int i = 0; i < 4; ++i)
    pipe.put("imm" + std::to_string(i), 5,
             b.buf(5, "imm" + std::to_string(i), ins[static_cast<std::size_t>(i)]));
  for (int r = 0; r < 4; ++r) pipe.put("rdh" + std::to_string(r), 5, rdh[static_cast<std::size_t>(r)]);
  pipe.put("we", 5, we);
  pipe.put("op_mov", 5, op_mov);
  pipe.put("op_movi", 5, op_movi);
  pipe.put("op_add", 5, op_add);
  pipe.put("op_mult", 5, op_mult);

  // --- register file latches (stage 8, written from stage 13) ------------
  std::array<std::array<DualNet, 4>, 4> q;
  for (int r = 0; r < 4; ++r)
    for (int bit = 0; bit < 4; ++bit) {
      std::string nm = "q" + std::to_string(r) + std::to_string(bit);
      q[static_cast<std::size_t>(r)][static_cast<std::size_t>(bit)] = {nl.net(nm), nl.net(nm + "_n")};
    }

  // --- RA (stage 6): operand read ----------------------------------------
  std::vector<DualNet> val_rs(4), val_rd(4);
  for (int bit = 0; bit < 4; ++bit) {
    std::vector<std::pair<DualNet, DualNet>> arms_rs, arms_rd;
    for (int r = 0; r < 4; ++r) {
      arms_rs.push_back({rsh[static_cast<std::size_t>(r)],
                         q[static_cast<std::size_t>(r)][static_cast<std::size_t>(bit)]});
      arms_rd.push_back({rdh[static_cast<std::size_t>(r)],
                         q[static_cast<std::size_t>(r)][static_cast<std::size_t>(bit)]});
    }
    val_rs[static_cast<std::size_t>(bit)] = b.mux_onehot(6, "vrs" + std::to_string(bit), arms_rs);
    val_rd[static_cast<std::size_t>(bit)] = b.mux_onehot(6, "vrd" + std::to_string(bit), arms_rd);
    pipe.put("vrs" + std::to_string(bit), 6, val_rs[static_cast<std::size_t>(bit)]);
    pipe.put("vrd" + std::to_string(bit), 6, val_rd[static_cast<std::size_t>(bit)]);
  }

  // --- EX (stages 7-12): adder, multiplier, move paths --------------------
  ClaPorts addp;
  for (int bit = 0; bit < 4; ++bit) {
    addp.a.push_back(pipe.feed("vrd" + std::to_string(bit), 7));
    addp.b.push_back(pipe.feed("vrs" + std::to_string(bit), 7));
  }
  addp.cin = b.const_dual(false);
  ClaResult add = gen_cla_into(b, pipe, "alu_", 7, cla_spec(4), addp, /*compact=*/true);
  for (int bit = 0; bit < 4; ++bit)
    pipe.put("addv" + std::to_string(bit), add.result_stage, add.sum[static_cast<std::size_t>(bit)]);

  std::vector<DualNet> ma, mb;
  for (int bit = 0; bit < 4; ++bit) {
    ma.push_back(pipe.feed("vrd" + std::to_string(bit), 7));
    mb.push_back(pipe.feed("vrs" + std::to_string(bit), 7));
  }
  MultResult mul = gen_mult_into(b, "mul_", 7, ma, mb, AdderCellStyle::single_stage_parity, 6);
  for (int bit = 0; bit < 8; ++bit)
    pipe.put("mulv" + std::to_string(bit), mul.result_stage, mul.product[static_cast<std::size_t>(bit)]);

  // --- WB (stage 13): result selection and write strobes ------------------
  const int wb = 13;
  std::vector<DualNet> res(4);
  for (int bit = 0; bit < 4; ++bit) {
    std::vector<std::pair<DualNet, DualNet>> arms = {
        {pipe.feed("op_movi", wb), pipe.feed("imm" + std::to_string(bit), wb)},
        {pipe.feed("op_mov", wb), pipe.feed("vrs" + std::to_string(bit), wb)},
        {pipe.feed("op_add", wb), pipe.feed("addv" + std::to_string(bit), wb)},
        {pipe.feed("op_mult", wb), pipe.feed("mulv" + std::to_string(bit), wb)},
    };
    res[static_cast<std::size_t>(bit)] = b.mux_onehot(wb, "res" + std::to_string(bit), arms);
    nl.set_init(res[static_cast<std::size_t>(bit)].p, dynlogic::Logic::zero);
    nl.set_init(res[static_cast<std::size_t>(bit)].n, dynlogic::Logic::one);
  }
  for (int r = 0; r < 4; ++r) {
    DualNet sel = b.and2(wb, "wsel" + std::to_string(r), pipe.feed("we", wb),
                         pipe.feed("rdh" + std::to_string(r), wb));
    nl.set_init(sel.p, dynlogic::Logic::zero);
    nl.set_init(sel.n, dynlogic::Logic::one);
    d.wsel_net[static_cast<std::size_t>(r)] = sel.p;
    for (int bit = 0; bit < 4; ++bit) {
      d.reg_latch[static_cast<std::size_t>(r)][static_cast<std::size_t>(bit)] =
          nl.latch(8, q[static_cast<std::size_t>(r)][static_cast<std::size_t>(bit)].p,
                   q[static_cast<std::size_t>(r)][static_cast<std::size_t>(bit)].n, sel.p,
                   res[static_cast<std::size_t>(bit)].p, false);
    }
  }
  for (int bit = 0; bit < 8; ++bit) {
    DualNet dbg = b.buf(wb, "prod" + std::to_string(bit), pipe.feed("mulv" + std::to_string(bit), wb));
    d.debug_product_net[static_cast<std::size_t>(bit)] = dbg.p;
    nl.mark_output(dbg.p);
  }
  for (int bit = 0; bit < 4; ++bit) nl.mark_output(res[static_cast<std::size_t>(bit)].p);

  if (nl.num_stages != 14)
    throw std::logic_error("wisp pipeline occupies " + std::to_string(nl.num_stages) +
                           " stages, expected 14");
  nl.validate();
  return d;
}

// ---------------------------------------------------------------------------
// Execution wrapper: runs the pipeline netlist, counts retirements (write
// strobes at the register-file latches) and exposes architectural state.

class WispMachine {
public:
  explicit WispMachine(const std::vector<std::uint16_t>& program)
      : design_(gen_wisp4(program)),
        sim_(design_.netlist, dynlogic::PhaseSchedule::dual_rail(design_.stages)) {}

  const WispDesign& design() const { return design_; }

  // Advance one slot; record a retirement when the register-file latches
  // evaluate with any write strobe active.
  void step_slot() {
    sim_.step(slot_);
    const auto& sched = sim_.schedule();
    if (!sched.dormant(design_.reg_latch_stage, slot_) &&
        sched.phase(design_.reg_latch_stage, slot_) == dynlogic::Phase::eva) {
      bool any = false;
      for (int r = 0; r < 4; ++r)
        if (sim_.value(design_.wsel_net[static_cast<std::size_t>(r)]) == dynlogic::Logic::one)
          any = true;
      write_strobes_.push_back(any);
      if (any) ++retired_;
    }
    ++slot_;
  }

  void run_cycles(int cycles) {
    for (int i = 0; i < cycles * 3; ++i) step_slot();
  }

  // Run until `n` instructions with write-back have retired (NOPs do not
  // strobe). Throws if the budget is exhausted.
  void run_until_retired(std::int64_t n, int max_cycles = 4096) {
    int budget = max_cycles * 3;
    while (retired_ < n && budget-- > 0) step_slot();
    if (retired_ < n)
      throw std::runtime_error("wisp: retirement budget exhausted at " + std::to_string(retired_));
  }

  std::array<std::uint8_t, 4> registers() const {
    std::array<std::uint8_t, 4> out{};
    for (int r = 0; r < 4; ++r) {
      int v = 0;
      for (int bit = 0; bit < 4; ++bit)
        if (sim_.latch_state(design_.reg_latch[static_cast<std::size_t>(r)][static_cast<std::size_t>(bit)]))
          v |= 1 << bit;
      out[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(v);
    }
    return out;
  }

  int pc() const {
    int v = 0;
    for (int bit = 0; bit < 4; ++bit)
      if (sim_.latch_state(design_.pc_latch[static_cast<std::size_t>(bit)])) v |= 1 << bit;
    return v;
  }

  std::uint8_t debug_product() const {
    int v = 0;
    for (int bit = 0; bit < 8; ++bit)
      if (sim_.value(design_.debug_product_net[static_cast<std::size_t>(bit)]) == dynlogic::Logic::one)
        v |= 1 << bit;
    return static_cast<std::uint8_t>(v);
  }

  std::int64_t retired() const { return retired_; }
  std::int64_t cycles() const { return slot_ / 3; }
  const std::vector<bool>& write_strobes() const { return write_strobes_; } // one per cycle

private:
  WispDesign design_;
  dynlogic::Simulator sim_;
  int slot_ = 0;
  std::int64_t retired_ = 0;
  std::vector<bool> write_strobes_;
};

// Writer-visible retirements the reference counts: instructions that write.
inline std::int64_t count_writes(const std::vector<std::uint16_t>& program, int n_instructions) {
  std::int64_t w = 0;
  int pc = 0;
  std::vector<std::uint16_t> rom = program;
  rom.resize(16, encode({Opcode::NOP, 0, 0, 0}));
  for (int k = 0; k < n_instructions; ++k) {
    if (decode(rom[static_cast<std::size_t>(pc)]).op != Opcode::NOP) ++w;
    pc = (pc + 1) & 0xF;
  }
  return w;
}

} // namespace vnfab::designs
