#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "vnfab/designs/wisp.hpp"

using namespace vnfab::designs;

namespace {

std::vector<std::uint16_t> load(const std::string& rel) {
  std::ifstream in(std::string(VNFAB_SOURCE_DIR) + "/" + rel);
  REQUIRE(in.good());
  return assemble(in);
}

} // namespace

TEST_CASE("instruction encoding") {
  // MOVI R1,#7: opcode 010, rd 01, imm 0111
  WispInstruction movi{Opcode::MOVI, 1, 0, 7};
  CHECK(encode(movi) == 0b010'01'0111);
  // NOP is an opcode-only word
  CHECK(encode({Opcode::NOP, 0, 0, 0}) == 0);

  // round trip over the whole valid set
  for (int op = 0; op <= 4; ++op)
    for (int rd = 0; rd < 4; ++rd) {
      if (static_cast<Opcode>(op) == Opcode::MOVI) {
        for (int imm = 0; imm < 16; ++imm) {
          WispInstruction i{static_cast<Opcode>(op), rd, 0, imm};
          WispInstruction back = decode(encode(i));
          CHECK(back.op == i.op);
          CHECK(back.rd == i.rd);
          CHECK(back.imm == i.imm);
        }
      } else {
        for (int rs = 0; rs < 4; ++rs) {
          WispInstruction i{static_cast<Opcode>(op), rd, rs, 0};
          WispInstruction back = decode(encode(i));
          CHECK(back.op == i.op);
          CHECK(back.rd == i.rd);
          if (i.op != Opcode::NOP) CHECK(back.rs == i.rs);
        }
      }
    }
  CHECK_THROWS_AS(decode(0b101'00'0000), AsmError); // illegal opcode 5
}

TEST_CASE("assembler errors carry line numbers") {
  std::istringstream bad1("NOP\nFROB R1,R2\n");
  try {
    assemble(bad1);
    FAIL("expected assembly error");
  } catch (const AsmError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream bad2("MOVI R1,#16\n");
  CHECK_THROWS_AS(assemble(bad2), AsmError);
  std::istringstream bad3("MOV R4,R0\n");
  CHECK_THROWS_AS(assemble(bad3), AsmError);
  std::istringstream big("NOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\nNOP\n");
  CHECK_THROWS_AS(assemble(big), AsmError);
}

TEST_CASE("reference interpreter") {
  auto p1 = assemble_text("MOVI R2,#9\n");
  CHECK(wisp_reference(p1, 1).regs[2] == 9);

  auto p2 = assemble_text("MOVI R3,#6\nMOV R0,R3\n");
  auto st2 = wisp_reference(p2, 2);
  CHECK(st2.regs[0] == 6);
  CHECK(st2.regs[3] == 6);

  // addition truncates to the low nibble
  auto p3 = assemble_text("MOVI R0,#9\nMOVI R1,#9\nADD R0,R1\n");
  CHECK(wisp_reference(p3, 3).regs[0] == 2);

  // multiplication writes the low nibble, keeps the full product aside
  auto p4 = assemble_text("MOVI R0,#3\nMOVI R1,#7\nMULT R0,R1\n");
  auto st4 = wisp_reference(p4, 3);
  CHECK(st4.regs[0] == 5);
  CHECK(st4.last_product == 21);

  // pc wraps mod 16
  auto st5 = wisp_reference(assemble_text("NOP\n"), 20);
  CHECK(st5.pc == 4);
}

TEST_CASE("pipeline equals reference on shipped programs") {
  for (const std::string rel :
       {"programs/movi_add.asm", "programs/mult.asm", "programs/mov_chain.asm",
        "programs/nops.asm", "programs/throughput.asm"}) {
    auto prog = load(rel);
    auto ref = wisp_reference(prog, static_cast<int>(prog.size()));
    WispMachine m(prog);
    std::int64_t writes = count_writes(prog, static_cast<int>(prog.size()));
    m.run_until_retired(writes);
    if (writes == 0) m.run_cycles(m.design().fill_cycles + 16);
    INFO(rel);
    CHECK(m.registers() == ref.regs);
  }
}

TEST_CASE("wrapped execution re-runs the head of the store") {
  auto prog = load("programs/wrap.asm");
  REQUIRE(prog.size() == 16);
  int n = 20; // wraps and re-executes the first four words
  auto ref = wisp_reference(prog, n);
  WispMachine m(prog);
  m.run_until_retired(count_writes(prog, n));
  CHECK(m.registers() == ref.regs);
}

TEST_CASE("program counter wraps mod 16") {
  auto prog = assemble_text("NOP\n");
  WispMachine m(prog);
  std::vector<int> seen;
  for (int cycle = 0; cycle < 36; ++cycle) {
    m.run_cycles(1);
    seen.push_back(m.pc());
  }
  // after the ring fills, the counter advances by one per cycle, mod 16
  for (std::size_t i = 4; i + 1 < seen.size(); ++i)
    CHECK(seen[i + 1] == ((seen[i] + 1) & 0xF));
}

TEST_CASE("throughput: one instruction per cycle after a five-cycle fill") {
  auto prog = load("programs/throughput.asm");
  WispMachine m(prog);
  m.run_cycles(20);
  const auto& strobes = m.write_strobes(); // entry k corresponds to cycle k + 3
  REQUIRE(strobes.size() >= 10);
  int first = -1;
  for (std::size_t k = 0; k < strobes.size(); ++k)
    if (strobes[k]) { first = static_cast<int>(k); break; }
  REQUIRE(first >= 0);
  CHECK(first + 3 == m.design().fill_cycles); // retirement starts at cycle 5
  for (int k = first; k < first + 8; ++k) CHECK(strobes[static_cast<std::size_t>(k)]);
  CHECK_FALSE(strobes[static_cast<std::size_t>(first + 8)]);
  CHECK(m.retired() == 8);
}

TEST_CASE("hazard distance is exactly two stall slots") {
  // two NOPs between writer and reader: correct forwarding-free behavior
  auto good = assemble_text("MOVI R0,#3\nNOP\nNOP\nADD R0,R0\n");
  auto ref = wisp_reference(good, 4);
  WispMachine mg(good);
  mg.run_until_retired(count_writes(good, 4));
  CHECK(mg.registers() == ref.regs);
  CHECK(mg.registers()[0] == 6);

  // one NOP is not enough: the dependent read sees the stale register
  auto bad = assemble_text("MOVI R0,#3\nNOP\nADD R0,R0\n");
  WispMachine mb(bad);
  mb.run_until_retired(count_writes(bad, 3));
  CHECK(mb.registers()[0] == 0); // stale zero added to itself
  CHECK(wisp_reference(bad, 3).regs[0] == 6);
}

TEST_CASE("debug product port carries the full 8-bit product") {
  auto prog = load("programs/mult.asm");
  WispMachine m(prog);
  m.run_until_retired(count_writes(prog, static_cast<int>(prog.size())));
  CHECK(m.registers()[0] == 5);
  CHECK(m.debug_product() == 21);
}

TEST_CASE("netlist interchange round trip for the processor") {
  auto prog = assemble_text("MOVI R0,#1\nNOP\n");
  WispDesign d = gen_wisp4(prog);
  std::ostringstream os;
  vnfab::dynlogic::write_netlist(d.netlist, os);
  std::istringstream in(os.str());
  vnfab::dynlogic::Netlist back = vnfab::dynlogic::parse_netlist(in);
  CHECK(back.terms.size() == d.netlist.terms.size());
  CHECK(back.latches.size() == d.netlist.latches.size());
  CHECK(back.num_stages == d.netlist.num_stages);
}
