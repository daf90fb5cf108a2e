#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vnfab/designs/builder.hpp"

// Decoder, ROM and latch fragments.

namespace vnfab::designs {

struct DecoderDesign {
  dynlogic::Netlist netlist;
  std::vector<std::string> line_names; // one-hot outputs
  int result_stage = 1;
};

// n:2^n decoder in the cascaded style: the first stage produces the inverted
// minterm, the second inverts it to the one-hot line.
inline DecoderDesign gen_decoder(int n) {
  if (n < 2 || n > 4) throw std::invalid_argument("decoder size must be 2..4");
  DecoderDesign d;
  Builder b(d.netlist);
  std::vector<DualNet> in;
  for (int i = 0; i < n; ++i) in.push_back(b.dual_input("in" + std::to_string(i)));
  for (int code = 0; code < (1 << n); ++code) {
    std::vector<int> lits;
    for (int i = 0; i < n; ++i)
      lits.push_back((code >> i) & 1 ? in[static_cast<std::size_t>(i)].p
                                     : in[static_cast<std::size_t>(i)].n);
    int dn = d.netlist.net("d" + std::to_string(code) + "_n");
    d.netlist.nand(0, dn, lits);
    int dp = d.netlist.net("d" + std::to_string(code));
    d.netlist.nand(1, dp, {dn});
    d.netlist.mark_output(dp);
    d.line_names.push_back("d" + std::to_string(code));
  }
  return d;
}

struct RomDesign {
  dynlogic::Netlist netlist;
  std::vector<std::string> bit_names; // per output bit
  int width = 0;
};

// ROM over one-hot word lines: bit b reads 1 exactly when the selected
// word's bit is 1. Each output is an AND of single-input NAND members over
// the word lines configured to 0 at that bit.
inline RomDesign gen_rom(const std::vector<std::uint16_t>& words, int width) {
  if (words.size() > 16) throw std::invalid_argument("rom capacity is 16 words");
  if (width < 1 || width > 9) throw std::invalid_argument("rom width must be 1..9");
  RomDesign d;
  d.width = width;
  Builder b(d.netlist);
  std::vector<int> w;
  for (std::size_t i = 0; i < words.size(); ++i) w.push_back(d.netlist.input("w" + std::to_string(i)));
  for (int bit = 0; bit < width; ++bit) {
    int out = d.netlist.net("bit" + std::to_string(bit));
    bool any = false;
    for (std::size_t i = 0; i < words.size(); ++i)
      if (!((words[i] >> bit) & 1)) { d.netlist.nand(0, out, {w[i]}); any = true; }
    if (!any) d.netlist.nand(0, out, {b.gnd()}); // every word stores 1 here
    d.netlist.mark_output(out);
    d.bit_names.push_back("bit" + std::to_string(bit));
  }
  return d;
}

struct LatchDesign {
  dynlogic::Netlist netlist;
  int latch_id = -1;
};

// Select/data latch: new data is latched while sel is high, otherwise the
// old output is retained through the feedback.
inline LatchDesign gen_latch() {
  LatchDesign d;
  int sel = d.netlist.input("sel");
  int data = d.netlist.input("data");
  int out = d.netlist.net("out");
  int out_n = d.netlist.net("out_n");
  d.latch_id = d.netlist.latch(0, out, out_n, sel, data, false);
  d.netlist.mark_output(out);
  return d;
}

} // namespace vnfab::designs
