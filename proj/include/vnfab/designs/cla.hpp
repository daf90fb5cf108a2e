#pragma once

#include <string>
#include <vector>

#include "vnfab/designs/builder.hpp"

// Carry look-ahead adder generator. Structure per bit-width:
//   stage 0            propagate/generate (XOR / AND compounds) plus the
//                      first carry as a majority of a0, b0, cin
//   stages 1..k        carry blocks: the recurrence flattened to AND-of-NAND
//                      covers, at most eight literals per member (one stack
//                      input stays reserved for the heat junction)
//   stage k+1          buffer stage for signal synchronization
//   stage k+2          sum stage (XOR compounds); a trailing carry that
//                      would overflow the member width is folded here
//
// 4- and 8-bit widths use a single carry block; 16-bit uses two 8-bit carry
// blocks. All nets are dual rail.

namespace vnfab::designs {

struct ClaSpec {
  int width = 4;
  int max_fan_in = 4; // 4 for width 4, 9 otherwise
};

inline ClaSpec cla_spec(int width) {
  if (width != 4 && width != 8 && width != 16)
    throw std::invalid_argument("cla width must be 4, 8 or 16");
  return {width, width == 4 ? 4 : 9};
}

struct ClaPorts {
  std::vector<DualNet> a, b;
  DualNet cin;
};

struct ClaResult {
  std::vector<DualNet> sum;
  DualNet cout;
  int result_stage = 0; // stage at which sum and cout evaluate
  int stages = 0;       // total stages occupied
};

class FanInError : public std::runtime_error {
public:
  explicit FanInError(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {

// Carries c[a+1..a+span] flattened from anchor c_a over (p, g) of bits
// a..a+span-1. Member literal count tops out at span+1.
inline void carry_block(Builder& b, Pipeliner& pipe, const std::string& pfx, int stage, int anchor,
                        int span, int usable_fan_in) {
  if (span + 1 > usable_fan_in)
    throw FanInError(pfx + "carry block from c" + std::to_string(anchor) + " spans " +
                     std::to_string(span) + " bits: member fan-in " + std::to_string(span + 1) +
                     " exceeds " + std::to_string(usable_fan_in));
  DualNet ca = pipe.feed(pfx + "c" + std::to_string(anchor), stage);
  std::vector<DualNet> g(static_cast<std::size_t>(span)), p(static_cast<std::size_t>(span));
  for (int i = 0; i < span; ++i) {
    g[static_cast<std::size_t>(i)] = pipe.feed(pfx + "g" + std::to_string(anchor + i), stage);
    p[static_cast<std::size_t>(i)] = pipe.feed(pfx + "p" + std::to_string(anchor + i), stage);
  }
  for (int j = 1; j <= span; ++j) {
    // c_{anchor+j} = sum_{t} (prod_{u>t} P_u) G_t  +  (prod P) c_anchor
    std::vector<Term> pos, neg;
    for (int t = j - 1; t >= 0; --t) {
      Term tp = {g[static_cast<std::size_t>(t)].p};
      for (int u = t + 1; u < j; ++u) tp.push_back(p[static_cast<std::size_t>(u)].p);
      pos.push_back(std::move(tp));
      Term tn = {g[static_cast<std::size_t>(t)].n, p[static_cast<std::size_t>(t)].n};
      for (int u = t + 1; u < j; ++u) tn.push_back(g[static_cast<std::size_t>(u)].n);
      neg.push_back(std::move(tn));
    }
    Term tail_p = {ca.p};
    Term tail_n = {ca.n};
    for (int u = 0; u < j; ++u) {
      tail_p.push_back(p[static_cast<std::size_t>(u)].p);
      tail_n.push_back(g[static_cast<std::size_t>(u)].n);
    }
    pos.push_back(std::move(tail_p));
    neg.push_back(std::move(tail_n));
    std::string nm = pfx + "c" + std::to_string(anchor + j);
    pipe.put(nm, stage, b.sop(stage, nm, pos, neg));
  }
}

} // namespace detail

// Emit a CLA into an existing builder starting at base_stage. compact folds
// the dedicated buffer stage away (used when embedding into a larger
// pipeline); standalone adders keep it.
inline ClaResult gen_cla_into(Builder& b, Pipeliner& pipe, const std::string& pfx, int base_stage,
                              const ClaSpec& spec, const ClaPorts& ports, bool compact = false) {
  const int w = spec.width;
  const int usable = std::min(spec.max_fan_in, 8);
  ClaResult r;

  pipe.put(pfx + "c0", base_stage - 1, ports.cin);

  // stage 0: propagate/generate and the first carry
  for (int i = 0; i < w; ++i) {
    DualNet a = ports.a[static_cast<std::size_t>(i)];
    DualNet bb = ports.b[static_cast<std::size_t>(i)];
    pipe.put(pfx + "p" + std::to_string(i), base_stage, b.xor2(base_stage, pfx + "p" + std::to_string(i), a, bb));
    if (i >= 1)
      pipe.put(pfx + "g" + std::to_string(i), base_stage, b.and2(base_stage, pfx + "g" + std::to_string(i), a, bb));
  }
  pipe.put(pfx + "c1", base_stage,
           b.majority3(base_stage, pfx + "c1", ports.a[0], ports.b[0], ports.cin));

  // carry blocks: spans of at most usable-1 bits per stage
  const int span_cap = usable - 1;
  int anchor = 1;
  int stage = base_stage + 1;
  while (anchor < w) {
    int span = std::min(span_cap, w - anchor);
    bool last_piece = (anchor + span == w) && span == 1 && anchor > 1;
    if (last_piece) break; // lone trailing carry folds into the sum stage
    detail::carry_block(b, pipe, pfx, stage, anchor, span, usable);
    anchor += span;
    ++stage;
  }

  int buffer_stage = stage;
  int sum_stage = compact ? stage : stage + 1;
  if (!compact) {
    // dedicated buffer stage: align p and c for summation
    for (int i = 0; i < w; ++i) {
      pipe.at(pfx + "p" + std::to_string(i), buffer_stage);
      pipe.at(pfx + "c" + std::to_string(i), buffer_stage);
    }
  }

  for (int i = 0; i < w; ++i) {
    DualNet p = pipe.feed(pfx + "p" + std::to_string(i), sum_stage);
    DualNet c = pipe.feed(pfx + "c" + std::to_string(i), sum_stage);
    r.sum.push_back(b.xor2(sum_stage, pfx + "s" + std::to_string(i), p, c));
  }
  std::string cw = pfx + "c" + std::to_string(w);
  if (anchor == w) {
    // trailing carry computed here from the previous carry
    DualNet g = pipe.feed(pfx + "g" + std::to_string(w - 1), sum_stage);
    DualNet p = pipe.feed(pfx + "p" + std::to_string(w - 1), sum_stage);
    DualNet c = pipe.feed(pfx + "c" + std::to_string(w - 1), sum_stage);
    r.cout = b.sop(sum_stage, cw, {{g.p}, {p.p, c.p}}, {{g.n, p.n}, {g.n, c.n}});
  } else {
    r.cout = b.buf(sum_stage, cw + "_out", pipe.feed(cw, sum_stage));
  }
  r.result_stage = sum_stage;
  r.stages = sum_stage - base_stage + 1;
  return r;
}

struct ClaDesign {
  dynlogic::Netlist netlist;
  ClaSpec spec;
  int result_stage = 0;
  std::vector<std::string> sum_names;
  std::string cout_name;
};

inline ClaDesign gen_cla(const ClaSpec& spec) {
  ClaDesign d;
  d.spec = spec;
  Builder b(d.netlist);
  Pipeliner pipe(b);
  ClaPorts ports;
  for (int i = 0; i < spec.width; ++i) {
    ports.a.push_back(b.dual_input("a" + std::to_string(i)));
    ports.b.push_back(b.dual_input("b" + std::to_string(i)));
  }
  ports.cin = b.dual_input("cin");
  ClaResult r = gen_cla_into(b, pipe, "", 0, spec, ports, /*compact=*/false);
  for (int i = 0; i < spec.width; ++i) {
    d.netlist.mark_output(r.sum[static_cast<std::size_t>(i)].p);
    d.sum_names.push_back("s" + std::to_string(i));
  }
  d.netlist.mark_output(r.cout.p);
  d.cout_name = d.netlist.nets[static_cast<std::size_t>(r.cout.p)].name;
  d.result_stage = r.result_stage;
  return d;
}

inline ClaDesign gen_cla(int width) { return gen_cla(cla_spec(width)); }

} // namespace vnfab::designs
