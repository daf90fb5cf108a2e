#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "vnfab/designs/builder.hpp"

// 4x4 array multiplier. Partial products come from compound AND gates; the
// column array is reduced with half/full adders (carries rippling into the
// next column); the two surviving rows are added by a look-ahead carry
// stage. The standalone generator uses the cascaded-XOR adder cells and
// occupies exactly nine stages, the result appearing at the ninth clock
// phase. The embedded variant uses single-stage parity cells to fit a
// processor execute path.

namespace vnfab::designs {

enum class AdderCellStyle { cascaded_xor, single_stage_parity };

struct MultResult {
  std::vector<DualNet> product; // 8 bits, all valid at result_stage
  int result_stage = 0;
  int stages = 0;
};

namespace detail {

struct ColItem {
  DualNet net;
  int stage;
};

inline DualNet align_to(Builder& b, const std::string& nm, DualNet net, int from, int to) {
  DualNet cur = net;
  for (int s = from + 1; s <= to; ++s)
    cur = b.buf(s, nm + "_al" + std::to_string(s), cur);
  return cur;
}

} // namespace detail

inline MultResult gen_mult_into(Builder& b, const std::string& pfx, int base_stage,
                                const std::vector<DualNet>& a, const std::vector<DualNet>& bb,
                                AdderCellStyle style, int target_stages) {
  using detail::ColItem;
  int uid = 0;
  auto name = [&](const std::string& kind) { return pfx + kind + std::to_string(uid++); };

  std::vector<std::vector<ColItem>> col(9);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      DualNet pp = b.and2(base_stage, pfx + "pp" + std::to_string(i) + std::to_string(j),
                          a[static_cast<std::size_t>(i)], bb[static_cast<std::size_t>(j)]);
      col[static_cast<std::size_t>(i + j)].push_back({pp, base_stage});
    }

  auto take_earliest = [&](std::vector<ColItem>& c) {
    auto it = std::min_element(c.begin(), c.end(),
                               [](const ColItem& x, const ColItem& y) { return x.stage < y.stage; });
    ColItem r = *it;
    c.erase(it);
    return r;
  };

  // Reduce every column to at most two items; carries ripple into the next
  // column, so columns are processed low to high.
  for (int w = 0; w < 8; ++w) {
    auto& c = col[static_cast<std::size_t>(w)];
    while (c.size() >= 3) {
      ColItem x = take_earliest(c), y = take_earliest(c), z = take_earliest(c);
      int m = std::max({x.stage, y.stage, z.stage});
      DualNet xa = detail::align_to(b, name("fx"), x.net, x.stage, m);
      DualNet ya = detail::align_to(b, name("fy"), y.net, y.stage, m);
      DualNet za = detail::align_to(b, name("fz"), z.net, z.stage, m);
      DualNet carry = b.majority3(m + 1, name("fc"), xa, ya, za);
      DualNet sum;
      int sum_stage;
      if (style == AdderCellStyle::single_stage_parity) {
        sum = b.xor3(m + 1, name("fs"), xa, ya, za);
        sum_stage = m + 1;
      } else {
        DualNet t = b.xor2(m + 1, name("ft"), xa, ya);
        DualNet zb = b.buf(m + 1, name("fzb"), za);
        sum = b.xor2(m + 2, name("fs"), t, zb);
        sum_stage = m + 2;
      }
      c.push_back({sum, sum_stage});
      col[static_cast<std::size_t>(w + 1)].push_back({carry, m + 1});
    }
  }

  // Final two-row addition over the columns still holding a second item.
  int w_lo = -1, w_hi = -1;
  for (int w = 0; w < 8; ++w) {
    if (col[static_cast<std::size_t>(w)].size() == 2) {
      if (w_lo < 0) w_lo = w;
      w_hi = w;
    }
  }
  MultResult r;
  std::vector<DualNet> out(8);
  std::vector<int> out_stage(8, base_stage);

  if (w_lo < 0) {
    for (int w = 0; w < 8; ++w) {
      if (col[static_cast<std::size_t>(w)].empty()) {
        out[static_cast<std::size_t>(w)] = b.const_dual(false);
        out_stage[static_cast<std::size_t>(w)] = base_stage;
      } else {
        out[static_cast<std::size_t>(w)] = col[static_cast<std::size_t>(w)][0].net;
        out_stage[static_cast<std::size_t>(w)] = col[static_cast<std::size_t>(w)][0].stage;
      }
    }
  } else {
    int align = base_stage;
    for (int w = w_lo; w <= w_hi; ++w)
      for (const auto& it : col[static_cast<std::size_t>(w)]) align = std::max(align, it.stage);
    // propagate/generate of rows X and Y
    std::vector<DualNet> p(static_cast<std::size_t>(w_hi - w_lo + 1));
    std::vector<DualNet> g(static_cast<std::size_t>(w_hi - w_lo + 1));
    for (int w = w_lo; w <= w_hi; ++w) {
      auto& c = col[static_cast<std::size_t>(w)];
      DualNet x = detail::align_to(b, name("cx"), c[0].net, c[0].stage, align);
      std::size_t k = static_cast<std::size_t>(w - w_lo);
      if (c.size() == 2) {
        DualNet y = detail::align_to(b, name("cy"), c[1].net, c[1].stage, align);
        p[k] = b.xor2(align + 1, pfx + "cpap" + std::to_string(w), x, y);
        g[k] = b.and2(align + 1, pfx + "cpag" + std::to_string(w), x, y);
      } else {
        p[k] = b.buf(align + 1, pfx + "cpap" + std::to_string(w), x);
        g[k] = b.const_dual(false);
      }
    }
    // carries into each position, anchored at zero carry-in; constant-zero
    // generates prune their terms inside the sop builder
    std::vector<DualNet> carry(static_cast<std::size_t>(w_hi - w_lo + 2));
    carry[0] = b.const_dual(false);
    for (int j = 1; j <= w_hi - w_lo + 1; ++j) {
      std::vector<Term> pos, neg;
      for (int t = j - 1; t >= 0; --t) {
        Term tp = {g[static_cast<std::size_t>(t)].p};
        Term tn = {g[static_cast<std::size_t>(t)].n, p[static_cast<std::size_t>(t)].n};
        for (int u = t + 1; u < j; ++u) {
          tp.push_back(p[static_cast<std::size_t>(u)].p);
          tn.push_back(g[static_cast<std::size_t>(u)].n);
        }
        pos.push_back(std::move(tp));
        neg.push_back(std::move(tn));
      }
      carry[static_cast<std::size_t>(j)] =
          b.sop(align + 2, pfx + "cpac" + std::to_string(w_lo + j), pos, neg);
    }
    for (int w = w_lo; w <= w_hi; ++w) {
      std::size_t k = static_cast<std::size_t>(w - w_lo);
      DualNet pb = b.buf(align + 2, name("cpb"), p[k]);
      out[static_cast<std::size_t>(w)] =
          b.xor2(align + 3, pfx + "ps" + std::to_string(w), pb, carry[k]);
      out_stage[static_cast<std::size_t>(w)] = align + 3;
    }
    for (int w = 0; w < w_lo; ++w) {
      auto& c = col[static_cast<std::size_t>(w)];
      out[static_cast<std::size_t>(w)] = c.empty() ? b.const_dual(false) : c[0].net;
      out_stage[static_cast<std::size_t>(w)] = c.empty() ? base_stage : c[0].stage;
    }
    if (w_hi + 1 < 8) {
      out[static_cast<std::size_t>(w_hi + 1)] = carry[static_cast<std::size_t>(w_hi - w_lo + 1)];
      out_stage[static_cast<std::size_t>(w_hi + 1)] = align + 2;
      for (int w = w_hi + 2; w < 8; ++w) {
        out[static_cast<std::size_t>(w)] = b.const_dual(false);
        out_stage[static_cast<std::size_t>(w)] = base_stage;
      }
    }
  }

  const int result_stage = base_stage + target_stages - 1;
  for (int w = 0; w < 8; ++w) {
    if (out_stage[static_cast<std::size_t>(w)] > result_stage)
      throw std::logic_error("multiplier does not fit the stage budget: bit " + std::to_string(w) +
                             " at stage " + std::to_string(out_stage[static_cast<std::size_t>(w)]) +
                             " > " + std::to_string(result_stage));
    DualNet net = out[static_cast<std::size_t>(w)];
    if (net.p == b.gnd() || net.p == b.vcc()) {
      // materialize constants so every product bit evaluates at the result stage
      r.product.push_back(b.buf(result_stage, pfx + "m" + std::to_string(w) + "_const", net));
    } else {
      r.product.push_back(detail::align_to(b, pfx + "m" + std::to_string(w),
                                           net, out_stage[static_cast<std::size_t>(w)], result_stage));
    }
  }
  r.result_stage = result_stage;
  r.stages = target_stages;
  return r;
}

struct MultiplierDesign {
  dynlogic::Netlist netlist;
  int result_stage = 0;
  std::vector<std::string> product_names;
};

// Standalone 4x4 multiplier: nine stages, product at the ninth phase.
inline MultiplierDesign gen_multiplier4() {
  MultiplierDesign d;
  Builder b(d.netlist);
  std::vector<DualNet> a, bb;
  for (int i = 0; i < 4; ++i) a.push_back(b.dual_input("a" + std::to_string(i)));
  for (int i = 0; i < 4; ++i) bb.push_back(b.dual_input("b" + std::to_string(i)));
  MultResult r = gen_mult_into(b, "", 0, a, bb, AdderCellStyle::cascaded_xor, 9);
  for (int w = 0; w < 8; ++w) {
    d.netlist.mark_output(r.product[static_cast<std::size_t>(w)].p);
    d.product_names.push_back(
        d.netlist.nets[static_cast<std::size_t>(r.product[static_cast<std::size_t>(w)].p)].name);
  }
  d.result_stage = r.result_stage;
  if (d.netlist.num_stages != 9)
    throw std::logic_error("multiplier stage count " + std::to_string(d.netlist.num_stages) +
                           ", expected 9");
  return d;
}

} // namespace vnfab::designs
