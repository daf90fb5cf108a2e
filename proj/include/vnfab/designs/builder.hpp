#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnfab/dynlogic.hpp"

// Dual-rail construction helpers over a dynlogic netlist. Every generated
// signal carries both polarities; logic functions are emitted as compound
// AND-of-NAND gates built from the sum-of-products of the function and of
// its complement.

namespace vnfab::designs {

using dynlogic::DriverKind;
using dynlogic::Logic;
using dynlogic::Netlist;

struct DualNet {
  int p = -1; // true rail
  int n = -1; // complement rail
};

// A product term: net ids ANDed together (polarities already resolved).
using Term = std::vector<int>;

class Builder {
public:
  explicit Builder(Netlist& nl, std::string prefix = "") : nl_(nl), prefix_(std::move(prefix)) {
    gnd_ = nl_.rail(prefix_ + "gnd", Logic::zero);
    vcc_ = nl_.rail(prefix_ + "vcc", Logic::one);
  }

  Netlist& netlist() { return nl_; }
  int gnd() const { return gnd_; }
  int vcc() const { return vcc_; }
  DualNet const_dual(bool v) const { return v ? DualNet{vcc_, gnd_} : DualNet{gnd_, vcc_}; }

  DualNet dual_input(const std::string& name) {
    return {nl_.input(prefix_ + name), nl_.input(prefix_ + name + "_n")};
  }

  DualNet fresh(const std::string& name) {
    return {nl_.net(prefix_ + name), nl_.net(prefix_ + name + "_n")};
  }

  // f = OR over pos_terms; NOT f = OR over neg_terms. The complement cover
  // must be supplied by the caller (it is what the true rail's AND-of-NAND
  // evaluates). Terms containing a constant-0 literal are dropped and
  // constant-1 literals are stripped; a term that empties makes that cover
  // constant true.
  DualNet sop(int stage, const std::string& name, const std::vector<Term>& pos_terms,
              const std::vector<Term>& neg_terms) {
    DualNet out = fresh(name);
    emit_cover(stage, out.p, neg_terms); // true rail = NOT(OR neg_terms)
    emit_cover(stage, out.n, pos_terms); // complement = NOT(OR pos_terms)
    return out;
  }

  DualNet buf(int stage, const std::string& name, DualNet in) {
    DualNet out = fresh(name);
    nl_.buffer_pair(stage, out.p, out.n, in.p, in.n);
    return out;
  }

  DualNet xor2(int stage, const std::string& name, DualNet a, DualNet b) {
    return sop(stage, name, {{a.p, b.n}, {a.n, b.p}}, {{a.p, b.p}, {a.n, b.n}});
  }

  DualNet and2(int stage, const std::string& name, DualNet a, DualNet b) {
    return sop(stage, name, {{a.p, b.p}}, {{a.n}, {b.n}});
  }

  DualNet majority3(int stage, const std::string& name, DualNet a, DualNet b, DualNet c) {
    return sop(stage, name, {{a.p, b.p}, {a.p, c.p}, {b.p, c.p}},
               {{a.n, b.n}, {a.n, c.n}, {b.n, c.n}});
  }

  // Three-input parity in a single stage via complement-minterm covers.
  DualNet xor3(int stage, const std::string& name, DualNet a, DualNet b, DualNet c) {
    std::vector<Term> odd = {{a.p, b.n, c.n}, {a.n, b.p, c.n}, {a.n, b.n, c.p}, {a.p, b.p, c.p}};
    std::vector<Term> even = {{a.n, b.n, c.n}, {a.p, b.p, c.n}, {a.p, b.n, c.p}, {a.n, b.p, c.p}};
    return sop(stage, name, odd, even);
  }

  // One-hot multiplexer: out = value of the selected input; both rails are
  // driven only while exactly one select is active.
  DualNet mux_onehot(int stage, const std::string& name,
                     const std::vector<std::pair<DualNet, DualNet>>& arms) {
    std::vector<Term> pos, neg;
    for (const auto& [sel, val] : arms) {
      pos.push_back({sel.p, val.p});
      neg.push_back({sel.p, val.n});
    }
    return sop(stage, name, pos, neg);
  }

private:
  void emit_cover(int stage, int out, const std::vector<Term>& terms) {
    // out = AND over member NANDs = NOT(OR terms)
    std::vector<Term> cleaned;
    bool constant_true_cover = false;
    for (const Term& t : terms) {
      Term u;
      bool drop = false;
      for (int lit : t) {
        if (lit == gnd_) { drop = true; break; }
        if (lit == vcc_) continue;
        u.push_back(lit);
      }
      if (drop) continue;
      if (u.empty()) { constant_true_cover = true; break; }
      cleaned.push_back(std::move(u));
    }
    if (constant_true_cover) {
      nl_.nand(stage, out, {vcc_}); // OR cover is identically 1, output 0
      return;
    }
    if (cleaned.empty()) {
      nl_.nand(stage, out, {gnd_}); // empty cover, output constantly 1
      return;
    }
    for (Term& t : cleaned) nl_.nand(stage, out, std::move(t));
  }

  Netlist& nl_;
  std::string prefix_;
  int gnd_ = -1;
  int vcc_ = -1;
};

// Tracks at which stage each logical signal is available and inserts buffer
// chains on demand so that a consumer at stage s reads the previous stage.
class Pipeliner {
public:
  Pipeliner(Builder& b) : b_(b) {}

  void put(const std::string& name, int stage, DualNet net) { at_[name][stage] = net; }

  bool has(const std::string& name) const { return at_.count(name) > 0; }

  // Net for `name` valid at `stage` (i.e. produced at exactly that stage),
  // buffering forward from the latest earlier availability.
  DualNet at(const std::string& name, int stage) {
    auto it = at_.find(name);
    if (it == at_.end()) throw std::logic_error("pipeliner: unknown signal " + name);
    auto& stages = it->second;
    auto found = stages.find(stage);
    if (found != stages.end()) return found->second;
    auto lower = stages.lower_bound(stage);
    if (lower == stages.begin())
      throw std::logic_error("pipeliner: signal " + name + " not available by stage " +
                             std::to_string(stage));
    --lower;
    int from = lower->first;
    DualNet cur = lower->second;
    for (int s = from + 1; s <= stage; ++s) {
      cur = b_.buf(s, name + "_s" + std::to_string(s), cur);
      stages[s] = cur;
    }
    return cur;
  }

  // Input for a gate evaluated at `stage`: the signal one stage earlier.
  DualNet feed(const std::string& name, int consumer_stage) { return at(name, consumer_stage - 1); }

private:
  Builder& b_;
  std::map<std::string, std::map<int, DualNet>> at_;
};

} // namespace vnfab::designs
