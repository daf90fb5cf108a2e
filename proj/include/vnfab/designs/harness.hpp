#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vnfab/dynlogic.hpp"

// Streaming harness for pipelined combinational designs: feeds one input
// vector per clock cycle and samples the named outputs at the token's
// evaluation slot on the result stage.

namespace vnfab::designs {

using dynlogic::InputVector;
using dynlogic::Logic;

inline void put_nibble(InputVector& v, const std::string& base, unsigned value, int bits) {
  for (int i = 0; i < bits; ++i) {
    bool b = (value >> i) & 1;
    v[base + std::to_string(i)] = b ? Logic::one : Logic::zero;
    v[base + std::to_string(i) + "_n"] = b ? Logic::zero : Logic::one;
  }
}

inline void put_bit(InputVector& v, const std::string& name, bool b) {
  v[name] = b ? Logic::one : Logic::zero;
  v[name + "_n"] = b ? Logic::zero : Logic::one;
}

// Streams `vectors` through the design; after each token evaluates on
// result_stage the callback receives (token index, simulator) for sampling.
inline void stream_design(const dynlogic::Netlist& nl, int result_stage,
                          const std::vector<InputVector>& vectors,
                          const std::function<void(std::size_t, const dynlogic::Simulator&)>& on_token) {
  dynlogic::Simulator sim(nl, dynlogic::PhaseSchedule::dual_rail(nl.num_stages));
  const auto& sched = sim.schedule();
  const int cycle = sched.cycle_slots();
  const std::size_t count = vectors.size();
  const int last_slot = sched.token_eval_slot(result_stage, static_cast<int>(count) - 1);
  for (int slot = 0; slot <= last_slot; ++slot) {
    std::size_t vi = static_cast<std::size_t>(slot / cycle);
    if (vi >= count) vi = count - 1;
    sim.set_inputs(vectors[vi]);
    sim.step(slot);
    int offset = slot - result_stage - 1;
    if (offset >= 0 && offset % cycle == 0) {
      std::size_t token = static_cast<std::size_t>(offset / cycle);
      if (token < count) on_token(token, sim);
    }
  }
}

inline unsigned read_bits(const dynlogic::Simulator& sim, const std::vector<int>& nets) {
  unsigned v = 0;
  for (std::size_t i = 0; i < nets.size(); ++i)
    if (sim.value(nets[i]) == Logic::one) v |= 1u << i;
  return v;
}

} // namespace vnfab::designs
