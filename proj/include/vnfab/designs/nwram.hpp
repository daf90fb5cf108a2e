#pragma once

#include <stdexcept>
#include <string>

#include "vnfab/dynlogic.hpp"

// Volatile memory cell: two cross-coupled dynamic NAND gates store the true
// and complementary values; a separate gated read term drives the bitline.
// Writes are sequenced as two non-overlapping clock windows: the first
// window's access precharges the opposite storage node and evaluates the
// selected gate high, the second regenerates the complement through the
// cross-coupling. A restore cycles both windows without an access, which
// re-evaluates each gate against the held complement and refreshes the
// stored value without read-back.

namespace vnfab::designs {

class ProtocolError : public std::runtime_error {
public:
  explicit ProtocolError(const std::string& m) : std::runtime_error(m) {}
};

class NwramCell {
public:
  NwramCell() { build(); }

  const dynlogic::Netlist& netlist() const { return netlist_; }

  // --- write protocol -------------------------------------------------
  // write 1: x window (gate driving `out`) then y window.
  // write 0: y window (gate driving `nout`) then x window.

  void open_x() {
    if (window_ != Window::none) throw ProtocolError("x window opened while another window is active");
    window_ = Window::x;
  }
  void close_x(bool access) {
    if (window_ != Window::x) throw ProtocolError("close_x without an open x window");
    if (access) nout_ = false;   // write access precharges the opposite node
    out_ = !nout_;               // evaluate: out = NAND(nout)
    window_ = Window::none;
  }
  void open_y() {
    if (window_ != Window::none) throw ProtocolError("y window opened while another window is active");
    window_ = Window::y;
  }
  void close_y(bool access) {
    if (window_ != Window::y) throw ProtocolError("close_y without an open y window");
    if (access) out_ = false;
    nout_ = !out_;               // evaluate: nout = NAND(out)
    window_ = Window::none;
  }

  void write(bool value) {
    if (value) {
      open_x(); close_x(true);
      open_y(); close_y(false);
    } else {
      open_y(); close_y(true);
      open_x(); close_x(false);
    }
    retained_ = true;
  }

  // Gated read: the bitline is precharged, then discharged or left per the
  // complementary node. Cell state is untouched.
  bool read() {
    bl_ = !nout_;
    return bl_;
  }

  // Periods of inactivity: control signals off. The stored value is marked
  // retained and the next clock-on restores it without read-back.
  void idle() { retained_ = true; }

  void clock_on() {
    open_x(); close_x(false);
    open_y(); close_y(false);
  }

  bool out() const { return out_; }
  bool nout() const { return nout_; }
  bool bitline() const { return bl_; }
  bool retained() const { return retained_; }

private:
  enum class Window { none, x, y };

  void build() {
    using dynlogic::Logic;
    int out = netlist_.net("out");
    int nout = netlist_.net("nout");
    int bl = netlist_.net("bl");
    int read = netlist_.input("read");
    (void)read;
    // cross-coupled pair plus the separate read logic (protocol-driven, the
    // netlist records the cell structure for layout and interchange)
    netlist_.set_feedback(out);
    netlist_.set_feedback(nout);
    netlist_.nand(0, out, {nout});
    netlist_.nand(0, nout, {out});
    netlist_.nand(1, bl, {nout, netlist_.find("read")});
    netlist_.mark_output(out);
    netlist_.mark_output(nout);
    netlist_.mark_output(bl);
  }

  dynlogic::Netlist netlist_;
  bool out_ = false;
  bool nout_ = true;
  bool bl_ = false;
  bool retained_ = false;
  Window window_ = Window::none;
};

} // namespace vnfab::designs
