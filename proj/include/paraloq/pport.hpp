#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <random>

#include "paraloq/adc0808.hpp"

// D25 parallel-port register model and the host-side handshake that drives a
// converter hanging off it.
//
// Register conventions (SPP):
//   base+0  data     D0..D7, read back in bidirectional mode
//   base+1  status   S3..S7 meaningful, S7 inverted by the port hardware,
//                    S0..S2 always read 0
//   base+2  control  C0..C3, C0/C1/C3 inverted by the port hardware
//
// Default wiring: C0 -> START+ALE, C1 -> OE, S3 <- EOC, D0..D2 -> ADD A..C.

namespace paraloq::pport {

inline constexpr std::uint8_t kStatusInvertMask = 0x80;
inline constexpr std::uint8_t kControlInvertMask = 0x0B;
inline constexpr std::uint8_t kStatusLineMask = 0xF8;
inline constexpr std::uint8_t kControlLineMask = 0x0F;
// What the data lines float to when nothing drives them.
inline constexpr std::uint8_t kHighImpedance = 0xFF;
inline constexpr std::uint16_t kDefaultBaseAddr = 0x378;

// Line levels as seen on the connector.
struct PortRegisters {
  std::uint8_t data = 0;
  std::uint8_t status = 0;
  std::uint8_t control = 0;
  std::uint16_t base_addr = kDefaultBaseAddr;

  bool operator==(const PortRegisters&) const = default;
};

// Software writes `value` to base+2; the wire carries value XOR 0x0B.
PortRegisters write_control(PortRegisters regs, std::uint8_t value);
// Software view of base+2, undoing the inversion.
std::uint8_t read_control(const PortRegisters& regs);
// Software view of base+1.
std::uint8_t read_status(const PortRegisters& regs);

enum class DataPath { kBidirectional, kNibble };

struct HandshakeMap {
  int start_ale = 0;      // control bit
  int output_enable = 1;  // control bit
  int eoc = 3;            // status bit
  DataPath data_path = DataPath::kBidirectional;

  void validate() const;
};

// The minimal register access a host needs. A hardware backend would map
// these onto port I/O at base_addr.
class PortBackend {
 public:
  virtual ~PortBackend() = default;

  virtual std::uint8_t read_data() = 0;
  virtual std::uint8_t read_status() = 0;
  virtual void write_control(std::uint8_t value) = 0;
  // Drives D0..D7; needed to present the mux address to the converter.
  virtual void write_data(std::uint8_t value) = 0;
};

class TimeSource {
 public:
  virtual ~TimeSource() = default;

  // Seconds since the source was created.
  virtual double now() const = 0;
  virtual void wait(double seconds) = 0;
  // Absolute deadline; returns immediately if already past.
  virtual void wait_until(double t) = 0;
};

// Discrete simulated time; never touches the wall clock.
class SimClock final : public TimeSource {
 public:
  double now() const override { return now_; }
  void wait(double seconds) override;
  void wait_until(double t) override;

 private:
  double now_ = 0.0;
};

class WallClock final : public TimeSource {
 public:
  WallClock();

  double now() const override;
  void wait(double seconds) override;
  void wait_until(double t) override;

 private:
  std::chrono::steady_clock::time_point origin_;
};

// Converter wired to the port per a HandshakeMap. Inputs are the eight mux
// voltages, held by the caller between conversions.
class SimulatedAdcPort final : public PortBackend {
 public:
  SimulatedAdcPort(const AdcConfig& adc, double clock_hz, TimeSource& time,
                   HandshakeMap map = {}, std::uint64_t seed = 0);

  std::uint8_t read_data() override;
  std::uint8_t read_status() override;
  void write_control(std::uint8_t value) override;
  void write_data(std::uint8_t value) override;

  void set_input(int channel, double volts);
  double input(int channel) const;

  // A disconnected device never raises EOC and never drives the data lines.
  void set_connected(bool connected) { connected_ = connected; }
  bool connected() const { return connected_; }

  const PortRegisters& registers() const { return regs_; }
  double clock_hz() const { return clock_hz_; }
  const AdcConfig& adc() const { return adc_; }
  std::uint64_t conversions() const { return conversions_; }

 private:
  void update_eoc();
  bool control_line(int bit) const { return (regs_.control >> bit) & 1U; }

  AdcConfig adc_;
  double clock_hz_;
  TimeSource& time_;
  HandshakeMap map_;
  std::mt19937_64 rng_;
  std::array<double, 8> inputs_{};
  PortRegisters regs_;
  bool connected_ = true;
  int latched_channel_ = 0;
  bool converting_ = false;
  double eoc_at_ = 0.0;
  std::uint8_t pending_code_ = 0;
  std::uint8_t output_latch_ = 0;
  std::uint64_t conversions_ = 0;
};

struct HandshakeTiming {
  double poll_fraction = 1.0 / 16.0;  // poll interval as a fraction of the latency
  double timeout_factor = 10.0;       // EOC timeout as a multiple of the latency

  void validate() const;
};

struct AcquiredByte {
  AdcCode code;
  double observed_latency_s = 0.0;  // start pulse to EOC seen
  double started_at = 0.0;
};

// Select channel, pulse START/ALE, poll EOC, assert OE, read the data
// register, release OE. Throws kDeviceTimeout when EOC never rises within
// timeout_factor * latency, kUnsupportedMode for nibble-mode maps, and
// kClockRange for an out-of-window clock.
AcquiredByte acquire_byte(PortBackend& port, TimeSource& time, const HandshakeMap& map,
                          const AdcConfig& adc, double clock_hz, int channel,
                          const HandshakeTiming& timing = {});

}  // namespace paraloq::pport
