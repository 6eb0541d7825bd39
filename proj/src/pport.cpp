#include "paraloq/pport.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "paraloq/error.hpp"

namespace paraloq::pport {

PortRegisters write_control(PortRegisters regs, std::uint8_t value) {
  regs.control = static_cast<std::uint8_t>((value ^ kControlInvertMask) & kControlLineMask);
  return regs;
}

std::uint8_t read_control(const PortRegisters& regs) {
  return static_cast<std::uint8_t>((regs.control ^ kControlInvertMask) & kControlLineMask);
}

std::uint8_t read_status(const PortRegisters& regs) {
  return static_cast<std::uint8_t>((regs.status & kStatusLineMask) ^ kStatusInvertMask);
}

void HandshakeMap::validate() const {
  auto control_ok = [](int bit) { return bit >= 0 && bit <= 3; };
  if (!control_ok(start_ale) || !control_ok(output_enable)) {
    fail(ErrorKind::kInvalidInput, "handshake control bits must be C0..C3");
  }
  if (start_ale == output_enable) {
    fail(ErrorKind::kInvalidInput, "START/ALE and OE must use distinct control bits");
  }
  if (eoc < 3 || eoc > 7) fail(ErrorKind::kInvalidInput, "EOC must be on a status bit S3..S7");
}

void HandshakeTiming::validate() const {
  if (!(poll_fraction > 0.0) || !(timeout_factor > 0.0)) {
    fail(ErrorKind::kInvalidInput, "handshake poll fraction and timeout factor must be > 0");
  }
}

void SimClock::wait(double seconds) {
  if (seconds > 0.0) now_ += seconds;
}

void SimClock::wait_until(double t) {
  if (t > now_) now_ = t;
}

WallClock::WallClock() : origin_(std::chrono::steady_clock::now()) {}

double WallClock::now() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin_).count();
}

void WallClock::wait(double seconds) {
  if (seconds > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

void WallClock::wait_until(double t) {
  const auto deadline =
      origin_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(t));
  std::this_thread::sleep_until(deadline);
}

SimulatedAdcPort::SimulatedAdcPort(const AdcConfig& adc, double clock_hz, TimeSource& time,
                                   HandshakeMap map, std::uint64_t seed)
    : adc_(adc), clock_hz_(clock_hz), time_(time), map_(map), rng_(seed) {
  adc_.validate();
  map_.validate();
  // All control lines idle low on the wire.
  regs_ = pport::write_control(regs_, kControlInvertMask);
}

void SimulatedAdcPort::set_input(int channel, double volts) {
  if (channel < 0 || channel > 7) fail(ErrorKind::kInvalidInput, "mux channel must be 0..7");
  inputs_[static_cast<std::size_t>(channel)] = volts;
}

double SimulatedAdcPort::input(int channel) const {
  if (channel < 0 || channel > 7) fail(ErrorKind::kInvalidInput, "mux channel must be 0..7");
  return inputs_[static_cast<std::size_t>(channel)];
}

void SimulatedAdcPort::update_eoc() {
  const std::uint8_t eoc_bit = static_cast<std::uint8_t>(1U << map_.eoc);
  if (!connected_) {
    regs_.status = static_cast<std::uint8_t>(regs_.status & ~eoc_bit);
    return;
  }
  if (converting_ && time_.now() >= eoc_at_) {
    converting_ = false;
    output_latch_ = pending_code_;
  }
  if (converting_) {
    regs_.status = static_cast<std::uint8_t>(regs_.status & ~eoc_bit);
  } else {
    regs_.status = static_cast<std::uint8_t>(regs_.status | eoc_bit);
  }
}

std::uint8_t SimulatedAdcPort::read_status() {
  update_eoc();
  return pport::read_status(regs_);
}

std::uint8_t SimulatedAdcPort::read_data() {
  update_eoc();
  if (!connected_ || !control_line(map_.output_enable)) return kHighImpedance;
  regs_.data = output_latch_;
  return regs_.data;
}

void SimulatedAdcPort::write_data(std::uint8_t value) { regs_.data = value; }

void SimulatedAdcPort::write_control(std::uint8_t value) {
  const bool start_before = control_line(map_.start_ale);
  regs_ = pport::write_control(regs_, value);
  const bool start_after = control_line(map_.start_ale);
  if (!connected_) return;

  if (!start_before && start_after) {
    // ALE rising edge latches the mux address from D0..D2.
    latched_channel_ = regs_.data & 0x07;
  } else if (start_before && !start_after) {
    // START falling edge: sample-and-hold, then convert.
    double v = inputs_[static_cast<std::size_t>(latched_channel_)];
    if (adc_.noise_sigma_lsb > 0.0) {
      std::normal_distribution<double> noise(0.0, adc_.noise_sigma_lsb * adc_.step_volts());
      v += noise(rng_);
    }
    const AdcCode code = sar_convert(v, latched_channel_, clock_hz_, adc_);
    pending_code_ = code.code;
    converting_ = true;
    eoc_at_ = time_.now() + code.latency_s;
    ++conversions_;
    update_eoc();
  }
}

namespace {

std::uint8_t control_for_wire(std::uint8_t wire) {
  return static_cast<std::uint8_t>((wire ^ kControlInvertMask) & kControlLineMask);
}

}  // namespace

AcquiredByte acquire_byte(PortBackend& port, TimeSource& time, const HandshakeMap& map,
                          const AdcConfig& adc, double clock_hz, int channel,
                          const HandshakeTiming& timing) {
  map.validate();
  timing.validate();
  if (map.data_path == DataPath::kNibble) {
    fail(ErrorKind::kUnsupportedMode, "nibble-mode data path is not implemented");
  }
  if (channel < 0 || channel > 7) {
    fail(ErrorKind::kInvalidInput, "channel must be 0..7, got " + std::to_string(channel));
  }
  if (!std::isfinite(clock_hz) || !clock_in_window(clock_hz)) {
    fail(ErrorKind::kClockRange, "converter clock outside the 10 kHz..1280 kHz window");
  }

  const double latency = conversion_latency(clock_hz, adc);
  const double poll = latency * timing.poll_fraction;
  const double timeout = latency * timing.timeout_factor;
  const auto start_wire = static_cast<std::uint8_t>(1U << map.start_ale);
  const auto oe_wire = static_cast<std::uint8_t>(1U << map.output_enable);
  const auto eoc_bit = static_cast<std::uint8_t>(1U << map.eoc);

  port.write_control(control_for_wire(0));
  port.write_data(static_cast<std::uint8_t>(channel));
  port.write_control(control_for_wire(start_wire));
  port.write_control(control_for_wire(0));

  AcquiredByte out;
  out.started_at = time.now();
  // Count polls instead of subtracting timestamps so the bound is exact.
  const auto max_polls = static_cast<long>(std::ceil(timeout / poll));
  long polls = 0;
  for (;;) {
    time.wait(poll);
    ++polls;
    // Undo the S7 inversion so every status bit is compared at wire level.
    const auto wire = static_cast<std::uint8_t>(port.read_status() ^ kStatusInvertMask);
    if (wire & eoc_bit) break;
    if (polls >= max_polls) {
      port.write_control(control_for_wire(0));
      fail(ErrorKind::kDeviceTimeout,
           "EOC not seen on channel " + std::to_string(channel) + " within " +
               std::to_string(timeout * 1e6) + " us");
    }
  }
  out.observed_latency_s = time.now() - out.started_at;

  port.write_control(control_for_wire(oe_wire));
  const std::uint8_t byte = port.read_data();
  port.write_control(control_for_wire(0));

  out.code.code = byte;
  out.code.channel = channel;
  out.code.latency_s = out.observed_latency_s;
  for (int i = 0; i < AdcConfig::kBits; ++i) {
    out.code.sar_trace[static_cast<std::size_t>(i)] = (byte >> (AdcConfig::kBits - 1 - i)) & 1U;
  }
  return out;
}

}  // namespace paraloq::pport
