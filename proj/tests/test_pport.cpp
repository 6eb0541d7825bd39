#include <gtest/gtest.h>

#include "paraloq/error.hpp"
#include "paraloq/pport.hpp"

using namespace paraloq;
using namespace paraloq::pport;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidInput;
}

constexpr double kClock = 640e3;

}  // namespace

TEST(PortRegisters, ControlInversion) {
  PortRegisters regs;
  regs = write_control(regs, 0x00);
  EXPECT_EQ(regs.control & 0x01, 0x01);  // C0 high on the wire
  EXPECT_EQ(regs.control & 0x02, 0x02);  // C1
  EXPECT_EQ(regs.control & 0x04, 0x00);  // C2 not inverted
  EXPECT_EQ(regs.control & 0x08, 0x08);  // C3

  regs = write_control(regs, 0x0B);
  EXPECT_EQ(regs.control, 0x00);

  const PortRegisters once = write_control(regs, 0x05);
  const PortRegisters twice = write_control(once, 0x05);
  EXPECT_EQ(once, twice);
}

TEST(PortRegisters, ControlReadbackIsInvolution) {
  for (int v = 0; v < 16; ++v) {
    const PortRegisters regs = write_control({}, static_cast<std::uint8_t>(v));
    EXPECT_EQ(read_control(regs), v);
  }
}

TEST(PortRegisters, StatusInversion) {
  PortRegisters regs;
  regs.status = 0x80;
  EXPECT_EQ(read_status(regs) & 0x80, 0);
  regs.status = 0x00;
  EXPECT_EQ(read_status(regs), 0x80);
  regs.status = 0x08;
  EXPECT_EQ(read_status(regs) & 0x08, 0x08);
  regs.status = 0x07;  // S0..S2 are not connected
  EXPECT_EQ(read_status(regs), 0x80);
  EXPECT_EQ(regs.base_addr, 0x378);
}

TEST(HandshakeMap, Validation) {
  HandshakeMap map;
  EXPECT_NO_THROW(map.validate());
  map.output_enable = map.start_ale;
  EXPECT_THROW(map.validate(), Error);
  map = {};
  map.eoc = 2;
  EXPECT_THROW(map.validate(), Error);
  map = {};
  map.start_ale = 4;
  EXPECT_THROW(map.validate(), Error);
}

TEST(SimClock, Monotonic) {
  SimClock clock;
  clock.wait(0.5);
  clock.wait(-1.0);
  EXPECT_DOUBLE_EQ(clock.now(), 0.5);
  clock.wait_until(0.2);
  EXPECT_DOUBLE_EQ(clock.now(), 0.5);
  clock.wait_until(2.0);
  EXPECT_DOUBLE_EQ(clock.now(), 2.0);
}

TEST(AcquireByte, ReadsConvertedCode) {
  SimClock clock;
  const AdcConfig adc;
  SimulatedAdcPort port(adc, kClock, clock);
  port.set_input(0, 2.5);
  const AcquiredByte got = acquire_byte(port, clock, {}, adc, kClock, 0);
  EXPECT_EQ(got.code.code, 128);
  EXPECT_EQ(got.code.channel, 0);
  EXPECT_GE(clock.now(), 100e-6);
  EXPECT_GE(got.observed_latency_s, 100e-6 * (1 - 1e-12));
  EXPECT_LT(got.observed_latency_s, 200e-6);
  EXPECT_TRUE(got.code.sar_trace[0]);
}

TEST(AcquireByte, SelectsMuxChannel) {
  SimClock clock;
  const AdcConfig adc;
  SimulatedAdcPort port(adc, kClock, clock);
  for (int ch = 0; ch < 8; ++ch) port.set_input(ch, ch * 0.5);
  for (int ch = 0; ch < 8; ++ch) {
    const AcquiredByte got = acquire_byte(port, clock, {}, adc, kClock, ch);
    EXPECT_EQ(got.code.code, quantize(ch * 0.5, adc)) << ch;
  }
  EXPECT_EQ(port.conversions(), 8U);
}

TEST(AcquireByte, DeterministicWithNoiseOff) {
  SimClock clock;
  const AdcConfig adc;
  SimulatedAdcPort port(adc, kClock, clock);
  port.set_input(1, 1.2345);
  const auto a = acquire_byte(port, clock, {}, adc, kClock, 1);
  const auto b = acquire_byte(port, clock, {}, adc, kClock, 1);
  EXPECT_EQ(a.code.code, b.code.code);
}

TEST(AcquireByte, NoiseIsSeeded) {
  AdcConfig adc;
  adc.noise_sigma_lsb = 2.0;
  auto run = [&](std::uint64_t seed) {
    SimClock clock;
    SimulatedAdcPort port(adc, kClock, clock, {}, seed);
    port.set_input(0, 2.5);
    std::vector<int> codes;
    for (int i = 0; i < 50; ++i) codes.push_back(acquire_byte(port, clock, {}, adc, kClock, 0).code.code);
    return codes;
  };
  EXPECT_EQ(run(42), run(42));
  EXPECT_NE(run(42), run(43));
}

TEST(AcquireByte, ObservedLatencyWithinPollGranularity) {
  const AdcConfig adc;
  for (double f : {10e3, 333e3, 640e3, 1280e3}) {
    SimClock clock;
    SimulatedAdcPort port(adc, f, clock);
    const auto got = acquire_byte(port, clock, {}, adc, f, 0);
    const double latency = conversion_latency(f, adc);
    EXPECT_GE(got.observed_latency_s, latency * (1 - 1e-12)) << f;
    EXPECT_LT(got.observed_latency_s, 2.0 * latency) << f;
  }
}

TEST(AcquireByte, DisconnectedDeviceTimesOut) {
  SimClock clock;
  const AdcConfig adc;
  SimulatedAdcPort port(adc, kClock, clock);
  port.set_connected(false);
  EXPECT_EQ(kind_of([&] { acquire_byte(port, clock, {}, adc, kClock, 0); }),
            ErrorKind::kDeviceTimeout);
  // Gave up after the 10x latency budget, not earlier.
  EXPECT_GE(clock.now(), 10 * 100e-6 * (1 - 1e-9));
  EXPECT_LT(clock.now(), 11 * 100e-6);
}

TEST(AcquireByte, ClockRangeAndModeErrors) {
  SimClock clock;
  const AdcConfig adc;
  SimulatedAdcPort port(adc, 5e3, clock);
  EXPECT_EQ(kind_of([&] { acquire_byte(port, clock, {}, adc, 5e3, 0); }), ErrorKind::kClockRange);

  SimulatedAdcPort ok_port(adc, kClock, clock);
  HandshakeMap nibble;
  nibble.data_path = DataPath::kNibble;
  EXPECT_EQ(kind_of([&] { acquire_byte(ok_port, clock, nibble, adc, kClock, 0); }),
            ErrorKind::kUnsupportedMode);
  EXPECT_EQ(kind_of([&] { acquire_byte(ok_port, clock, {}, adc, kClock, 9); }),
            ErrorKind::kInvalidInput);
}

TEST(AcquireByte, DeviceRejectsOutOfWindowClockOnStart) {
  SimClock clock;
  const AdcConfig adc;
  SimulatedAdcPort port(adc, 5e3, clock);
  const HandshakeMap map;
  port.write_control(static_cast<std::uint8_t>((1U << map.start_ale) ^ kControlInvertMask));
  EXPECT_EQ(kind_of([&] { port.write_control(kControlInvertMask); }), ErrorKind::kClockRange);
}

TEST(SimulatedDevice, DataReadBeforeOutputEnableFloats) {
  SimClock clock;
  const AdcConfig adc;
  const HandshakeMap map;
  SimulatedAdcPort port(adc, kClock, clock, map);
  port.set_input(0, 1.0);
  auto wire = [](unsigned bits) {
    return static_cast<std::uint8_t>((bits ^ kControlInvertMask) & kControlLineMask);
  };
  port.write_data(0);
  port.write_control(wire(1U << map.start_ale));
  port.write_control(wire(0));
  clock.wait(1e-3);
  EXPECT_TRUE(port.read_status() & (1U << map.eoc));
  // Conversion finished but OE was never asserted.
  EXPECT_EQ(port.read_data(), kHighImpedance);
  port.write_control(wire(1U << map.output_enable));
  EXPECT_EQ(port.read_data(), quantize(1.0, adc));
}

TEST(SimulatedDevice, EocLowWhileConverting) {
  SimClock clock;
  const AdcConfig adc;
  const HandshakeMap map;
  SimulatedAdcPort port(adc, kClock, clock, map);
  auto wire = [](unsigned bits) {
    return static_cast<std::uint8_t>((bits ^ kControlInvertMask) & kControlLineMask);
  };
  port.write_control(wire(1U << map.start_ale));
  port.write_control(wire(0));
  EXPECT_FALSE(port.read_status() & (1U << map.eoc));
  clock.wait(50e-6);
  EXPECT_FALSE(port.read_status() & (1U << map.eoc));
  clock.wait(50e-6);
  EXPECT_TRUE(port.read_status() & (1U << map.eoc));
}

TEST(SimulatedDevice, CustomWiring) {
  SimClock clock;
  const AdcConfig adc;
  HandshakeMap map;
  map.start_ale = 2;
  map.output_enable = 3;
  map.eoc = 6;
  SimulatedAdcPort port(adc, kClock, clock, map);
  port.set_input(5, 3.3);
  const auto got = acquire_byte(port, clock, map, adc, kClock, 5);
  EXPECT_EQ(got.code.code, quantize(3.3, adc));
}

TEST(SimulatedDevice, EocOnInvertedStatusLine) {
  SimClock clock;
  const AdcConfig adc;
  HandshakeMap map;
  map.eoc = 7;
  SimulatedAdcPort port(adc, kClock, clock, map);
  port.set_input(2, 4.0);
  const auto got = acquire_byte(port, clock, map, adc, kClock, 2);
  EXPECT_EQ(got.code.code, quantize(4.0, adc));
  EXPECT_GE(got.observed_latency_s, 100e-6 * (1 - 1e-12));
}
