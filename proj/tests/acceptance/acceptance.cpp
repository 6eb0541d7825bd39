// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "paraloq/acquisition.hpp"
#include "paraloq/adc0808.hpp"
#include "paraloq/error.hpp"
#include "paraloq/kernels.hpp"
#include "paraloq/logstore.hpp"
#include "paraloq/pport.hpp"
#include "paraloq/psychro.hpp"
#include "paraloq/signal_chain.hpp"

using namespace paraloq;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "failed: " + what;
    }
  }
  void note(const std::string& what) {
    if (pass) {
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return static_cast<ErrorKind>(-1);
}

constexpr double kClock = 640e3;

Verdict resolution() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::size_t n = 50000;
  std::vector<double> temps(n), volts(n), decoded(n);
  std::vector<std::uint8_t> codes(n);
  for (std::size_t i = 0; i < n; ++i) temps[i] = static_cast<double>(i) * 0.001;
  const ChainConfig chain;
  kernels::chain_volts(temps, volts, chain);
  kernels::quantize(volts, codes, chain.vref);
  kernels::decode_temps(codes, decoded);
  const double elapsed = seconds_since(t0);

  double max_err = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_err = std::max(max_err, std::abs(decoded[i] - temps[i]));
  std::vector<double> grid = decoded;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const double spacing = 50.0 / 255.0;
  bool uniform = grid.size() == 256;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    uniform = uniform && std::abs(grid[i] - grid[i - 1] - spacing) <= 1e-9;
  }
  v.require(uniform, "decoded values are not a 256-point grid of spacing 50/255");
  v.require(max_err <= 0.19608, "max error " + fmt("%.6f", max_err));
  v.require(elapsed < 1.0, "runtime " + fmt("%.3f s", elapsed));
  v.note(std::to_string(grid.size()) + " levels, spacing " + fmt("%.6f", spacing) +
         " degC, max |err| " + fmt("%.6f", max_err) + " degC, " + fmt("%.4f s", elapsed) + " (" +
         std::string(kernels::to_string(kernels::active_isa())) + ")");
  return v;
}

Verdict step_voltage() {
  Verdict v;
  const AdcConfig adc;
  // Locate every code transition by bisection on the quantizer.
  std::vector<double> edges;
  for (int code = 1; code <= AdcConfig::kMaxCode; ++code) {
    double lo = 0.0, hi = adc.vref;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (quantize(mid, adc) >= code ? hi : lo) = mid;
    }
    edges.push_back(hi);
  }
  double worst = 0.0;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    worst = std::max(worst, std::abs(edges[i] - edges[i - 1] - 5.0 / 256.0));
  }
  double worst_decode = 0.0;
  for (int code = 0; code < AdcConfig::kMaxCode; ++code) {
    worst_decode = std::max(worst_decode, std::abs(decode_volts(code + 1, adc) -
                                                   decode_volts(code, adc) - 5.0 / 255.0));
  }
  v.require(worst <= 1e-9, "transition spacing off by " + fmt("%.3g", worst));
  v.require(std::abs(adc.step_volts() - 5.0 / 256.0) <= 1e-9, "step_volts");
  v.require(worst_decode <= 1e-9, "decode span off by " + fmt("%.3g", worst_decode));
  v.require(std::abs(adc.decode_volts_per_code() - 5.0 / 255.0) <= 1e-9, "decode_volts_per_code");
  v.note("transition spacing " + fmt("%.9f V", edges[128] - edges[127]) + ", decode span " +
         fmt("%.9f V", adc.decode_volts_per_code()));
  return v;
}

Verdict timing() {
  Verdict v;
  const AdcConfig adc;
  const double at640 = sar_convert(2.5, 0, 640e3, adc).latency_s;
  const double at1280 = sar_convert(2.5, 0, 1280e3, adc).latency_s;
  v.require(at640 == 100e-6, "latency at 640 kHz " + fmt("%.12g", at640));
  v.require(at1280 == 50e-6, "latency at 1280 kHz " + fmt("%.12g", at1280));
  v.require(kind_of([&] { sar_convert(1.0, 0, 9.999e3, adc); }) == ErrorKind::kClockRange,
            "9.999 kHz accepted");
  v.require(kind_of([&] { sar_convert(1.0, 0, 1280.001e3, adc); }) == ErrorKind::kClockRange,
            "1280.001 kHz accepted");
  v.require(kind_of([&] { sar_convert(1.0, 0, 10e3, adc); }) != ErrorKind::kClockRange &&
                kind_of([&] { sar_convert(1.0, 0, 1280e3, adc); }) != ErrorKind::kClockRange,
            "window edges rejected");
  v.note(fmt("%.1f us @ 640 kHz", at640 * 1e6) + ", " + fmt("%.1f us @ 1280 kHz", at1280 * 1e6) +
         ", window [10, 1280] kHz enforced");
  return v;
}

Verdict clock_formula() {
  Verdict v;
  const ClockFrequency f = clock_frequency(ClockConfig{1e6, 1e-6});
  const double rel = std::abs(f.hz - 1.0 / 1.1) / (1.0 / 1.1);
  const double rc = rc_for_frequency(640e3);
  const double rc_rel = std::abs(rc - 1.4205e-6) / 1.4205e-6;
  v.require(rel <= 1e-12, "f(1M, 1u) relative error " + fmt("%.3g", rel));
  v.require(rc_rel <= 1e-4, "RC for 640 kHz " + fmt("%.6g", rc));
  v.note(fmt("f(1 MOhm, 1 uF) = %.15f Hz", f.hz) + ", " + fmt("RC(640 kHz) = %.6e s", rc) +
         fmt(" (%.4f%% from 1.4205e-6)", rc_rel * 100));
  return v;
}

Verdict sar_equivalence() {
  Verdict v;
  const AdcConfig adc;
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> dist(-1.0, 6.0);
  const auto t0 = std::chrono::steady_clock::now();
  int matches = 0;
  constexpr int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double x = dist(rng);
    if (sar_convert(x, i % 8, kClock, adc).code == quantize(x, adc)) ++matches;
  }
  const double elapsed = seconds_since(t0);
  v.require(matches == n, std::to_string(n - matches) + " mismatches");
  v.require(elapsed < 1.0, "runtime " + fmt("%.3f s", elapsed));
  v.note(std::to_string(matches) + "/" + std::to_string(n) + " match, " + fmt("%.4f s", elapsed));
  return v;
}

Verdict humidity() {
  Verdict v;
  const PsychroReading r = psychro_reading(19.92858, 18.02167);
  v.require(std::abs(r.rh_pct - 83.2968854733244) <= 1e-6, "RH regression " + fmt("%.9f", r.rh_pct));
  v.require(std::abs(r.dew_point_c - 17.0092885159056) <= 1e-6,
            "dew regression " + fmt("%.9f", r.dew_point_c));
  v.require(std::abs(r.rh_pct - 85.183416) <= 3.0, "RH outside 85.183416 +/- 3");
  v.require(std::abs(r.dew_point_c - 17.360743) <= 1.0, "dew outside 17.360743 +/- 1");
  v.note(fmt("RH %.6f %%", r.rh_pct) + fmt(" (ref 85.183416, diff %.3f)", r.rh_pct - 85.183416) +
         fmt(", dew %.6f degC", r.dew_point_c) +
         fmt(" (ref 17.360743, diff %.3f)", r.dew_point_c - 17.360743));
  return v;
}

Verdict sampling() {
  Verdict v;
  RunConfig cfg;
  cfg.duration_s = 60.0;
  const RunOutcome a = run_acquisition(cfg);
  bool exact = a.log.rows.size() == 121;
  for (std::size_t k = 0; exact && k < a.log.rows.size(); ++k) {
    exact = a.log.rows[k].t_s == static_cast<double>(k) * 0.5;
  }
  v.require(a.ok() && exact, "60 s run: " + std::to_string(a.log.rows.size()) + " ticks");
  cfg.duration_s = 600.0;
  const RunOutcome b = run_acquisition(cfg);
  v.require(b.log.rows.size() == 1201 && b.log.rows[1000].t_s == 500.0, "tick 1000 drifted");
  v.note("121 ticks at t_k = k*0.5 s; t_1000 = " + fmt("%.17g s", b.log.rows[1000].t_s));
  return v;
}

Verdict aliasing() {
  Verdict v;
  RunConfig cfg;
  cfg.duration_s = 60.0;
  cfg.channels[0].stimulus = SineStimulus{10.0, 1.5, 25.0};
  cfg.channels[1].stimulus = SineStimulus{10.0, 0.3, 25.0};
  const RunOutcome out = run_acquisition(cfg);
  std::vector<double> dry, wet;
  for (const auto& s : out.samples) (s.channel == Channel::kDry ? dry : wet).push_back(s.temp_c);
  dry.pop_back();  // whole number of periods
  wet.pop_back();
  const double f_dry = oracle::dominant_frequency(dry, 2.0);
  const double f_wet = oracle::dominant_frequency(wet, 2.0);
  v.require(std::abs(f_dry - 0.5) < 1e-9 && std::abs(f_dry - alias_frequency(1.5, 2.0)) < 1e-9,
            "1.5 Hz peak at " + fmt("%.4f", f_dry));
  v.require(std::abs(f_wet - 0.3) < 1e-9 && std::abs(f_wet - alias_frequency(0.3, 2.0)) < 1e-9,
            "0.3 Hz peak at " + fmt("%.4f", f_wet));
  v.require(out.warnings.size() == 1, "expected one undersampling warning");
  v.note(fmt("1.5 Hz -> %.4f Hz", f_dry) + fmt(", 0.3 Hz -> %.4f Hz", f_wet));
  return v;
}

Verdict csv_round_trip() {
  Verdict v;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> rate(0.2, 20.0), dur(0.0, 10.0), amp(0.0, 15.0),
      freq(0.01, 3.0), offset(5.0, 45.0), noise(0.0, 2.0);
  const std::vector<std::string> header = {"t_s", "timestamp", "dry_code", "dry_temp_c",
                                           "wet_code", "wet_temp_c", "rh_pct", "dew_point_c"};
  int ok = 0;
  std::size_t rows = 0;
  for (int i = 0; i < 1000; ++i) {
    RunConfig cfg;
    cfg.sample_rate_hz = rate(rng);
    cfg.duration_s = dur(rng);
    cfg.seed = rng();
    cfg.adc.noise_sigma_lsb = noise(rng);
    cfg.run_id = "r" + std::to_string(i);
    cfg.start_epoch_ms = 1792398600000 + static_cast<std::int64_t>(rng() % 1000000000);
    cfg.channels[0].stimulus = SineStimulus{amp(rng), freq(rng), offset(rng)};
    cfg.channels[1].stimulus = SineStimulus{amp(rng), freq(rng), offset(rng)};
    const RunLog log = run_acquisition(cfg).log;
    std::ostringstream os;
    write_csv(log, os);
    const std::string text = os.str();
    std::istringstream is(text);
    const RunLog back = read_csv(is);
    std::ostringstream again;
    write_csv(back, again);

    const auto table = oracle::minimal_csv(text);
    bool plain = !table.empty() && table[0] == header && table.size() == log.rows.size() + 1 &&
                 text.find('"') == std::string::npos;
    for (const auto& r : table) plain = plain && r.size() == header.size();
    if (back == log && again.str() == text && plain) ++ok;
    rows += log.rows.size();
  }
  v.require(ok == 1000, std::to_string(1000 - ok) + " runs failed");
  v.note(std::to_string(ok) + "/1000 runs (" + std::to_string(rows) +
         " rows) round-trip byte-stable and parse as plain CSV");
  return v;
}

Verdict invariants() {
  Verdict v;
  std::mt19937_64 rng(5);
  const ChainConfig chain;
  const AdcConfig adc;

  std::uniform_real_distribution<double> temp(-100.0, 200.0);
  bool clamp_ok = true;
  for (int i = 0; i < 10000; ++i) {
    const double x = chain_volts(temp(rng), chain);
    clamp_ok = clamp_ok && x >= 0.0 && x <= chain.clamp_volts;
  }
  v.require(clamp_ok, "clamp bound");

  bool mono = true;
  int prev = quantize(-1.0, adc);
  for (int i = 1; i <= 70000; ++i) {
    const int q = quantize(-1.0 + i * 1e-4, adc);
    mono = mono && q >= prev;
    prev = q;
  }
  v.require(mono, "quantizer monotonicity");

  bool psy = true;
  std::uniform_real_distribution<double> dry_d(0.0, 50.0), frac(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double dry = dry_d(rng);
    const double wet1 = dry * frac(rng);
    const double wet2 = wet1 + (dry - wet1) * frac(rng);
    try {
      const double rh1 = relative_humidity(dry, wet1);
      const double rh2 = relative_humidity(dry, wet2);
      psy = psy && rh1 >= 0.0 && rh1 <= 100.0 && rh2 <= 100.0 && rh2 >= rh1;
      psy = psy && dew_point(dry, wet2) <= dry;
    } catch (const Error& e) {
      psy = psy && e.kind() == ErrorKind::kInconsistentReading;
    }
  }
  v.require(psy, "psychrometer monotonicity/bounds/dew <= dry");

  bool fixed = true;
  for (double t = 0.0; t <= 50.0; t += 0.5) {
    fixed = fixed && std::abs(relative_humidity(t, t) - 100.0) <= 1e-9 &&
            std::abs(dew_point(t, t) - t) <= 1e-9;
  }
  v.require(fixed, "saturation fixed point");

  pport::SimClock clock;
  const pport::HandshakeMap map;
  pport::SimulatedAdcPort port(adc, kClock, clock, map);
  port.set_input(0, 1.0);
  auto wire = [](unsigned bits) {
    return static_cast<std::uint8_t>((bits ^ pport::kControlInvertMask) & pport::kControlLineMask);
  };
  port.write_data(0);
  port.write_control(wire(1U << map.start_ale));
  port.write_control(wire(0));
  clock.wait(1e-3);
  v.require(port.read_data() == pport::kHighImpedance, "data read without OE was not 0xFF");

  pport::SimulatedAdcPort dead(adc, kClock, clock, map);
  dead.set_connected(false);
  v.require(kind_of([&] { pport::acquire_byte(dead, clock, map, adc, kClock, 0); }) ==
                ErrorKind::kDeviceTimeout,
            "EOC timeout not reported");
  v.note("clamp, quantizer monotonicity, psychrometer bounds, dew <= dry, saturation, 0xFF "
         "sentinel, EOC timeout");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Verdict (*check)();
  };
  const Criterion criteria[] = {
      {"resolution", resolution},     {"step voltage", step_voltage},
      {"conversion timing", timing},  {"clock formula", clock_formula},
      {"SAR equivalence", sar_equivalence}, {"humidity table", humidity},
      {"sampling", sampling},         {"aliasing", aliasing},
      {"CSV round-trip", csv_round_trip}, {"invariants", invariants},
  };
  int failed = 0;
  int id = 1;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id++, c.name, v.detail.c_str());
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
