#include "paraloq/psychro.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paraloq/error.hpp"

namespace paraloq {

void PsychroConfig::validate() const {
  const bool ok = psychrometer_coeff > 0.0 && pressure_hpa > 0.0 && magnus_a > 0.0 &&
                  magnus_b > 0.0 && magnus_c > 0.0 && std::isfinite(psychrometer_coeff) &&
                  std::isfinite(pressure_hpa) && std::isfinite(magnus_a) &&
                  std::isfinite(magnus_b) && std::isfinite(magnus_c);
  if (!ok) fail(ErrorKind::kInvalidInput, "psychrometer constants must be positive and finite");
}

double saturation_vapor_pressure(double t_c, const PsychroConfig& cfg) {
  if (!std::isfinite(t_c) || !(t_c > -cfg.magnus_c)) {
    fail(ErrorKind::kInvalidInput, "temperature outside the saturation curve domain");
  }
  return cfg.magnus_a * std::exp(cfg.magnus_b * t_c / (cfg.magnus_c + t_c));
}

double vapor_pressure(double dry_c, double wet_c, const PsychroConfig& cfg) {
  if (!std::isfinite(dry_c) || !std::isfinite(wet_c)) {
    fail(ErrorKind::kInvalidInput, "dry and wet temperatures must be finite");
  }
  if (wet_c > dry_c) {
    fail(ErrorKind::kInvalidInput, "wet-bulb temperature exceeds dry-bulb temperature");
  }
  // Water-surface constants only; the logger range starts at 0 degC.
  if (wet_c < 0.0) fail(ErrorKind::kInvalidInput, "temperatures below 0 degC are not supported");
  const double e = saturation_vapor_pressure(wet_c, cfg) -
                   cfg.psychrometer_coeff * cfg.pressure_hpa * (dry_c - wet_c);
  if (!(e > 0.0)) {
    fail(ErrorKind::kInconsistentReading,
         "wet-bulb depression too large: vapour pressure " + std::to_string(e) + " hPa");
  }
  return e;
}

double relative_humidity(double dry_c, double wet_c, const PsychroConfig& cfg) {
  const double e = vapor_pressure(dry_c, wet_c, cfg);
  const double rh = 100.0 * e / saturation_vapor_pressure(dry_c, cfg);
  return std::clamp(rh, 0.0, 100.0);
}

double dew_point_from_vapor_pressure(double e_hpa, const PsychroConfig& cfg) {
  if (!(e_hpa > 0.0) || !std::isfinite(e_hpa)) {
    fail(ErrorKind::kInvalidInput, "vapour pressure must be > 0");
  }
  const double l = std::log(e_hpa / cfg.magnus_a);
  return cfg.magnus_c * l / (cfg.magnus_b - l);
}

double dew_point(double dry_c, double wet_c, const PsychroConfig& cfg) {
  const double e = vapor_pressure(dry_c, wet_c, cfg);
  if (wet_c == dry_c) return dry_c;
  return std::min(dew_point_from_vapor_pressure(e, cfg), dry_c);
}

PsychroReading psychro_reading(double dry_c, double wet_c, const PsychroConfig& cfg) {
  PsychroReading r;
  r.dry_c = dry_c;
  r.wet_c = wet_c;
  r.rh_pct = relative_humidity(dry_c, wet_c, cfg);
  r.dew_point_c = dew_point(dry_c, wet_c, cfg);
  return r;
}

}  // namespace paraloq
