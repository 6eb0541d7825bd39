#pragma once

// Relative humidity and dew point from a dry-bulb / wet-bulb pair, using the
// Magnus saturation curve over water and the psychrometer equation
//   e = es(T_wet) - A * P * (T_dry - T_wet).

namespace paraloq {

struct PsychroConfig {
  double psychrometer_coeff = 6.6e-4;  // 1/K
  double pressure_hpa = 1013.25;
  double magnus_a = 6.112;  // hPa
  double magnus_b = 17.62;
  double magnus_c = 243.12;  // degC

  void validate() const;
};

struct PsychroReading {
  double dry_c = 0.0;
  double wet_c = 0.0;
  double rh_pct = 0.0;
  double dew_point_c = 0.0;
};

double saturation_vapor_pressure(double t_c, const PsychroConfig& cfg = {});

// Actual vapour pressure from the psychrometer equation. Throws
// kInvalidInput for wet > dry or temperatures below 0 degC, and
// kInconsistentReading when the result is not positive.
double vapor_pressure(double dry_c, double wet_c, const PsychroConfig& cfg = {});

double relative_humidity(double dry_c, double wet_c, const PsychroConfig& cfg = {});
double dew_point(double dry_c, double wet_c, const PsychroConfig& cfg = {});

// Inverse of saturation_vapor_pressure.
double dew_point_from_vapor_pressure(double e_hpa, const PsychroConfig& cfg = {});

PsychroReading psychro_reading(double dry_c, double wet_c, const PsychroConfig& cfg = {});

}  // namespace paraloq
