#include "rfidac/rf_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "rfidac/errors.hpp"

namespace rfidac {

AntennaPose::AntennaPose(double distance_cm, double angle_deg)
    : distance_cm_(distance_cm), angle_deg_(angle_deg) {
  if (!std::isfinite(distance_cm) || !std::isfinite(angle_deg) || distance_cm <= 0.0) {
    throw Error(Errc::InvalidArgument, "antenna pose needs a finite distance > 0 cm and a finite angle");
  }
}

double normalize_angle(double angle_deg) noexcept {
  double folded = std::fmod(angle_deg, 360.0);
  if (folded < 0.0) folded += 360.0;
  if (folded > 180.0) folded = 360.0 - folded;
  return folded;
}

CouplingCalibration CouplingCalibration::bench_defaults(double read_threshold_volts) {
  return from_samples({{25, 0, 13.71},
                       {25, 180, 1.32},
                       {50, 0, 12.14},
                       {50, 180, 1.07},
                       {75, 0, 11.56},
                       {75, 180, 0.85},
                       {100, 0, 10.93},
                       {100, 180, 0.76},
                       {150, 0, 10.05},
                       {150, 180, 0.23}},
                      read_threshold_volts);
}

CouplingCalibration CouplingCalibration::from_samples(std::vector<CalibrationSample> samples,
                                                      double read_threshold_volts) {
  if (!(read_threshold_volts > 0.0) || !std::isfinite(read_threshold_volts)) {
    throw Error(Errc::ConfigInvalid, "read threshold must be > 0 V");
  }
  CouplingCalibration cal;
  cal.threshold_ = read_threshold_volts;
  for (const auto& s : samples) {
    if (!std::isfinite(s.distance_cm) || !std::isfinite(s.emf_volts) || s.distance_cm <= 0.0) {
      throw Error(Errc::ConfigInvalid, "calibration sample needs finite distance > 0");
    }
    if (!(s.emf_volts > 0.0)) {
      throw Error(Errc::ConfigInvalid, "calibration EMF must be > 0 V");
    }
    if (s.angle_deg == 0.0) {
      cal.facing_.push_back({s.distance_cm, s.emf_volts});
    } else if (s.angle_deg == 180.0) {
      cal.broadside_.push_back({s.distance_cm, s.emf_volts});
    } else {
      throw Error(Errc::ConfigInvalid, "calibration angles must be 0 or 180 degrees");
    }
  }
  for (const auto* curve : {&cal.facing_, &cal.broadside_}) {
    if (curve->empty()) {
      throw Error(Errc::ConfigInvalid, "calibration needs samples at both 0 and 180 degrees");
    }
    for (std::size_t i = 1; i < curve->size(); ++i) {
      if (!((*curve)[i].distance_cm > (*curve)[i - 1].distance_cm)) {
        throw Error(Errc::ConfigInvalid, "calibration distances must strictly increase per angle");
      }
    }
  }
  cal.samples_ = std::move(samples);
  return cal;
}

CouplingCalibration CouplingCalibration::parse(std::istream& in, double read_threshold_volts) {
  std::vector<CalibrationSample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    CalibrationSample s{};
    if (!(fields >> s.distance_cm)) continue;  // blank or comment-only
    std::string extra;
    if (!(fields >> s.angle_deg >> s.emf_volts) || (fields >> extra)) {
      throw Error(Errc::ConfigInvalid,
                  "calibration line " + std::to_string(line_no) + ": expected 'distance angle emf'");
    }
    samples.push_back(s);
  }
  return from_samples(std::move(samples), read_threshold_volts);
}

CouplingCalibration CouplingCalibration::load(const std::filesystem::path& file,
                                              double read_threshold_volts) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::ConfigInvalid, "cannot open calibration file " + file.string());
  return parse(in, read_threshold_volts);
}

double CouplingCalibration::curve_emf(bool broadside, double distance_cm) const {
  const auto& curve = broadside ? broadside_ : facing_;
  if (distance_cm > curve.back().distance_cm) return 0.0;
  if (distance_cm <= curve.front().distance_cm) return curve.front().emf_volts;
  const auto upper = std::lower_bound(
      curve.begin(), curve.end(), distance_cm,
      [](const Knot& k, double d) { return k.distance_cm < d; });
  if (upper->distance_cm == distance_cm) return upper->emf_volts;
  const auto lower = std::prev(upper);
  const double frac = (distance_cm - lower->distance_cm) / (upper->distance_cm - lower->distance_cm);
  return lower->emf_volts + frac * (upper->emf_volts - lower->emf_volts);
}

double induced_emf(const AntennaPose& pose, const CouplingCalibration& cal) {
  const double angle = normalize_angle(pose.angle_deg());
  const double facing = cal.curve_emf(false, pose.distance_cm());
  const double broadside = cal.curve_emf(true, pose.distance_cm());
  if (angle == 0.0) return facing;
  if (angle == 180.0) return broadside;
  const double frac = angle / 180.0;
  return facing + frac * (broadside - facing);
}

bool can_read(const AntennaPose& pose, const CouplingCalibration& cal) {
  return induced_emf(pose, cal) >= cal.read_threshold_volts();
}

}  // namespace rfidac
