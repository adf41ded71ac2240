#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace rfidac {

/// Tag position relative to the reader antenna.
class AntennaPose {
 public:
  /// Throws Error(InvalidArgument) unless distance_cm > 0 and both values are finite.
  AntennaPose(double distance_cm, double angle_deg);

  double distance_cm() const noexcept { return distance_cm_; }
  /// Raw angle as given; see normalize_angle().
  double angle_deg() const noexcept { return angle_deg_; }

  friend bool operator==(const AntennaPose&, const AntennaPose&) = default;

 private:
  double distance_cm_;
  double angle_deg_;
};

struct CalibrationSample {
  double distance_cm;
  double angle_deg;
  double emf_volts;
};

inline constexpr double kDefaultReadThresholdVolts = 0.50;

/// Measured tag EMF at the 0 and 180 degree orientations. Queries interpolate
/// linearly in distance along each curve, then linearly in angle between them.
class CouplingCalibration {
 public:
  /// The ten bench measurements the reader was characterised with
  /// (25..150 cm at 0 and 180 degrees).
  static CouplingCalibration bench_defaults(double read_threshold_volts = kDefaultReadThresholdVolts);

  /// Samples must cover angles 0 and 180 only, with strictly increasing
  /// distances per angle and every EMF > 0. Throws Error(ConfigInvalid).
  static CouplingCalibration from_samples(std::vector<CalibrationSample> samples,
                                          double read_threshold_volts = kDefaultReadThresholdVolts);

  /// Plain-text table: one `distance angle emf` triple per line, `#` comments.
  static CouplingCalibration parse(std::istream& in,
                                   double read_threshold_volts = kDefaultReadThresholdVolts);
  static CouplingCalibration load(const std::filesystem::path& file,
                                  double read_threshold_volts = kDefaultReadThresholdVolts);

  std::span<const CalibrationSample> samples() const noexcept { return samples_; }
  double read_threshold_volts() const noexcept { return threshold_; }

  /// EMF along one orientation curve (0 or 180), clamped below the first
  /// knot and zero beyond the last.
  double curve_emf(bool broadside, double distance_cm) const;

 private:
  CouplingCalibration() = default;

  struct Knot {
    double distance_cm;
    double emf_volts;
  };

  std::vector<CalibrationSample> samples_;
  std::vector<Knot> facing_;     // 0 degrees
  std::vector<Knot> broadside_;  // 180 degrees
  double threshold_ = kDefaultReadThresholdVolts;
};

/// Folds any angle into [0, 180] by mirror symmetry about 0 and 180.
double normalize_angle(double angle_deg) noexcept;

double induced_emf(const AntennaPose& pose, const CouplingCalibration& cal);

bool can_read(const AntennaPose& pose, const CouplingCalibration& cal);

}  // namespace rfidac
