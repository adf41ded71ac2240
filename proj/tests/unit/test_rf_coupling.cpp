#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "rfidac/errors.hpp"
#include "rfidac/rf_coupling.hpp"

using namespace rfidac;

namespace {

const CouplingCalibration& bench() {
  static const auto cal = CouplingCalibration::bench_defaults();
  return cal;
}

double emf(double d, double a) { return induced_emf(AntennaPose(d, a), bench()); }

}  // namespace

TEST(NormalizeAngle, Examples) {
  EXPECT_EQ(normalize_angle(0), 0);
  EXPECT_EQ(normalize_angle(270), 90);
  EXPECT_EQ(normalize_angle(-180), 180);
  EXPECT_EQ(normalize_angle(360), 0);
  EXPECT_EQ(normalize_angle(-90), 90);
  EXPECT_EQ(normalize_angle(540), 180);
}

TEST(NormalizeAngle, IdempotentAndEven) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> angle(-2000, 2000);
  for (int i = 0; i < 5000; ++i) {
    const double a = angle(rng);
    const double n = normalize_angle(a);
    EXPECT_GE(n, 0.0);
    EXPECT_LE(n, 180.0);
    EXPECT_EQ(normalize_angle(n), n);
    EXPECT_NEAR(normalize_angle(-a), n, 1e-9);
  }
}

TEST(AntennaPose, RejectsNonPositiveDistance) {
  EXPECT_THROW(AntennaPose(0, 0), Error);
  EXPECT_THROW(AntennaPose(-5, 0), Error);
  EXPECT_THROW(AntennaPose(std::nan(""), 0), Error);
}

TEST(InducedEmf, BenchPointsAreExact) {
  EXPECT_EQ(emf(25, 0), 13.71);
  EXPECT_EQ(emf(150, 180), 0.23);
  EXPECT_EQ(emf(100, 180), 0.76);
  EXPECT_EQ(emf(75, 0), 11.56);
}

TEST(InducedEmf, InterpolatesBetweenKnots) {
  // (13.71 + 12.14) / 2 and (13.71 + 1.32) / 2
  EXPECT_NEAR(emf(37.5, 0), 12.925, 1e-12);
  EXPECT_NEAR(emf(25, 90), 7.515, 1e-12);
  // mirror angles land on the same curve
  EXPECT_NEAR(emf(25, 270), 7.515, 1e-12);
  EXPECT_EQ(emf(150, -180), 0.23);
}

TEST(InducedEmf, ClampsBelowAndZeroBeyondField) {
  EXPECT_EQ(emf(5, 0), 13.71);
  EXPECT_EQ(emf(10, 180), 1.32);
  EXPECT_EQ(emf(150.0001, 0), 0.0);
  EXPECT_EQ(emf(200, 0), 0.0);
}

TEST(InducedEmf, MonotoneInDistanceAndFacingBeatsBroadside) {
  for (double d = 25; d <= 150; d += 0.5) {
    EXPECT_GE(emf(d, 0), emf(d + 0.5 <= 150 ? d + 0.5 : 150, 0));
    EXPECT_GE(emf(d, 180), emf(d + 0.5 <= 150 ? d + 0.5 : 150, 180));
    EXPECT_GT(emf(d, 0), emf(d, 180));
  }
}

TEST(CanRead, Examples) {
  EXPECT_TRUE(can_read(AntennaPose(150, 0), bench()));
  EXPECT_FALSE(can_read(AntennaPose(150, 180), bench()));
  EXPECT_FALSE(can_read(AntennaPose(200, 0), bench()));
  for (double d = 25; d <= 150; d += 1) EXPECT_TRUE(can_read(AntennaPose(d, 0), bench())) << d;
}

TEST(CanRead, ThresholdIsConfigurable) {
  const auto strict = CouplingCalibration::bench_defaults(11.0);
  EXPECT_TRUE(can_read(AntennaPose(75, 0), strict));
  EXPECT_FALSE(can_read(AntennaPose(100, 0), strict));
}

TEST(Calibration, ParsesTableFile) {
  std::istringstream in(
      "# distance angle emf\n"
      "10 0 5.0   # near\n"
      "\n"
      "20 0 3.0\n"
      "10 180 1.0\n"
      "20 180 0.5\n");
  const auto cal = CouplingCalibration::parse(in, 0.75);
  EXPECT_EQ(cal.samples().size(), 4u);
  EXPECT_EQ(cal.read_threshold_volts(), 0.75);
  EXPECT_NEAR(induced_emf(AntennaPose(15, 0), cal), 4.0, 1e-12);
  EXPECT_NEAR(induced_emf(AntennaPose(15, 180), cal), 0.75, 1e-12);
}

TEST(Calibration, RejectsBadTables) {
  const auto parse = [](const char* text) {
    std::istringstream in(text);
    return CouplingCalibration::parse(in);
  };
  EXPECT_THROW(parse("10 0 5\n"), Error);                                // no 180 curve
  EXPECT_THROW(parse("10 0 5\n10 0 4\n10 180 1\n"), Error);              // repeated distance
  EXPECT_THROW(parse("10 0 5\n10 180 -1\n"), Error);                     // EMF <= 0
  EXPECT_THROW(parse("10 0 5\n10 90 2\n10 180 1\n"), Error);             // unsupported angle
  EXPECT_THROW(parse("10 0\n10 180 1\n"), Error);                        // missing field
  EXPECT_THROW(CouplingCalibration::bench_defaults(0.0), Error);
}
