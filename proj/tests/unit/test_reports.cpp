#include <gtest/gtest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "rfidac/errors.hpp"
#include "rfidac/reports.hpp"

using namespace rfidac;
using namespace rfidac::testing;
using namespace std::chrono_literals;

namespace {

class ReportsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    seed_pilot(access);
    append_pilot_log(store);
  }
  Store store = Store::in_memory();
  AccessControl access{store};
};

}  // namespace

TEST_F(ReportsTest, ReportWindowMatchesLoggedRows) {
  EventFilter f;
  f.from = parse_iso8601("2021-09-23T16:30:00Z");
  const auto rows = access_report(store, f);
  const auto& expected = access_report_rows();
  ASSERT_EQ(rows.size(), expected.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].staff_id, expected[i].staff_id);
    EXPECT_EQ(display_name(rows[i].direction), expected[i].access);
    EXPECT_EQ(rows[i].area_id, "Res. Centre");
    EXPECT_EQ(rows[i].date, expected[i].date);
    EXPECT_EQ(rows[i].time, expected[i].time);
  }
  EXPECT_EQ(rows.front(), (AccessReportRow{"JS/729", Direction::Left, "Res. Centre", "23/09/2021", "16:53:24"}));
}

TEST_F(ReportsTest, FilterByStaff) {
  EventFilter f;
  f.staff_id = "SS/579";
  const auto rows = access_report(store, f);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (AccessReportRow{"SS/579", Direction::Enter, "Res. Centre", "24/09/2021", "11:58:04"}));
  EXPECT_EQ(rows[1], (AccessReportRow{"SS/579", Direction::Left, "Res. Centre", "24/09/2021", "13:05:26"}));
}

TEST(Reports, EmptyLog) {
  const auto store = Store::in_memory();
  EXPECT_TRUE(access_report(store, {}).empty());
  EXPECT_EQ(report_csv({}), "Staff ID,Access,Accessed,Date,Time\n");
}

TEST_F(ReportsTest, Csv) {
  EventFilter f;
  f.staff_id = "SS/579";
  EXPECT_EQ(report_csv(access_report(store, f)),
            "Staff ID,Access,Accessed,Date,Time\n"
            "SS/579,Enter,Res. Centre,24/09/2021,11:58:04\n"
            "SS/579,Left,Res. Centre,24/09/2021,13:05:26\n");
  const std::vector<AccessReportRow> odd{{"A,1", Direction::Denied, "say \"hi\"", "01/01/2021", "00:00:00"}};
  EXPECT_EQ(report_csv(odd), "Staff ID,Access,Accessed,Date,Time\n\"A,1\",Denied,\"say \"\"hi\"\"\",01/01/2021,00:00:00\n");
}

TEST_F(ReportsTest, AccessCount) {
  EXPECT_EQ(access_count(store, "SS/579", parse_report_date("24/09/2021")), 2u);
  EXPECT_EQ(access_count(store, "SS/579", parse_report_date("23/09/2021")), 0u);
  EXPECT_EQ(access_count(store, "JS/729", parse_report_date("25/09/2021")), 5u);
  EXPECT_EQ(access_count(store, "GS-222", parse_report_date("25/09/2021")), 0u);
  try {
    access_count(store, "SS/000", parse_report_date("25/09/2021"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownStaff);
  }
}

TEST(Reports, AccessCountMatchesBruteForce) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    auto store = Store::in_memory();
    AccessControl access(store);
    seed_pilot(access);
    Instant at = parse_iso8601("2021-09-20T00:00:00Z");
    for (int i = 0; i < 200; ++i) {
      at += std::chrono::minutes(rng() % 240);
      const auto& s = pilot_staff()[rng() % pilot_staff().size()];
      access.handle_detection({1, (rng() % 8 == 0) ? 1u : s.uid, 1}, at);
    }
    for (const auto& s : pilot_staff()) {
      const Date day = date_of(parse_iso8601("2021-09-20T00:00:00Z")) + std::chrono::days(rng() % 15);
      std::size_t expected = 0;
      for (const auto& e : store.events()) {
        if (e.staff_id == s.staff_id && e.direction != Direction::Denied &&
            std::chrono::floor<std::chrono::days>(e.timestamp) <= day) {
          ++expected;
        }
      }
      ASSERT_EQ(access_count(store, s.staff_id, day), expected);
    }
  }
}

TEST_F(ReportsTest, StatusSnapshot) {
  const auto snap = status_snapshot(store, {true, true});
  EXPECT_TRUE(snap.connected);
  EXPECT_TRUE(snap.scanning);
  EXPECT_EQ(snap.recent.size(), store.events().size());  // 18 < 20
  const auto& js = snap.last_access.at("JS/729");
  EXPECT_EQ(js.direction, Direction::Enter);  // the report window adds a later Enter

  const auto limited = status_snapshot(store, {true, false}, 3);
  ASSERT_EQ(limited.recent.size(), 3u);
  EXPECT_EQ(limited.recent.back().seq, store.last_seq());
  EXPECT_FALSE(limited.scanning);
}

TEST(Reports, StatusAfterStatusWindowOnly) {
  auto store = Store::in_memory();
  AccessControl access(store);
  seed_pilot(access);
  for (const auto& row : status_window_rows()) {
    AccessEvent e;
    e.seq = store.last_seq() + 1;
    e.staff_id = row.staff_id;
    e.direction = *parse_direction(row.access);
    e.area_id = kPilotArea;
    e.timestamp = parse_report_datetime(row.date, row.time);
    store.append_event(e);
  }
  const auto snap = status_snapshot(store, {true, true});
  const auto& js = snap.last_access.at("JS/729");
  EXPECT_EQ(js.direction, Direction::Left);
  EXPECT_EQ(format_report_date(js.timestamp), "24/09/2021");
  EXPECT_EQ(format_report_time(js.timestamp), "15:09:16");
}

TEST(Reports, EmptyStatus) {
  const auto store = Store::in_memory();
  const auto snap = status_snapshot(store, {true, false});
  EXPECT_TRUE(snap.recent.empty());
  EXPECT_TRUE(snap.connected);
  EXPECT_FALSE(snap.scanning);
}

TEST_F(ReportsTest, RowCountEqualsQueryCount) {
  for (const char* id : {"JS/729", "SS/408", "GS-221", "nobody"}) {
    EventFilter f;
    f.staff_id = id;
    EXPECT_EQ(access_report(store, f).size(), store.query_events(f).size());
  }
}
