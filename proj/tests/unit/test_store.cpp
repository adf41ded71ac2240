#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/temp_dir.hpp"
#include "rfidac/errors.hpp"
#include "rfidac/json_codec.hpp"
#include "rfidac/store.hpp"

using namespace rfidac;
using namespace rfidac::testing;
using namespace std::chrono_literals;

namespace {

const Instant t0 = parse_iso8601("2021-09-23T08:00:00Z");

AccessEvent event(std::uint64_t seq, std::string staff, Direction d = Direction::Enter,
                  std::string area = "Res. Centre", Instant at = t0) {
  AccessEvent e;
  e.seq = seq;
  e.staff_id = std::move(staff);
  e.direction = d;
  e.area_id = std::move(area);
  e.timestamp = at;
  e.reader_id = 1;
  return e;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::InvalidArgument;
}

StaffRecord harram() {
  StaffRecord r;
  r.staff_id = "SS/453";
  r.tag_uid = 3865;
  r.last_name = "HARRAM";
  r.first_name = "Ibrahim M.";
  r.phone = "+2348035097470";
  return r;
}

}  // namespace

TEST(Store, AppendInSequence) {
  auto store = Store::in_memory();
  store.append_event(event(1, "JS/729"));
  store.append_event(event(2, "JS/729", Direction::Left));
  EXPECT_EQ(store.events().size(), 2u);
  EXPECT_EQ(code_of([&] { store.append_event(event(4, "JS/729")); }), Errc::SequenceGap);
  EXPECT_EQ(code_of([&] { store.append_event(event(2, "JS/729")); }), Errc::SequenceGap);
}

TEST(Store, KeyedUpsertAndGet) {
  auto store = Store::in_memory();
  store.upsert_staff(harram());
  EXPECT_EQ(store.get_staff("SS/453").last_name, "HARRAM");
  EXPECT_EQ(code_of([&] { store.get_staff("SS/000"); }), Errc::NotFound);

  auto changed = harram();
  changed.phone = "+2340000000000";
  store.upsert_staff(changed);
  EXPECT_EQ(store.get_staff("SS/453").phone, "+2340000000000");
  EXPECT_EQ(store.staff().size(), 1u);

  store.upsert_reader({1, "Res. Centre"});
  store.upsert_reader({1, "Lab"});
  EXPECT_EQ(store.get_reader(1).area_id, "Lab");
  EXPECT_EQ(code_of([&] { store.get_reader(2); }), Errc::NotFound);

  store.upsert_tag(program_tag(blank_tag(), 3865, TagType::Staff));
  EXPECT_TRUE(store.get_tag(3865).programmed);
  EXPECT_EQ(code_of([&] { store.get_tag(1); }), Errc::NotFound);
}

TEST(Store, TagUidUniqueAmongStaff) {
  auto store = Store::in_memory();
  store.upsert_staff(harram());
  auto other = harram();
  other.staff_id = "SS/999";
  EXPECT_EQ(code_of([&] { store.upsert_staff(other); }), Errc::TagAlreadyAssigned);
}

TEST(Store, QueryByStaffOverPilotLog) {
  auto store = Store::in_memory();
  AccessControl access(store);
  seed_pilot(access);
  append_pilot_log(store);
  EventFilter f;
  f.staff_id = "JS/729";
  const auto rows = store.query_events(f);
  EXPECT_EQ(rows.size(), 5u);
  for (const auto& e : rows) EXPECT_EQ(e.staff_id, "JS/729");
  EXPECT_EQ(store.query_events({}).size(), store.events().size());

  EventFilter inverted;
  inverted.from = t0 + 48h;
  inverted.to = t0;
  EXPECT_TRUE(store.query_events(inverted).empty());
}

TEST(Store, QueryMatchesBruteForce) {
  std::mt19937 rng(21);
  const std::vector<std::string> people{"A", "B", "C"};
  const std::vector<std::string> areas{"North", "South"};
  for (int trial = 0; trial < 50; ++trial) {
    auto store = Store::in_memory();
    std::vector<AccessEvent> all;
    Instant at = t0;
    for (std::uint64_t seq = 1; seq <= 60; ++seq) {
      at += std::chrono::seconds(rng() % 7200);
      auto e = event(seq, people[rng() % 3], static_cast<Direction>(rng() % 3), areas[rng() % 2], at);
      store.append_event(e);
      all.push_back(e);
    }
    EventFilter f;
    if (rng() % 2) f.staff_id = people[rng() % 3];
    if (rng() % 2) f.area_id = areas[rng() % 2];
    if (rng() % 2) f.from = t0 + std::chrono::seconds(rng() % 200000);
    if (rng() % 2) f.to = t0 + std::chrono::seconds(rng() % 200000);

    std::vector<AccessEvent> expected;
    for (const auto& e : all) {
      const bool keep = (!f.staff_id || e.staff_id == *f.staff_id) && (!f.area_id || e.area_id == *f.area_id) &&
                        (!f.from || e.timestamp >= *f.from) && (!f.to || e.timestamp <= *f.to);
      if (keep) expected.push_back(e);
    }
    ASSERT_EQ(store.query_events(f), expected);
  }
}

TEST(Store, ReopenRestoresEverything) {
  TempDir dir;
  std::vector<AccessEvent> before;
  {
    auto store = Store::open(dir.path());
    AccessControl access(store);
    seed_pilot(access);
    access.set_allow_list("Res. Centre", std::vector<std::string>{"SS/408"});
    append_pilot_log(store);
    before = store.query_events({});
  }
  auto store = Store::open(dir.path());
  EXPECT_EQ(store.staff().size(), 8u);
  EXPECT_EQ(store.get_staff("SS/453").tag_uid, 3865u);
  EXPECT_EQ(store.tags().size(), 8u);
  EXPECT_EQ(store.get_reader(1).area_id, "Res. Centre");
  ASSERT_TRUE(store.find_area("Res. Centre"));
  EXPECT_EQ(store.find_area("Res. Centre")->allow, std::vector<std::string>{"SS/408"});
  EXPECT_EQ(store.query_events({}), before);
  EXPECT_EQ(store.last_seq(), before.size());
}

TEST(Store, TornTailIsDropped) {
  TempDir dir;
  {
    auto store = Store::open(dir.path());
    store.append_event(event(1, "JS/729"));
  }
  {
    std::ofstream out(dir.path() / "events.jsonl", std::ios::app);
    out << R"({"seq":2,"staff_id":"JS/7)";
  }
  auto store = Store::open(dir.path());
  EXPECT_EQ(store.last_seq(), 1u);
  store.append_event(event(2, "JS/729", Direction::Left));
  auto again = Store::open(dir.path());
  EXPECT_EQ(again.last_seq(), 2u);
}

TEST(Store, CorruptRecordIsReported) {
  TempDir dir;
  {
    std::ofstream out(dir.path() / "staff.jsonl");
    out << "{not json}\n";
  }
  EXPECT_EQ(code_of([&] { Store::open(dir.path()); }), Errc::StoreCorrupt);
}

TEST(Store, SeqGapOnDiskIsCorrupt) {
  TempDir dir;
  {
    std::ofstream out(dir.path() / "events.jsonl");
    out << to_json(event(1, "A")).dump() << "\n" << to_json(event(3, "A")).dump() << "\n";
  }
  EXPECT_EQ(code_of([&] { Store::open(dir.path()); }), Errc::StoreCorrupt);
}

TEST(Store, UnusableDirectory) {
  TempDir dir;
  const auto file = dir.path() / "plain-file";
  std::ofstream(file) << "x";
  EXPECT_EQ(code_of([&] { Store::open(file / "data"); }), Errc::ConfigInvalid);
}

TEST(Store, RecordGrammar) {
  auto e = event(7, "JS/729", Direction::Left);
  e.uid = 7319;
  EXPECT_EQ(to_json(e).dump(),
            R"({"seq":7,"staff_id":"JS/729","direction":"LEFT","area_id":"Res. Centre",)"
            R"("timestamp":"2021-09-23T08:00:00Z","uid":7319,"reader_id":1})");
  EXPECT_EQ(event_from_json(to_json(e)), e);
  EXPECT_EQ(to_json(harram()).dump(),
            R"({"staff_id":"SS/453","tag_uid":3865,"last_name":"HARRAM","first_name":"Ibrahim M.",)"
            R"("phone":"+2348035097470","kind":"STAFF"})");
  EXPECT_EQ(staff_from_json(to_json(harram())), harram());
}
