#include <gtest/gtest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "rfidac/access_control.hpp"
#include "rfidac/errors.hpp"

using namespace rfidac;
using namespace rfidac::testing;
using namespace std::chrono_literals;

namespace {

const Instant t0 = parse_iso8601("2021-09-23T15:21:18Z");

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::InvalidArgument;
}

StaffRecord person(std::string id, PersonKind kind = PersonKind::Staff) {
  StaffRecord r;
  r.staff_id = std::move(id);
  r.kind = kind;
  return r;
}

class AccessControlTest : public ::testing::Test {
 protected:
  Store store = Store::in_memory();
  AccessControl access{store};
};

}  // namespace

TEST_F(AccessControlTest, RegisterPerson) {
  StaffRecord kassim = person("SS/408");
  kassim.last_name = "KASSIM";
  kassim.first_name = "Shakiru O.";
  kassim.phone = "+2348069169216";
  const auto stored = access.register_person(kassim);
  EXPECT_FALSE(stored.tag_uid);
  EXPECT_EQ(store.get_staff("SS/408"), stored);

  StaffRecord guest = person("GS-222", PersonKind::Guest);
  access.register_person(guest);
  EXPECT_EQ(store.get_staff("GS-222").kind, PersonKind::Guest);

  EXPECT_EQ(code_of([&] { access.register_person(kassim); }), Errc::DuplicateStaffId);
}

TEST_F(AccessControlTest, AssignTag) {
  access.register_person(person("SS/709"));
  access.register_person(person("SS/784"));
  access.record_tag(program_tag(blank_tag(), 1033, TagType::Staff));
  access.record_tag(program_tag(blank_tag(), 27804, TagType::Staff));

  EXPECT_EQ(access.assign_tag("SS/709", 1033).tag_uid, 1033u);
  EXPECT_EQ(code_of([&] { access.assign_tag("SS/784", 1033); }), Errc::TagAlreadyAssigned);
  EXPECT_EQ(code_of([&] { access.assign_tag("SS/000", 27804); }), Errc::UnknownStaff);
  EXPECT_EQ(code_of([&] { access.assign_tag("SS/784", 5); }), Errc::Unprogrammed);

  // reassignment replaces the old association
  access.assign_tag("SS/709", 27804);
  EXPECT_EQ(store.get_staff("SS/709").tag_uid, 27804u);
  EXPECT_FALSE(store.find_staff_by_tag(1033));
  access.assign_tag("SS/784", 1033);
}

TEST_F(AccessControlTest, ConfigureReader) {
  access.configure_reader(1, "Res. Centre");
  EXPECT_EQ(store.get_reader(1).area_id, "Res. Centre");
  access.configure_reader(1, "Lab");
  EXPECT_EQ(store.get_reader(1).area_id, "Lab");
  access.configure_reader(2, "Res. Centre");
  EXPECT_EQ(store.get_reader(2).area_id, "Res. Centre");
  EXPECT_EQ(store.get_reader(1).area_id, "Lab");
}

TEST_F(AccessControlTest, EnterThenLeft) {
  seed_pilot(access);
  const auto first = access.handle_detection({1, 7319, 13710}, t0);
  EXPECT_EQ(first.staff_id, "JS/729");
  EXPECT_EQ(first.direction, Direction::Enter);
  EXPECT_EQ(first.seq, 1u);
  EXPECT_EQ(first.area_id, "Res. Centre");
  const auto second = access.handle_detection({1, 7319, 13710}, parse_iso8601("2021-09-23T16:53:24Z"));
  EXPECT_EQ(second.staff_id, "JS/729");
  EXPECT_EQ(second.direction, Direction::Left);
  EXPECT_EQ(second.seq, 2u);
}

TEST_F(AccessControlTest, UnknownTagIsDenied) {
  seed_pilot(access);
  const auto e = access.handle_detection({1, 99999, 13710}, t0);
  EXPECT_EQ(e.direction, Direction::Denied);
  EXPECT_EQ(e.staff_id, kUnknownStaffId);
  EXPECT_EQ(e.uid, 99999u);
  // denial does not disturb anyone's state
  EXPECT_EQ(access.handle_detection({1, 7319, 1}, t0 + 1s).direction, Direction::Enter);
}

TEST_F(AccessControlTest, UnconfiguredReader) {
  seed_pilot(access);
  EXPECT_EQ(code_of([&] { access.handle_detection({9, 7319, 1}, t0); }), Errc::UnconfiguredReader);
  EXPECT_EQ(store.last_seq(), 0u);
}

TEST_F(AccessControlTest, AllowListDeniesOthers) {
  seed_pilot(access);
  access.set_allow_list("Res. Centre", std::vector<std::string>{"SS/408"});
  const auto denied = access.handle_detection({1, 7319, 1}, t0);
  EXPECT_EQ(denied.direction, Direction::Denied);
  EXPECT_EQ(denied.staff_id, "JS/729");
  EXPECT_EQ(access.handle_detection({1, 416, 1}, t0 + 1s).direction, Direction::Enter);
  access.set_allow_list("Res. Centre", std::nullopt);
  EXPECT_EQ(access.handle_detection({1, 7319, 1}, t0 + 2s).direction, Direction::Enter);
}

TEST_F(AccessControlTest, AlternationIsPerArea) {
  seed_pilot(access);
  access.configure_reader(2, "Lab");
  EXPECT_EQ(access.handle_detection({1, 7319, 1}, t0).direction, Direction::Enter);
  EXPECT_EQ(access.handle_detection({2, 7319, 1}, t0 + 1s).direction, Direction::Enter);
  EXPECT_EQ(access.handle_detection({1, 7319, 1}, t0 + 2s).direction, Direction::Left);
  EXPECT_EQ(access.handle_detection({2, 7319, 1}, t0 + 3s).direction, Direction::Left);
}

TEST(AccessControlRestart, StateSurvivesRebuild) {
  auto store = Store::in_memory();
  {
    AccessControl access(store);
    seed_pilot(access);
    access.handle_detection({1, 7319, 1}, t0);
  }
  AccessControl rebuilt(store);
  EXPECT_EQ(rebuilt.presence("JS/729", "Res. Centre"), Direction::Enter);
  EXPECT_EQ(rebuilt.handle_detection({1, 7319, 1}, t0 + 1s).direction, Direction::Left);
}

TEST_F(AccessControlTest, DeterministicAndGapless) {
  seed_pilot(access);
  std::mt19937 rng(4);
  auto other_store = Store::in_memory();
  AccessControl other(other_store);
  seed_pilot(other);
  const auto& staff = pilot_staff();
  for (int i = 0; i < 500; ++i) {
    const std::uint32_t uid = (rng() % 10 == 0) ? 424242u : staff[rng() % staff.size()].uid;
    const Instant at = t0 + std::chrono::seconds(i);
    const auto a = access.handle_detection({1, uid, 1}, at);
    const auto b = other.handle_detection({1, uid, 1}, at);
    ASSERT_EQ(a, b);
    ASSERT_EQ(a.seq, static_cast<std::uint64_t>(i + 1));
  }
}
