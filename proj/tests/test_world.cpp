#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "idtrack/scenarios.hpp"
#include "idtrack/world.hpp"

using namespace idtrack;
using Catch::Approx;

namespace {

PersonAgent line_walker(std::string name, Vec2 from, Vec2 to, double t0,
                        double t1) {
  PersonAgent agent;
  agent.name = std::move(name);
  const double heading = std::atan2(to.y - from.y, to.x - from.x);
  agent.waypoints.push_back({t0, {from.x, from.y, Angle(heading)}});
  agent.waypoints.push_back({t1, {to.x, to.y, Angle(heading)}});
  return agent;
}

WorldState world_with(std::vector<PersonState> persons,
                      Pose2D robot = {0.0, 0.0, Angle(0.0)}) {
  WorldState world;
  world.robot = robot;
  world.persons = std::move(persons);
  return world;
}

PersonState person_at(std::string name, double x, double y,
                      double heading = 0.0, double radius = 0.25) {
  return {std::move(name), {x, y, Angle(heading)}, {}, radius};
}

}  // namespace

TEST_CASE("waypoint interpolation") {
  const auto walker = line_walker("Alice", {0.0, 0.0}, {2.0, 0.0}, 0.0, 10.0);

  SECTION("boundaries clamp") {
    CHECK(walker.pose_at(0.0).x == 0.0);
    CHECK(walker.pose_at(10.0).x == 2.0);
    CHECK(walker.pose_at(-1.0).x == 0.0);
    CHECK(walker.pose_at(99.0).x == 2.0);
  }
  SECTION("midpoint is linear") {
    const auto pose = walker.pose_at(5.0);
    CHECK(pose.x == Approx(1.0));
    CHECK(pose.y == Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("heading interpolates along the shortest arc") {
  PersonAgent agent;
  agent.name = "Alice";
  agent.waypoints.push_back({0.0, {0.0, 0.0, Angle(deg_to_rad(170.0))}});
  agent.waypoints.push_back({1.0, {0.0, 0.0, Angle(deg_to_rad(-170.0))}});
  // halfway through a 20 degree wrap-through-pi turn
  CHECK(agent.pose_at(0.5).heading.radians() == Approx(kPi).margin(1e-12));
  CHECK(agent.pose_at(0.25).heading.radians() ==
        Approx(deg_to_rad(175.0)).margin(1e-12));
}

TEST_CASE("step_world basics") {
  const auto script = build_scenario(Scenario::Exp1);

  SECTION("stationary persons sit on their keyframes at any t") {
    for (const double t : {0.0, 13.7, 120.0}) {
      const auto world = step_world(script, t);
      REQUIRE(world.persons.size() == 3);
      CHECK(world.persons[0].pose.x == 3.0);
      CHECK(world.persons[0].pose.y == 0.0);
      CHECK(world.persons[0].velocity.norm() == Approx(0.0).margin(1e-12));
    }
  }
  SECTION("time range enforced") {
    CHECK_THROWS_AS(step_world(script, -0.1), std::out_of_range);
    CHECK_THROWS_AS(step_world(script, 120.1), std::out_of_range);
  }
  SECTION("robot pose override wins") {
    const Pose2D moved{1.0, 2.0, Angle(0.5)};
    CHECK(step_world(script, 1.0, moved).robot.x == 1.0);
    CHECK(step_world(script, 1.0).robot.x == script.robot_start.x);
  }
  SECTION("velocity matches a walking segment") {
    ScenarioScript walk;
    walk.id = "test";
    walk.duration = 10.0;
    walk.persons.push_back(line_walker("Alice", {0.0, 0.0}, {2.0, 0.0}, 0.0, 10.0));
    const auto world = step_world(walk, 5.0);
    CHECK(world.persons[0].velocity.x == Approx(0.2));
    CHECK(world.persons[0].velocity.y == Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("occlusion predicate") {
  SECTION("lone person is never occluded") {
    const auto world = world_with({person_at("A", 2.0, 0.0)});
    CHECK_FALSE(occluded(world, 0));
  }
  SECTION("collinear closer blocker occludes") {
    const auto world =
        world_with({person_at("A", 4.0, 0.0), person_at("B", 2.0, 0.0)});
    CHECK(occluded(world, 0));
    CHECK_FALSE(occluded(world, 1));  // the closer one stays visible
  }
  SECTION("thirty degrees of separation is far outside the blocker cone") {
    // blocker half-width asin(0.25/2) is about 7.2 degrees
    const double th = deg_to_rad(30.0);
    const auto world = world_with(
        {person_at("A", 4.0 * std::cos(th), 4.0 * std::sin(th)),
         person_at("B", 2.0, 0.0)});
    CHECK_FALSE(occluded(world, 0));
  }
  SECTION("asymmetry on random configurations") {
    std::mt19937 gen(41);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int i = 0; i < 500; ++i) {
      const auto world = world_with({person_at("A", coord(gen), coord(gen)),
                                     person_at("B", coord(gen), coord(gen))});
      CHECK_FALSE((occluded(world, 0) && occluded(world, 1)));
    }
  }
}

TEST_CASE("scenario scripts validate and match their modes") {
  const auto exp1 = build_scenario(Scenario::Exp1);
  CHECK(exp1.robot_mode == RobotMode::Stationary);
  CHECK_FALSE(exp1.target_name.has_value());

  const auto exp2 = build_scenario(Scenario::Exp2);
  CHECK(exp2.robot_mode == RobotMode::Stationary);

  const auto exp3 = build_scenario(Scenario::Exp3);
  CHECK(exp3.robot_mode == RobotMode::YawTrack);
  REQUIRE(exp3.target_name.has_value());
  CHECK(*exp3.target_name == "Alice");

  const auto exp4 = build_scenario(Scenario::Exp4);
  CHECK(exp4.robot_mode == RobotMode::FollowClosest);

  const auto exp5 = build_scenario(Scenario::Exp5);
  CHECK(exp5.robot_mode == RobotMode::FollowTarget);
  REQUIRE(exp5.target_name.has_value());
  CHECK(*exp5.target_name == "Alice");

  for (const auto scenario : {Scenario::Exp1, Scenario::Exp2, Scenario::Exp3,
                              Scenario::Exp4, Scenario::Exp5}) {
    const auto script = build_scenario(scenario);
    CHECK(script.duration == 120.0);
    REQUIRE(script.persons.size() == 3);
    CHECK(script.persons[0].name == "Alice");
    CHECK(script.persons[1].name == "Bob");
    CHECK(script.persons[2].name == "Carol");
    for (const auto& agent : script.persons) {
      for (std::size_t k = 1; k < agent.waypoints.size(); ++k)
        REQUIRE(agent.waypoints[k].t > agent.waypoints[k - 1].t);
      // agents stay defined through the whole run
      CHECK((agent.waypoints.back().t >= script.duration ||
             scenario == Scenario::Exp1));
    }
  }
}

TEST_CASE("script validation rejects inconsistent targets") {
  ScenarioScript script;
  script.id = "test";
  script.persons.push_back(line_walker("Alice", {0, 0}, {1, 0}, 0.0, 1.0));

  script.robot_mode = RobotMode::YawTrack;
  CHECK_THROWS_AS(script.validate(), std::invalid_argument);

  script.robot_mode = RobotMode::Stationary;
  script.target_name = "Alice";
  CHECK_THROWS_AS(script.validate(), std::invalid_argument);

  script.robot_mode = RobotMode::FollowTarget;
  CHECK_NOTHROW(script.validate());
}

TEST_CASE("walking scenarios cover the camera's field of view boundary") {
  // people must leave and re-enter the forward camera cone over a run
  const auto script = build_scenario(Scenario::Exp2);
  const double half_fov = deg_to_rad(34.5);
  int inside = 0, outside = 0;
  for (double t = 0.0; t < script.duration; t += 0.5) {
    const auto world = step_world(script, t);
    for (const auto& person : world.persons) {
      const auto rp = world_to_robot_frame(person.pose.position(), world.robot);
      const double bearing = std::atan2(rp.y, rp.x);
      (std::abs(bearing) <= half_fov && rp.x > 0.0 ? inside : outside) += 1;
    }
  }
  CHECK(inside > 50);
  CHECK(outside > 50);
}
