#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "idtrack/scenarios.hpp"
#include "idtrack/sensors.hpp"

using namespace idtrack;
using Catch::Approx;

namespace {

SensorNoiseConfig noise_free() {
  SensorNoiseConfig noise;
  noise.pos_sigma = 0.0;
  noise.pixel_sigma = 0.0;
  noise.detect_prob = 1.0;
  noise.face_recog_prob = 1.0;
  noise.swap_prob = 0.0;
  return noise;
}

const CameraIntrinsics kCam = CameraIntrinsics::from_hfov(deg_to_rad(69.0), 640.0);

WorldState make_world(double t, std::vector<PersonState> persons,
                      Pose2D robot = {0.0, 0.0, Angle(0.0)}) {
  WorldState world;
  world.t = t;
  world.robot = robot;
  world.persons = std::move(persons);
  return world;
}

PersonState person(std::string name, double x, double y, double heading) {
  return {std::move(name), {x, y, Angle(heading)}, {}, 0.25};
}

}  // namespace

TEST_CASE("visible_to_tracker honours range and occlusion") {
  const auto noise = noise_free();
  auto world = make_world(0.0, {person("A", 2.0, 0.0, kPi)});
  CHECK(visible_to_tracker(world, 0, noise));

  world = make_world(0.0, {person("A", 9.0, 0.0, kPi)});
  CHECK_FALSE(visible_to_tracker(world, 0, noise));

  world = make_world(0.0, {person("A", 4.0, 0.0, kPi), person("B", 2.0, 0.0, kPi)});
  CHECK_FALSE(visible_to_tracker(world, 0, noise));
  CHECK(visible_to_tracker(world, 1, noise));
}

TEST_CASE("noise-free stationary person yields one stable exact track") {
  const auto noise = noise_free();
  Rng rng(0);
  SyntheticTrackerState state;
  for (int k = 0; k < 50; ++k) {
    const auto world = make_world(k * kFrameDt, {person("A", 2.0, 0.5, kPi)});
    const auto tracks = synth_tracker_step(state, world, noise, rng);
    REQUIRE(tracks.size() == 1);
    CHECK(tracks[0].track_id == 1);
    CHECK(tracks[0].position.x == Approx(2.0).margin(1e-12));
    CHECK(tracks[0].position.y == Approx(0.5).margin(1e-12));
    CHECK(tracks[0].position.z == kTrackerHeight);
  }
}

TEST_CASE("occluded walker coasts along its constant-velocity line") {
  const auto noise = noise_free();
  Rng rng(0);
  SyntheticTrackerState state;
  const Vec2 v{0.0, 0.6};  // walks left to right across the front

  auto walker_at = [&](double t) {
    return person("A", 3.0, -2.0 + v.y * t, kPi / 2.0);
  };

  // warm up fully visible
  for (int k = 0; k < 30; ++k) {
    const double t = k * kFrameDt;
    const auto world = make_world(t, {walker_at(t)});
    REQUIRE(synth_tracker_step(state, world, noise, rng).size() == 1);
  }

  // five occluded frames: plant a blocker on the line of sight
  for (int k = 30; k < 35; ++k) {
    const double t = k * kFrameDt;
    const auto subject = walker_at(t);
    const Vec2 p = subject.pose.position();
    const double r = p.norm();
    const auto world = make_world(
        t, {subject, person("B", p.x * (1.0 / r), p.y * (1.0 / r), 0.0)});
    const auto tracks = synth_tracker_step(state, world, noise, rng);
    // the walker's track must keep emitting on the true straight line
    bool found = false;
    for (const auto& d : tracks) {
      if (d.track_id != 1) continue;
      found = true;
      CHECK(d.position.x == Approx(subject.pose.x).margin(1e-9));
      CHECK(d.position.y == Approx(subject.pose.y).margin(1e-9));
    }
    CHECK(found);
  }
}

TEST_CASE("track drops after miss_max and reappears with a fresh id") {
  auto noise = noise_free();
  noise.miss_max = 10;
  Rng rng(0);
  SyntheticTrackerState state;

  const auto visible = make_world(0.0, {person("A", 2.0, 0.0, kPi)});
  for (int k = 0; k < 5; ++k) {
    auto world = visible;
    world.t = k * kFrameDt;
    REQUIRE(synth_tracker_step(state, world, noise, rng).size() == 1);
  }

  // person leaves tracker range entirely for miss_max + 1 frames
  for (int k = 5; k < 16; ++k) {
    auto world = make_world(k * kFrameDt, {person("A", 20.0, 0.0, kPi)});
    synth_tracker_step(state, world, noise, rng);
  }
  CHECK(state.live.empty());

  auto world = visible;
  world.t = 1.6;
  const auto tracks = synth_tracker_step(state, world, noise, rng);
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].track_id == 2);  // ids never repeat within a run
}

TEST_CASE("swap events exchange track linkages between close persons") {
  auto noise = noise_free();
  noise.swap_prob = 1.0;  // force the swap whenever possible
  Rng rng(0);
  SyntheticTrackerState state;

  // two people walking parallel within swap_distance
  auto world_at = [&](double t) {
    return make_world(t, {person("A", 2.0 + 0.5 * t, 0.2, 0.0),
                          person("B", 2.0 + 0.5 * t, -0.2, 0.0)});
  };
  auto w0 = world_at(0.0);
  auto first = synth_tracker_step(state, w0, noise, rng);
  REQUIRE(first.size() == 2);
  // track 1 starts on person A (y = +0.2)
  CHECK(first[0].track_id == 1);
  CHECK(first[0].position.y == Approx(0.2));

  auto w1 = world_at(kFrameDt);
  auto second = synth_tracker_step(state, w1, noise, rng);
  REQUIRE(second.size() == 2);
  // linkages exchanged: track 1 now rides person B
  CHECK(second[0].track_id == 1);
  CHECK(second[0].position.y == Approx(-0.2));
  CHECK(second[1].track_id == 2);
  CHECK(second[1].position.y == Approx(0.2));
}

TEST_CASE("face observation appears only under all five conditions") {
  const auto noise = noise_free();

  SECTION("straight ahead, facing, close -> observation at c_x") {
    Rng rng(0);
    const auto world = make_world(0.0, {person("A", 2.0, 0.0, kPi)});
    const auto faces = synth_face_step(world, kCam, noise, rng);
    REQUIRE(faces.size() == 1);
    CHECK(faces[0].name == "A");
    CHECK(faces[0].u == Approx(kCam.c_x).margin(1e-12));
    CHECK(faces[0].score == 1.0);
  }
  SECTION("facing away -> nothing") {
    Rng rng(0);
    const auto world = make_world(0.0, {person("A", 2.0, 0.0, 0.0)});
    CHECK(synth_face_step(world, kCam, noise, rng).empty());
  }
  SECTION("outside the horizontal field of view -> nothing") {
    Rng rng(0);
    const double th = deg_to_rad(40.0);
    const auto world = make_world(
        0.0, {person("A", 2.0 * std::cos(th), 2.0 * std::sin(th), th + kPi)});
    CHECK(synth_face_step(world, kCam, noise, rng).empty());
  }
  SECTION("beyond face range -> nothing") {
    Rng rng(0);
    const auto world = make_world(0.0, {person("A", 5.0, 0.0, kPi)});
    CHECK(synth_face_step(world, kCam, noise, rng).empty());
  }
  SECTION("occluded -> nothing") {
    Rng rng(0);
    const auto world = make_world(
        0.0, {person("A", 3.0, 0.0, kPi), person("B", 1.5, 0.0, kPi)});
    const auto faces = synth_face_step(world, kCam, noise, rng);
    REQUIRE(faces.size() == 1);
    CHECK(faces[0].name == "B");
  }
}

TEST_CASE("sensor streams are deterministic per seed") {
  SensorNoiseConfig noise;  // default noisy config
  noise.rng_seed = 5;
  const auto script = build_scenario(Scenario::Exp2);

  auto run_once = [&]() {
    Rng rng(noise.rng_seed);
    SyntheticTrackerState state;
    std::vector<std::string> log;
    for (int k = 0; k < 200; ++k) {
      const auto world = step_world(script, k * kFrameDt);
      for (const auto& d : synth_tracker_step(state, world, noise, rng)) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%lld %.17g %.17g",
                      static_cast<long long>(d.track_id), d.position.x,
                      d.position.y);
        log.emplace_back(buf);
      }
      for (const auto& f : synth_face_step(world, kCam, noise, rng)) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s %.17g", f.name.c_str(), f.u);
        log.emplace_back(buf);
      }
    }
    return log;
  };
  CHECK(run_once() == run_once());
}

TEST_CASE("noise-free sensing is sound on a moving scenario") {
  const auto noise = noise_free();
  ScenarioScript walk;
  walk.id = "test";
  walk.duration = 20.0;
  PersonAgent agent;
  agent.name = "Alice";
  agent.waypoints.push_back({0.0, {2.0, -2.0, Angle(kPi / 2.0)}});
  agent.waypoints.push_back({20.0, {2.0, 2.0, Angle(kPi / 2.0)}});
  walk.persons.push_back(agent);

  Rng rng(3);
  SyntheticTrackerState state;
  for (int k = 0; k < 200; ++k) {
    const auto world = step_world(walk, k * kFrameDt);
    const auto tracks = synth_tracker_step(state, world, noise, rng);
    REQUIRE(tracks.size() == 1);
    CHECK(tracks[0].position.x == Approx(world.persons[0].pose.x).margin(1e-9));
    CHECK(tracks[0].position.y == Approx(world.persons[0].pose.y).margin(1e-9));
  }
}
