#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "idtrack/baselines.hpp"

using namespace idtrack;
using Catch::Approx;

namespace {

const CameraIntrinsics kCam = CameraIntrinsics::from_hfov(deg_to_rad(69.0), 640.0);

WorldState make_world(std::vector<PersonState> persons,
                      Pose2D robot = {0.0, 0.0, Angle(0.0)}) {
  WorldState world;
  world.robot = robot;
  world.persons = std::move(persons);
  return world;
}

PersonState person(std::string name, double x, double y) {
  return {std::move(name), {x, y, Angle(kPi)}, {}, 0.25};
}

FaceObservation face_of(const WorldState& world, std::size_t idx) {
  FaceObservation f;
  f.name = world.persons[idx].name;
  const auto head = world_to_robot_frame(world.persons[idx].pose.position(),
                                         world.robot, kHeadHeight);
  f.u = project_to_pixel(head, kCam);
  f.score = 1.0;
  return f;
}

DepthNoiseConfig clean_depth() {
  DepthNoiseConfig depth;
  depth.depth_sigma = 0.0;
  depth.edge_fusion_prob = 0.0;
  return depth;
}

TrackDetection track(std::int64_t id, const WorldState& world, double x,
                     double y) {
  TrackDetection d;
  d.track_id = id;
  d.position = world_to_robot_frame({x, y}, world.robot, 1.0);
  return d;
}

}  // namespace

TEST_CASE("face-only method reconstructs exact positions without noise") {
  const auto world = make_world({person("Alice", 2.0, 0.5)});
  const std::vector<FaceObservation> faces = {face_of(world, 0)};
  Rng rng(0);
  const auto out = facenet_only_step(faces, world, kCam, clean_depth(), rng);
  REQUIRE(out.size() == 1);
  CHECK(out[0].name == "Alice");
  CHECK(out[0].position.x == Approx(2.0).margin(1e-9));
  CHECK(out[0].position.y == Approx(0.5).margin(1e-9));
  CHECK(out[0].track_id == -1);
}

TEST_CASE("face-only method emits nothing without faces") {
  const auto world = make_world({person("Alice", 2.0, 0.5)});
  Rng rng(0);
  CHECK(facenet_only_step({}, world, kCam, clean_depth(), rng).empty());
}

TEST_CASE("edge fusion inflates the reported range") {
  const auto world = make_world({person("Alice", 2.0, 0.0)});
  const std::vector<FaceObservation> faces = {face_of(world, 0)};
  DepthNoiseConfig depth = clean_depth();
  depth.edge_fusion_prob = 1.0;
  depth.edge_fusion_min = 4.0;
  depth.edge_fusion_max = 4.0;
  Rng rng(0);
  const auto out = facenet_only_step(faces, world, kCam, depth, rng);
  REQUIRE(out.size() == 1);
  CHECK(out[0].position.planar_range() == Approx(6.0).margin(1e-9));
}

TEST_CASE("unknown faces and empty worlds never add hypotheses") {
  const auto world = make_world({person("Alice", 2.0, 0.0)});
  FaceObservation unknown;
  unknown.name = std::string(kUnknownName);
  unknown.u = kCam.c_x;
  Rng rng(0);
  const auto out =
      facenet_only_step(std::vector<FaceObservation>{unknown, face_of(world, 0)},
                        world, kCam, clean_depth(), rng);
  CHECK(out.size() == 1);  // output count <= face count, unknowns skipped
}

TEST_CASE("labeled tracker assigns first-frame labels by proximity") {
  const auto world =
      make_world({person("Alice", 2.0, 1.0), person("Bob", 2.0, -1.0)});
  LabeledTrackerState labeled;
  const std::vector<TrackDetection> tracks = {track(1, world, 2.0, 1.02),
                                              track(2, world, 2.0, -0.97)};
  const auto out = labeled.step(tracks, 0, world);
  REQUIRE(out.size() == 2);
  CHECK(out[0].name == "Alice");
  CHECK(out[1].name == "Bob");
}

TEST_CASE("labels follow track ids verbatim and are never reassigned") {
  const auto world =
      make_world({person("Alice", 2.0, 1.0), person("Bob", 2.0, -1.0)});
  LabeledTrackerState labeled;
  const std::vector<TrackDetection> initial = {track(1, world, 2.0, 1.0),
                                               track(2, world, 2.0, -1.0)};
  labeled.step(initial, 0, world);

  SECTION("a swap leaves names glued to the wrong bodies") {
    // track 1 now rides Bob's position, track 2 rides Alice's
    const std::vector<TrackDetection> swapped = {track(1, world, 2.0, -1.0),
                                                 track(2, world, 2.0, 1.0)};
    const auto out = labeled.step(swapped, 50, world);
    CHECK(out[0].name == "Alice");  // still called Alice, on Bob's body
    CHECK(out[0].position.y == Approx(-1.0));
    CHECK(out[1].name == "Bob");
  }
  SECTION("a replacement track stays unknown forever") {
    const auto before = labeled.labels();
    const std::vector<TrackDetection> replacement = {track(7, world, 2.0, 1.0)};
    for (int frame = 1; frame < 300; ++frame) {
      const auto out = labeled.step(replacement, frame, world);
      REQUIRE(out.size() == 1);
      CHECK(out[0].name == kUnknownName);
      CHECK(out[0].source == IdentitySource::Unidentified);
    }
    CHECK(labeled.labels() == before);  // label map is frozen after frame 0
  }
}

TEST_CASE("first-frame labelling respects the 0.5 m gate and one-to-one rule") {
  const auto world =
      make_world({person("Alice", 2.0, 1.0), person("Bob", 2.0, -1.0)});
  LabeledTrackerState labeled;
  // two tracks compete for Alice; one sits far from everyone
  const std::vector<TrackDetection> tracks = {
      track(1, world, 2.0, 1.1), track(2, world, 2.0, 1.4),
      track(3, world, 2.4, -1.0), track(4, world, 4.5, 3.0)};
  const auto out = labeled.step(tracks, 0, world);
  REQUIRE(out.size() == 4);
  CHECK(out[0].name == "Alice");       // nearest wins
  CHECK(out[1].name == kUnknownName);  // Alice already taken
  CHECK(out[2].name == "Bob");
  CHECK(out[3].name == kUnknownName);  // outside the 0.5 m gate
}
