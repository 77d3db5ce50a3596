#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "idtrack/fusion.hpp"
#include "idtrack/geometry.hpp"
#include "idtrack/rng.hpp"
#include "idtrack/world.hpp"

namespace idtrack {

/// Failure-mode knobs for both synthetic sensors. Defaults model the usual
/// culprits: detection dropouts, measurement noise, limited face range,
/// people facing away, and id swaps when two people pass close together.
struct SensorNoiseConfig {
  double pos_sigma = 0.05;          // tracker position noise per axis [m]
  double pixel_sigma = 5.0;         // face bounding-box centre noise [px]
  double detect_prob = 0.95;        // per-frame tracker detection probability
  double face_recog_prob = 0.8;     // per-frame face recognition probability
  double face_range_max = 4.0;      // faces resolvable out to this range [m]
  double face_facing_max = deg_to_rad(45.0);  // max head-on deviation [rad]
  double tracker_range_max = 8.0;   // tracker detection range [m]
  int miss_max = 10;                // coasting frames before a track is dropped
  double swap_distance = 0.5;       // id swaps possible below this gap [m]
  double swap_prob = 0.1;           // per-frame swap probability when close
  double face_misrecog_prob = 0.0;  // chance a face gets another person's name
  std::uint64_t rng_seed = 0;
};

inline bool visible_to_tracker(const WorldState& world, std::size_t person_index,
                               const SensorNoiseConfig& noise) {
  const auto& person = world.persons[person_index];
  const double range = (person.pose.position() - world.robot.position()).norm();
  if (range > noise.tracker_range_max) return false;
  return !occluded(world, person_index);
}

/// Nearest-neighbour tracker state. Track positions and velocity estimates
/// live in the world frame so that robot motion does not churn ids; emitted
/// detections are converted back to the robot frame.
struct SyntheticTrackerState {
  struct Track {
    Vec2 position;
    Vec2 velocity;
    int frames_since_seen = 0;
    std::vector<std::pair<double, Vec2>> recent;  // last few (t, observation)

    void observe(double t, const Vec2& obs) {
      recent.emplace_back(t, obs);
      if (recent.size() > 6) recent.erase(recent.begin());
      if (recent.size() >= 2) {
        const auto& [t0, p0] = recent.front();
        velocity = (obs - p0) * (1.0 / (t - t0));
      }
      position = obs;
      frames_since_seen = 0;
    }
  };

  std::map<std::int64_t, Track> live;
  std::int64_t next_track_id = 1;
};

/// One tracker frame: detect visible persons with noise, link detections to
/// live tracks greedily within a 0.8 m gate, coast unlinked tracks on their
/// constant-velocity estimate up to miss_max frames, and exchange linkages
/// with probability swap_prob when two people are within swap_distance.
inline std::vector<TrackDetection> synth_tracker_step(
    SyntheticTrackerState& state, const WorldState& world,
    const SensorNoiseConfig& noise, Rng& rng) {
  constexpr double kLinkGate = 0.8;  // [m]

  struct Detection {
    Vec2 position;           // world frame, after noise
    std::size_t person_idx;  // sim-internal provenance, used for swap events
  };
  std::vector<Detection> detections;
  for (std::size_t i = 0; i < world.persons.size(); ++i) {
    if (!visible_to_tracker(world, i, noise)) continue;
    if (!rng.bernoulli(noise.detect_prob)) continue;
    RobotFramePoint rp = world_to_robot_frame(world.persons[i].pose.position(),
                                              world.robot, kTrackerHeight);
    rp.x += rng.gaussian(noise.pos_sigma);
    rp.y += rng.gaussian(noise.pos_sigma);
    detections.push_back({robot_to_world_frame(rp, world.robot), i});
  }

  // Greedy nearest-neighbour linking against predicted track positions.
  struct Candidate {
    double dist;
    std::int64_t track_id;
    std::size_t det_idx;
  };
  std::vector<Candidate> candidates;
  for (const auto& [tid, trk] : state.live) {
    const Vec2 predicted = trk.position + trk.velocity * kFrameDt;
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double dist = (detections[d].position - predicted).norm();
      if (dist <= kLinkGate) candidates.push_back({dist, tid, d});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.track_id != b.track_id) return a.track_id < b.track_id;
    return a.det_idx < b.det_idx;
  });
  std::map<std::int64_t, std::size_t> link;      // track id -> detection index
  std::set<std::size_t> linked_detections;
  for (const auto& c : candidates) {
    if (link.contains(c.track_id) || linked_detections.contains(c.det_idx)) continue;
    link[c.track_id] = c.det_idx;
    linked_detections.insert(c.det_idx);
  }

  // Id-swap events: when two people are within swap_distance, their track
  // linkages may be exchanged, modelling tracker drift between close targets.
  for (std::size_t i = 0; i < world.persons.size(); ++i) {
    for (std::size_t j = i + 1; j < world.persons.size(); ++j) {
      const double gap = (world.persons[i].pose.position() -
                          world.persons[j].pose.position())
                             .norm();
      if (gap >= noise.swap_distance) continue;
      if (!rng.bernoulli(noise.swap_prob)) continue;
      std::int64_t track_i = -1;
      std::int64_t track_j = -1;
      for (const auto& [tid, det_idx] : link) {
        if (detections[det_idx].person_idx == i) track_i = tid;
        if (detections[det_idx].person_idx == j) track_j = tid;
      }
      if (track_i >= 0 && track_j >= 0) std::swap(link[track_i], link[track_j]);
    }
  }

  // Update linked tracks; coast the rest and drop stale ones.
  for (auto it = state.live.begin(); it != state.live.end();) {
    auto& trk = it->second;
    if (auto found = link.find(it->first); found != link.end()) {
      trk.observe(world.t, detections[found->second].position);
      ++it;
    } else {
      trk.position = trk.position + trk.velocity * kFrameDt;
      ++trk.frames_since_seen;
      if (trk.frames_since_seen > noise.miss_max)
        it = state.live.erase(it);
      else
        ++it;
    }
  }

  // Unlinked detections open fresh tracks.
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (linked_detections.contains(d)) continue;
    SyntheticTrackerState::Track trk;
    trk.observe(world.t, detections[d].position);
    state.live.emplace(state.next_track_id++, trk);
  }

  std::vector<TrackDetection> out;
  out.reserve(state.live.size());
  for (const auto& [tid, trk] : state.live) {
    TrackDetection det;
    det.track_id = tid;
    det.position = world_to_robot_frame(trk.position, world.robot, kTrackerHeight);
    det.timestamp = world.t;
    out.push_back(det);
  }
  return out;
}

/// One face recogniser frame. A person yields an observation only when inside
/// the camera FOV, within face range, facing the robot, unoccluded, and a
/// recognition draw succeeds.
inline std::vector<FaceObservation> synth_face_step(const WorldState& world,
                                                    const CameraIntrinsics& cam,
                                                    const SensorNoiseConfig& noise,
                                                    Rng& rng) {
  std::vector<FaceObservation> out;
  const double half_fov = cam.hfov() / 2.0;
  for (std::size_t i = 0; i < world.persons.size(); ++i) {
    const auto& person = world.persons[i];
    const RobotFramePoint head =
        world_to_robot_frame(person.pose.position(), world.robot, kHeadHeight);
    if (head.x <= 0.0) continue;
    const Angle bearing(std::atan2(head.y, head.x));
    if (std::abs(bearing.radians()) > half_fov) continue;
    if (head.planar_range() > noise.face_range_max) continue;
    const Vec2 to_robot = world.robot.position() - person.pose.position();
    const Angle facing(std::atan2(to_robot.y, to_robot.x));
    if (angular_distance(person.pose.heading, facing) > noise.face_facing_max)
      continue;
    if (occluded(world, i)) continue;
    if (!rng.bernoulli(noise.face_recog_prob)) continue;

    FaceObservation face;
    face.name = person.name;
    if (noise.face_misrecog_prob > 0.0 && world.persons.size() > 1 &&
        rng.bernoulli(noise.face_misrecog_prob)) {
      auto pick = static_cast<std::size_t>(
          rng.uniform(0.0, static_cast<double>(world.persons.size() - 1)));
      pick = std::min(pick, world.persons.size() - 2);
      if (pick >= i) ++pick;
      face.name = world.persons[pick].name;
    }
    face.u = project_to_pixel(head, cam) + rng.gaussian(noise.pixel_sigma);
    // nominal vertical projection with f_y = f_x and the camera at 1 m height
    face.v = (cam.image_width * 0.75) / 2.0 -
             cam.f_x * ((head.z - 1.0) / head.x);
    face.score = 1.0;
    face.timestamp = world.t;
    out.push_back(std::move(face));
  }
  return out;
}

}  // namespace idtrack
