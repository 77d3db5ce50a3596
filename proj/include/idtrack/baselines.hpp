#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "idtrack/fusion.hpp"
#include "idtrack/geometry.hpp"
#include "idtrack/rng.hpp"
#include "idtrack/world.hpp"

namespace idtrack {

/// Depth-from-point-cloud corruption model: mostly mild Gaussian range noise,
/// occasionally fused with background structure and inflated by metres.
struct DepthNoiseConfig {
  double depth_sigma = 0.1;        // [m]
  double edge_fusion_prob = 0.15;  // chance a face's depth grabs the background
  double edge_fusion_min = 2.0;    // [m]
  double edge_fusion_max = 6.0;    // [m]
};

/// Face-recogniser-only method: every named face becomes a person hypothesis
/// at (bearing from pixels, range from corrupted depth). No tracks, no memory.
inline std::vector<IdentifiedPerson> facenet_only_step(
    std::span<const FaceObservation> faces, const WorldState& world,
    const CameraIntrinsics& cam, const DepthNoiseConfig& depth_noise, Rng& rng) {
  std::vector<IdentifiedPerson> out;
  for (const auto& face : faces) {
    if (!is_known_name(face.name)) continue;
    const Angle bearing = heading_of_face(face, cam);

    // The depth read comes from whoever is physically along the face's line
    // of sight, which is the person with the closest matching bearing.
    double true_range = 0.0;
    double best_sep = std::numeric_limits<double>::infinity();
    for (const auto& person : world.persons) {
      const RobotFramePoint rp =
          world_to_robot_frame(person.pose.position(), world.robot);
      if (rp.x == 0.0 && rp.y == 0.0) continue;
      const Angle pb(std::atan2(rp.y, rp.x));
      const double sep = angular_distance(bearing, pb);
      if (sep < best_sep) {
        best_sep = sep;
        true_range = rp.planar_range();
      }
    }
    if (!std::isfinite(best_sep)) continue;

    double range = true_range + rng.gaussian(depth_noise.depth_sigma);
    if (rng.bernoulli(depth_noise.edge_fusion_prob))
      range += rng.uniform(depth_noise.edge_fusion_min, depth_noise.edge_fusion_max);
    range = std::max(0.0, range);

    IdentifiedPerson person;
    person.name = face.name;
    person.position = {range * std::cos(bearing.radians()),
                       range * std::sin(bearing.radians()), kHeadHeight};
    person.track_id = -1;
    person.source = IdentitySource::FaceMatched;
    out.push_back(std::move(person));
  }
  return out;
}

/// First-frame manual labels on anonymous tracks: at frame 0 each track takes
/// the name of the nearest ground-truth person (0.5 m gate, one-to-one);
/// afterwards names follow track ids verbatim and are never reassigned.
class LabeledTrackerState {
public:
  std::vector<IdentifiedPerson> step(std::span<const TrackDetection> tracks,
                                     int frame_index, const WorldState& world) {
    if (frame_index == 0) assign_initial_labels(tracks, world);

    std::vector<IdentifiedPerson> out;
    out.reserve(tracks.size());
    for (const auto& det : tracks) {
      IdentifiedPerson person;
      person.position = det.position;
      person.track_id = det.track_id;
      if (auto it = labels_.find(det.track_id); it != labels_.end()) {
        person.name = it->second;
        person.source = IdentitySource::FaceMatched;
      } else {
        person.name = std::string(kUnknownName);
        person.source = IdentitySource::Unidentified;
      }
      out.push_back(std::move(person));
    }
    return out;
  }

  const std::map<std::int64_t, std::string>& labels() const { return labels_; }

private:
  void assign_initial_labels(std::span<const TrackDetection> tracks,
                             const WorldState& world) {
    constexpr double kLabelGate = 0.5;  // [m]
    struct Candidate {
      double dist;
      std::size_t track_idx;
      std::size_t person_idx;
    };
    std::vector<Candidate> candidates;
    for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
      const Vec2 track_world =
          robot_to_world_frame(tracks[ti].position, world.robot);
      for (std::size_t pi = 0; pi < world.persons.size(); ++pi) {
        const double d =
            (track_world - world.persons[pi].pose.position()).norm();
        if (d <= kLabelGate) candidates.push_back({d, ti, pi});
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.dist != b.dist) return a.dist < b.dist;
                if (a.track_idx != b.track_idx) return a.track_idx < b.track_idx;
                return a.person_idx < b.person_idx;
              });
    std::set<std::size_t> used_tracks, used_persons;
    for (const auto& c : candidates) {
      if (used_tracks.contains(c.track_idx) || used_persons.contains(c.person_idx))
        continue;
      labels_[tracks[c.track_idx].track_id] = world.persons[c.person_idx].name;
      used_tracks.insert(c.track_idx);
      used_persons.insert(c.person_idx);
    }
  }

  std::map<std::int64_t, std::string> labels_;
};

}  // namespace idtrack
