#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idtrack/geometry.hpp"

namespace idtrack {

/// Label emitted when a face scored below the recogniser threshold.
inline constexpr std::string_view kUnknownName = "unknown";

inline bool is_known_name(std::string_view name) {
  return !name.empty() && name != kUnknownName;
}

/// One anonymous tracker output: position in the robot frame plus the
/// tracker-assigned id that persists from frame to frame.
struct TrackDetection {
  std::int64_t track_id = 0;
  RobotFramePoint position;
  double timestamp = 0.0;
};

/// One face recogniser output: a name (or "unknown") and the bounding-box
/// centre in pixels.
struct FaceObservation {
  std::string name;
  double u = 0.0;
  double v = 0.0;
  double score = 0.0;
  double timestamp = 0.0;
};

struct FusionConfig {
  double theta_thres = deg_to_rad(15.0);  // angular gate for face-track matches
  int memory_ttl = 50;                    // frames a vanished track id keeps its name
  CameraIntrinsics camera = CameraIntrinsics::from_hfov(deg_to_rad(69.0), 640.0);
};

/// Per-track identity memory. Entries appear when a face is gated onto a
/// track and age out once the track id stops showing up.
class IdentityMemory {
public:
  struct Entry {
    std::string name;
    double last_confirmed = 0.0;
    int absent_frames = 0;
  };

  const Entry* find(std::int64_t track_id) const {
    auto it = entries_.find(track_id);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void remember(std::int64_t track_id, std::string name, double t) {
    entries_[track_id] = Entry{std::move(name), t, 0};
  }

  /// Ages entries against the set of track ids present this frame and drops
  /// those absent longer than ttl frames.
  void age(const std::set<std::int64_t>& present, int ttl) {
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (present.contains(it->first)) {
        it->second.absent_frames = 0;
        ++it;
      } else if (++it->second.absent_frames > ttl) {
        it = entries_.erase(it);
      } else {
        ++it;
      }
    }
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

private:
  std::map<std::int64_t, Entry> entries_;
};

enum class IdentitySource { FaceMatched, MemoryCarried, Unidentified };

inline std::string_view to_string(IdentitySource s) {
  switch (s) {
    case IdentitySource::FaceMatched: return "face";
    case IdentitySource::MemoryCarried: return "memory";
    case IdentitySource::Unidentified: return "none";
  }
  return "none";
}

/// Fused output record: who is where, and how the name was obtained.
struct IdentifiedPerson {
  std::string name;
  RobotFramePoint position;
  std::int64_t track_id = 0;
  IdentitySource source = IdentitySource::Unidentified;
};

/// Bearing of a tracked person relative to the robot's forward axis.
inline Angle heading_of_track(const TrackDetection& d) {
  if (d.position.x == 0.0 && d.position.y == 0.0)
    throw std::invalid_argument("heading_of_track: degenerate origin position");
  return Angle(std::atan2(d.position.y, d.position.x));
}

/// Bearing of a recognised face derived from its pixel column.
inline Angle heading_of_face(const FaceObservation& f, const CameraIntrinsics& cam) {
  return Angle(std::atan2(cam.c_x - f.u, cam.f_x));
}

struct BearingMatch {
  std::int64_t track_id = 0;
  std::size_t face_index = 0;
  double distance = 0.0;  // angular distance committed for this pair [rad]
};

/// Greedy one-to-one association under an angular gate: gather every
/// (track, face) pair within theta_thres, then repeatedly commit the
/// smallest-distance pair and retire both endpoints. Ties break on smaller
/// track id, then smaller face index.
inline std::vector<BearingMatch> associate(
    std::span<const std::pair<std::int64_t, Angle>> track_bearings,
    std::span<const std::pair<std::size_t, Angle>> face_bearings,
    double theta_thres) {
  std::vector<BearingMatch> candidates;
  candidates.reserve(track_bearings.size() * face_bearings.size());
  for (const auto& [tid, tb] : track_bearings) {
    for (const auto& [fidx, fb] : face_bearings) {
      const double d = angular_distance(tb, fb);
      if (d <= theta_thres) candidates.push_back({tid, fidx, d});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const BearingMatch& a, const BearingMatch& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              if (a.track_id != b.track_id) return a.track_id < b.track_id;
              return a.face_index < b.face_index;
            });

  std::vector<BearingMatch> matches;
  std::set<std::int64_t> used_tracks;
  std::set<std::size_t> used_faces;
  for (const auto& c : candidates) {
    if (used_tracks.contains(c.track_id) || used_faces.contains(c.face_index))
      continue;
    matches.push_back(c);
    used_tracks.insert(c.track_id);
    used_faces.insert(c.face_index);
  }
  return matches;
}

struct FusionResult {
  std::vector<IdentifiedPerson> people;
  IdentityMemory memory;
};

/// One fusion step: convert tracks and named faces to bearings, associate
/// them under the gate, and fall back to the per-track memory for tracks
/// whose face went unrecognised this frame. A fresh face match always
/// overwrites the remembered name; unknown faces are ignored entirely.
inline FusionResult snnts_step(std::span<const TrackDetection> tracks,
                               std::span<const FaceObservation> faces,
                               const IdentityMemory& memory,
                               const FusionConfig& cfg, double t) {
  std::vector<std::pair<std::int64_t, Angle>> track_bearings;
  track_bearings.reserve(tracks.size());
  std::set<std::int64_t> present_ids;
  for (const auto& d : tracks) {
    if (!present_ids.insert(d.track_id).second)
      throw std::invalid_argument("snnts_step: duplicate track id " +
                                  std::to_string(d.track_id));
    track_bearings.emplace_back(d.track_id, heading_of_track(d));
  }

  std::vector<std::pair<std::size_t, Angle>> face_bearings;
  for (std::size_t j = 0; j < faces.size(); ++j) {
    if (is_known_name(faces[j].name))
      face_bearings.emplace_back(j, heading_of_face(faces[j], cfg.camera));
  }

  const auto matches = associate(track_bearings, face_bearings, cfg.theta_thres);
  std::map<std::int64_t, std::size_t> face_of_track;
  for (const auto& m : matches) face_of_track[m.track_id] = m.face_index;

  FusionResult result;
  result.memory = memory;
  result.people.reserve(tracks.size());
  for (const auto& d : tracks) {
    IdentifiedPerson person;
    person.position = d.position;
    person.track_id = d.track_id;
    if (auto it = face_of_track.find(d.track_id); it != face_of_track.end()) {
      person.name = faces[it->second].name;
      person.source = IdentitySource::FaceMatched;
      result.memory.remember(d.track_id, person.name, t);
    } else if (const auto* remembered = result.memory.find(d.track_id)) {
      person.name = remembered->name;
      person.source = IdentitySource::MemoryCarried;
    } else {
      person.name = std::string(kUnknownName);
      person.source = IdentitySource::Unidentified;
    }
    result.people.push_back(std::move(person));
  }

  result.memory.age(present_ids, cfg.memory_ttl);
  return result;
}

}  // namespace idtrack
