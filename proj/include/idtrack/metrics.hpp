#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "idtrack/geometry.hpp"

namespace idtrack {

/// Evaluation join of one frame: scripted ground truth and the method's
/// hypotheses, both in the world frame.
struct FrameRecord {
  struct GroundTruth {
    std::string name;
    Vec2 position;
  };
  struct Hypothesis {
    std::string name;
    Vec2 position;
    std::int64_t track_id = -1;

    /// Correspondence identity: the method's track id when it has one,
    /// otherwise the reported name (the face-only method has no tracks).
    std::string id_key() const {
      return track_id >= 0 ? "t" + std::to_string(track_id) : "n" + name;
    }
  };

  double t = 0.0;
  std::vector<GroundTruth> ground_truth;
  std::vector<Hypothesis> hypotheses;
  Pose2D robot;
};

struct MetricThresholds {
  double d_match = 0.75;           // frame-classification match radius [m]
  double clearmot_threshold = 1.0; // correspondence radius [m]
};

enum class TrackLabel { Correct, Incorrect, Undetected };

struct FrameClassification {
  std::vector<TrackLabel> per_person;  // aligned with ground_truth order
  TrackLabel frame_label = TrackLabel::Undetected;
  std::optional<TrackLabel> target_label;
};

/// Per-person labelling: Correct when a same-named hypothesis sits within
/// d_match of the person, Incorrect when the name exists but only on a
/// distant body, Undetected when the name was never reported. The frame is
/// Correct only if everyone is, and Incorrect as soon as anyone is.
inline FrameClassification classify_frame(
    const FrameRecord& frame, double d_match,
    const std::optional<std::string>& target = std::nullopt) {
  if (!(d_match > 0.0))
    throw std::invalid_argument("classify_frame: d_match must be > 0");
  FrameClassification result;
  result.per_person.reserve(frame.ground_truth.size());
  bool any_incorrect = false;
  bool all_correct = true;
  for (const auto& gt : frame.ground_truth) {
    bool name_seen = false;
    bool name_close = false;
    for (const auto& hyp : frame.hypotheses) {
      if (hyp.name != gt.name) continue;
      name_seen = true;
      if (distance(hyp.position, gt.position) <= d_match) name_close = true;
    }
    TrackLabel label = TrackLabel::Undetected;
    if (name_close)
      label = TrackLabel::Correct;
    else if (name_seen)
      label = TrackLabel::Incorrect;
    result.per_person.push_back(label);
    if (label == TrackLabel::Incorrect) any_incorrect = true;
    if (label != TrackLabel::Correct) all_correct = false;
    if (target && gt.name == *target) result.target_label = label;
  }
  if (all_correct && !frame.ground_truth.empty())
    result.frame_label = TrackLabel::Correct;
  else if (any_incorrect)
    result.frame_label = TrackLabel::Incorrect;
  else
    result.frame_label = TrackLabel::Undetected;
  return result;
}

/// Mean distance between each person and the hypothesis carrying their name;
/// a person whose name was never reported falls back to the nearest
/// hypothesis of any name, and frames with no hypotheses contribute nothing.
inline double avg_abs_error(std::span<const FrameRecord> frames) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& frame : frames) {
    for (const auto& gt : frame.ground_truth) {
      double best_named = std::numeric_limits<double>::infinity();
      double best_any = std::numeric_limits<double>::infinity();
      for (const auto& hyp : frame.hypotheses) {
        const double d = distance(hyp.position, gt.position);
        best_any = std::min(best_any, d);
        if (hyp.name == gt.name) best_named = std::min(best_named, d);
      }
      if (std::isfinite(best_named)) {
        sum += best_named;
        ++count;
      } else if (std::isfinite(best_any)) {
        sum += best_any;
        ++count;
      }
    }
  }
  if (count == 0)
    throw std::runtime_error("avg_abs_error: no distances accumulated");
  return sum / static_cast<double>(count);
}

struct ClearMotResult {
  double motp = 0.0;
  double mota = 0.0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  std::int64_t mismatches = 0;
  std::int64_t gt_count = 0;
  std::int64_t matches = 0;
};

/// Sequential CLEAR-MOT: correspondences carry forward while still within the
/// threshold, remaining pairs match greedily by distance, and a person whose
/// correspondence hops to a different hypothesis identity counts one
/// mismatch. Matching is position-only; names never influence who matches.
inline ClearMotResult clear_mot(std::span<const FrameRecord> frames,
                                double match_threshold,
                                bool carry_forward = true) {
  if (!(match_threshold > 0.0))
    throw std::invalid_argument("clear_mot: match_threshold must be > 0");
  if (frames.empty()) throw std::invalid_argument("clear_mot: empty sequence");

  ClearMotResult result;
  double dist_sum = 0.0;
  std::map<std::string, std::string> correspondence;  // person -> hyp id key

  for (const auto& frame : frames) {
    const auto& hyps = frame.hypotheses;
    std::vector<bool> consumed(hyps.size(), false);
    std::vector<bool> matched(frame.ground_truth.size(), false);
    result.gt_count += static_cast<std::int64_t>(frame.ground_truth.size());

    if (carry_forward) {
      for (std::size_t g = 0; g < frame.ground_truth.size(); ++g) {
        const auto it = correspondence.find(frame.ground_truth[g].name);
        if (it == correspondence.end()) continue;
        std::size_t best = hyps.size();
        double best_dist = 0.0;
        for (std::size_t h = 0; h < hyps.size(); ++h) {
          if (consumed[h] || hyps[h].id_key() != it->second) continue;
          const double d =
              distance(hyps[h].position, frame.ground_truth[g].position);
          if (d > match_threshold) continue;
          if (best == hyps.size() || d < best_dist) {
            best = h;
            best_dist = d;
          }
        }
        if (best < hyps.size()) {
          consumed[best] = true;
          matched[g] = true;
          dist_sum += best_dist;
          ++result.matches;
        }
      }
    }

    // Greedy minimum-distance matching for what carry-forward left over.
    // Sort keys avoid hypothesis list order so results are permutation
    // invariant.
    struct Candidate {
      double dist;
      std::size_t gt_idx;
      std::size_t hyp_idx;
    };
    std::vector<Candidate> candidates;
    for (std::size_t g = 0; g < frame.ground_truth.size(); ++g) {
      if (matched[g]) continue;
      for (std::size_t h = 0; h < hyps.size(); ++h) {
        if (consumed[h]) continue;
        const double d =
            distance(hyps[h].position, frame.ground_truth[g].position);
        if (d <= match_threshold) candidates.push_back({d, g, h});
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](const Candidate& a, const Candidate& b) {
                if (a.dist != b.dist) return a.dist < b.dist;
                if (a.gt_idx != b.gt_idx) return a.gt_idx < b.gt_idx;
                const auto ka = hyps[a.hyp_idx].id_key();
                const auto kb = hyps[b.hyp_idx].id_key();
                if (ka != kb) return ka < kb;
                const auto& pa = hyps[a.hyp_idx].position;
                const auto& pb = hyps[b.hyp_idx].position;
                return std::pair(pa.x, pa.y) < std::pair(pb.x, pb.y);
              });
    for (const auto& c : candidates) {
      if (matched[c.gt_idx] || consumed[c.hyp_idx]) continue;
      matched[c.gt_idx] = true;
      consumed[c.hyp_idx] = true;
      dist_sum += c.dist;
      ++result.matches;
      const std::string key = hyps[c.hyp_idx].id_key();
      auto& known = correspondence[frame.ground_truth[c.gt_idx].name];
      if (!known.empty() && known != key) ++result.mismatches;
      known = key;
    }

    for (std::size_t g = 0; g < frame.ground_truth.size(); ++g)
      if (!matched[g]) ++result.false_negatives;
    for (std::size_t h = 0; h < hyps.size(); ++h)
      if (!consumed[h]) ++result.false_positives;
  }

  result.motp = result.matches > 0
                    ? dist_sum / static_cast<double>(result.matches)
                    : 0.0;
  if (result.gt_count == 0)
    throw std::runtime_error("clear_mot: no ground-truth objects in sequence");
  result.mota = 1.0 - static_cast<double>(result.false_negatives +
                                          result.false_positives +
                                          result.mismatches) /
                          static_cast<double>(result.gt_count);
  return result;
}

/// Everything the evaluation reports for one run (or, aggregated, for a set
/// of runs).
struct MetricReport {
  double avg_abs_error = 0.0;
  std::int64_t frames_total = 0;
  std::int64_t frames_correct = 0;
  std::int64_t frames_incorrect = 0;
  std::int64_t frames_undetected = 0;
  std::int64_t target_frames = 0;
  std::int64_t target_correct = 0;
  std::int64_t target_incorrect = 0;
  std::int64_t target_undetected = 0;
  double motp = 0.0;
  double mota = 0.0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  std::int64_t mismatches = 0;
  std::int64_t gt_count = 0;

  double pct_correct() const { return pct(frames_correct, frames_total); }
  double pct_incorrect() const { return pct(frames_incorrect, frames_total); }
  double pct_undetected() const { return pct(frames_undetected, frames_total); }
  double pct_target_correct() const { return pct(target_correct, target_frames); }
  double pct_target_incorrect() const { return pct(target_incorrect, target_frames); }
  double pct_target_undetected() const { return pct(target_undetected, target_frames); }

private:
  static double pct(std::int64_t n, std::int64_t total) {
    return total > 0 ? 100.0 * static_cast<double>(n) / static_cast<double>(total)
                     : 0.0;
  }
};

/// Scores a full frame sequence with every metric at once.
inline MetricReport build_report(
    std::span<const FrameRecord> frames, const MetricThresholds& thresholds,
    const std::optional<std::string>& target = std::nullopt) {
  MetricReport report;
  report.avg_abs_error = avg_abs_error(frames);
  for (const auto& frame : frames) {
    const auto cls = classify_frame(frame, thresholds.d_match, target);
    ++report.frames_total;
    switch (cls.frame_label) {
      case TrackLabel::Correct: ++report.frames_correct; break;
      case TrackLabel::Incorrect: ++report.frames_incorrect; break;
      case TrackLabel::Undetected: ++report.frames_undetected; break;
    }
    if (cls.target_label) {
      ++report.target_frames;
      switch (*cls.target_label) {
        case TrackLabel::Correct: ++report.target_correct; break;
        case TrackLabel::Incorrect: ++report.target_incorrect; break;
        case TrackLabel::Undetected: ++report.target_undetected; break;
      }
    }
  }
  const auto mot = clear_mot(frames, thresholds.clearmot_threshold);
  report.motp = mot.motp;
  report.mota = mot.mota;
  report.false_positives = mot.false_positives;
  report.false_negatives = mot.false_negatives;
  report.mismatches = mot.mismatches;
  report.gt_count = mot.gt_count;
  return report;
}

/// Unweighted mean of the scalar metrics across reports; counts are summed.
inline MetricReport aggregate_report(std::span<const MetricReport> reports) {
  if (reports.empty())
    throw std::invalid_argument("aggregate_report: no reports");
  MetricReport out;
  for (const auto& r : reports) {
    out.avg_abs_error += r.avg_abs_error;
    out.motp += r.motp;
    out.mota += r.mota;
    out.frames_total += r.frames_total;
    out.frames_correct += r.frames_correct;
    out.frames_incorrect += r.frames_incorrect;
    out.frames_undetected += r.frames_undetected;
    out.target_frames += r.target_frames;
    out.target_correct += r.target_correct;
    out.target_incorrect += r.target_incorrect;
    out.target_undetected += r.target_undetected;
    out.false_positives += r.false_positives;
    out.false_negatives += r.false_negatives;
    out.mismatches += r.mismatches;
    out.gt_count += r.gt_count;
  }
  const double n = static_cast<double>(reports.size());
  out.avg_abs_error /= n;
  out.motp /= n;
  out.mota /= n;
  return out;
}

}  // namespace idtrack
