// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#include "pose25d/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pose25d {

namespace {

// Disk offsets (excluding the center) for the NMS neighborhood.
std::vector<std::pair<int, int>> disk_offsets(double radius) {
  std::vector<std::pair<int, int>> offsets;
  const int r = static_cast<int>(std::floor(radius));
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      if (dx == 0 && dy == 0) continue;
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dy, dx);
    }
  return offsets;
}

double quadratic_offset(float minus, float center, float plus) {
  const double denom = static_cast<double>(minus) + plus - 2.0 * center;
  if (std::abs(denom) < 1e-12) return 0.0;
  const double off = (static_cast<double>(minus) - plus) / (2.0 * denom);
  return std::clamp(off, -0.5, 0.5);
}

// Maximum root-depth value within nms_radius of the candidate's pixel.
// The window guards against landing on an unsupervised zero pixel when the
// refined peak sits off the disk center.
double read_root_depth(const RepresentationStack& stack,
                       const Point2D& pos_map, const AssocConfig& cfg) {
  const int c = stack.root_depth_channel();
  const int cx = static_cast<int>(std::lround(pos_map.u));
  const int cy = static_cast<int>(std::lround(pos_map.v));
  const int r = static_cast<int>(std::floor(cfg.nms_radius));
  double best = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy > cfg.nms_radius * cfg.nms_radius) continue;
      if (!stack.contains(cy + dy, cx + dx)) continue;
      best = std::max(best, static_cast<double>(stack.at(c, cy + dy, cx + dx)));
    }
  return best;
}

struct SeededHypotheses {
  std::vector<PersonHypothesis> hyps;
  // claimed[joint_type][candidate] marks exclusively assigned candidates.
  std::vector<std::vector<char>> claimed;
};

// One hypothesis per root candidate with a positive depth reading, in
// candidate scan order. Claims the root candidates.
SeededHypotheses seed_from_roots(const CandidateLists& candidates,
                                 const RepresentationStack& stack,
                                 const SkeletonSpec& spec,
                                 const AssocConfig& cfg) {
  SeededHypotheses out;
  out.claimed.resize(spec.joint_count());
  for (int j = 0; j < spec.joint_count(); ++j)
    out.claimed[j].assign(candidates[j].size(), 0);

  const int root = spec.root_index();
  for (size_t i = 0; i < candidates[root].size(); ++i) {
    const KeypointCandidate& cand = candidates[root][i];
    const double zt = read_root_depth(stack, cand.pos, cfg);
    if (zt <= 0.0) continue;  // unsupervised pixel, not a person
    PersonHypothesis hyp;
    hyp.joints.resize(spec.joint_count());
    hyp.joints[root] =
        DetectedJoint{cand.pos, cand.score, static_cast<int>(i), true};
    hyp.root_depth = zt;
    out.claimed[root][i] = 1;
    out.hyps.push_back(std::move(hyp));
  }
  return out;
}

void accept_link(PersonHypothesis& hyp, const SkeletonSpec& spec, int part,
                 const KeypointCandidate& cand, int cand_idx, double score,
                 double length) {
  const BodyPart& bp = spec.part(part);
  hyp.joints[bp.child] = DetectedJoint{cand.pos, cand.score, cand_idx, true};
  hyp.links.push_back(LinkCandidate{part, hyp.joints[bp.parent].candidate,
                                    cand_idx, score, length});
}

}  // namespace

void AssocConfig::validate() const {
  if (!(lambda > 0.0))
    throw std::invalid_argument("assoc config: lambda must be positive");
  if (paf_samples < 2)
    throw std::invalid_argument("assoc config: need at least 2 PAF samples");
  if (!(nms_radius > 0.0))
    throw std::invalid_argument("assoc config: nms radius must be positive");
}

CandidateLists extract_keypoints(const RepresentationStack& stack,
                                 const AssocConfig& cfg) {
  cfg.validate();
  const auto offsets = disk_offsets(cfg.nms_radius);
  CandidateLists out(stack.num_joints());

  for (int j = 0; j < stack.num_joints(); ++j) {
    const int c = stack.heatmap_channel(j);
    for (int y = 0; y < stack.height(); ++y) {
      for (int x = 0; x < stack.width(); ++x) {
        const float v = stack.at(c, y, x);
        if (v < cfg.detect_threshold) continue;
        bool is_peak = true;
        for (const auto& [dy, dx] : offsets) {
          const int ny = y + dy, nx = x + dx;
          if (!stack.contains(ny, nx)) continue;
          const float nv = stack.at(c, ny, nx);
          if (nv > v) {
            is_peak = false;
            break;
          }
          // Equal plateau: only the first pixel in scan order survives.
          if (nv == v && (ny < y || (ny == y && nx < x))) {
            is_peak = false;
            break;
          }
        }
        if (!is_peak) continue;

        double px = x, py = y;
        if (x > 0 && x + 1 < stack.width())
          px += quadratic_offset(stack.at(c, y, x - 1), v,
                                 stack.at(c, y, x + 1));
        if (y > 0 && y + 1 < stack.height())
          py += quadratic_offset(stack.at(c, y - 1, x), v,
                                 stack.at(c, y + 1, x));
        out[j].push_back(
            KeypointCandidate{j, Point2D{px, py}, static_cast<double>(v)});
      }
    }
  }
  return out;
}

double paf_score(const Point2D& a, const Point2D& b,
                 const RepresentationStack& stack, int part,
                 const AssocConfig& cfg) {
  const double dx = b.u - a.u, dy = b.v - a.v;
  const double len = std::hypot(dx, dy);
  if (len < 1e-12)
    throw std::domain_error("paf_score: zero-length segment");
  const double ux = dx / len, uy = dy / len;
  const int cx = stack.paf_x_channel(part);
  const int cy = stack.paf_y_channel(part);
  const int n = cfg.paf_samples;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    const double sx = a.u + t * dx, sy = a.v + t * dy;
    acc += stack.sample_nearest(cx, sx, sy) * ux +
           stack.sample_nearest(cy, sx, sy) * uy;
  }
  return acc / n;
}

double link_threshold(int part, double root_depth_norm, const BoneStats& stats,
                      const AssocConfig& cfg) {
  if (!(root_depth_norm > 0.0))
    throw std::domain_error("link_threshold: depth must be positive");
  return cfg.lambda * stats.mean_length.at(part) / root_depth_norm;
}

std::vector<PersonHypothesis> depth_aware_associate(
    const CandidateLists& candidates, const RepresentationStack& stack,
    const SkeletonSpec& spec, const BoneStats& stats, const AssocConfig& cfg) {
  cfg.validate();
  SeededHypotheses seeded = seed_from_roots(candidates, stack, spec, cfg);

  // Ordinal prior: near people claim first. stable_sort keeps candidate scan
  // order for exact depth ties.
  std::stable_sort(seeded.hyps.begin(), seeded.hyps.end(),
                   [](const PersonHypothesis& a, const PersonHypothesis& b) {
                     return a.root_depth < b.root_depth;
                   });

  const double width = stack.width();
  for (int p = 0; p < spec.part_count(); ++p) {
    const BodyPart& part = spec.part(p);
    const auto& child_cands = candidates[part.child];
    for (PersonHypothesis& hyp : seeded.hyps) {
      if (!hyp.joints[part.parent].present) continue;
      const double max_ratio = link_threshold(p, hyp.root_depth, stats, cfg);
      const Point2D& from = hyp.joints[part.parent].pos;

      int best = -1;
      double best_score = 0.0, best_len = 0.0;
      for (size_t ci = 0; ci < child_cands.size(); ++ci) {
        if (seeded.claimed[part.child][ci]) continue;
        const double len = distance(from, child_cands[ci].pos);
        if (len < 1e-12) continue;
        if (len / width > max_ratio) continue;  // adaptive bone-length gate
        const double score =
            paf_score(from, child_cands[ci].pos, stack, p, cfg);
        if (score < cfg.min_paf_score) continue;
        if (best < 0 || score > best_score) {
          best = static_cast<int>(ci);
          best_score = score;
          best_len = len;
        }
      }
      if (best >= 0) {
        seeded.claimed[part.child][best] = 1;
        accept_link(hyp, spec, p, child_cands[best], best, best_score,
                    best_len);
      }
    }
  }
  return std::move(seeded.hyps);
}

std::vector<PersonHypothesis> associate_2d(const CandidateLists& candidates,
                                           const RepresentationStack& stack,
                                           const SkeletonSpec& spec,
                                           const AssocConfig& cfg) {
  cfg.validate();
  SeededHypotheses seeded = seed_from_roots(candidates, stack, spec, cfg);

  struct ScoredLink {
    size_t hyp;
    size_t cand;
    double score;
    double length;
  };

  const double cap = stack.width() / 2.0;  // fixed half-image-width cap
  for (int p = 0; p < spec.part_count(); ++p) {
    const BodyPart& part = spec.part(p);
    const auto& child_cands = candidates[part.child];

    std::vector<ScoredLink> links;
    for (size_t hi = 0; hi < seeded.hyps.size(); ++hi) {
      const PersonHypothesis& hyp = seeded.hyps[hi];
      if (!hyp.joints[part.parent].present) continue;
      const Point2D& from = hyp.joints[part.parent].pos;
      for (size_t ci = 0; ci < child_cands.size(); ++ci) {
        if (seeded.claimed[part.child][ci]) continue;
        const double len = distance(from, child_cands[ci].pos);
        if (len < 1e-12 || len > cap) continue;
        const double score =
            paf_score(from, child_cands[ci].pos, stack, p, cfg);
        if (score < cfg.min_paf_score) continue;
        links.push_back(ScoredLink{hi, ci, score, len});
      }
    }
    std::stable_sort(links.begin(), links.end(),
                     [](const ScoredLink& a, const ScoredLink& b) {
                       return a.score > b.score;
                     });
    for (const ScoredLink& link : links) {
      PersonHypothesis& hyp = seeded.hyps[link.hyp];
      if (hyp.joints[part.child].present) continue;
      if (seeded.claimed[part.child][link.cand]) continue;
      seeded.claimed[part.child][link.cand] = 1;
      accept_link(hyp, spec, p, child_cands[link.cand],
                  static_cast<int>(link.cand), link.score, link.length);
    }
  }
  return std::move(seeded.hyps);
}

void read_depths(PersonHypothesis& person, const RepresentationStack& stack,
                 const SkeletonSpec& spec, const CameraIntrinsics& cam,
                 const AssocConfig& cfg) {
  const int j = spec.joint_count();
  person.joint_depth.assign(j, 0.0);
  person.depth_known.assign(j, 0);

  const int root = spec.root_index();
  if (!person.joints[root].present || !(person.root_depth > 0.0))
    throw std::invalid_argument("read_depths: hypothesis has no root depth");
  person.joint_depth[root] =
      denormalize_depth(NormalizedDepth{person.root_depth}, cam);
  person.depth_known[root] = 1;

  // Tree order guarantees the parent depth is resolved before the child.
  for (int p = 0; p < spec.part_count(); ++p) {
    const BodyPart& part = spec.part(p);
    if (!person.joints[part.child].present) continue;
    if (!person.depth_known[part.parent]) continue;
    const Point2D& a = person.joints[part.parent].pos;
    const Point2D& b = person.joints[part.child].pos;
    const int c = stack.rel_depth_channel(p);
    const int n = cfg.paf_samples;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / (n - 1);
      acc += stack.sample_nearest(c, a.u + t * (b.u - a.u),
                                  a.v + t * (b.v - a.v));
    }
    person.joint_depth[part.child] = person.joint_depth[part.parent] + acc / n;
    person.depth_known[part.child] = 1;
  }

  // Association ran on the map grid; metric reconstruction wants image px.
  const double stride = cam.w / stack.width();
  for (DetectedJoint& joint : person.joints) {
    if (!joint.present) continue;
    joint.pos.u *= stride;
    joint.pos.v *= stride;
  }
}

AbsolutePose3D reconstruct_3d(const PersonHypothesis& person,
                              const CameraIntrinsics& cam) {
  AbsolutePose3D pose;
  pose.joints.resize(person.joints.size());
  for (size_t j = 0; j < person.joints.size(); ++j) {
    if (!person.joints[j].present || !person.depth_known[j]) continue;
    if (!(person.joint_depth[j] > 0.0)) continue;  // behind the camera
    pose.joints[j].pos =
        back_project(person.joints[j].pos, person.joint_depth[j], cam);
    pose.joints[j].visible = true;
  }
  return pose;
}

std::vector<AbsolutePose3D> decode_with_hypotheses(
    const RepresentationStack& stack, const CameraIntrinsics& cam,
    const SkeletonSpec& spec, const BoneStats& stats, const AssocConfig& cfg,
    AssociationMode mode, const RefineHook& refine,
    std::vector<PersonHypothesis>* hypotheses_out) {
  if (stack.num_joints() != spec.joint_count())
    throw std::invalid_argument("decode: stack joint count does not match "
                                "skeleton");
  const CandidateLists candidates = extract_keypoints(stack, cfg);
  std::vector<PersonHypothesis> hyps =
      mode == AssociationMode::kDepthAware
          ? depth_aware_associate(candidates, stack, spec, stats, cfg)
          : associate_2d(candidates, stack, spec, cfg);

  const int root = spec.root_index();
  std::vector<AbsolutePose3D> poses;
  poses.reserve(hyps.size());
  for (PersonHypothesis& hyp : hyps) {
    read_depths(hyp, stack, spec, cam, cfg);
    AbsolutePose3D pose = reconstruct_3d(hyp, cam);
    if (refine) {
      // The hook sees the root-relative pose and may not move the root.
      const Point3D anchor = pose.joints[root].pos;
      AbsolutePose3D rel = pose;
      for (Joint3D& joint : rel.joints)
        if (joint.visible) {
          joint.pos.x -= anchor.x;
          joint.pos.y -= anchor.y;
          joint.pos.z -= anchor.z;
        }
      AbsolutePose3D refined = refine(hyp.joints, rel);
      refined.joints[root].pos = Point3D{0.0, 0.0, 0.0};
      refined.joints[root].visible = true;
      for (Joint3D& joint : refined.joints)
        if (joint.visible) {
          joint.pos.x += anchor.x;
          joint.pos.y += anchor.y;
          joint.pos.z += anchor.z;
        }
      pose = std::move(refined);
    }
    poses.push_back(std::move(pose));
  }

  // Near-to-far output order, stable for exact depth ties.
  std::vector<size_t> order(poses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return hyps[a].root_depth < hyps[b].root_depth;
  });
  std::vector<AbsolutePose3D> sorted_poses;
  std::vector<PersonHypothesis> sorted_hyps;
  sorted_poses.reserve(poses.size());
  sorted_hyps.reserve(hyps.size());
  for (size_t i : order) {
    sorted_poses.push_back(std::move(poses[i]));
    sorted_hyps.push_back(std::move(hyps[i]));
  }
  if (hypotheses_out) *hypotheses_out = std::move(sorted_hyps);
  return sorted_poses;
}

std::vector<AbsolutePose3D> decode(const RepresentationStack& stack,
                                   const CameraIntrinsics& cam,
                                   const SkeletonSpec& spec,
                                   const BoneStats& stats,
                                   const AssocConfig& cfg,
                                   AssociationMode mode,
                                   const RefineHook& refine) {
  return decode_with_hypotheses(stack, cam, spec, stats, cfg, mode, refine,
                                nullptr);
}

}  // namespace pose25d
