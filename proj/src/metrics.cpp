// Copyright (c) 2026 the pose25d authors
// SPDX-License-Identifier: Apache-2.0

#include "pose25d/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pose25d {

namespace {

bool has_root(const AbsolutePose3D& pose, int root) {
  return root < pose.joint_count() && pose.joints[root].visible &&
         pose.joints[root].pos.z > 0.0;
}

Point3D aligned_pred(const Point3D& pred, const Point3D& pred_root,
                     const Point3D& gt_root) {
  return Point3D{pred.x - pred_root.x + gt_root.x,
                 pred.y - pred_root.y + gt_root.y,
                 pred.z - pred_root.z + gt_root.z};
}

// Shared accumulation so single-frame metrics and the pooled multi-frame
// evaluation use the same arithmetic.
struct MetricAccumulator {
  const SkeletonSpec& spec;
  double pck_threshold;
  double pcod_tie;
  std::span<const double> auc_thresholds;

  long matched = 0, total_gt = 0, total_pred = 0;
  double mpjpe_sum = 0.0;
  long mpjpe_pairs = 0;
  double rt_sum = 0.0;
  long rt_pairs = 0;
  // PCK counters: [rel, abs, root]
  long pck_hits[3] = {0, 0, 0};
  long pck_matched_total[3] = {0, 0, 0};
  long pck_all_total[3] = {0, 0, 0};
  std::vector<long> auc_hits;
  long auc_total = 0;
  long pcod_agree = 0, pcod_pairs = 0;

  explicit MetricAccumulator(const SkeletonSpec& s, const EvalConfig& cfg)
      : spec(s),
        pck_threshold(cfg.pck_threshold_mm),
        pcod_tie(cfg.pcod_tie_mm),
        auc_thresholds(cfg.auc_thresholds) {
    auc_hits.assign(auc_thresholds.size(), 0);
  }

  void add_frame(const std::vector<AbsolutePose3D>& pred,
                 const std::vector<AbsolutePose3D>& gt,
                 const Matching& matching) {
    const int root = spec.root_index();
    matched += static_cast<long>(matching.pairs.size());
    total_gt += static_cast<long>(gt.size());
    total_pred += static_cast<long>(pred.size());

    for (const auto& [pi, gi] : matching.pairs) {
      const AbsolutePose3D& p = pred[pi];
      const AbsolutePose3D& g = gt[gi];
      const Point3D& p_root = p.joints[root].pos;
      const Point3D& g_root = g.joints[root].pos;

      rt_sum += distance(p_root, g_root);
      rt_pairs += 1;

      double err_sum = 0.0;
      long err_joints = 0;
      for (int j = 0; j < spec.joint_count(); ++j) {
        if (!g.joints[j].visible) continue;
        const bool have_pred = j < p.joint_count() && p.joints[j].visible;
        const double abs_err =
            have_pred ? distance(p.joints[j].pos, g.joints[j].pos) : -1.0;
        const double rel_err =
            have_pred ? distance(aligned_pred(p.joints[j].pos, p_root, g_root),
                                 g.joints[j].pos)
                      : -1.0;

        if (have_pred) {
          err_sum += rel_err;
          err_joints += 1;
        }
        pck_matched_total[0] += 1;
        pck_matched_total[1] += 1;
        pck_all_total[0] += 1;
        pck_all_total[1] += 1;
        if (have_pred && rel_err < pck_threshold) pck_hits[0] += 1;
        if (have_pred && abs_err < pck_threshold) pck_hits[1] += 1;

        auc_total += 1;
        for (size_t t = 0; t < auc_thresholds.size(); ++t)
          if (have_pred && rel_err < auc_thresholds[t]) auc_hits[t] += 1;
      }
      if (err_joints > 0) {
        mpjpe_sum += err_sum / static_cast<double>(err_joints);
        mpjpe_pairs += 1;
      }

      const double root_err = distance(p_root, g_root);
      pck_matched_total[2] += 1;
      if (root_err < pck_threshold) pck_hits[2] += 1;
    }

    // Every joint of an unmatched gt person counts as incorrect in the
    // all-people variants.
    for (int gi : matching.unmatched_gt) {
      for (int j = 0; j < spec.joint_count(); ++j) {
        if (!gt[gi].joints[j].visible) continue;
        pck_all_total[0] += 1;
        pck_all_total[1] += 1;
      }
    }

    // Ordinal depth relations over unordered matched pairs of this frame.
    for (size_t a = 0; a < matching.pairs.size(); ++a) {
      for (size_t b = a + 1; b < matching.pairs.size(); ++b) {
        const double gt_d = gt[matching.pairs[a].second].joints[root].pos.z -
                            gt[matching.pairs[b].second].joints[root].pos.z;
        const double pd_d = pred[matching.pairs[a].first].joints[root].pos.z -
                            pred[matching.pairs[b].first].joints[root].pos.z;
        pcod_pairs += 1;
        if (ordinal_class(gt_d) == ordinal_class(pd_d)) pcod_agree += 1;
      }
    }
  }

  int ordinal_class(double dz) const {
    if (std::abs(dz) <= pcod_tie) return 0;  // roughly the same
    return dz < 0.0 ? -1 : 1;                // closer / farther
  }

  MetricReport report() const {
    MetricReport r;
    if (mpjpe_pairs > 0) r.mpjpe_mm = mpjpe_sum / mpjpe_pairs;
    if (rt_pairs > 0) r.rt_error_mm = rt_sum / rt_pairs;
    auto pct = [](long hits, long total) -> std::optional<double> {
      if (total == 0) return std::nullopt;
      return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
    };
    r.pck_rel_matched = pct(pck_hits[0], pck_matched_total[0]);
    r.pck_abs_matched = pct(pck_hits[1], pck_matched_total[1]);
    r.pck_root_matched = pct(pck_hits[2], pck_matched_total[2]);
    r.pck_rel_all = pct(pck_hits[0], pck_all_total[0]);
    r.pck_abs_all = pct(pck_hits[1], pck_all_total[1]);
    r.auc_rel = auc();
    if (pcod_pairs > 0)
      r.pcod = 100.0 * static_cast<double>(pcod_agree) /
               static_cast<double>(pcod_pairs);
    r.recall_pct = total_gt > 0 ? 100.0 * static_cast<double>(matched) /
                                      static_cast<double>(total_gt)
                                : 0.0;
    r.matched_people = matched;
    r.total_gt_people = total_gt;
    r.total_pred_people = total_pred;
    r.pck_threshold_mm = pck_threshold;
    r.pcod_tie_mm = pcod_tie;
    return r;
  }

  std::optional<double> auc() const {
    if (auc_total == 0 || auc_thresholds.size() < 2) return std::nullopt;
    double integral = 0.0;
    for (size_t t = 0; t + 1 < auc_thresholds.size(); ++t) {
      const double pa = static_cast<double>(auc_hits[t]) / auc_total;
      const double pb = static_cast<double>(auc_hits[t + 1]) / auc_total;
      integral += 0.5 * (pa + pb) * (auc_thresholds[t + 1] - auc_thresholds[t]);
    }
    const double range = auc_thresholds.back() - auc_thresholds.front();
    return 100.0 * integral / range;
  }
};

void check_thresholds(std::span<const double> thresholds) {
  if (thresholds.size() < 2)
    throw std::invalid_argument("auc: need at least two thresholds");
  for (size_t i = 0; i + 1 < thresholds.size(); ++i)
    if (!(thresholds[i] < thresholds[i + 1]))
      throw std::invalid_argument("auc: thresholds must be strictly "
                                  "increasing");
}

EvalConfig config_for(const SkeletonSpec&, double pck_threshold, double tie,
                      std::span<const double> auc_grid) {
  EvalConfig cfg;
  cfg.pck_threshold_mm = pck_threshold;
  cfg.pcod_tie_mm = tie;
  if (!auc_grid.empty())
    cfg.auc_thresholds.assign(auc_grid.begin(), auc_grid.end());
  return cfg;
}

}  // namespace

std::vector<double> EvalConfig::default_auc_thresholds() {
  std::vector<double> out;
  for (double t = 5.0; t <= 150.0 + 1e-9; t += 5.0) out.push_back(t);
  return out;
}

Matching match_people(const std::vector<AbsolutePose3D>& pred,
                      const std::vector<AbsolutePose3D>& gt,
                      const CameraIntrinsics& cam, const SkeletonSpec& spec,
                      const MatchPolicy& policy) {
  const int root = spec.root_index();
  struct Entry {
    double dist;
    int pred, gt;
  };
  std::vector<Entry> entries;
  for (size_t pi = 0; pi < pred.size(); ++pi) {
    if (!has_root(pred[pi], root)) continue;
    const Point2D pp = project(pred[pi].joints[root].pos, cam);
    for (size_t gi = 0; gi < gt.size(); ++gi) {
      if (!has_root(gt[gi], root)) continue;
      const Point2D gp = project(gt[gi].joints[root].pos, cam);
      const double d = distance(pp, gp);
      if (d <= policy.gate_px)
        entries.push_back(
            Entry{d, static_cast<int>(pi), static_cast<int>(gi)});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });

  Matching m;
  std::vector<char> pred_used(pred.size(), 0), gt_used(gt.size(), 0);
  for (const Entry& e : entries) {
    if (pred_used[e.pred] || gt_used[e.gt]) continue;
    pred_used[e.pred] = 1;
    gt_used[e.gt] = 1;
    m.pairs.emplace_back(e.pred, e.gt);
  }
  for (size_t gi = 0; gi < gt.size(); ++gi)
    if (!gt_used[gi]) m.unmatched_gt.push_back(static_cast<int>(gi));
  for (size_t pi = 0; pi < pred.size(); ++pi)
    if (!pred_used[pi]) m.unmatched_pred.push_back(static_cast<int>(pi));
  return m;
}

std::optional<double> mpjpe(const std::vector<AbsolutePose3D>& pred,
                            const std::vector<AbsolutePose3D>& gt,
                            const Matching& matching,
                            const SkeletonSpec& spec) {
  MetricAccumulator acc(spec, EvalConfig{});
  acc.add_frame(pred, gt, matching);
  return acc.report().mpjpe_mm;
}

std::optional<double> rt_error(const std::vector<AbsolutePose3D>& pred,
                               const std::vector<AbsolutePose3D>& gt,
                               const Matching& matching,
                               const SkeletonSpec& spec) {
  MetricAccumulator acc(spec, EvalConfig{});
  acc.add_frame(pred, gt, matching);
  return acc.report().rt_error_mm;
}

std::optional<double> pck3d(const std::vector<AbsolutePose3D>& pred,
                            const std::vector<AbsolutePose3D>& gt,
                            const Matching& matching, const SkeletonSpec& spec,
                            double threshold_mm, PckMode mode,
                            bool over_all_people) {
  if (!(threshold_mm > 0.0))
    throw std::invalid_argument("pck3d: threshold must be positive");
  MetricAccumulator acc(spec, config_for(spec, threshold_mm, 300.0, {}));
  acc.add_frame(pred, gt, matching);
  const MetricReport r = acc.report();
  switch (mode) {
    case PckMode::kRelative:
      return over_all_people ? r.pck_rel_all : r.pck_rel_matched;
    case PckMode::kAbsolute:
      return over_all_people ? r.pck_abs_all : r.pck_abs_matched;
    case PckMode::kRoot:
      return r.pck_root_matched;
  }
  return std::nullopt;
}

std::optional<double> auc_rel(const std::vector<AbsolutePose3D>& pred,
                              const std::vector<AbsolutePose3D>& gt,
                              const Matching& matching,
                              const SkeletonSpec& spec,
                              std::span<const double> thresholds) {
  check_thresholds(thresholds);
  MetricAccumulator acc(spec, config_for(spec, 150.0, 300.0, thresholds));
  acc.add_frame(pred, gt, matching);
  return acc.report().auc_rel;
}

std::optional<double> pcod(const std::vector<AbsolutePose3D>& pred,
                           const std::vector<AbsolutePose3D>& gt,
                           const Matching& matching, const SkeletonSpec& spec,
                           double tie_mm) {
  MetricAccumulator acc(spec, config_for(spec, 150.0, tie_mm, {}));
  acc.add_frame(pred, gt, matching);
  return acc.report().pcod;
}

MetricReport evaluate(std::span<const Scene> pred_frames,
                      std::span<const Scene> gt_frames,
                      const SkeletonSpec& spec, const EvalConfig& config) {
  if (pred_frames.size() != gt_frames.size())
    throw std::invalid_argument("evaluate: frame count mismatch");
  check_thresholds(config.auc_thresholds);

  MetricAccumulator acc(spec, config);
  for (size_t i = 0; i < gt_frames.size(); ++i) {
    const Matching m = match_people(pred_frames[i].people,
                                    gt_frames[i].people, gt_frames[i].camera,
                                    spec, config.match);
    acc.add_frame(pred_frames[i].people, gt_frames[i].people, m);
  }
  MetricReport report = acc.report();
  report.gate_px = config.match.gate_px;
  return report;
}

}  // namespace pose25d
