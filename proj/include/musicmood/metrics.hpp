#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "musicmood/error.hpp"
#include "musicmood/label.hpp"

namespace musicmood {

// Happy is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion(std::span<const MoodLabel> truth, std::span<const MoodLabel> predicted) {
  if (truth.size() != predicted.size()) throw UsageError("confusion: label sequences differ in length");
  if (truth.empty()) throw UsageError("confusion: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == MoodLabel::Happy;
    const bool guess = predicted[i] == MoodLabel::Happy;
    if (actual && guess) ++cm.tp;
    else if (!actual && guess) ++cm.fp;
    else if (actual && !guess) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

// Zero denominators yield 0.
inline double precision(const ConfusionMatrix& cm) {
  const auto d = cm.tp + cm.fp;
  return d == 0 ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(d);
}

inline double recall(const ConfusionMatrix& cm) {
  const auto d = cm.tp + cm.fn;
  return d == 0 ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(d);
}

inline double f1(const ConfusionMatrix& cm) {
  const double p = precision(cm);
  const double r = recall(cm);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

inline double accuracy(const ConfusionMatrix& cm) {
  const auto n = cm.total();
  return n == 0 ? 0.0 : static_cast<double>(cm.tp + cm.tn) / static_cast<double>(n);
}

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Scores >= threshold are called happy. +inf for the origin point.
  double threshold = std::numeric_limits<double>::infinity();
};

struct RocCurve {
  std::vector<RocPoint> points;
  // Trapezoid rule over `points`.
  double auc = 0.0;
  // Pairwise-concordance value of the same quantity; agrees with `auc` to
  // rounding. NaN for averaged curves.
  double auc_concordance = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline std::array<std::size_t, 2> class_totals(std::span<const MoodLabel> truth, std::span<const double> scores) {
  if (truth.size() != scores.size()) throw UsageError("roc: labels and scores differ in length");
  std::array<std::size_t, 2> totals{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!std::isfinite(scores[i])) throw DataError("roc: non-finite score");
    ++totals[label_index(truth[i])];
  }
  if (totals[0] == 0 || totals[1] == 0) throw DataError("roc: both happy and sad samples are required");
  return totals;
}

}  // namespace detail

// Mann-Whitney form: (concordant pairs + 0.5 tied pairs) / (#happy * #sad),
// computed by sorting and counting per distinct score.
inline double auc_pairwise(std::span<const MoodLabel> truth, std::span<const double> scores) {
  const auto totals = detail::class_totals(truth, scores);
  std::vector<std::size_t> order(truth.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double concordant = 0.0;
  std::size_t sad_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t happy_here = 0;
    std::size_t sad_here = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (truth[order[j]] == MoodLabel::Happy ? happy_here : sad_here) += 1;
      ++j;
    }
    concordant += static_cast<double>(happy_here) * (static_cast<double>(sad_below) + 0.5 * static_cast<double>(sad_here));
    sad_below += sad_here;
    i = j;
  }
  return concordant / (static_cast<double>(totals[0]) * static_cast<double>(totals[1]));
}

// Thresholds sweep the distinct scores in descending order; tied scores
// produce a single point. AUC by the trapezoid rule.
inline RocCurve roc_curve(std::span<const MoodLabel> truth, std::span<const double> scores) {
  const auto totals = detail::class_totals(truth, scores);
  std::vector<std::size_t> order(truth.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const double n_pos = static_cast<double>(totals[label_index(MoodLabel::Happy)]);
  const double n_neg = static_cast<double>(totals[label_index(MoodLabel::Sad)]);
  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (truth[order[i]] == MoodLabel::Happy ? tp : fp) += 1;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / n_neg, static_cast<double>(tp) / n_pos, threshold});
  }
  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  curve.auc = area;
  curve.auc_concordance = auc_pairwise(truth, scores);
  assert(std::abs(curve.auc - curve.auc_concordance) <= 1e-9);
  return curve;
}

// TPR of a curve at a given FPR: linear interpolation between neighbouring
// points; on a vertical segment the highest TPR at that FPR.
inline double tpr_at(const RocCurve& curve, double fpr) {
  const auto& pts = curve.points;
  double best = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].fpr == fpr) best = std::max(best, pts[k].tpr);
  }
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const auto& a = pts[k - 1];
    const auto& b = pts[k];
    if (a.fpr < fpr && fpr < b.fpr) {
      const double t = (fpr - a.fpr) / (b.fpr - a.fpr);
      best = std::max(best, a.tpr + t * (b.tpr - a.tpr));
    }
  }
  return best;
}

// Vertical averaging over `samples` evenly spaced FPR values in [0, 1]. The
// threshold column of the result is NaN.
inline RocCurve mean_roc_curve(std::span<const RocCurve> curves, std::size_t samples = 101) {
  if (curves.empty()) throw UsageError("mean_roc_curve: no curves");
  if (samples < 2) throw UsageError("mean_roc_curve: need at least two samples");
  RocCurve mean;
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = static_cast<double>(s) / static_cast<double>(samples - 1);
    double total = 0.0;
    for (const auto& c : curves) total += tpr_at(c, x);
    mean.points.push_back({x, total / static_cast<double>(curves.size()), std::numeric_limits<double>::quiet_NaN()});
  }
  double area = 0.0;
  for (std::size_t k = 1; k < mean.points.size(); ++k) {
    area += (mean.points[k].fpr - mean.points[k - 1].fpr) * (mean.points[k].tpr + mean.points[k - 1].tpr) * 0.5;
  }
  mean.auc = area;
  return mean;
}

// Shortest decimal that round-trips.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "fpr,tpr,threshold\n";
  for (const auto& p : curve.points) {
    out << format_real(p.fpr) << ',' << format_real(p.tpr) << ',' << format_real(p.threshold) << '\n';
  }
}

}  // namespace musicmood
