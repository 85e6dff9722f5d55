#include "rhi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rhi/error.hpp"

namespace rhi {

DetectionCounts& DetectionCounts::operator+=(const DetectionCounts& o) {
  tp += o.tp;
  fp_class += o.fp_class;
  fp_null += o.fp_null;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

double f1_score(double p, double r) {
  const double d = p + r;
  return d > 0.0 ? 2.0 * p * r / d : 0.0;
}

double f2_score(double p, double r) {
  const double d = 4.0 * p + r;
  return d > 0.0 ? 5.0 * p * r / d : 0.0;
}

PrfScores prf_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  if (tp < 0 || fp < 0 || fn < 0) ThrowInvalid("detection counts must be non-negative");
  PrfScores s;
  s.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  s.f1 = f1_score(s.precision, s.recall);
  s.f2 = f2_score(s.precision, s.recall);
  return s;
}

DetectionResult detection_result(const DetectionCounts& c) {
  DetectionResult r;
  r.counts = c;
  r.standard = prf_from_counts(c.tp, c.fp_class + c.fp_null, c.fn);
  r.literal = prf_from_counts(c.tp, c.fp_class, c.fn);
  return r;
}

DetectionCounts count_detections(const PairLabels& predicted, const PairLabels& truth, int null_class) {
  if (predicted.size() != truth.size()) ThrowData("prediction and truth cover different pairs");
  DetectionCounts c;
  auto p = predicted.begin();
  for (auto t = truth.begin(); t != truth.end(); ++t, ++p) {
    if (p->first != t->first) ThrowData("prediction and truth disagree on pair " + t->first.to_string());
    const bool truth_valid = t->second != null_class;
    const bool pred_valid = p->second != null_class;
    if (truth_valid && pred_valid) {
      (p->second == t->second ? c.tp : c.fp_class) += 1;
    } else if (truth_valid) {
      c.fn += 1;
    } else if (pred_valid) {
      c.fp_null += 1;
    } else {
      c.tn += 1;
    }
  }
  return c;
}

DetectionResult evaluate_detection(std::span<const PairLabels> predictions, std::span<const PairLabels> truth,
                                   int null_class) {
  if (predictions.size() != truth.size()) ThrowData("prediction and truth cover different segments");
  DetectionCounts total;
  for (std::size_t i = 0; i < truth.size(); ++i) total += count_detections(predictions[i], truth[i], null_class);
  return detection_result(total);
}

std::int64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < classes; ++j) s += at(truth, j);
  return s;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t s = 0;
  for (auto v : counts) s += v;
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  if (o.classes != classes) ThrowInvalid("confusion matrices of different sizes");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  return *this;
}

int known_pair_label(const VoteMatrix& votes, std::size_t column, int null_class) {
  if (column >= votes.columns.size()) ThrowInvalid("vote column out of range");
  int best = -1;
  std::int64_t best_votes = -1;
  for (std::size_t k = 0; k < votes.classes; ++k) {
    if (static_cast<int>(k) == null_class) continue;
    if (votes.at(k, column) > best_votes) {
      best_votes = votes.at(k, column);
      best = static_cast<int>(k);
    }
  }
  if (best < 0) ThrowInvalid("vote matrix has no valid class");
  return best;
}

AccuracyEstimate bootstrap_accuracy(std::span<const std::uint8_t> outcomes, int resamples, std::uint64_t seed) {
  AccuracyEstimate e;
  e.total = static_cast<std::int64_t>(outcomes.size());
  for (auto o : outcomes) e.correct += o != 0 ? 1 : 0;
  if (e.total == 0) return e;
  e.accuracy = static_cast<double>(e.correct) / static_cast<double>(e.total);
  e.ci_low = e.ci_high = e.accuracy;
  if (resamples <= 0) return e;
  std::mt19937_64 rng(seed);
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  const std::uint64_t n = outcomes.size();
  for (double& s : stats) {
    std::int64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) hits += outcomes[rng() % n] != 0 ? 1 : 0;
    s = static_cast<double>(hits) / static_cast<double>(n);
  }
  std::sort(stats.begin(), stats.end());
  auto pick = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(stats.size() - 1) + 0.5));
    return stats[idx];
  };
  e.ci_low = pick(0.025);
  e.ci_high = pick(0.975);
  return e;
}

double box_overlap(const BoundingBox& a, const BoundingBox& b) {
  const double larger = std::max(a.area(), b.area());
  if (larger <= 0.0) return 0.0;
  return intersection_area(a, b) / larger;
}

double video_occlusion(std::span<const Segment> segments) {
  double worst = 0.0;
  for (const Segment& seg : segments) {
    if (!seg.has_boxes()) ThrowData("segment " + seg.id + " has no bounding boxes");
    const auto frames = static_cast<std::size_t>(seg.length());
    for (std::size_t i = 0; i < seg.persons.size(); ++i) {
      const auto& a = seg.track(seg.persons[i]).boxes;
      for (std::size_t j = i + 1; j < seg.persons.size(); ++j) {
        const auto& b = seg.track(seg.persons[j]).boxes;
        for (std::size_t f = 0; f < frames; ++f) worst = std::max(worst, box_overlap(a[f], b[f]));
      }
    }
  }
  return worst;
}

double occlusion_level(std::span<const Scene> videos) {
  if (videos.empty()) ThrowInvalid("occlusion level of an empty dataset");
  double sum = 0.0;
  for (const Scene& v : videos) sum += video_occlusion(v.segments);
  return sum / static_cast<double>(videos.size());
}

}  // namespace rhi
