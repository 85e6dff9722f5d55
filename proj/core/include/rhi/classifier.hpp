#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rhi/binary_svm.hpp"
#include "rhi/core_model.hpp"

namespace rhi {

struct FeatureVector {
  std::vector<double> values;
  int label = -1;  // label id; -1 when unlabeled
  CandidatePair pair;
  std::string segment_id;
  std::int64_t window_start = 0;
};

// Per-dimension z-scoring with statistics from the training set. Constant
// dimensions keep unit scale.
class Standardizer {
 public:
  static Standardizer fit(std::span<const FeatureVector> samples);

  std::size_t size() const { return mean_.size(); }
  std::vector<double> apply(std::span<const double> raw) const;
  void apply_into(std::span<const double> raw, std::span<double> out) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }

  void write(std::ostream& os) const;
  static Standardizer read(std::istream& is);

  friend bool operator==(const Standardizer&, const Standardizer&) = default;

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

struct ClassifierConfig {
  SvmParams svm;
  int threads = 1;
};

// s_{k,l} for every ordered class pair; stored for k < l, negated for k > l.
class PairwiseDecisions {
 public:
  PairwiseDecisions(std::size_t classes, std::vector<double> upper)
      : classes_(classes), upper_(std::move(upper)) {}

  std::size_t classes() const { return classes_; }
  double operator()(std::size_t k, std::size_t l) const;

 private:
  std::size_t classes_;
  std::vector<double> upper_;
};

// Index of the (k, l), k < l, binary model in row-major upper-triangle order.
std::size_t pair_model_index(std::size_t classes, std::size_t k, std::size_t l);

class PairwiseModel {
 public:
  PairwiseModel() = default;
  PairwiseModel(LabelSet labels, Standardizer standardizer, SvmParams params, std::vector<BinarySvm> models);

  const LabelSet& labels() const { return labels_; }
  const Standardizer& standardizer() const { return standardizer_; }
  const SvmParams& params() const { return params_; }
  const std::vector<BinarySvm>& models() const { return models_; }
  const BinarySvm& model(std::size_t k, std::size_t l) const;  // k < l
  std::size_t feature_length() const { return standardizer_.size(); }

  PairwiseDecisions decisions(std::span<const double> raw) const;

  void write(std::ostream& os) const;
  static PairwiseModel read(std::istream& is);

  friend bool operator==(const PairwiseModel&, const PairwiseModel&) = default;

 private:
  LabelSet labels_;
  Standardizer standardizer_;
  SvmParams params_;
  std::vector<BinarySvm> models_;
};

// |C| x D(n) vote table for one segment; column order follows enumerate_pairs.
struct VoteMatrix {
  std::size_t classes = 0;
  std::vector<CandidatePair> columns;
  std::string segment_id;
  std::vector<std::int64_t> votes;  // row-major, classes x columns

  VoteMatrix() = default;
  VoteMatrix(std::size_t classes, std::vector<CandidatePair> columns, std::string segment_id = {});

  std::int64_t& at(std::size_t k, std::size_t col) { return votes[k * columns.size() + col]; }
  std::int64_t at(std::size_t k, std::size_t col) const { return votes[k * columns.size() + col]; }

  friend bool operator==(const VoteMatrix&, const VoteMatrix&) = default;
};

// One-vs-one training over every class, null included, regardless of type.
PairwiseModel train_one_vs_one(std::span<const FeatureVector> samples, const LabelSet& labels,
                               const ClassifierConfig& config);

PairwiseDecisions pairwise_decisions(const PairwiseModel& model, const FeatureVector& x);

// v_k = #{l != k : s_{k,l} > 0} for one window.
std::vector<std::int64_t> window_votes(const PairwiseDecisions& decisions);

VoteMatrix segment_votes(const PairwiseModel& model, std::span<const std::vector<FeatureVector>> descriptors,
                         std::span<const CandidatePair> pairs, const std::string& segment_id = {});

// Class-vs-rest scorers for single-type data.
class OneVsAllModel {
 public:
  OneVsAllModel() = default;
  OneVsAllModel(LabelSet labels, Standardizer standardizer, std::vector<int> class_ids,
                std::vector<BinarySvm> scorers);

  const LabelSet& labels() const { return labels_; }
  const std::vector<int>& class_ids() const { return class_ids_; }
  std::vector<double> scores(std::span<const double> raw) const;

 private:
  LabelSet labels_;
  Standardizer standardizer_;
  std::vector<int> class_ids_;
  std::vector<BinarySvm> scorers_;
};

// Trains one scorer per label that has samples.
OneVsAllModel train_one_vs_all(std::span<const FeatureVector> samples, const LabelSet& labels,
                               const ClassifierConfig& config);

// Index of the largest score; ties go to the smallest index.
std::size_t argmax_index(std::span<const double> scores);

// argmax over classes of the per-class score summed over descriptors.
int argmax_class(std::span<const int> class_ids, std::span<const std::vector<double>> per_descriptor_scores);

ClassLabel argmax_classify(const OneVsAllModel& model, std::span<const FeatureVector> descriptors);

}  // namespace rhi
