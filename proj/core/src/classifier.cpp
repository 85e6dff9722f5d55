#include "rhi/classifier.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "rhi/error.hpp"
#include "rhi/parallel.hpp"
#include "rhi/text_io.hpp"

namespace rhi {

Standardizer Standardizer::fit(std::span<const FeatureVector> samples) {
  if (samples.empty()) ThrowInvalid("Standardizer::fit: no samples");
  const std::size_t dim = samples.front().values.size();
  Standardizer s;
  s.mean_.assign(dim, 0.0);
  s.scale_.assign(dim, 0.0);
  for (const auto& x : samples) {
    if (x.values.size() != dim) ThrowInvalid("Standardizer::fit: inconsistent feature length");
    for (std::size_t d = 0; d < dim; ++d) s.mean_[d] += x.values[d];
  }
  const double n = static_cast<double>(samples.size());
  for (double& m : s.mean_) m /= n;
  for (const auto& x : samples) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = x.values[d] - s.mean_[d];
      s.scale_[d] += c * c;
    }
  }
  for (double& v : s.scale_) {
    const double sd = std::sqrt(v / n);
    v = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> raw) const {
  std::vector<double> out(raw.size());
  apply_into(raw, out);
  return out;
}

void Standardizer::apply_into(std::span<const double> raw, std::span<double> out) const {
  if (raw.size() != mean_.size() || out.size() != mean_.size()) {
    ThrowInvalid("feature length " + std::to_string(raw.size()) + " does not match model length " +
                 std::to_string(mean_.size()));
  }
  for (std::size_t d = 0; d < raw.size(); ++d) out[d] = (raw[d] - mean_[d]) / scale_[d];
}

void Standardizer::write(std::ostream& os) const {
  os << "standardizer " << mean_.size() << "\nmean ";
  text::write_doubles(os, mean_);
  os << "\nscale ";
  text::write_doubles(os, scale_);
  os << '\n';
}

Standardizer Standardizer::read(std::istream& is) {
  text::expect_keyword(is, "standardizer");
  const auto dim = text::read_int(is, "feature length");
  if (dim < 1) ThrowData("standardizer: invalid feature length");
  Standardizer s;
  text::expect_keyword(is, "mean");
  s.mean_ = text::read_doubles(is, static_cast<std::size_t>(dim), "mean");
  text::expect_keyword(is, "scale");
  s.scale_ = text::read_doubles(is, static_cast<std::size_t>(dim), "scale");
  for (double v : s.scale_) {
    if (!(v > 0.0)) ThrowData("standardizer: non-positive scale");
  }
  return s;
}

double PairwiseDecisions::operator()(std::size_t k, std::size_t l) const {
  if (k == l || k >= classes_ || l >= classes_) ThrowInvalid("pairwise decision: invalid class pair");
  if (k < l) return upper_[pair_model_index(classes_, k, l)];
  return -upper_[pair_model_index(classes_, l, k)];
}

std::size_t pair_model_index(std::size_t classes, std::size_t k, std::size_t l) {
  // Rows 0..k-1 contribute (classes - 1) + ... + (classes - k) entries.
  return k * classes - k * (k + 1) / 2 + (l - k - 1);
}

PairwiseModel::PairwiseModel(LabelSet labels, Standardizer standardizer, SvmParams params,
                             std::vector<BinarySvm> models)
    : labels_(std::move(labels)),
      standardizer_(std::move(standardizer)),
      params_(params),
      models_(std::move(models)) {
  const std::size_t c = labels_.size();
  if (models_.size() != c * (c - 1) / 2) ThrowInvalid("PairwiseModel: expected |C|(|C|-1)/2 binary models");
}

const BinarySvm& PairwiseModel::model(std::size_t k, std::size_t l) const {
  if (!(k < l && l < labels_.size())) ThrowInvalid("PairwiseModel::model: need k < l < |C|");
  return models_[pair_model_index(labels_.size(), k, l)];
}

PairwiseDecisions PairwiseModel::decisions(std::span<const double> raw) const {
  const std::vector<double> z = standardizer_.apply(raw);
  std::vector<double> upper(models_.size());
  for (std::size_t i = 0; i < models_.size(); ++i) upper[i] = models_[i].decision(z);
  return PairwiseDecisions(labels_.size(), std::move(upper));
}

void PairwiseModel::write(std::ostream& os) const {
  os << "labels " << labels_.size() << '\n';
  for (const auto& l : labels_.labels()) os << l.id << ' ' << l.name << '\n';
  os << "svm_params " << to_string(params_.kernel) << ' ' << text::format_double(params_.C) << ' '
     << text::format_double(params_.gamma) << ' ' << text::format_double(params_.tolerance) << ' '
     << params_.max_epochs << ' ' << params_.seed << ' ' << (params_.balance_classes ? 1 : 0) << '\n';
  standardizer_.write(os);
  os << "models " << models_.size() << '\n';
  for (const auto& m : models_) m.write(os);
}

PairwiseModel PairwiseModel::read(std::istream& is) {
  text::expect_keyword(is, "labels");
  const auto count = text::read_int(is, "label count");
  if (count < 2) ThrowData("model: need at least two labels");
  std::vector<std::string> names;
  for (long long i = 0; i < count; ++i) {
    const auto id = text::read_int(is, "label id");
    const std::string name = text::expect_token(is, "label name");
    if (id != i) ThrowData("model: label ids must be 0..|C|-1 in order");
    if (i == 0) {
      if (name != kNullLabelName) ThrowData("model: label 0 must be the null label");
    } else {
      names.push_back(name);
    }
  }
  LabelSet labels(names);
  SvmParams p;
  text::expect_keyword(is, "svm_params");
  p.kernel = parse_kernel(text::expect_token(is, "kernel"));
  p.C = text::read_double(is, "C");
  p.gamma = text::read_double(is, "gamma");
  p.tolerance = text::read_double(is, "tolerance");
  p.max_epochs = static_cast<int>(text::read_int(is, "max epochs"));
  p.seed = static_cast<std::uint64_t>(text::read_int(is, "seed"));
  p.balance_classes = text::read_int(is, "balance flag") != 0;
  Standardizer s = Standardizer::read(is);
  text::expect_keyword(is, "models");
  const auto n = text::read_int(is, "model count");
  const auto c = static_cast<long long>(labels.size());
  if (n != c * (c - 1) / 2) ThrowData("model: wrong number of binary models");
  std::vector<BinarySvm> models;
  for (long long i = 0; i < n; ++i) {
    models.push_back(BinarySvm::read(is));
    if (models.back().kernel() == KernelType::kLinear && models.back().weights().size() != s.size()) {
      ThrowData("model: binary model length does not match the standardizer");
    }
  }
  return PairwiseModel(std::move(labels), std::move(s), p, std::move(models));
}

VoteMatrix::VoteMatrix(std::size_t classes_in, std::vector<CandidatePair> columns_in, std::string segment_id_in)
    : classes(classes_in),
      columns(std::move(columns_in)),
      segment_id(std::move(segment_id_in)),
      votes(classes_in * columns.size(), 0) {}

namespace {

void check_samples(std::span<const FeatureVector> samples, const LabelSet& labels, bool require_all) {
  if (labels.size() < 2) ThrowInvalid("training needs at least two classes");
  if (samples.empty()) ThrowInvalid("training needs samples");
  const std::size_t dim = samples.front().values.size();
  std::vector<std::size_t> counts(labels.size(), 0);
  for (const auto& s : samples) {
    if (s.values.size() != dim) ThrowInvalid("training samples have inconsistent feature length");
    if (s.label < 0 || static_cast<std::size_t>(s.label) >= labels.size()) {
      ThrowInvalid("training sample has an out-of-range label");
    }
    for (double v : s.values) {
      if (!std::isfinite(v)) ThrowInvalid("non-finite feature in segment " + s.segment_id);
    }
    ++counts[static_cast<std::size_t>(s.label)];
  }
  if (require_all) {
    std::string missing;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0) missing += (missing.empty() ? "" : ", ") + labels[k].name;
    }
    if (!missing.empty()) ThrowInvalid("classes without training samples: " + missing);
  }
}

// Standardised copies of every sample, laid out contiguously.
struct ScaledSet {
  std::size_t dim = 0;
  std::vector<double> data;
  std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
};

ScaledSet scale_all(std::span<const FeatureVector> samples, const Standardizer& s) {
  ScaledSet out;
  out.dim = s.size();
  out.data.resize(samples.size() * out.dim);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    s.apply_into(samples[i].values, std::span<double>(out.data.data() + i * out.dim, out.dim));
  }
  return out;
}

BinarySvm train_split(const ScaledSet& scaled, std::span<const std::size_t> positives,
                      std::span<const std::size_t> negatives, const SvmParams& base, std::uint64_t seed) {
  std::vector<std::span<const double>> rows;
  std::vector<int> y;
  std::vector<double> upper;
  const double n = static_cast<double>(positives.size() + negatives.size());
  const double cp = base.balance_classes ? base.C * n / (2.0 * static_cast<double>(positives.size())) : base.C;
  const double cn = base.balance_classes ? base.C * n / (2.0 * static_cast<double>(negatives.size())) : base.C;
  for (std::size_t i : positives) {
    rows.push_back(scaled.row(i));
    y.push_back(1);
    upper.push_back(cp);
  }
  for (std::size_t i : negatives) {
    rows.push_back(scaled.row(i));
    y.push_back(-1);
    upper.push_back(cn);
  }
  SvmParams p = base;
  p.seed = seed;
  return train_binary_svm(rows, y, upper, p);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finaliser over the combined inputs.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (a + 1) + 0xBF58476D1CE4E5B9ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

PairwiseModel train_one_vs_one(std::span<const FeatureVector> samples, const LabelSet& labels,
                               const ClassifierConfig& config) {
  check_samples(samples, labels, true);
  Standardizer standardizer = Standardizer::fit(samples);
  const ScaledSet scaled = scale_all(samples, standardizer);
  const std::size_t c = labels.size();
  std::vector<std::vector<std::size_t>> by_class(c);
  for (std::size_t i = 0; i < samples.size(); ++i) by_class[static_cast<std::size_t>(samples[i].label)].push_back(i);

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t k = 0; k < c; ++k) {
    for (std::size_t l = k + 1; l < c; ++l) jobs.emplace_back(k, l);
  }
  std::vector<BinarySvm> models(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
    const auto [k, l] = jobs[j];
    models[j] = train_split(scaled, by_class[k], by_class[l], config.svm, mix_seed(config.svm.seed, k, l));
  });
  return PairwiseModel(labels, std::move(standardizer), config.svm, std::move(models));
}

PairwiseDecisions pairwise_decisions(const PairwiseModel& model, const FeatureVector& x) {
  return model.decisions(x.values);
}

std::vector<std::int64_t> window_votes(const PairwiseDecisions& decisions) {
  const std::size_t c = decisions.classes();
  std::vector<std::int64_t> v(c, 0);
  for (std::size_t k = 0; k < c; ++k) {
    for (std::size_t l = k + 1; l < c; ++l) {
      const double s = decisions(k, l);
      // Exact zeros vote for neither class.
      if (s > 0.0) ++v[k];
      else if (s < 0.0) ++v[l];
    }
  }
  return v;
}

VoteMatrix segment_votes(const PairwiseModel& model, std::span<const std::vector<FeatureVector>> descriptors,
                         std::span<const CandidatePair> pairs, const std::string& segment_id) {
  if (descriptors.size() != pairs.size()) ThrowInvalid("segment_votes: one descriptor list per pair required");
  VoteMatrix votes(model.labels().size(), std::vector<CandidatePair>(pairs.begin(), pairs.end()), segment_id);
  for (std::size_t col = 0; col < pairs.size(); ++col) {
    if (descriptors[col].empty()) {
      ThrowInvalid("segment_votes: no descriptors for pair " + pairs[col].to_string());
    }
    for (const auto& x : descriptors[col]) {
      const auto v = window_votes(pairwise_decisions(model, x));
      for (std::size_t k = 0; k < v.size(); ++k) votes.at(k, col) += v[k];
    }
  }
  return votes;
}

OneVsAllModel::OneVsAllModel(LabelSet labels, Standardizer standardizer, std::vector<int> class_ids,
                             std::vector<BinarySvm> scorers)
    : labels_(std::move(labels)),
      standardizer_(std::move(standardizer)),
      class_ids_(std::move(class_ids)),
      scorers_(std::move(scorers)) {
  if (class_ids_.size() != scorers_.size()) ThrowInvalid("OneVsAllModel: one scorer per class id");
}

std::vector<double> OneVsAllModel::scores(std::span<const double> raw) const {
  const std::vector<double> z = standardizer_.apply(raw);
  std::vector<double> out(scorers_.size());
  for (std::size_t i = 0; i < scorers_.size(); ++i) out[i] = scorers_[i].decision(z);
  return out;
}

OneVsAllModel train_one_vs_all(std::span<const FeatureVector> samples, const LabelSet& labels,
                               const ClassifierConfig& config) {
  check_samples(samples, labels, false);
  Standardizer standardizer = Standardizer::fit(samples);
  const ScaledSet scaled = scale_all(samples, standardizer);
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < samples.size(); ++i) by_class[samples[i].label].push_back(i);
  if (by_class.size() < 2) ThrowInvalid("one-vs-all training needs at least two populated classes");
  std::vector<int> ids;
  for (const auto& kv : by_class) ids.push_back(kv.first);
  std::vector<BinarySvm> scorers(ids.size());
  parallel_for(ids.size(), config.threads, [&](std::size_t j) {
    std::vector<std::size_t> rest;
    for (const auto& [id, idx] : by_class) {
      if (id != ids[j]) rest.insert(rest.end(), idx.begin(), idx.end());
    }
    scorers[j] = train_split(scaled, by_class.at(ids[j]), rest, config.svm,
                             mix_seed(config.svm.seed, static_cast<std::uint64_t>(ids[j]), 0xA11));
  });
  return OneVsAllModel(labels, std::move(standardizer), std::move(ids), std::move(scorers));
}

std::size_t argmax_index(std::span<const double> scores) {
  if (scores.empty()) ThrowInvalid("argmax over an empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

int argmax_class(std::span<const int> class_ids, std::span<const std::vector<double>> per_descriptor_scores) {
  if (per_descriptor_scores.empty()) ThrowInvalid("argmax_classify: no descriptors");
  std::vector<double> total(class_ids.size(), 0.0);
  for (const auto& s : per_descriptor_scores) {
    if (s.size() != class_ids.size()) ThrowInvalid("argmax_classify: score vector length mismatch");
    for (std::size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  }
  // Ties resolve to the smallest class id, independent of scorer order.
  std::size_t best = 0;
  for (std::size_t i = 1; i < total.size(); ++i) {
    if (total[i] > total[best] || (total[i] == total[best] && class_ids[i] < class_ids[best])) best = i;
  }
  return class_ids[best];
}

ClassLabel argmax_classify(const OneVsAllModel& model, std::span<const FeatureVector> descriptors) {
  if (descriptors.empty()) ThrowInvalid("argmax_classify: no descriptors");
  std::vector<std::vector<double>> scores;
  scores.reserve(descriptors.size());
  for (const auto& d : descriptors) scores.push_back(model.scores(d.values));
  return model.labels()[static_cast<std::size_t>(argmax_class(model.class_ids(), scores))];
}

}  // namespace rhi
