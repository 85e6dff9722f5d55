#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rhi/classifier.hpp"
#include "rhi/error.hpp"
#include "rhi/features.hpp"
#include "rhi/synth_scene.hpp"
#include "test_support.hpp"

namespace rhi {
namespace {

FeatureVector sample(std::vector<double> v, int label) {
  FeatureVector f;
  f.values = std::move(v);
  f.label = label;
  return f;
}

// Gaussian blobs around the given centres.
std::vector<FeatureVector> blobs(std::mt19937_64& rng, const std::vector<std::vector<double>>& centres, int per_class,
                                 double sd) {
  std::normal_distribution<double> g(0.0, sd);
  std::vector<FeatureVector> out;
  for (std::size_t k = 0; k < centres.size(); ++k) {
    for (int i = 0; i < per_class; ++i) {
      std::vector<double> v = centres[k];
      for (double& x : v) x += g(rng);
      out.push_back(sample(std::move(v), static_cast<int>(k)));
    }
  }
  return out;
}

ClassifierConfig config() {
  ClassifierConfig c;
  c.threads = 1;
  return c;
}

int vote_winner(const PairwiseModel& m, const FeatureVector& x) {
  const auto v = window_votes(pairwise_decisions(m, x));
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

TEST(TrainOneVsOne, SeparableBlobsFitPerfectly) {
  std::mt19937_64 rng(1);
  const auto data = blobs(rng, {{-3, 0}, {3, 0}}, 60, 0.5);
  const PairwiseModel m = train_one_vs_one(data, LabelSet({"a"}), config());
  ASSERT_EQ(m.models().size(), 1u);
  for (const auto& x : data) EXPECT_EQ(vote_winner(m, x), x.label);
}

TEST(TrainOneVsOne, SeparablePairHasPositiveDecision) {
  std::mt19937_64 rng(2);
  auto data = blobs(rng, {{0, 0, 0}, {4, 4, 0}, {-4, 4, 0}}, 40, 0.6);
  const PairwiseModel m = train_one_vs_one(data, LabelSet({"a", "b"}), config());
  EXPECT_EQ(m.models().size(), 3u);
  for (const auto& x : data) {
    if (x.label == 1) EXPECT_GT(pairwise_decisions(m, x)(1, 2), 0.0);
  }
}

TEST(TrainOneVsOne, MissingClassIsNamed) {
  std::mt19937_64 rng(3);
  const auto data = blobs(rng, {{0, 0}, {1, 1}}, 5, 0.1);
  try {
    train_one_vs_one(data, LabelSet({"a", "ghost"}), config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos) << e.what();
  }
}

TEST(TrainOneVsOne, NonFiniteFeatureRejected) {
  std::mt19937_64 rng(4);
  auto data = blobs(rng, {{0, 0}, {1, 1}}, 5, 0.1);
  data[3].values[1] = std::nan("");
  EXPECT_THROW(train_one_vs_one(data, LabelSet({"a"}), config()), Error);
}

TEST(TrainOneVsOne, DeterministicModelText) {
  std::mt19937_64 rng(5);
  const auto data = blobs(rng, {{0, 0, 1}, {2, 1, 0}, {1, 3, 1}, {3, 3, 3}}, 30, 1.0);
  const LabelSet labels({"a", "b", "c"});
  ClassifierConfig multi = config();
  multi.threads = 3;
  std::ostringstream a, b;
  train_one_vs_one(data, labels, config()).write(a);
  train_one_vs_one(data, labels, multi).write(b);
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  const PairwiseModel back = PairwiseModel::read(in);
  EXPECT_EQ(back, train_one_vs_one(data, labels, config()));
}

TEST(TrainOneVsOne, RbfSeparatesRing) {
  std::mt19937_64 rng(6);
  std::vector<FeatureVector> data;
  for (int i = 0; i < 200; ++i) {
    const double a = testing::uniform(rng, 0, 6.283185307179586);
    const double r = i % 2 == 0 ? testing::uniform(rng, 0, 1) : testing::uniform(rng, 2, 3);
    data.push_back(sample({r * std::cos(a), r * std::sin(a)}, i % 2));
  }
  ClassifierConfig c = config();
  c.svm.kernel = KernelType::kRbf;
  c.svm.C = 10.0;
  const PairwiseModel m = train_one_vs_one(data, LabelSet({"ring"}), c);
  int correct = 0;
  for (const auto& x : data) correct += vote_winner(m, x) == x.label ? 1 : 0;
  EXPECT_GE(correct, 196);
  std::ostringstream os;
  m.write(os);
  std::istringstream is(os.str());
  EXPECT_EQ(PairwiseModel::read(is), m);
}

// Standardizer with zero mean and unit scale in every dimension.
Standardizer identity_standardizer(std::size_t dim) {
  std::vector<FeatureVector> s = {sample(std::vector<double>(dim, -1.0), 0), sample(std::vector<double>(dim, 1.0), 0)};
  return Standardizer::fit(s);
}

TEST(PairwiseDecisions, OriginGivesBiases) {
  std::vector<BinarySvm> svms = {BinarySvm::linear({1.0, 2.0}, 0.5), BinarySvm::linear({-1.0, 0.0}, -0.25),
                                 BinarySvm::linear({0.0, 3.0}, 2.0)};
  const PairwiseModel m(LabelSet({"a", "b"}), identity_standardizer(2), SvmParams{}, svms);
  FeatureVector x = sample({0.0, 0.0}, -1);
  const PairwiseDecisions d = pairwise_decisions(m, x);
  EXPECT_EQ(d(0, 1), 0.5);
  EXPECT_EQ(d(0, 2), -0.25);
  EXPECT_EQ(d(1, 2), 2.0);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t l = 0; l < 3; ++l) {
      if (k != l) EXPECT_EQ(d(k, l) + d(l, k), 0.0);
    }
  }
  EXPECT_THROW(pairwise_decisions(m, sample({1.0}, -1)), Error);
}

TEST(PairwiseDecisions, ClassSideOfEverySeparator) {
  // Class 1 wins against everyone when x1 is large.
  std::vector<BinarySvm> svms = {BinarySvm::linear({-1.0, 0.0}, 0.0), BinarySvm::linear({0.0, 1.0}, 0.0),
                                 BinarySvm::linear({1.0, 0.0}, 0.0)};
  const PairwiseModel m(LabelSet({"a", "b"}), identity_standardizer(2), SvmParams{}, svms);
  const auto d = pairwise_decisions(m, sample({5.0, 0.1}, -1));
  EXPECT_GT(d(1, 0), 0.0);
  EXPECT_GT(d(1, 2), 0.0);
  EXPECT_EQ(window_votes(d), (std::vector<std::int64_t>{1, 2, 0}));
}

TEST(Votes, ExactZeroVotesForNeither) {
  const PairwiseDecisions d(3, {0.0, 1.0, -2.0});
  EXPECT_EQ(window_votes(d), (std::vector<std::int64_t>{1, 0, 1}));
}

PairwiseModel unanimous_model() {
  // Class 1 wins both of its contests; 0 vs 2 is undecided.
  std::vector<BinarySvm> svms = {BinarySvm::linear({0.0}, -1.0), BinarySvm::linear({0.0}, 0.0),
                                 BinarySvm::linear({0.0}, 1.0)};
  return PairwiseModel(LabelSet({"a", "b"}), identity_standardizer(1), SvmParams{}, svms);
}

TEST(SegmentVotes, OneWindowUnanimous) {
  const PairwiseModel m = unanimous_model();
  const std::vector<CandidatePair> pairs = {{"A", "A"}};
  const std::vector<std::vector<FeatureVector>> one = {{sample({0.3}, -1)}};
  const VoteMatrix v = segment_votes(m, one, pairs);
  EXPECT_EQ(v.votes, (std::vector<std::int64_t>{0, 2, 0}));
  const std::vector<std::vector<FeatureVector>> two = {{sample({0.3}, -1), sample({0.3}, -1)}};
  EXPECT_EQ(segment_votes(m, two, pairs).votes, (std::vector<std::int64_t>{0, 4, 0}));
}

TEST(SegmentVotes, EmptyColumnRejected) {
  const PairwiseModel m = unanimous_model();
  const std::vector<CandidatePair> pairs = {{"A", "A"}, {"B", "B"}};
  const std::vector<std::vector<FeatureVector>> d = {{sample({0.3}, -1)}, {}};
  EXPECT_THROW(segment_votes(m, d, pairs), Error);
}

TEST(SegmentVotes, MatchesIndicatorSumAndIsAdditive) {
  std::mt19937_64 rng(7);
  const std::size_t classes = 3;
  const std::size_t dim = 4;
  std::vector<BinarySvm> svms;
  for (int i = 0; i < 3; ++i) {
    std::vector<double> w(dim);
    for (double& x : w) x = testing::uniform(rng, -1, 1);
    svms.push_back(BinarySvm::linear(w, testing::uniform(rng, -0.5, 0.5)));
  }
  const PairwiseModel m(LabelSet({"a", "b"}), identity_standardizer(dim), SvmParams{}, svms);
  const std::vector<CandidatePair> pairs = {{"A", "A"}, {"B", "B"}, {"A", "B"}};
  std::vector<std::vector<FeatureVector>> first(3), second(3), both(3);
  for (std::size_t col = 0; col < 3; ++col) {
    for (int w = 0; w < 10; ++w) {
      std::vector<double> x(dim);
      for (double& v : x) v = testing::uniform(rng, -2, 2);
      (w < 6 ? first : second)[col].push_back(sample(x, -1));
      both[col].push_back(sample(x, -1));
    }
  }
  const VoteMatrix v = segment_votes(m, both, pairs);
  for (std::size_t col = 0; col < 3; ++col) {
    std::vector<std::int64_t> expect(classes, 0);
    for (const auto& x : both[col]) {
      for (std::size_t k = 0; k < classes; ++k) {
        for (std::size_t l = k + 1; l < classes; ++l) {
          const BinarySvm& svm = m.model(k, l);
          double s = svm.bias();
          for (std::size_t d = 0; d < dim; ++d) s += svm.weights()[d] * x.values[d];
          if (s > 0) ++expect[k];
          if (s < 0) ++expect[l];
        }
      }
    }
    for (std::size_t k = 0; k < classes; ++k) {
      EXPECT_EQ(v.at(k, col), expect[k]);
      EXPECT_GE(v.at(k, col), 0);
      EXPECT_LE(v.at(k, col), 10 * static_cast<std::int64_t>(classes - 1));
    }
  }
  const VoteMatrix a = segment_votes(m, first, pairs);
  const VoteMatrix b = segment_votes(m, second, pairs);
  for (std::size_t i = 0; i < v.votes.size(); ++i) EXPECT_EQ(v.votes[i], a.votes[i] + b.votes[i]);
}

TEST(Argmax, ExamplesAndTies) {
  const std::vector<int> ids = {1, 2, 3};
  EXPECT_EQ(argmax_class(ids, std::vector<std::vector<double>>{{0.1, 0.9, 0.3}}), 2);
  EXPECT_EQ(argmax_class(ids, std::vector<std::vector<double>>{{0.5, 0.5, 0.1}}), 1);
  EXPECT_EQ(argmax_class(std::vector<int>{3, 2, 1}, std::vector<std::vector<double>>{{0.2, 0.7, 0.7}}), 1);
  EXPECT_EQ(argmax_class(ids, std::vector<std::vector<double>>{{1.0, 0.0, 0.0}, {-0.5, 0.8, 0.0}}), 2);
  EXPECT_EQ(argmax_class(ids, std::vector<std::vector<double>>{{1.0, 0.0, 0.0}, {-0.1, 0.8, 0.0}}), 1);
  EXPECT_THROW(argmax_class(ids, std::vector<std::vector<double>>{}), Error);
}

TEST(Argmax, PositiveScalingInvariant) {
  std::mt19937_64 rng(8);
  const std::vector<int> ids = {1, 2, 3, 4, 5};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> s(4, std::vector<double>(5));
    for (auto& row : s) {
      for (double& v : row) v = testing::uniform(rng, -1, 1);
    }
    const double c = testing::uniform(rng, 0.01, 100.0);
    auto scaled = s;
    for (auto& row : scaled) {
      for (double& v : row) v *= c;
    }
    EXPECT_EQ(argmax_class(ids, s), argmax_class(ids, scaled));
  }
}

// One person per scene running through four single-person templates.
std::vector<Segment> single_type_scenes(int group, int scenes) {
  std::vector<Segment> out;
  const std::vector<std::string> names = {"sit", "walk", "run", "wave_robot"};
  for (int s = 0; s < scenes; ++s) {
    SceneScript script;
    script.id = "g" + std::to_string(group) + "s" + std::to_string(s);
    script.persons = {"p" + std::to_string(group)};
    script.seed = static_cast<std::uint64_t>(1000 * group + s);
    script.style.amplitude_scale = 0.9 + 0.05 * group;
    script.style.frequency_scale = 1.1 - 0.05 * group;
    for (int k = 0; k < 4; ++k) {
      const std::string& name = names[static_cast<std::size_t>((k + s) % 4)];
      script.timeline.push_back({CandidatePair(script.persons[0], script.persons[0]), name, 50 * k, 50 * k + 50});
    }
    for (Segment& seg : generate_scene(script)) out.push_back(std::move(seg));
  }
  return out;
}

TEST(OneVsAll, SingleTypeBenchmarkHeldOut) {
  PipelineConfig pc;
  const FeatureExtractor ex(pc);
  const LabelSet labels({"sit", "walk", "run", "wave_robot"});
  std::vector<FeatureVector> train;
  for (int g = 0; g < 2; ++g) {
    for (const Segment& seg : single_type_scenes(g, 3)) {
      for (auto& fv : ex.extract(seg, enumerate_pairs(seg.persons)[0], &labels, 3)) train.push_back(std::move(fv));
    }
  }
  const OneVsAllModel m = train_one_vs_all(train, labels, config());
  int correct = 0;
  int total = 0;
  for (const Segment& seg : single_type_scenes(2, 4)) {
    const CandidatePair self = enumerate_pairs(seg.persons)[0];
    const auto windows = ex.extract(seg, self);
    const ClassLabel predicted = argmax_classify(m, windows);
    correct += predicted.name == seg.ground_truth->at(self) ? 1 : 0;
    ++total;
  }
  EXPECT_GE(static_cast<double>(correct) / total, 0.95) << correct << "/" << total;
  EXPECT_THROW(argmax_classify(m, std::vector<FeatureVector>{}), Error);
}

}  // namespace
}  // namespace rhi
