#include <gtest/gtest.h>

#include <set>

#include "rhi/core_model.hpp"
#include "rhi/error.hpp"
#include "test_support.hpp"

namespace rhi {
namespace {

TEST(EnumeratePairs, SinglePerson) {
  const auto pairs = enumerate_pairs(std::vector<PersonId>{"A"});
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0], CandidatePair("A", "A"));
}

TEST(EnumeratePairs, TwoPersonsSelfPairsFirst) {
  const auto pairs = enumerate_pairs(std::set<PersonId>{"B", "A"});
  const std::vector<CandidatePair> expected = {{"A", "A"}, {"B", "B"}, {"A", "B"}};
  EXPECT_EQ(pairs, expected);
}

TEST(EnumeratePairs, FivePersons) {
  const auto pairs = enumerate_pairs(std::vector<PersonId>{"E", "D", "C", "B", "A"});
  ASSERT_EQ(pairs.size(), 15u);
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(pairs[static_cast<std::size_t>(i)].is_self());
  for (std::size_t i = 5; i + 1 < pairs.size(); ++i) EXPECT_LT(pairs[i], pairs[i + 1]);
  EXPECT_EQ(pairs[5], CandidatePair("A", "B"));
  EXPECT_EQ(pairs.back(), CandidatePair("D", "E"));
}

TEST(EnumeratePairs, EmptyIsAnError) {
  try {
    enumerate_pairs(std::vector<PersonId>{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("no persons"), std::string::npos);
  }
}

TEST(EnumeratePairs, Pure) {
  const std::vector<PersonId> persons = {"p3", "p1", "p2"};
  EXPECT_EQ(enumerate_pairs(persons), enumerate_pairs(persons));
  EXPECT_EQ(enumerate_pairs(persons), enumerate_pairs(std::set<PersonId>(persons.begin(), persons.end())));
}

TEST(DescriptorCount, Examples) {
  EXPECT_EQ(descriptor_count(1), 1);
  EXPECT_EQ(descriptor_count(2), 3);
  EXPECT_EQ(descriptor_count(3), 6);
  EXPECT_EQ(descriptor_count(4), 10);
  EXPECT_EQ(descriptor_count(5), 15);
  EXPECT_THROW(descriptor_count(0), Error);
}

TEST(DescriptorCount, MatchesExhaustiveEnumeration) {
  for (int n = 1; n <= 10; ++n) {
    std::vector<PersonId> persons;
    for (int i = 0; i < n; ++i) persons.push_back("p" + std::to_string(i));
    // Count unordered pairs with repetition directly.
    std::int64_t brute = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) ++brute;
    }
    EXPECT_EQ(descriptor_count(n), brute) << n;
    EXPECT_EQ(static_cast<std::int64_t>(enumerate_pairs(persons).size()), brute) << n;
  }
}

TEST(CandidatePair, Canonical) {
  EXPECT_EQ(CandidatePair("b", "a"), CandidatePair("a", "b"));
  EXPECT_EQ(CandidatePair("b", "a").first(), "a");
  EXPECT_TRUE(CandidatePair("x", "x").is_self());
  EXPECT_TRUE(CandidatePair("a", "b").contains("b"));
  EXPECT_FALSE(CandidatePair("a", "b").contains("c"));
}

TEST(LabelSet, NullFirstAndUnique) {
  const LabelSet labels({"walk", "hug"});
  ASSERT_EQ(labels.size(), 3u);
  EXPECT_EQ(labels.null_id(), 0);
  int nulls = 0;
  for (const auto& l : labels.labels()) nulls += l.is_null ? 1 : 0;
  EXPECT_EQ(nulls, 1);
  EXPECT_EQ(labels.id_of("hug"), 2);
  EXPECT_FALSE(labels.find("run").has_value());
  EXPECT_THROW(labels.id_of("run"), Error);
  EXPECT_THROW(LabelSet({"walk", "null"}), Error);
  EXPECT_THROW(LabelSet({"walk", "walk"}), Error);
}

TEST(Segment, ValidateReportsMissingFrame) {
  std::mt19937_64 rng(3);
  Segment seg = testing::random_segment(rng, {"A", "B"}, 10, 8);
  EXPECT_NO_THROW(seg.validate());
  seg.tracks["B"].joints.erase(seg.tracks["B"].joints.begin() + 3);
  seg.tracks["B"].joints.push_back(seg.tracks["B"].joints.back());
  seg.tracks["B"].joints.back().timestamp = 17;
  try {
    seg.validate();
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("person B missing frame 13"), std::string::npos) << e.what();
  }
}

TEST(Segment, NonFiniteJointRejected) {
  std::mt19937_64 rng(4);
  Segment seg = testing::random_segment(rng, {"A"}, 0, 4);
  seg.tracks["A"].joints[2].positions[5].y = std::nan("");
  EXPECT_THROW(seg.validate(), Error);
}

TEST(BoundingBox, IntersectionArea) {
  const BoundingBox a{0, 0, 10, 10};
  const BoundingBox b{5, 5, 15, 20};
  EXPECT_DOUBLE_EQ(a.area(), 100.0);
  EXPECT_DOUBLE_EQ(intersection_area(a, b), 25.0);
  EXPECT_DOUBLE_EQ(intersection_area(a, BoundingBox{20, 20, 30, 30}), 0.0);
}

}  // namespace
}  // namespace rhi
