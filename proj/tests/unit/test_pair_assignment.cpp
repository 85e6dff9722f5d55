#include <gtest/gtest.h>

#include <random>

#include "rhi/error.hpp"
#include "rhi/pair_assignment.hpp"
#include "test_support.hpp"

namespace rhi {
namespace {

std::vector<PersonId> people(std::size_t n) {
  std::vector<PersonId> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(std::string(1, static_cast<char>('A' + i)));
  return p;
}

VoteMatrix random_votes(std::mt19937_64& rng, std::size_t n, std::size_t classes, std::int64_t max_vote) {
  VoteMatrix v(classes, enumerate_pairs(people(n)));
  std::uniform_int_distribution<std::int64_t> d(0, max_vote);
  for (auto& x : v.votes) x = d(rng);
  return v;
}

// Enumerates every labeling (classes^columns) and keeps the feasible best.
std::int64_t exhaustive_best(const AssignmentProblem& p) {
  const std::size_t cols = p.votes.columns.size();
  std::vector<std::size_t> digit(cols, 0);
  std::int64_t best = -1;
  while (true) {
    std::map<PersonId, int> cover;
    std::int64_t obj = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      obj += p.votes.at(digit[c], c);
      if (static_cast<int>(digit[c]) == p.null_class) continue;
      const auto& pair = p.votes.columns[c];
      ++cover[pair.first()];
      if (!pair.is_self()) ++cover[pair.second()];
    }
    bool ok = true;
    for (const auto& person : p.persons) ok = ok && cover[person] == 1;
    if (ok) best = std::max(best, obj);
    std::size_t c = 0;
    while (c < cols && ++digit[c] == p.votes.classes) digit[c++] = 0;
    if (c == cols) break;
  }
  return best;
}

TEST(SolveExact, TwoPersonsPreferInteraction) {
  // Columns: AA, BB, AB. Classes: null, single, interaction.
  VoteMatrix v(3, enumerate_pairs(people(2)));
  v.at(0, 0) = 1, v.at(1, 0) = 3, v.at(2, 0) = 0;
  v.at(0, 1) = 1, v.at(1, 1) = 2, v.at(2, 1) = 0;
  v.at(0, 2) = 0, v.at(1, 2) = 0, v.at(2, 2) = 9;
  const auto sol = solve_exact(make_problem(v, 0));
  EXPECT_EQ(sol.labels.at(CandidatePair("A", "B")), 2);
  EXPECT_EQ(sol.labels.at(CandidatePair("A", "A")), 0);
  EXPECT_EQ(sol.labels.at(CandidatePair("B", "B")), 0);
  EXPECT_EQ(sol.objective, 11);
}

TEST(SolveExact, TwoPersonsPreferSingles) {
  VoteMatrix v(3, enumerate_pairs(people(2)));
  v.at(1, 0) = 6;
  v.at(1, 1) = 5;
  v.at(2, 2) = 9;
  const auto sol = solve_exact(make_problem(v, 0));
  EXPECT_EQ(sol.labels.at(CandidatePair("A", "A")), 1);
  EXPECT_EQ(sol.labels.at(CandidatePair("B", "B")), 1);
  EXPECT_EQ(sol.labels.at(CandidatePair("A", "B")), 0);
  EXPECT_EQ(sol.objective, 11);
}

TEST(SolveExact, SinglePersonTakesBestValid) {
  VoteMatrix v(3, enumerate_pairs(people(1)));
  v.at(0, 0) = 100;
  v.at(1, 0) = 2;
  v.at(2, 0) = 4;
  const auto sol = solve_exact(make_problem(v, 0));
  EXPECT_EQ(sol.labels.at(CandidatePair("A", "A")), 2);
  EXPECT_EQ(sol.objective, 4);
}

TEST(SolveExact, AllZeroVotesStillFeasible) {
  VoteMatrix v(4, enumerate_pairs(people(4)));
  const auto p = make_problem(v, 0);
  const auto sol = solve_exact(p);
  EXPECT_TRUE(feasibility_check(sol, p.persons, 0));
  EXPECT_EQ(sol.objective, 0);
  // Tie rule: lexicographically smallest selected columns are the self-pairs.
  for (const auto& person : p.persons) EXPECT_EQ(sol.labels.at(CandidatePair(person, person)), 1);
}

TEST(SolveExact, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto p = make_problem(random_votes(rng, n, 3, 8), 0);
      const auto sol = solve_exact(p);
      EXPECT_EQ(sol.objective, exhaustive_best(p));
      EXPECT_EQ(assignment_objective(p, sol), sol.objective);
    }
  }
}

TEST(SolveExact, MatchesOracleUpToSix) {
  std::mt19937_64 rng(12);
  for (std::size_t n = 2; n <= kOracleMaxPersons; ++n) {
    for (int trial = 0; trial < 30; ++trial) {
      const int null_class = static_cast<int>(trial % 3);
      const auto p = make_problem(random_votes(rng, n, 3, 20), null_class);
      const auto exact = solve_exact(p);
      const auto oracle = brute_force_oracle(p);
      EXPECT_EQ(exact.objective, oracle.objective) << "n=" << n;
      EXPECT_TRUE(feasibility_check(exact, p.persons, null_class));
      EXPECT_TRUE(feasibility_check(oracle, p.persons, null_class));
      EXPECT_EQ(assignment_objective(p, oracle), oracle.objective);
    }
  }
}

TEST(SolveExact, LargeSceneIsFeasible) {
  std::mt19937_64 rng(13);
  const auto p = make_problem(random_votes(rng, 10, 5, 50), 0);
  const auto sol = solve_exact(p);
  EXPECT_TRUE(feasibility_check(sol, p.persons, 0));
  EXPECT_EQ(assignment_objective(p, sol), sol.objective);
}

TEST(SolveExact, Deterministic) {
  std::mt19937_64 rng(14);
  const auto p = make_problem(random_votes(rng, 5, 4, 3), 0);
  EXPECT_EQ(solve_exact(p), solve_exact(p));
}

TEST(BruteForceOracle, RefusesLargeScenes) {
  VoteMatrix v(2, enumerate_pairs(people(kOracleMaxPersons + 1)));
  EXPECT_THROW(brute_force_oracle(make_problem(v, 0)), Error);
}

TEST(MakeProblem, RejectsMalformedInput) {
  VoteMatrix v(3, enumerate_pairs(people(2)));
  v.at(1, 1) = -1;
  EXPECT_THROW(make_problem(v, 0), Error);
  VoteMatrix w(3, enumerate_pairs(people(2)));
  EXPECT_THROW(make_problem(w, 3), Error);
  VoteMatrix one(1, enumerate_pairs(people(2)));
  EXPECT_THROW(make_problem(one, 0), Error);
  VoteMatrix missing(3, {CandidatePair("A", "A"), CandidatePair("A", "B")});
  EXPECT_THROW(make_problem(missing, 0), Error);
}

TEST(Feasibility, ReportsDoubleBookedPerson) {
  AssignmentSolution s;
  s.labels[CandidatePair("A", "A")] = 1;
  s.labels[CandidatePair("B", "B")] = 0;
  s.labels[CandidatePair("A", "B")] = 2;
  const auto r = feasibility_check(s, {"A", "B"}, 0);
  EXPECT_FALSE(r);
  EXPECT_EQ(r.persons, (std::vector<PersonId>{"A"}));
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NE(r.violations[0].find("person A"), std::string::npos);
}

TEST(Feasibility, ReportsUncoveredAndMissing) {
  AssignmentSolution s;
  s.labels[CandidatePair("A", "A")] = 1;
  s.labels[CandidatePair("B", "B")] = 0;
  const auto r = feasibility_check(s, {"A", "B"}, 0);
  EXPECT_FALSE(r);
  EXPECT_EQ(r.persons, (std::vector<PersonId>{"A", "B"}));
  EXPECT_EQ(r.violations.size(), 2u);
}

}  // namespace
}  // namespace rhi
