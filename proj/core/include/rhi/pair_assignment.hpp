#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rhi/classifier.hpp"
#include "rhi/core_model.hpp"

namespace rhi {

struct AssignmentProblem {
  VoteMatrix votes;
  int null_class = 0;
  std::vector<PersonId> persons;  // sorted; votes.columns == enumerate_pairs(persons)
};

struct AssignmentSolution {
  std::map<CandidatePair, int> labels;
  std::int64_t objective = 0;

  friend bool operator==(const AssignmentSolution&, const AssignmentSolution&) = default;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;  // one line per problem
  std::vector<PersonId> persons;        // persons named in any violation

  explicit operator bool() const { return feasible; }
};

AssignmentProblem make_problem(VoteMatrix votes, int null_class);

// Exact optimum: every feasible structure is an involution of the person set
// (fixed points = self-pairs, 2-cycles = cross pairs); selected pairs take
// their best non-null class, all others are null. Ties prefer the
// lexicographically smallest set of selected column indices, then the
// smallest class ids.
AssignmentSolution solve_exact(const AssignmentProblem& problem);

inline constexpr std::size_t kOracleMaxPersons = 6;

// Independent check: depth-first search over a class for every pair, pruning
// only on the per-person coverage constraint. Throws above kOracleMaxPersons.
AssignmentSolution brute_force_oracle(const AssignmentProblem& problem);

FeasibilityReport feasibility_check(const AssignmentSolution& solution, const std::vector<PersonId>& persons,
                                    int null_class);

// Sum of votes[label(pair)][pair] for the labels in `solution`.
std::int64_t assignment_objective(const AssignmentProblem& problem, const AssignmentSolution& solution);

}  // namespace rhi
