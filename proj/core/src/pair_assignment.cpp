#include "rhi/pair_assignment.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <set>

#include "rhi/error.hpp"

namespace rhi {

namespace {

void validate(const AssignmentProblem& p) {
  if (p.persons.empty()) ThrowInvalid("assignment: no persons");
  if (!std::is_sorted(p.persons.begin(), p.persons.end())) ThrowInvalid("assignment: persons must be sorted");
  const auto pairs = enumerate_pairs(p.persons);
  if (p.votes.columns != pairs) ThrowInvalid("assignment: vote columns do not match the candidate pairs");
  if (p.votes.classes < 2) ThrowInvalid("assignment: need the null class and at least one valid class");
  if (p.votes.votes.size() != p.votes.classes * pairs.size()) ThrowInvalid("assignment: malformed vote matrix");
  if (p.null_class < 0 || static_cast<std::size_t>(p.null_class) >= p.votes.classes) {
    ThrowInvalid("assignment: null class out of range");
  }
  for (auto v : p.votes.votes) {
    if (v < 0) ThrowInvalid("assignment: negative vote");
  }
}

// Column index of (i, j) in enumerate_pairs order for n persons, i <= j.
struct ColumnIndex {
  std::size_t n;
  std::size_t operator()(std::size_t i, std::size_t j) const {
    if (i == j) return i;
    if (j < i) std::swap(i, j);
    return n + i * n - i * (i + 1) / 2 + (j - i - 1);
  }
};

struct BestValid {
  int cls = -1;
  std::int64_t votes = 0;
};

BestValid best_valid(const VoteMatrix& v, std::size_t col, int null_class) {
  BestValid b;
  for (std::size_t k = 0; k < v.classes; ++k) {
    if (static_cast<int>(k) == null_class) continue;
    if (b.cls < 0 || v.at(k, col) > b.votes) {
      b.cls = static_cast<int>(k);
      b.votes = v.at(k, col);
    }
  }
  return b;
}

class InvolutionSearch {
 public:
  explicit InvolutionSearch(const AssignmentProblem& p)
      : p_(p), n_(p.persons.size()), col_(ColumnIndex{n_}), used_(n_, false) {
    const std::size_t cols = p.votes.columns.size();
    gain_.resize(cols);
    best_.resize(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      best_[c] = best_valid(p.votes, c, p.null_class);
      gain_[c] = best_[c].votes - p.votes.at(static_cast<std::size_t>(p.null_class), c);
      base_ += p.votes.at(static_cast<std::size_t>(p.null_class), c);
    }
    // Optimistic per-person share: a self gain, or half of a cross gain.
    person_bound_.assign(n_, std::numeric_limits<double>::lowest());
    for (std::size_t i = 0; i < n_; ++i) {
      person_bound_[i] = static_cast<double>(gain_[col_(i, i)]);
      for (std::size_t j = 0; j < n_; ++j) {
        if (j != i) person_bound_[i] = std::max(person_bound_[i], gain_[col_(i, j)] / 2.0);
      }
    }
  }

  AssignmentSolution run() {
    recurse(0, 0);
    AssignmentSolution sol;
    for (std::size_t c = 0; c < p_.votes.columns.size(); ++c) {
      sol.labels[p_.votes.columns[c]] = p_.null_class;
    }
    for (std::size_t c : best_selected_) sol.labels[p_.votes.columns[c]] = best_[c].cls;
    sol.objective = base_ + best_gain_;
    return sol;
  }

 private:
  double remaining_bound() const {
    double b = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!used_[i]) b += person_bound_[i];
    }
    return b;
  }

  void consider() {
    std::vector<std::size_t> sorted = selected_;
    std::sort(sorted.begin(), sorted.end());
    if (!have_best_ || gain_sum_ > best_gain_ || (gain_sum_ == best_gain_ && sorted < best_selected_)) {
      have_best_ = true;
      best_gain_ = gain_sum_;
      best_selected_ = std::move(sorted);
    }
  }

  void recurse(std::size_t from, std::size_t depth) {
    std::size_t i = from;
    while (i < n_ && used_[i]) ++i;
    if (i == n_) {
      consider();
      return;
    }
    if (have_best_ && static_cast<double>(gain_sum_) + remaining_bound() < static_cast<double>(best_gain_)) {
      return;
    }
    used_[i] = true;
    take(col_(i, i), i + 1, depth);
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (used_[j]) continue;
      used_[j] = true;
      take(col_(i, j), i + 1, depth);
      used_[j] = false;
    }
    used_[i] = false;
  }

  void take(std::size_t column, std::size_t next, std::size_t depth) {
    selected_.push_back(column);
    gain_sum_ += gain_[column];
    recurse(next, depth + 1);
    gain_sum_ -= gain_[column];
    selected_.pop_back();
  }

  const AssignmentProblem& p_;
  std::size_t n_;
  ColumnIndex col_;
  std::vector<bool> used_;
  std::vector<std::int64_t> gain_;
  std::vector<BestValid> best_;
  std::vector<double> person_bound_;
  std::int64_t base_ = 0;

  std::vector<std::size_t> selected_;
  std::int64_t gain_sum_ = 0;
  bool have_best_ = false;
  std::int64_t best_gain_ = 0;
  std::vector<std::size_t> best_selected_;
};

}  // namespace

AssignmentProblem make_problem(VoteMatrix votes, int null_class) {
  AssignmentProblem p;
  std::set<PersonId> persons;
  for (const auto& c : votes.columns) {
    persons.insert(c.first());
    persons.insert(c.second());
  }
  p.persons.assign(persons.begin(), persons.end());
  p.votes = std::move(votes);
  p.null_class = null_class;
  validate(p);
  return p;
}

AssignmentSolution solve_exact(const AssignmentProblem& problem) {
  validate(problem);
  return InvolutionSearch(problem).run();
}

AssignmentSolution brute_force_oracle(const AssignmentProblem& problem) {
  validate(problem);
  const std::size_t n = problem.persons.size();
  if (n > kOracleMaxPersons) ThrowInvalid("oracle scale exceeded");
  const VoteMatrix& v = problem.votes;
  const std::size_t cols = v.columns.size();
  const auto null_class = static_cast<std::size_t>(problem.null_class);

  // For each person, the last column (in enumeration order) that contains them;
  // once the search passes it, that person's coverage is final.
  std::vector<std::vector<std::size_t>> members(cols);
  std::vector<std::size_t> last_column(n, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (v.columns[c].contains(problem.persons[i])) {
        members[c].push_back(i);
        last_column[i] = c;
      }
    }
  }

  std::vector<int> labels(cols, 0);
  std::vector<int> covered(n, 0);
  std::optional<std::int64_t> best;
  std::vector<int> best_labels;
  std::int64_t objective = 0;

  auto recurse = [&](auto&& self, std::size_t c) -> void {
    if (c == cols) {
      for (int cov : covered) {
        if (cov != 1) return;
      }
      if (!best || objective > *best) {
        best = objective;
        best_labels = labels;
      }
      return;
    }
    for (std::size_t k = 0; k < v.classes; ++k) {
      const bool valid = k != null_class;
      labels[c] = static_cast<int>(k);
      if (valid) {
        for (std::size_t i : members[c]) ++covered[i];
      }
      bool ok = true;
      for (std::size_t i : members[c]) {
        if (covered[i] > 1 || (last_column[i] == c && covered[i] != 1)) ok = false;
      }
      if (ok) {
        objective += v.at(k, c);
        self(self, c + 1);
        objective -= v.at(k, c);
      }
      if (valid) {
        for (std::size_t i : members[c]) --covered[i];
      }
    }
  };
  recurse(recurse, 0);
  if (!best) ThrowInvariant("oracle found no feasible assignment");
  AssignmentSolution sol;
  for (std::size_t c = 0; c < cols; ++c) sol.labels[v.columns[c]] = best_labels[c];
  sol.objective = *best;
  return sol;
}

FeasibilityReport feasibility_check(const AssignmentSolution& solution, const std::vector<PersonId>& persons,
                                    int null_class) {
  FeasibilityReport report;
  std::set<PersonId> named;
  auto violate = [&](const std::string& line, std::initializer_list<PersonId> who) {
    report.feasible = false;
    report.violations.push_back(line);
    named.insert(who.begin(), who.end());
  };
  std::vector<CandidatePair> pairs;
  try {
    pairs = enumerate_pairs(persons);
  } catch (const Error&) {
    report.feasible = false;
    report.violations.push_back("person list is empty or has duplicates");
    return report;
  }
  for (const auto& pair : pairs) {
    if (!solution.labels.contains(pair)) violate("pair " + pair.to_string() + " has no label", {pair.first(), pair.second()});
  }
  for (const auto& [pair, label] : solution.labels) {
    if (std::find(pairs.begin(), pairs.end(), pair) == pairs.end()) {
      violate("pair " + pair.to_string() + " is not a candidate pair", {pair.first(), pair.second()});
    }
  }
  for (const auto& person : persons) {
    int valid = 0;
    for (const auto& [pair, label] : solution.labels) {
      if (label != null_class && pair.contains(person)) ++valid;
    }
    if (valid != 1) {
      violate("person " + person + " is in " + std::to_string(valid) + " valid pairs (expected exactly 1)",
              {person});
    }
  }
  report.persons.assign(named.begin(), named.end());
  return report;
}

std::int64_t assignment_objective(const AssignmentProblem& problem, const AssignmentSolution& solution) {
  std::int64_t total = 0;
  for (std::size_t c = 0; c < problem.votes.columns.size(); ++c) {
    auto it = solution.labels.find(problem.votes.columns[c]);
    if (it == solution.labels.end()) ThrowInvalid("assignment_objective: unlabeled pair");
    total += problem.votes.at(static_cast<std::size_t>(it->second), c);
  }
  return total;
}

}  // namespace rhi
