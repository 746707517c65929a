#pragma once

// Candidate-guard x witness incidence and the two set-cover solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gallery/bitset.hpp"
#include "gallery/coverage.hpp"

namespace gallery {

struct CoverInstance {
  std::vector<Point> candidates;
  std::vector<Point> witnesses;
  std::vector<Bitset> incidence;  // incidence[c].test(w): candidate c sees witness w

  std::size_t candidate_count() const { return candidates.size(); }
  std::size_t witness_count() const { return witnesses.size(); }
  bool sees(std::size_t c, std::size_t w) const { return incidence[c].test(w); }

  // Witnesses seen by no candidate.
  std::vector<std::size_t> unseeable() const {
    Bitset any(witnesses.size());
    for (const auto& row : incidence) any |= row;
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < witnesses.size(); ++w)
      if (!any.test(w)) out.push_back(w);
    return out;
  }
  bool feasible() const { return !candidates.empty() && unseeable().empty(); }
};

class InfeasibleCandidates : public std::runtime_error {
 public:
  explicit InfeasibleCandidates(std::optional<Point> witness)
      : std::runtime_error("InfeasibleCandidates: some witness is seen by no candidate"), witness_(std::move(witness)) {}
  const std::optional<Point>& witness() const { return witness_; }

 private:
  std::optional<Point> witness_;
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t nodes)
      : std::runtime_error("BudgetExceeded: branch-and-bound node cap " + std::to_string(nodes)) {}
};

inline void require_feasible(const CoverInstance& inst) {
  if (inst.candidates.empty()) throw InfeasibleCandidates(std::nullopt);
  auto bad = inst.unseeable();
  if (!bad.empty()) throw InfeasibleCandidates(inst.witnesses[bad.front()]);
}

// Incidence by exact membership in each candidate's visibility polygon.
inline CoverInstance make_instance(const Polygon& poly, std::vector<Point> candidates, std::vector<Point> witnesses,
                                   const std::vector<VisibilityPolygon>& regions) {
  CoverInstance inst;
  inst.candidates = std::move(candidates);
  inst.witnesses = std::move(witnesses);
  inst.incidence.assign(inst.candidates.size(), Bitset(inst.witnesses.size()));
  for (std::size_t c = 0; c < inst.candidates.size(); ++c)
    for (std::size_t w = 0; w < inst.witnesses.size(); ++w)
      if (regions[c].contains(poly, inst.witnesses[w])) inst.incidence[c].set(w);
  return inst;
}

struct CoverSolution {
  std::vector<std::size_t> chosen;  // candidate indices, ascending
  std::uint64_t nodes = 0;
};

inline CoverSolution greedy_cover(const CoverInstance& inst) {
  require_feasible(inst);
  Bitset uncovered(inst.witness_count());
  uncovered.set_all();
  CoverSolution sol;
  while (uncovered.any()) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < inst.candidate_count(); ++c) {
      std::size_t gain = inst.incidence[c].count_and(uncovered);
      if (gain > best_gain) {
        best = c;
        best_gain = gain;
      }
    }
    sol.chosen.push_back(best);
    uncovered.and_not(inst.incidence[best]);
  }
  std::sort(sol.chosen.begin(), sol.chosen.end());
  return sol;
}

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const CoverInstance& inst, std::uint64_t node_limit) : inst_(inst), limit_(node_limit) {
    // Keep one representative of each maximal row; dominated rows never help.
    const std::size_t nc = inst.candidate_count();
    for (std::size_t c = 0; c < nc; ++c) {
      bool dominated = false;
      for (std::size_t d = 0; d < nc && !dominated; ++d) {
        if (d == c || !inst.incidence[c].subset_of(inst.incidence[d])) continue;
        dominated = !(inst.incidence[d].subset_of(inst.incidence[c])) || d < c;
      }
      if (!dominated) keep_.push_back(c);
    }
    const std::size_t nw = inst.witness_count();
    covering_.assign(nw, Bitset(keep_.size()));
    for (std::size_t k = 0; k < keep_.size(); ++k)
      inst.incidence[keep_[k]].for_each([&](std::size_t w) { covering_[w].set(k); });
  }

  CoverSolution run(std::vector<std::size_t> upper) {
    best_ = std::move(upper);
    Bitset uncovered(inst_.witness_count());
    uncovered.set_all();
    std::vector<std::size_t> chosen;
    search(uncovered, chosen);
    CoverSolution sol{best_, nodes_};
    std::sort(sol.chosen.begin(), sol.chosen.end());
    return sol;
  }

 private:
  // Witnesses whose covering sets are pairwise disjoint each need their own guard.
  std::size_t lower_bound(const Bitset& uncovered) const {
    Bitset used(keep_.size());
    std::size_t lb = 0;
    uncovered.for_each([&](std::size_t w) {
      if (!covering_[w].intersects(used)) {
        used |= covering_[w];
        ++lb;
      }
    });
    return lb;
  }

  void search(const Bitset& uncovered, std::vector<std::size_t>& chosen) {
    if (++nodes_ > limit_) throw BudgetExceeded(limit_);
    if (uncovered.none()) {
      if (chosen.size() < best_.size()) best_ = chosen;
      return;
    }
    if (chosen.size() + lower_bound(uncovered) >= best_.size()) return;
    std::size_t pick = 0, fewest = SIZE_MAX;
    uncovered.for_each([&](std::size_t w) {
      std::size_t c = covering_[w].count();
      if (c < fewest) {
        fewest = c;
        pick = w;
      }
    });
    covering_[pick].for_each([&](std::size_t k) {
      if (chosen.size() + 1 >= best_.size()) return;
      Bitset next = uncovered;
      next.and_not(inst_.incidence[keep_[k]]);
      chosen.push_back(keep_[k]);
      search(next, chosen);
      chosen.pop_back();
    });
  }

  const CoverInstance& inst_;
  std::uint64_t limit_;
  std::uint64_t nodes_ = 0;
  std::vector<std::size_t> keep_;
  std::vector<Bitset> covering_;
  std::vector<std::size_t> best_;
};

}  // namespace detail

inline constexpr std::uint64_t kDefaultNodeLimit = 10'000'000;

inline CoverSolution exact_cover(const CoverInstance& inst, std::uint64_t node_limit = kDefaultNodeLimit) {
  require_feasible(inst);
  CoverSolution greedy = greedy_cover(inst);
  detail::BranchAndBound bb(inst, node_limit);
  return bb.run(greedy.chosen);
}

inline GuardSet guards_of(const CoverInstance& inst, const CoverSolution& sol) {
  GuardSet g;
  for (std::size_t c : sol.chosen) g.guards.push_back(inst.candidates[c]);
  return g;
}

inline GuardSet solve_exact(const CoverInstance& inst, std::uint64_t node_limit = kDefaultNodeLimit) {
  return guards_of(inst, exact_cover(inst, node_limit));
}

inline GuardSet solve_greedy(const CoverInstance& inst) { return guards_of(inst, greedy_cover(inst)); }

// Guarantee of the greedy rule: |greedy| <= (ln|W| + 1) * OPT.
inline bool within_greedy_bound(std::size_t greedy, std::size_t exact, std::size_t witnesses) {
  double bound = (std::log(static_cast<double>(std::max<std::size_t>(witnesses, 1))) + 1.0) * static_cast<double>(exact);
  return static_cast<double>(greedy) <= bound + 1e-9;
}

}  // namespace gallery
