#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "vcsched/cost.hpp"
#include "vcsched/stochastic.hpp"

namespace vcsched {

/// ETS refused an instance whose assignment space exceeds its cap.
class EtsCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of injective assignments of `components` onto `providers`,
/// saturating at SIZE_MAX.
std::size_t injective_assignment_count(std::size_t providers, std::size_t components);

/// Exhaustive template search: every injective assignment is enumerated in
/// lexicographic order and checked at the leaf; the realized-cost minimum
/// among valid ones wins (lexicographically first on ties).
std::optional<Template> ets(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                            const CostWeights& w, std::size_t cap = 100'000'000);

/// Components in depth-first preorder from component 0, neighbors visited in
/// ascending id order.
std::vector<NodeId> dfs_order(const TaskGraph& task);

/// Greedy: each component goes to the admissible unused SP with the smallest
/// realized completion time. No backtracking.
std::optional<Template> tpts(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                             const CostWeights& w);

/// Greedy: each component goes to the admissible unused SP of highest degree.
std::optional<Template> dpts(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                             const CostWeights& w);

/// Random admissible placement along the DFS order, restarted on dead ends.
std::optional<Template> rts(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                            const CostWeights& w, SeededRng& rng, std::size_t max_restarts = 100);

}  // namespace vcsched
