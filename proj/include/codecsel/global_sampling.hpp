#ifndef CODECSEL_GLOBAL_SAMPLING_HPP
#define CODECSEL_GLOBAL_SAMPLING_HPP

#include <string>
#include <vector>

#include "codecsel/bounds.hpp"
#include "codecsel/types.hpp"

namespace codecsel {

struct GsConfig {
  double delta = 0.01;
  BoundMethod method = BoundMethod::hoeffding_union;
  Objective objective;
  ConstraintSpace constraints;
};

/// Liberal/conservative selection derived from one rectangle.
/// feasible_liberal is every codec not provably infeasible; feasible_conservative
/// every provably feasible codec; liberal/conservative keep the codecs whose
/// objective lower bound does not exceed the smallest upper bound in their pool
/// (ties at the threshold are kept).
struct SelectionOutcome {
  std::vector<std::string> feasible_liberal;
  std::vector<std::string> feasible_conservative;
  std::vector<std::string> liberal;
  std::vector<std::string> conservative;
  std::map<std::string, Interval> objective_intervals;
  SandwichBounds sandwich;
};

SelectionOutcome select_sets(const ConfidenceRectangle& rect, const Objective& objective,
                             const ConstraintSpace& constraints,
                             const std::vector<std::string>& codecs);

/**
 * One-shot selection over the full sample: builds a confidence rectangle for
 * every (codec, criterion) and reports the liberal and conservative
 * candidate sets plus the sandwich bracket on the constrained optimum.
 * An empty liberal set is reported via `no_feasible_codec`, not an error.
 */
SelectionReport global_sampling(const CriterionMatrix& matrix, const GsConfig& cfg);

}  // namespace codecsel

#endif  // CODECSEL_GLOBAL_SAMPLING_HPP
