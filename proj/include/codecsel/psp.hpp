#ifndef CODECSEL_PSP_HPP
#define CODECSEL_PSP_HPP

#include <cstddef>
#include <vector>

#include "codecsel/bounds.hpp"
#include "codecsel/types.hpp"

namespace codecsel {

struct PspConfig {
  std::size_t s0 = 25;        // initial batch size
  double epsilon = 0.05;      // optimality tolerance
  double delta = 0.01;
  BoundMethod method = BoundMethod::hoeffding_union;
  Objective objective;
  ConstraintSpace constraints;
};

/// Doubling batch plan: sizes s0, 2 s0, ..., 2^(n-1) s0 with
/// n = floor(log2(total/s0 + 1)), so the whole plan fits in `total_samples`.
struct BatchSchedule {
  std::size_t iterations = 0;
  std::vector<std::size_t> sizes;

  std::size_t total_used() const;
};

BatchSchedule batch_schedule(std::size_t total_samples, std::size_t s0);

/**
 * Progressive sampling with pruning.  Each iteration consumes a fresh batch
 * (disjoint, in sample order), rebuilds per-batch intervals whose confidence
 * budget is split across the full schedule, intersects them into the running
 * rectangle, prunes codecs that are provably infeasible or provably
 * suboptimal, and stops on epsilon-optimality, on reaching at most one
 * active codec, or when the schedule is exhausted.
 *
 * An empty intersection is survivable: the cell is reset to the latest
 * batch's interval, the event is recorded in the trace, and the report is
 * flagged uncertified.
 */
SelectionReport psp(const CriterionMatrix& matrix, const PspConfig& cfg);

}  // namespace codecsel

#endif  // CODECSEL_PSP_HPP
