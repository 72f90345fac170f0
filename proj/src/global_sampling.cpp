#include "codecsel/global_sampling.hpp"

#include <algorithm>
#include <limits>

namespace codecsel {

SelectionOutcome select_sets(const ConfidenceRectangle& rect, const Objective& objective,
                             const ConstraintSpace& constraints,
                             const std::vector<std::string>& codecs) {
  SelectionOutcome out;
  for (const auto& h : codecs) {
    out.objective_intervals[h] = objective_interval(rect, objective, h);
    switch (rectangle_vs_constraints(rect, h, constraints)) {
      case Feasibility::certainly_feasible:
        out.feasible_liberal.push_back(h);
        out.feasible_conservative.push_back(h);
        break;
      case Feasibility::possibly_feasible:
        out.feasible_liberal.push_back(h);
        break;
      case Feasibility::certainly_infeasible:
        break;
    }
  }

  const auto threshold = [&](const std::vector<std::string>& pool) {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& h : pool) t = std::min(t, out.objective_intervals.at(h).hi);
    return t;
  };
  const auto select = [&](const std::vector<std::string>& pool) {
    std::vector<std::string> chosen;
    const double t = threshold(pool);
    for (const auto& h : pool) {
      if (out.objective_intervals.at(h).lo <= t) chosen.push_back(h);
    }
    return chosen;
  };
  out.liberal = select(out.feasible_liberal);
  out.conservative = select(out.feasible_conservative);

  if (!out.liberal.empty()) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& h : out.liberal) lo = std::min(lo, out.objective_intervals.at(h).lo);
    out.sandwich.lower = lo;
  }
  if (!out.conservative.empty()) {
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& h : out.conservative) hi = std::min(hi, out.objective_intervals.at(h).hi);
    out.sandwich.upper = hi;
  }
  return out;
}

SelectionReport global_sampling(const CriterionMatrix& matrix, const GsConfig& cfg) {
  cfg.objective.validate_against(matrix.criterion_ids());
  cfg.constraints.validate_against(matrix.criterion_ids());

  SelectionReport report;
  report.rectangle = build_rectangle(matrix, cfg.method, cfg.delta, 1);

  const SelectionOutcome outcome =
      select_sets(report.rectangle, cfg.objective, cfg.constraints, matrix.codec_ids());
  report.liberal_set = outcome.liberal;
  report.conservative_set = outcome.conservative;
  report.objective_intervals = outcome.objective_intervals;
  report.sandwich = outcome.sandwich;
  report.no_feasible_codec = outcome.feasible_liberal.empty();
  report.terminated_reason = TerminationReason::not_applicable;
  report.samples_used = matrix.num_samples();

  for (std::size_t h = 0; h < matrix.num_codecs(); ++h) {
    for (std::size_t c = 0; c < matrix.num_criteria(); ++c) {
      report.estimates[CellKey(matrix.codec_ids()[h], matrix.criterion_ids()[c])] =
          matrix.mean(h, c);
    }
  }
  return report;
}

}  // namespace codecsel
