#include "codecsel/psp.hpp"

#include <algorithm>
#include <limits>

#include "codecsel/global_sampling.hpp"

namespace codecsel {

std::size_t BatchSchedule::total_used() const {
  std::size_t total = 0;
  for (std::size_t s : sizes) total += s;
  return total;
}

BatchSchedule batch_schedule(std::size_t total_samples, std::size_t s0) {
  if (s0 < 2) throw ConfigurationError("s0 must be >= 2");
  if (total_samples < s0) {
    throw ConfigurationError("total samples " + std::to_string(total_samples) +
                             " below initial batch size " + std::to_string(s0));
  }
  // largest n with s0 (2^n - 1) <= total, i.e. n = floor(log2(total/s0 + 1))
  BatchSchedule plan;
  std::size_t used = 0;
  std::size_t next = s0;
  while (used + next <= total_samples) {
    plan.sizes.push_back(next);
    used += next;
    next *= 2;
  }
  plan.iterations = plan.sizes.size();
  return plan;
}

namespace {

void validate_config(const CriterionMatrix& matrix, const PspConfig& cfg) {
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw ConfigurationError("delta must lie in (0,1), got " + std::to_string(cfg.delta));
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw ConfigurationError("epsilon must lie in (0,1), got " + std::to_string(cfg.epsilon));
  }
  cfg.objective.validate_against(matrix.criterion_ids());
  cfg.constraints.validate_against(matrix.criterion_ids());
}

}  // namespace

SelectionReport psp(const CriterionMatrix& matrix, const PspConfig& cfg) {
  validate_config(matrix, cfg);
  const BatchSchedule plan = batch_schedule(matrix.num_samples(), cfg.s0);
  const std::size_t n = plan.iterations;
  const bool bounded = requires_bounded(cfg.method);

  SelectionReport report;
  report.rectangle.delta = cfg.delta;
  report.rectangle.method = cfg.method;

  const double init_lo = bounded ? 0.0 : -std::numeric_limits<double>::infinity();
  const double init_hi = bounded ? 1.0 : std::numeric_limits<double>::infinity();
  for (const auto& h : matrix.codec_ids()) {
    for (const auto& c : matrix.criterion_ids()) {
      report.rectangle.intervals[CellKey(h, c)] = Interval{init_lo, init_hi};
    }
  }

  std::vector<std::size_t> active(matrix.num_codecs());
  for (std::size_t h = 0; h < active.size(); ++h) active[h] = h;

  std::size_t offset = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t batch_size = plan.sizes[i - 1];
    const CriterionMatrix batch = matrix.slice(active, offset, batch_size);
    offset += batch_size;
    report.samples_used += batch_size;

    // Per-batch intervals; the codec multiplicity for union methods stays at
    // the initial family size so the budget split is data-independent.
    const ConfidenceRectangle fresh =
        build_rectangle(batch, cfg.method, cfg.delta, n, matrix.num_codecs());

    TraceEntry entry;
    entry.iteration = i;
    entry.batch_size = batch_size;
    for (const auto& [key, fresh_iv] : fresh.intervals) {
      Interval& running = report.rectangle.intervals.at(key);
      const Interval merged{std::max(running.lo, fresh_iv.lo), std::min(running.hi, fresh_iv.hi)};
      if (merged.lo > merged.hi) {
        entry.violations.push_back(key);
        running = fresh_iv;
      } else {
        running = merged;
      }
      entry.intervals[key] = running;
      report.estimates[key] = batch.mean(batch.require_codec(key.first),
                                         batch.require_criterion(key.second));
    }
    if (!entry.violations.empty()) report.certified = false;

    std::vector<std::string> active_ids;
    active_ids.reserve(active.size());
    for (std::size_t h : active) active_ids.push_back(matrix.codec_ids()[h]);
    const SelectionOutcome outcome =
        select_sets(report.rectangle, cfg.objective, cfg.constraints, active_ids);
    entry.liberal = outcome.liberal;
    entry.conservative = outcome.conservative;
    report.liberal_set = outcome.liberal;
    report.conservative_set = outcome.conservative;
    report.sandwich = outcome.sandwich;

    // constraint pruning, then suboptimality pruning against the best
    // conservative upper bound
    std::vector<std::size_t> survivors;
    for (std::size_t h : active) {
      const std::string& id = matrix.codec_ids()[h];
      if (std::find(outcome.feasible_liberal.begin(), outcome.feasible_liberal.end(), id) ==
          outcome.feasible_liberal.end()) {
        continue;
      }
      if (!outcome.conservative.empty() &&
          outcome.objective_intervals.at(id).lo > *outcome.sandwich.upper) {
        continue;
      }
      survivors.push_back(h);
    }
    for (std::size_t h : survivors) entry.active_codecs.push_back(matrix.codec_ids()[h]);

    if (outcome.sandwich.lower && outcome.sandwich.upper &&
        *outcome.sandwich.upper <= *outcome.sandwich.lower + cfg.epsilon) {
      entry.terminated = TerminationReason::epsilon_optimal;
    } else if (survivors.size() <= 1) {
      entry.terminated = TerminationReason::singleton;
    } else if (i == n) {
      entry.terminated = TerminationReason::samples_exhausted;
    }

    active = survivors;
    const bool stop = entry.terminated.has_value();
    report.trace.push_back(std::move(entry));
    if (stop) {
      report.terminated_reason = *report.trace.back().terminated;
      break;
    }
  }

  report.no_feasible_codec = active.empty();

  // objective intervals over the final rectangle, pruned codecs included
  for (const auto& h : matrix.codec_ids()) {
    report.objective_intervals[h] = objective_interval(report.rectangle, cfg.objective, h);
  }
  return report;
}

}  // namespace codecsel
