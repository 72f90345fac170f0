#ifndef CODECSEL_TYPES_HPP
#define CODECSEL_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace codecsel {

/// Invalid parameters, malformed configuration, or too few samples.
class ConfigurationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Data incompatible with the requested bound method (e.g. a cell outside
/// [0,1] under a bounded-range method).
class DomainError : public ConfigurationError {
  using ConfigurationError::ConfigurationError;
};

/// Malformed or incomplete input files.
class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Interval algebra produced an impossible result; with valid inputs this is
/// a probability <= delta event, not a bug.
class BoundViolationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Concentration bound used to build confidence rectangles.
enum class BoundMethod {
  finite_sample_emd,
  asymptotic_emd,
  hoeffding_union,
  gaussian_chernoff_union,
};

/// Methods whose guarantees require every value to lie in [0,1].
constexpr bool requires_bounded(BoundMethod m) {
  return m == BoundMethod::finite_sample_emd || m == BoundMethod::hoeffding_union;
}

constexpr bool is_union_method(BoundMethod m) {
  return m == BoundMethod::hoeffding_union || m == BoundMethod::gaussian_chernoff_union;
}

enum class Tails { one, two };

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// (codec_id, criterion_id)
using CellKey = std::pair<std::string, std::string>;

/**
 * Dense table of criterion evaluations: value(h, c, i) is the score of
 * criterion c on sample i when encoded by codec h.
 *
 * Immutable after construction.  The sample order is significant: the
 * discrepancy statistic assigns alternating signs by position, so two
 * matrices with permuted samples are different objects.
 */
class CriterionMatrix {
 public:
  CriterionMatrix(std::vector<std::string> codec_ids,
                  std::vector<std::string> criterion_ids,
                  std::vector<std::string> sample_ids,
                  std::vector<double> values);

  std::size_t num_codecs() const { return codec_ids_.size(); }
  std::size_t num_criteria() const { return criterion_ids_.size(); }
  std::size_t num_samples() const { return sample_ids_.size(); }

  const std::vector<std::string>& codec_ids() const { return codec_ids_; }
  const std::vector<std::string>& criterion_ids() const { return criterion_ids_; }
  const std::vector<std::string>& sample_ids() const { return sample_ids_; }

  double value(std::size_t codec, std::size_t criterion, std::size_t sample) const {
    return values_[(codec * criterion_ids_.size() + criterion) * sample_ids_.size() + sample];
  }

  /// Sample mean of one (codec, criterion) cell row, fixed summation order.
  double mean(std::size_t codec, std::size_t criterion) const;

  std::optional<std::size_t> codec_index(const std::string& id) const;
  std::optional<std::size_t> criterion_index(const std::string& id) const;
  std::size_t require_codec(const std::string& id) const;
  std::size_t require_criterion(const std::string& id) const;

  /// True when every cell lies in [0,1].
  bool in_unit_range() const;

  /// First cell outside [0,1], as (codec, criterion, sample) ids, if any.
  std::optional<std::tuple<std::string, std::string, std::string>> first_out_of_range() const;

  /// Sub-matrix over the given codecs (in the given order) and the sample
  /// window [sample_begin, sample_begin + sample_count).  All criteria kept.
  CriterionMatrix slice(const std::vector<std::size_t>& codecs,
                        std::size_t sample_begin, std::size_t sample_count) const;

  /// Copy with the sample axis permuted by a seeded Fisher-Yates shuffle.
  CriterionMatrix shuffled(std::uint64_t seed) const;

  bool operator==(const CriterionMatrix&) const = default;

 private:
  std::vector<std::string> codec_ids_;
  std::vector<std::string> criterion_ids_;
  std::vector<std::string> sample_ids_;
  std::vector<double> values_;  // codec-major, then criterion, then sample
};

/// Nonnegative weights over criteria; the objective value of a criterion-mean
/// vector e is the dot product w . e, smaller is better.
struct Objective {
  std::map<std::string, double> weights;

  /// Checks weights >= 0 with at least one positive.
  void validate() const;

  /// Also checks every weighted criterion exists among `criteria`.
  void validate_against(const std::vector<std::string>& criteria) const;

  double value(const std::map<std::string, double>& means) const;
};

/// Conjunction of half-spaces coeffs . e <= bound over criterion means.
/// An empty list is the unconstrained space.
struct ConstraintSpace {
  struct HalfSpace {
    std::map<std::string, double> coeffs;
    double bound = 0.0;
  };

  std::vector<HalfSpace> halfspaces;

  bool empty() const { return halfspaces.empty(); }
  void validate_against(const std::vector<std::string>& criteria) const;

  /// Exact membership test for a concrete criterion-mean vector.
  bool contains(const std::map<std::string, double>& means) const;
};

/// Product of per-criterion confidence intervals, one per (codec, criterion).
struct ConfidenceRectangle {
  std::map<CellKey, Interval> intervals;
  double delta = 0.0;
  BoundMethod method = BoundMethod::hoeffding_union;

  bool has(const std::string& codec, const std::string& criterion) const;
  const Interval& at(const std::string& codec, const std::string& criterion) const;
};

enum class Feasibility { certainly_feasible, possibly_feasible, certainly_infeasible };

enum class TerminationReason { singleton, epsilon_optimal, samples_exhausted, not_applicable };

std::string to_string(TerminationReason r);
std::string to_string(Feasibility f);

/// Bracket on the true constrained-optimal objective value.  A side is
/// absent when the set it is derived from is empty.
struct SandwichBounds {
  std::optional<double> lower;
  std::optional<double> upper;
};

/// One progressive-sampling iteration, as recorded for the trace.
struct TraceEntry {
  std::size_t iteration = 0;   // 1-based
  std::size_t batch_size = 0;
  std::vector<std::string> active_codecs;          // survivors after pruning
  std::map<CellKey, Interval> intervals;           // post-intersection state of codecs evaluated this round
  std::vector<std::string> liberal;
  std::vector<std::string> conservative;
  std::vector<CellKey> violations;                 // cells whose running interval emptied
  std::optional<TerminationReason> terminated;
};

/**
 * Outcome of a selection run.  `liberal_set` holds codecs not provably
 * infeasible whose objective lower bound beats the best upper bound;
 * `conservative_set` is the analogue restricted to provably feasible codecs.
 * `terminated_reason` of `singleton` covers any run that pruned down to at
 * most one codec; `no_feasible_codec` distinguishes the empty case.
 */
struct SelectionReport {
  std::vector<std::string> liberal_set;
  std::vector<std::string> conservative_set;
  std::map<CellKey, double> estimates;
  ConfidenceRectangle rectangle;
  std::map<std::string, Interval> objective_intervals;
  SandwichBounds sandwich;
  std::vector<TraceEntry> trace;
  TerminationReason terminated_reason = TerminationReason::not_applicable;
  bool no_feasible_codec = false;
  bool certified = true;        // false after any bound-violation event
  std::size_t samples_used = 0;
};

/// Objective range over one codec's rectangle: with nonnegative weights the
/// extremes sit at the per-criterion corner points.  Zero-weight criteria are
/// ignored; a missing interval for a positive-weight criterion is an error.
Interval objective_interval(const ConfidenceRectangle& rect, const Objective& obj,
                            const std::string& codec);

/// Classifies one codec's rectangle against the constraint space by checking
/// each half-space at its best and worst rectangle corners.
Feasibility rectangle_vs_constraints(const ConfidenceRectangle& rect, const std::string& codec,
                                     const ConstraintSpace& space);

}  // namespace codecsel

#endif  // CODECSEL_TYPES_HPP
