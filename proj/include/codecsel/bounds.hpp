#ifndef CODECSEL_BOUNDS_HPP
#define CODECSEL_BOUNDS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "codecsel/types.hpp"

namespace codecsel {

/**
 * Empirical maximum discrepancy of one criterion's codec family: the largest
 * alternating sample mean sup_h (1/m) sum_i (-1)^i c(x_i, h(x_i)), signs
 * assigned by sample position (first sample negative).  When the sample
 * count is odd the trailing sample is excluded from the alternating sum.
 *
 * `emd` clamps at zero, which only tightens the downstream intervals;
 * `emd_raw` returns the unclamped statistic for diagnostics.
 */
double emd(const CriterionMatrix& matrix, const std::string& criterion);
double emd_raw(const CriterionMatrix& matrix, const std::string& criterion);

/// Half-width from the finite-sample discrepancy bound with a per-criterion
/// union: 2d + 3 sqrt(ln(2 n_criteria / delta) / (2m)).
double epsilon_finite_emd(double d, std::size_t m, std::size_t n_criteria, double delta);

/// Half-width from the Hoeffding union bound over n_codecs * n_criteria
/// cells: sqrt(ln(2 n_codecs n_criteria / delta) / (2m)).
double epsilon_hoeffding(std::size_t m, std::size_t n_codecs, std::size_t n_criteria,
                         double delta);

/// Gaussian-Chernoff union half-width; `sigma_hat` is the largest empirical
/// standard deviation across codecs.  Identically 2 sigma_hat times the
/// Hoeffding half-width.
double epsilon_gaussian_chernoff(double sigma_hat, std::size_t m, std::size_t n_codecs,
                                 std::size_t n_criteria, double delta);

/// Plugin variance bound: per-codec Bessel-corrected sample variances and
/// sigma_sq = 2 * max over codecs.
struct VarianceEstimate {
  double sigma_sq = 0.0;
  std::map<std::string, double> per_codec;
};

VarianceEstimate empirical_variance_estimate(const CriterionMatrix& matrix,
                                             const std::string& criterion);

/// Half-width from the asymptotic discrepancy bound:
/// sqrt(2) d + sigma (2 + 2 sqrt(2)) sqrt(ln(k n_criteria / delta) / (2m)),
/// k = 2 one-tailed, k = 3 two-tailed, sigma = sqrt(var.sigma_sq).
double epsilon_asymptotic_emd(double d, const VarianceEstimate& var, std::size_t m,
                              std::size_t n_criteria, double delta, Tails tails);

/// Interval for the variance of a criterion, combined from intervals for the
/// criterion's square and the criterion itself:
/// [max(0, lo_sq - hi^2), hi_sq - lo^2].  Throws BoundViolationError when the
/// inputs are mutually inconsistent (upper end below zero).
Interval variance_interval(const Interval& interval_c_sq, const Interval& interval_c);

/**
 * Whether the Hoeffding union bound is guaranteed to be at least as tight as
 * the given discrepancy bound, regardless of the data.  For
 * finite_sample_emd the threshold is n_codecs <= (2/delta)^8; for
 * asymptotic_emd it is n_codecs <= (2/delta)^(sigma^2 (2+2 sqrt 2)^2) *
 * delta/3 and `sigma` is required.  Evaluated in log space.
 */
bool hoeffding_dominates(BoundMethod emd_method, double n_codecs, double delta,
                         std::optional<double> sigma = std::nullopt);

/// Variant of the asymptotic-case threshold obtained by re-solving the
/// half-width inequality directly: n_codecs <= (3/delta)^(sigma^2
/// (2+2 sqrt 2)^2) * delta/2.  Kept alongside the primary predicate because
/// the two disagree; the primary form is authoritative.
bool hoeffding_dominates_rederived(double n_codecs, double delta, double sigma);

/**
 * Confidence rectangle for every (codec, criterion) cell: sample mean plus or
 * minus the method's half-width at confidence delta / budget_slots (folded
 * into each formula's union term).  Bounded-range methods additionally clip
 * each interval to [0,1] and reject matrices with cells outside [0,1].
 *
 * `union_codec_count` overrides the codec multiplicity used by the union
 * methods (0 means the matrix's own codec count); progressive sampling passes
 * the initial family size so the allocation is fixed before pruning.
 */
ConfidenceRectangle build_rectangle(const CriterionMatrix& matrix, BoundMethod method,
                                    double delta, std::size_t budget_slots,
                                    std::size_t union_codec_count = 0);

}  // namespace codecsel

#endif  // CODECSEL_BOUNDS_HPP
