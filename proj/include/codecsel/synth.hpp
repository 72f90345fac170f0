#ifndef CODECSEL_SYNTH_HPP
#define CODECSEL_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codecsel/global_sampling.hpp"
#include "codecsel/psp.hpp"
#include "codecsel/types.hpp"

namespace codecsel {

enum class DistKind { point, uniform, beta, truncated_gaussian, gaussian };

/// Per-cell sampling distribution with closed-form moments.
/// Parameter meaning by kind: point(value) / uniform(lo, hi) / beta(alpha,
/// beta) / truncated_gaussian(mu, sigma) restricted to [0,1] / gaussian(mu,
/// sigma).
struct DistSpec {
  DistKind kind = DistKind::point;
  double a = 0.0;
  double b = 0.0;

  static DistSpec point(double value);
  static DistSpec uniform(double lo, double hi);
  static DistSpec beta(double alpha, double beta);
  static DistSpec truncated_gaussian(double mu, double sigma);
  static DistSpec gaussian(double mu, double sigma);

  double mean() const;
  double variance() const;

  /// Support contained in [0,1].
  bool unit_bounded() const;

  bool operator==(const DistSpec&) const = default;
};

/// Ground-truth world: one distribution per (codec, criterion) cell, with
/// exact means and variances.  Stands in for running real codecs so that the
/// selection guarantees can be tested against a known optimum.
struct SyntheticWorld {
  SyntheticWorld(std::vector<std::string> codec_ids, std::vector<std::string> criterion_ids,
                 std::vector<DistSpec> dists, std::uint64_t seed);

  std::vector<std::string> codec_ids;
  std::vector<std::string> criterion_ids;
  std::vector<DistSpec> dists;  // codec-major
  std::uint64_t seed = 0;

  const DistSpec& dist(std::size_t codec, std::size_t criterion) const;
  double true_mean(std::size_t codec, std::size_t criterion) const;
  double true_variance(std::size_t codec, std::size_t criterion) const;

  /// True criterion-mean vector of one codec, keyed by criterion id.
  std::map<std::string, double> true_means(std::size_t codec) const;

  bool unit_bounded() const;
};

/**
 * Draws an m-sample criterion matrix.  Each (sample, codec, criterion) cell
 * uses its own generator stream keyed on (world seed, call seed, sample,
 * codec, criterion), so the result is reproducible bit for bit and
 * independent of evaluation order.
 */
CriterionMatrix sample_matrix(const SyntheticWorld& world, std::size_t m, std::uint64_t seed);

/// Exact selection on the world's true means: the feasible codecs, the
/// argmin set of the objective over them (ties kept), and the optimal value.
struct OracleSelection {
  std::vector<std::string> feasible;
  std::vector<std::string> optimal;
  std::optional<double> value;
};

OracleSelection oracle_select(const SyntheticWorld& world, const Objective& objective,
                              const ConstraintSpace& constraints);

/// Failure tallies across Monte-Carlo trials of one selection configuration.
/// Clause counts overlap; `simultaneous_failures` counts trials where any
/// clause failed.  Trials rejected up front (method/data mismatch) are not
/// coverage failures.
struct CoverageStats {
  std::size_t trials = 0;
  std::size_t config_rejections = 0;
  std::size_t rectangle_miss_failures = 0;   // some true mean escapes its interval
  std::size_t liberal_empty_failures = 0;    // feasible truth exists but liberal set empty
  std::size_t conservative_failures = 0;     // conservative set contains an infeasible codec
  std::size_t sandwich_failures = 0;         // bracket misses the true optimum
  std::size_t optimum_pruned_failures = 0;   // true optimum left the active set (psp)
  std::size_t simultaneous_failures = 0;

  double simultaneous_fraction() const;
};

CoverageStats coverage_trial(const SyntheticWorld& world, std::size_t m, const GsConfig& cfg,
                             std::size_t trials, std::uint64_t seed);
CoverageStats coverage_trial(const SyntheticWorld& world, std::size_t m, const PspConfig& cfg,
                             std::size_t trials, std::uint64_t seed);

/// Deterministic stream splitter shared by the samplers; exposed so tests
/// and tools can derive disjoint sub-seeds the same way the library does.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace codecsel

#endif  // CODECSEL_SYNTH_HPP
