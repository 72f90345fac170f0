#include "codecsel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace codecsel {

namespace {

constexpr double kAsymptoticFactor = 4.82842712474619;  // 2 + 2 sqrt(2)

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigurationError("delta must lie in (0,1), got " + std::to_string(delta));
  }
}

void check_samples(std::size_t m, std::size_t minimum) {
  if (m < minimum) {
    throw ConfigurationError("need at least " + std::to_string(minimum) + " samples, got " +
                             std::to_string(m));
  }
}

void check_count(std::size_t n, const char* name) {
  if (n == 0) throw ConfigurationError(std::string(name) + " must be >= 1");
}

}  // namespace

double emd_raw(const CriterionMatrix& matrix, const std::string& criterion) {
  const std::size_t c = matrix.require_criterion(criterion);
  const std::size_t m = matrix.num_samples();
  check_samples(m, 2);
  const std::size_t even = m - (m % 2);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < matrix.num_codecs(); ++h) {
    double acc = 0.0;
    for (std::size_t i = 0; i < even; ++i) {
      // 1-based sample positions: odd positions get the minus sign
      acc += (i % 2 == 0 ? -1.0 : 1.0) * matrix.value(h, c, i);
    }
    best = std::max(best, acc / static_cast<double>(even));
  }
  return best;
}

double emd(const CriterionMatrix& matrix, const std::string& criterion) {
  return std::max(0.0, emd_raw(matrix, criterion));
}

double epsilon_finite_emd(double d, std::size_t m, std::size_t n_criteria, double delta) {
  check_delta(delta);
  check_samples(m, 1);
  check_count(n_criteria, "n_criteria");
  if (!(d >= 0.0)) throw ConfigurationError("discrepancy d must be >= 0");
  return 2.0 * d +
         3.0 * std::sqrt(std::log(2.0 * static_cast<double>(n_criteria) / delta) /
                         (2.0 * static_cast<double>(m)));
}

double epsilon_hoeffding(std::size_t m, std::size_t n_codecs, std::size_t n_criteria,
                         double delta) {
  check_delta(delta);
  check_samples(m, 1);
  check_count(n_codecs, "n_codecs");
  check_count(n_criteria, "n_criteria");
  const double cells = static_cast<double>(n_codecs) * static_cast<double>(n_criteria);
  return std::sqrt(std::log(2.0 * cells / delta) / (2.0 * static_cast<double>(m)));
}

double epsilon_gaussian_chernoff(double sigma_hat, std::size_t m, std::size_t n_codecs,
                                 std::size_t n_criteria, double delta) {
  if (!(sigma_hat >= 0.0)) throw ConfigurationError("sigma_hat must be >= 0");
  return 2.0 * sigma_hat * epsilon_hoeffding(m, n_codecs, n_criteria, delta);
}

VarianceEstimate empirical_variance_estimate(const CriterionMatrix& matrix,
                                             const std::string& criterion) {
  const std::size_t c = matrix.require_criterion(criterion);
  const std::size_t m = matrix.num_samples();
  check_samples(m, 2);
  VarianceEstimate est;
  double max_var = 0.0;
  for (std::size_t h = 0; h < matrix.num_codecs(); ++h) {
    const double mu = matrix.mean(h, c);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double dev = matrix.value(h, c, i) - mu;
      acc += dev * dev;
    }
    const double var = acc / static_cast<double>(m - 1);
    est.per_codec[matrix.codec_ids()[h]] = var;
    max_var = std::max(max_var, var);
  }
  est.sigma_sq = 2.0 * max_var;
  return est;
}

double epsilon_asymptotic_emd(double d, const VarianceEstimate& var, std::size_t m,
                              std::size_t n_criteria, double delta, Tails tails) {
  check_delta(delta);
  check_samples(m, 2);
  check_count(n_criteria, "n_criteria");
  if (!(d >= 0.0)) throw ConfigurationError("discrepancy d must be >= 0");
  if (!(var.sigma_sq >= 0.0) || !std::isfinite(var.sigma_sq)) {
    throw ConfigurationError("sigma_sq must be finite and >= 0");
  }
  const double k = tails == Tails::one ? 2.0 : 3.0;
  const double sigma = std::sqrt(var.sigma_sq);
  return std::sqrt(2.0) * d +
         sigma * kAsymptoticFactor *
             std::sqrt(std::log(k * static_cast<double>(n_criteria) / delta) /
                       (2.0 * static_cast<double>(m)));
}

Interval variance_interval(const Interval& interval_c_sq, const Interval& interval_c) {
  if (interval_c_sq.lo > interval_c_sq.hi || interval_c.lo > interval_c.hi) {
    throw ConfigurationError("input intervals must satisfy lo <= hi");
  }
  const double hi = interval_c_sq.hi - interval_c.lo * interval_c.lo;
  if (hi < 0.0) {
    throw BoundViolationError("variance interval is empty: upper end " + std::to_string(hi) +
                              " below zero");
  }
  const double lo = std::max(0.0, interval_c_sq.lo - interval_c.hi * interval_c.hi);
  return Interval{lo, hi};
}

bool hoeffding_dominates(BoundMethod emd_method, double n_codecs, double delta,
                         std::optional<double> sigma) {
  check_delta(delta);
  if (!(n_codecs >= 1.0)) throw ConfigurationError("n_codecs must be >= 1");
  const double log_n = std::log(n_codecs);
  switch (emd_method) {
    case BoundMethod::finite_sample_emd:
      return log_n <= 8.0 * std::log(2.0 / delta);
    case BoundMethod::asymptotic_emd: {
      if (!sigma.has_value()) {
        throw ConfigurationError("sigma is required for the asymptotic_emd comparison");
      }
      if (!(*sigma >= 0.0)) throw ConfigurationError("sigma must be >= 0");
      const double exponent = (*sigma) * (*sigma) * kAsymptoticFactor * kAsymptoticFactor;
      return log_n <= exponent * std::log(2.0 / delta) + std::log(delta / 3.0);
    }
    default:
      throw ConfigurationError("comparison is defined for the discrepancy-based methods only");
  }
}

bool hoeffding_dominates_rederived(double n_codecs, double delta, double sigma) {
  check_delta(delta);
  if (!(n_codecs >= 1.0)) throw ConfigurationError("n_codecs must be >= 1");
  if (!(sigma >= 0.0)) throw ConfigurationError("sigma must be >= 0");
  const double exponent = sigma * sigma * kAsymptoticFactor * kAsymptoticFactor;
  return std::log(n_codecs) <= exponent * std::log(3.0 / delta) + std::log(delta / 2.0);
}

ConfidenceRectangle build_rectangle(const CriterionMatrix& matrix, BoundMethod method,
                                    double delta, std::size_t budget_slots,
                                    std::size_t union_codec_count) {
  check_delta(delta);
  check_count(budget_slots, "budget_slots");
  if (requires_bounded(method)) {
    if (auto cell = matrix.first_out_of_range()) {
      throw DomainError("value outside [0,1] at codec '" + std::get<0>(*cell) +
                        "', criterion '" + std::get<1>(*cell) + "', sample '" +
                        std::get<2>(*cell) + "' is incompatible with a bounded-range method");
    }
  }
  const std::size_t m = matrix.num_samples();
  const std::size_t n_codecs =
      union_codec_count > 0 ? union_codec_count : matrix.num_codecs();
  const std::size_t criterion_slots = matrix.num_criteria() * budget_slots;

  ConfidenceRectangle rect;
  rect.delta = delta;
  rect.method = method;
  for (std::size_t c = 0; c < matrix.num_criteria(); ++c) {
    const std::string& criterion = matrix.criterion_ids()[c];
    double eps = 0.0;
    switch (method) {
      case BoundMethod::finite_sample_emd:
        eps = epsilon_finite_emd(emd(matrix, criterion), m, criterion_slots, delta);
        break;
      case BoundMethod::asymptotic_emd:
        eps = epsilon_asymptotic_emd(emd(matrix, criterion),
                                     empirical_variance_estimate(matrix, criterion), m,
                                     criterion_slots, delta, Tails::two);
        break;
      case BoundMethod::hoeffding_union:
        eps = epsilon_hoeffding(m, n_codecs, criterion_slots, delta);
        break;
      case BoundMethod::gaussian_chernoff_union: {
        const VarianceEstimate est = empirical_variance_estimate(matrix, criterion);
        eps = epsilon_gaussian_chernoff(std::sqrt(est.sigma_sq / 2.0), m, n_codecs,
                                        criterion_slots, delta);
        break;
      }
    }
    for (std::size_t h = 0; h < matrix.num_codecs(); ++h) {
      const double center = matrix.mean(h, c);
      Interval iv{center - eps, center + eps};
      if (requires_bounded(method)) {
        iv.lo = std::max(0.0, iv.lo);
        iv.hi = std::min(1.0, iv.hi);
      }
      rect.intervals[CellKey(matrix.codec_ids()[h], criterion)] = iv;
    }
  }
  return rect;
}

}  // namespace codecsel
