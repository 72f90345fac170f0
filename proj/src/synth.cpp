#include "codecsel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace codecsel {

namespace {

constexpr double kTwoPi = 6.283185307179586;

/// splitmix64; fixed-increment avalanche generator.  Used instead of the
/// standard distributions because their output sequences are
/// implementation-defined and reports must reproduce exactly.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next_unit() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double next_open_unit() {  // (0, 1]
    return 1.0 - next_unit();
  }

  double next_gaussian() {  // Box-Muller, cosine branch only
    const double u1 = next_open_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::uint64_t state_;
};

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi); }
double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double sample_gamma(SplitMix64& rng, double shape) {
  if (shape < 1.0) {
    const double u = rng.next_open_unit();
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.next_gaussian();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.next_open_unit();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double draw(const DistSpec& spec, SplitMix64& rng) {
  switch (spec.kind) {
    case DistKind::point:
      return spec.a;
    case DistKind::uniform:
      return spec.a + (spec.b - spec.a) * rng.next_unit();
    case DistKind::gaussian:
      return spec.a + spec.b * rng.next_gaussian();
    case DistKind::truncated_gaussian: {
      for (int attempt = 0; attempt < 1000000; ++attempt) {
        const double x = spec.a + spec.b * rng.next_gaussian();
        if (x >= 0.0 && x <= 1.0) return x;
      }
      throw ConfigurationError("truncated gaussian puts almost no mass in [0,1]");
    }
    case DistKind::beta: {
      const double x = sample_gamma(rng, spec.a);
      const double y = sample_gamma(rng, spec.b);
      return x / (x + y);
    }
  }
  throw ConfigurationError("unknown distribution kind");
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 rng(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
  return rng.next();
}

DistSpec DistSpec::point(double value) {
  if (!std::isfinite(value)) throw ConfigurationError("point value must be finite");
  return DistSpec{DistKind::point, value, 0.0};
}

DistSpec DistSpec::uniform(double lo, double hi) {
  if (!(lo < hi)) throw ConfigurationError("uniform needs lo < hi");
  return DistSpec{DistKind::uniform, lo, hi};
}

DistSpec DistSpec::beta(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0)) throw ConfigurationError("beta needs alpha, beta > 0");
  return DistSpec{DistKind::beta, alpha, beta};
}

DistSpec DistSpec::truncated_gaussian(double mu, double sigma) {
  if (!(sigma > 0.0)) throw ConfigurationError("truncated gaussian needs sigma > 0");
  return DistSpec{DistKind::truncated_gaussian, mu, sigma};
}

DistSpec DistSpec::gaussian(double mu, double sigma) {
  if (!(sigma >= 0.0)) throw ConfigurationError("gaussian needs sigma >= 0");
  return DistSpec{DistKind::gaussian, mu, sigma};
}

double DistSpec::mean() const {
  switch (kind) {
    case DistKind::point: return a;
    case DistKind::uniform: return 0.5 * (a + b);
    case DistKind::beta: return a / (a + b);
    case DistKind::gaussian: return a;
    case DistKind::truncated_gaussian: {
      const double alpha = (0.0 - a) / b;
      const double beta = (1.0 - a) / b;
      const double z = std_normal_cdf(beta) - std_normal_cdf(alpha);
      return a + b * (std_normal_pdf(alpha) - std_normal_pdf(beta)) / z;
    }
  }
  throw ConfigurationError("unknown distribution kind");
}

double DistSpec::variance() const {
  switch (kind) {
    case DistKind::point: return 0.0;
    case DistKind::uniform: return (b - a) * (b - a) / 12.0;
    case DistKind::beta: return a * b / ((a + b) * (a + b) * (a + b + 1.0));
    case DistKind::gaussian: return b * b;
    case DistKind::truncated_gaussian: {
      const double alpha = (0.0 - a) / b;
      const double beta = (1.0 - a) / b;
      const double z = std_normal_cdf(beta) - std_normal_cdf(alpha);
      const double ratio = (std_normal_pdf(alpha) - std_normal_pdf(beta)) / z;
      return b * b *
             (1.0 + (alpha * std_normal_pdf(alpha) - beta * std_normal_pdf(beta)) / z -
              ratio * ratio);
    }
  }
  throw ConfigurationError("unknown distribution kind");
}

bool DistSpec::unit_bounded() const {
  switch (kind) {
    case DistKind::point: return a >= 0.0 && a <= 1.0;
    case DistKind::uniform: return a >= 0.0 && b <= 1.0;
    case DistKind::beta: return true;
    case DistKind::truncated_gaussian: return true;
    case DistKind::gaussian: return b == 0.0 && a >= 0.0 && a <= 1.0;
  }
  return false;
}

SyntheticWorld::SyntheticWorld(std::vector<std::string> codec_ids_in,
                               std::vector<std::string> criterion_ids_in,
                               std::vector<DistSpec> dists_in, std::uint64_t seed_in)
    : codec_ids(std::move(codec_ids_in)),
      criterion_ids(std::move(criterion_ids_in)),
      dists(std::move(dists_in)),
      seed(seed_in) {
  if (codec_ids.empty() || criterion_ids.empty()) {
    throw ConfigurationError("world needs at least one codec and one criterion");
  }
  if (dists.size() != codec_ids.size() * criterion_ids.size()) {
    throw ConfigurationError("world needs one distribution per (codec, criterion) cell");
  }
}

const DistSpec& SyntheticWorld::dist(std::size_t codec, std::size_t criterion) const {
  return dists.at(codec * criterion_ids.size() + criterion);
}

double SyntheticWorld::true_mean(std::size_t codec, std::size_t criterion) const {
  return dist(codec, criterion).mean();
}

double SyntheticWorld::true_variance(std::size_t codec, std::size_t criterion) const {
  return dist(codec, criterion).variance();
}

std::map<std::string, double> SyntheticWorld::true_means(std::size_t codec) const {
  std::map<std::string, double> means;
  for (std::size_t c = 0; c < criterion_ids.size(); ++c) {
    means[criterion_ids[c]] = true_mean(codec, c);
  }
  return means;
}

bool SyntheticWorld::unit_bounded() const {
  return std::all_of(dists.begin(), dists.end(),
                     [](const DistSpec& d) { return d.unit_bounded(); });
}

CriterionMatrix sample_matrix(const SyntheticWorld& world, std::size_t m, std::uint64_t seed) {
  if (m < 2) throw ConfigurationError("need at least 2 samples, got " + std::to_string(m));
  const std::size_t n_codecs = world.codec_ids.size();
  const std::size_t n_criteria = world.criterion_ids.size();
  std::vector<double> values(n_codecs * n_criteria * m);
  const std::uint64_t base = mix_seed(world.seed, seed);
  for (std::size_t h = 0; h < n_codecs; ++h) {
    for (std::size_t c = 0; c < n_criteria; ++c) {
      const DistSpec& spec = world.dist(h, c);
      const std::uint64_t cell = mix_seed(base, (h << 20) ^ c);
      for (std::size_t i = 0; i < m; ++i) {
        SplitMix64 rng(mix_seed(cell, i));
        values[(h * n_criteria + c) * m + i] = draw(spec, rng);
      }
    }
  }
  std::vector<std::string> sample_ids(m);
  for (std::size_t i = 0; i < m; ++i) sample_ids[i] = "s" + std::to_string(i);
  return CriterionMatrix(world.codec_ids, world.criterion_ids, std::move(sample_ids),
                         std::move(values));
}

OracleSelection oracle_select(const SyntheticWorld& world, const Objective& objective,
                              const ConstraintSpace& constraints) {
  objective.validate_against(world.criterion_ids);
  constraints.validate_against(world.criterion_ids);
  OracleSelection out;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> values(world.codec_ids.size());
  for (std::size_t h = 0; h < world.codec_ids.size(); ++h) {
    const auto means = world.true_means(h);
    if (!constraints.contains(means)) continue;
    out.feasible.push_back(world.codec_ids[h]);
    values[h] = objective.value(means);
    best = std::min(best, values[h]);
  }
  if (out.feasible.empty()) return out;
  for (const auto& h : out.feasible) {
    const std::size_t idx = std::find(world.codec_ids.begin(), world.codec_ids.end(), h) -
                            world.codec_ids.begin();
    if (values[idx] == best) out.optimal.push_back(h);
  }
  out.value = best;
  return out;
}

double CoverageStats::simultaneous_fraction() const {
  const std::size_t effective = trials - config_rejections;
  if (effective == 0) return 0.0;
  return static_cast<double>(simultaneous_failures) / static_cast<double>(effective);
}

namespace {

template <typename RunFn>
CoverageStats coverage_impl(const SyntheticWorld& world, std::size_t m,
                            const Objective& objective, const ConstraintSpace& constraints,
                            std::size_t trials, std::uint64_t seed, bool is_psp,
                            const RunFn& run) {
  if (trials < 1) throw ConfigurationError("trials must be >= 1");
  const OracleSelection truth = oracle_select(world, objective, constraints);

  CoverageStats stats;
  stats.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const CriterionMatrix matrix = sample_matrix(world, m, mix_seed(seed, t));
    SelectionReport report;
    try {
      report = run(matrix);
    } catch (const ConfigurationError&) {
      ++stats.config_rejections;
      continue;
    }

    const std::vector<std::string>& survivors =
        report.trace.empty() ? world.codec_ids : report.trace.back().active_codecs;

    bool miss = false;
    for (std::size_t h = 0; h < world.codec_ids.size() && !miss; ++h) {
      const std::string& id = world.codec_ids[h];
      if (std::find(survivors.begin(), survivors.end(), id) == survivors.end()) continue;
      for (std::size_t c = 0; c < world.criterion_ids.size(); ++c) {
        if (!report.rectangle.at(id, world.criterion_ids[c])
                 .contains(world.true_mean(h, c))) {
          miss = true;
          break;
        }
      }
    }

    const bool liberal_empty = !truth.feasible.empty() && report.liberal_set.empty();

    bool conservative_bad = false;
    for (const auto& id : report.conservative_set) {
      if (std::find(truth.feasible.begin(), truth.feasible.end(), id) ==
          truth.feasible.end()) {
        conservative_bad = true;
        break;
      }
    }

    bool sandwich_bad = false;
    if (truth.value) {
      constexpr double kSlack = 1e-12;
      if (report.sandwich.lower && *report.sandwich.lower > *truth.value + kSlack) {
        sandwich_bad = true;
      }
      if (report.sandwich.upper && *report.sandwich.upper < *truth.value - kSlack) {
        sandwich_bad = true;
      }
    }

    bool pruned_bad = false;
    if (is_psp && !truth.optimal.empty()) {
      pruned_bad = std::none_of(truth.optimal.begin(), truth.optimal.end(),
                                [&](const std::string& id) {
                                  return std::find(survivors.begin(), survivors.end(), id) !=
                                         survivors.end();
                                });
    }

    stats.rectangle_miss_failures += miss;
    stats.liberal_empty_failures += liberal_empty;
    stats.conservative_failures += conservative_bad;
    stats.sandwich_failures += sandwich_bad;
    stats.optimum_pruned_failures += pruned_bad;
    stats.simultaneous_failures +=
        (miss || liberal_empty || conservative_bad || sandwich_bad || pruned_bad);
  }
  return stats;
}

}  // namespace

CoverageStats coverage_trial(const SyntheticWorld& world, std::size_t m, const GsConfig& cfg,
                             std::size_t trials, std::uint64_t seed) {
  return coverage_impl(world, m, cfg.objective, cfg.constraints, trials, seed, false,
                       [&](const CriterionMatrix& matrix) { return global_sampling(matrix, cfg); });
}

CoverageStats coverage_trial(const SyntheticWorld& world, std::size_t m, const PspConfig& cfg,
                             std::size_t trials, std::uint64_t seed) {
  return coverage_impl(world, m, cfg.objective, cfg.constraints, trials, seed, true,
                       [&](const CriterionMatrix& matrix) { return psp(matrix, cfg); });
}

}  // namespace codecsel
