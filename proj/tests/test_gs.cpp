#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>

#include "codecsel/global_sampling.hpp"
#include "codecsel/synth.hpp"

using namespace codecsel;

namespace {

struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

ConfidenceRectangle make_rect(std::map<CellKey, Interval> intervals) {
  ConfidenceRectangle rect;
  rect.intervals = std::move(intervals);
  rect.delta = 0.05;
  rect.method = BoundMethod::hoeffding_union;
  return rect;
}

bool contains(const std::vector<std::string>& ids, const std::string& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

bool subset(const std::vector<std::string>& inner, const std::vector<std::string>& outer) {
  return std::all_of(inner.begin(), inner.end(),
                     [&](const std::string& id) { return contains(outer, id); });
}

}  // namespace

TEST_CASE("selection thresholds on prescribed rectangles") {
  const Objective identity{{{"c", 1.0}}};
  const ConstraintSpace unconstrained;

  SUBCASE("separated intervals keep only the dominating codec") {
    const auto rect = make_rect({{{"A", "c"}, {0.1, 0.2}}, {{"B", "c"}, {0.3, 0.4}}});
    const auto out = select_sets(rect, identity, unconstrained, {"A", "B"});
    CHECK(out.liberal == std::vector<std::string>{"A"});
    CHECK(out.conservative == std::vector<std::string>{"A"});
    CHECK(*out.sandwich.lower == doctest::Approx(0.1));
    CHECK(*out.sandwich.upper == doctest::Approx(0.2));
  }

  SUBCASE("overlapping intervals keep both") {
    const auto rect = make_rect({{{"A", "c"}, {0.1, 0.3}}, {{"B", "c"}, {0.25, 0.45}}});
    const auto out = select_sets(rect, identity, unconstrained, {"A", "B"});
    CHECK(out.liberal == std::vector<std::string>{"A", "B"});
    CHECK(out.conservative == std::vector<std::string>{"A", "B"});
  }

  SUBCASE("a tie at the threshold is kept") {
    const auto rect = make_rect({{{"A", "c"}, {0.1, 0.2}}, {{"B", "c"}, {0.2, 0.5}}});
    const auto out = select_sets(rect, identity, unconstrained, {"A", "B"});
    CHECK(out.liberal == std::vector<std::string>{"A", "B"});
  }

  SUBCASE("certainly infeasible codecs leave both pools") {
    ConstraintSpace space;
    space.halfspaces.push_back({{{"c", 1.0}}, 0.5});
    const auto rect = make_rect({{{"A", "c"}, {0.7, 0.7}}});
    const auto out = select_sets(rect, identity, space, {"A"});
    CHECK(out.feasible_liberal.empty());
    CHECK(out.liberal.empty());
    CHECK(!out.sandwich.lower.has_value());
    CHECK(!out.sandwich.upper.has_value());
  }

  SUBCASE("an undetermined codec can eclipse the conservative pick") {
    // objective on c, feasibility decided by a second criterion r
    ConstraintSpace space;
    space.halfspaces.push_back({{{"r", 1.0}}, 0.5});
    const auto rect = make_rect({{{"A", "c"}, {0.0, 0.1}},
                                 {{"A", "r"}, {0.4, 0.6}},
                                 {{"B", "c"}, {0.3, 0.5}},
                                 {{"B", "r"}, {0.1, 0.2}}});
    const auto out = select_sets(rect, identity, space, {"A", "B"});
    CHECK(out.feasible_liberal == std::vector<std::string>{"A", "B"});
    CHECK(out.feasible_conservative == std::vector<std::string>{"B"});
    // the liberal threshold excludes the conservative winner here, so the two
    // selected sets do not nest
    CHECK(out.liberal == std::vector<std::string>{"A"});
    CHECK(out.conservative == std::vector<std::string>{"B"});
  }

  SUBCASE("possibly feasible codecs are liberal but not conservative") {
    ConstraintSpace space;
    space.halfspaces.push_back({{{"c", 1.0}}, 0.5});
    const auto rect = make_rect({{{"A", "c"}, {0.4, 0.6}}, {{"B", "c"}, {0.1, 0.3}}});
    const auto out = select_sets(rect, identity, space, {"A", "B"});
    CHECK(out.feasible_liberal == std::vector<std::string>{"A", "B"});
    CHECK(out.feasible_conservative == std::vector<std::string>{"B"});
    // the conservative pool and threshold are independent of A
    CHECK(out.conservative == std::vector<std::string>{"B"});
    CHECK(*out.sandwich.upper == doctest::Approx(0.3));
  }
}

TEST_CASE("global sampling end to end on point worlds") {
  // zero-variance cells make gaussian-chernoff intervals exact points
  const SyntheticWorld world({"A", "B"}, {"q"},
                             {DistSpec::point(0.25), DistSpec::point(0.75)}, 3);
  const CriterionMatrix matrix = sample_matrix(world, 16, 9);
  GsConfig cfg;
  cfg.delta = 0.05;
  cfg.method = BoundMethod::gaussian_chernoff_union;
  cfg.objective = Objective{{{"q", 1.0}}};

  const SelectionReport report = global_sampling(matrix, cfg);
  CHECK(report.liberal_set == std::vector<std::string>{"A"});
  CHECK(report.conservative_set == std::vector<std::string>{"A"});
  CHECK(report.estimates.at({"A", "q"}) == doctest::Approx(0.25));
  CHECK(*report.sandwich.lower == doctest::Approx(0.25));
  CHECK(*report.sandwich.upper == doctest::Approx(0.25));
  CHECK(report.terminated_reason == TerminationReason::not_applicable);
  CHECK(!report.no_feasible_codec);
  CHECK(report.samples_used == 16);
}

TEST_CASE("global sampling flags an empty feasible pool") {
  const SyntheticWorld world({"A"}, {"q"}, {DistSpec::point(0.7)}, 1);
  const CriterionMatrix matrix = sample_matrix(world, 8, 2);
  GsConfig cfg;
  cfg.delta = 0.05;
  cfg.method = BoundMethod::gaussian_chernoff_union;
  cfg.objective = Objective{{{"q", 1.0}}};
  cfg.constraints.halfspaces.push_back({{{"q", 1.0}}, 0.5});

  const SelectionReport report = global_sampling(matrix, cfg);
  CHECK(report.liberal_set.empty());
  CHECK(report.conservative_set.empty());
  CHECK(report.no_feasible_codec);
  CHECK(!report.sandwich.lower.has_value());
}

TEST_CASE("structural invariants over random worlds") {
  Rng rng{42};
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n_codecs = 2 + rng.next() % 4;
    std::vector<std::string> codecs;
    std::vector<DistSpec> dists;
    for (std::size_t h = 0; h < n_codecs; ++h) {
      codecs.push_back("h" + std::to_string(h));
      dists.push_back(DistSpec::uniform(0.0, 0.2 + 0.8 * rng.unit()));
      dists.push_back(DistSpec::beta(1.0 + 4.0 * rng.unit(), 1.0 + 4.0 * rng.unit()));
    }
    const SyntheticWorld world(codecs, {"c1", "c2"}, dists, rng.next());

    GsConfig cfg;
    cfg.delta = 0.1;
    cfg.method = rng.unit() < 0.5 ? BoundMethod::hoeffding_union
                                  : BoundMethod::finite_sample_emd;
    cfg.objective = Objective{{{"c1", rng.unit() + 0.1}, {"c2", rng.unit()}}};
    if (rng.unit() < 0.6) {
      cfg.constraints.halfspaces.push_back({{{"c1", 1.0}}, 0.2 + 0.6 * rng.unit()});
    }

    const CriterionMatrix matrix = sample_matrix(world, 60, rng.next());
    const SelectionReport report = global_sampling(matrix, cfg);
    const auto outcome =
        select_sets(report.rectangle, cfg.objective, cfg.constraints, matrix.codec_ids());

    CHECK(subset(outcome.conservative, outcome.feasible_conservative));
    CHECK(subset(outcome.liberal, outcome.feasible_liberal));
    CHECK(subset(outcome.feasible_conservative, outcome.feasible_liberal));
    if (!outcome.feasible_liberal.empty()) CHECK(!outcome.liberal.empty());
    CHECK(report.liberal_set == outcome.liberal);
    CHECK(report.conservative_set == outcome.conservative);

    // scaling the objective cannot change either selected set
    GsConfig scaled = cfg;
    for (auto& [id, w] : scaled.objective.weights) w *= 7.5;
    const SelectionReport r2 = global_sampling(matrix, scaled);
    CHECK(r2.liberal_set == report.liberal_set);
    CHECK(r2.conservative_set == report.conservative_set);
  }
}

TEST_CASE("objective estimate error is bounded by the weighted half-widths") {
  // unclipped method, so half-widths can be read back off the rectangle
  const SyntheticWorld world({"A", "B", "C"}, {"c1", "c2"},
                             {DistSpec::gaussian(0.2, 0.1), DistSpec::gaussian(0.6, 0.2),
                              DistSpec::gaussian(0.4, 0.15), DistSpec::gaussian(0.5, 0.1),
                              DistSpec::gaussian(0.3, 0.05), DistSpec::gaussian(0.7, 0.2)},
                             11);
  GsConfig cfg;
  cfg.delta = 0.1;
  cfg.method = BoundMethod::asymptotic_emd;
  cfg.objective = Objective{{{"c1", 0.5}, {"c2", 0.5}}};

  Rng rng{3};
  int covered = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const CriterionMatrix matrix = sample_matrix(world, 400, rng.next());
    const SelectionReport report = global_sampling(matrix, cfg);

    bool cover = true;
    for (std::size_t h = 0; h < 3 && cover; ++h) {
      for (std::size_t c = 0; c < 2; ++c) {
        if (!report.rectangle.at(world.codec_ids[h], world.criterion_ids[c])
                 .contains(world.true_mean(h, c))) {
          cover = false;
          break;
        }
      }
    }
    if (!cover) continue;
    ++covered;
    for (std::size_t h = 0; h < 3; ++h) {
      double weighted_eps = 0.0;
      double estimate = 0.0;
      double truth = 0.0;
      for (std::size_t c = 0; c < 2; ++c) {
        const auto& id = world.criterion_ids[c];
        const double w = cfg.objective.weights.at(id);
        weighted_eps +=
            w * 0.5 * report.rectangle.at(world.codec_ids[h], id).width();
        estimate += w * report.estimates.at({world.codec_ids[h], id});
        truth += w * world.true_mean(h, c);
      }
      CHECK(std::abs(estimate - truth) <= weighted_eps + 1e-12);
    }
  }
  CHECK(covered >= 35);  // coverage failures are a <= delta event
}
