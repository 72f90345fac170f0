#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>

#include "codecsel/global_sampling.hpp"
#include "codecsel/psp.hpp"
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

bool contains(const std::vector<std::string>& ids, const std::string& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace

TEST_CASE("batch schedule") {
  SUBCASE("experiment-scale doubling plan") {
    const BatchSchedule plan = batch_schedule(16000, 25);
    CHECK(plan.iterations == 9);
    CHECK(plan.sizes ==
          std::vector<std::size_t>{25, 50, 100, 200, 400, 800, 1600, 3200, 6400});
    CHECK(plan.total_used() == 12775);
  }
  SUBCASE("single batch when total equals s0") {
    const BatchSchedule plan = batch_schedule(40, 40);
    CHECK(plan.iterations == 1);
    CHECK(plan.sizes == std::vector<std::size_t>{40});
  }
  SUBCASE("total of 7 s0 is consumed exactly") {
    const BatchSchedule plan = batch_schedule(7 * 25, 25);
    CHECK(plan.iterations == 3);
    CHECK(plan.sizes == std::vector<std::size_t>{25, 50, 100});
    CHECK(plan.total_used() == 175);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(batch_schedule(10, 25), ConfigurationError);
    CHECK_THROWS_AS(batch_schedule(100, 1), ConfigurationError);
  }
}

TEST_CASE("single codec terminates immediately") {
  const SyntheticWorld world({"only"}, {"q"}, {DistSpec::uniform(0.2, 0.8)}, 4);
  const CriterionMatrix matrix = sample_matrix(world, 200, 7);
  PspConfig cfg;
  cfg.s0 = 25;
  cfg.epsilon = 0.05;
  cfg.delta = 0.1;
  cfg.method = BoundMethod::hoeffding_union;
  cfg.objective = Objective{{{"q", 1.0}}};

  const SelectionReport report = psp(matrix, cfg);
  CHECK(report.terminated_reason == TerminationReason::singleton);
  CHECK(report.trace.size() == 1);
  CHECK(report.trace[0].active_codecs == std::vector<std::string>{"only"});
  CHECK(report.samples_used == 25);
  CHECK(report.liberal_set == std::vector<std::string>{"only"});
}

TEST_CASE("zero variance separates in one batch with an epsilon certificate") {
  const SyntheticWorld world({"good", "bad"}, {"q"},
                             {DistSpec::point(0.1), DistSpec::point(0.9)}, 21);
  const CriterionMatrix matrix = sample_matrix(world, 400, 3);
  PspConfig cfg;
  cfg.s0 = 25;
  cfg.epsilon = 0.05;
  cfg.delta = 0.01;
  cfg.method = BoundMethod::gaussian_chernoff_union;
  cfg.objective = Objective{{{"q", 1.0}}};

  const SelectionReport report = psp(matrix, cfg);
  CHECK(report.terminated_reason == TerminationReason::epsilon_optimal);
  CHECK(report.trace.size() == 1);
  CHECK(report.liberal_set == std::vector<std::string>{"good"});
  CHECK(report.conservative_set == std::vector<std::string>{"good"});
  CHECK(report.trace[0].active_codecs == std::vector<std::string>{"good"});
  CHECK(report.certified);
}

TEST_CASE("interval widths never grow while a codec survives") {
  const SyntheticWorld world(
      {"a", "b", "c"}, {"c1", "c2"},
      {DistSpec::uniform(0.1, 0.5), DistSpec::beta(2.0, 5.0), DistSpec::uniform(0.2, 0.6),
       DistSpec::beta(3.0, 3.0), DistSpec::uniform(0.3, 0.9), DistSpec::beta(5.0, 2.0)},
      8);
  Rng rng{15};
  for (int trial = 0; trial < 20; ++trial) {
    const CriterionMatrix matrix = sample_matrix(world, 400, rng.next());
    PspConfig cfg;
    cfg.s0 = 25;
    cfg.epsilon = 0.05;
    cfg.delta = 0.1;
    cfg.method = trial % 2 == 0 ? BoundMethod::hoeffding_union
                                : BoundMethod::finite_sample_emd;
    cfg.objective = Objective{{{"c1", 0.5}, {"c2", 0.5}}};

    const SelectionReport report = psp(matrix, cfg);
    for (std::size_t i = 1; i < report.trace.size(); ++i) {
      for (const auto& [key, iv] : report.trace[i].intervals) {
        const auto prev = report.trace[i - 1].intervals.find(key);
        if (prev == report.trace[i - 1].intervals.end()) continue;
        CHECK(iv.width() <= prev->second.width() + 1e-15);
        // intersection also nests, not just narrows
        CHECK(iv.lo >= prev->second.lo - 1e-15);
        CHECK(iv.hi <= prev->second.hi + 1e-15);
      }
      CHECK(report.trace[i].violations.empty());
    }
  }
}

TEST_CASE("pruning decisions are re-derivable from the trace") {
  const SyntheticWorld world(
      {"a", "b", "c", "d"}, {"c1"},
      {DistSpec::beta(2.0, 8.0), DistSpec::beta(4.0, 6.0), DistSpec::beta(6.0, 4.0),
       DistSpec::beta(8.0, 2.0)},
      77);
  const CriterionMatrix matrix = sample_matrix(world, 800, 5);
  PspConfig cfg;
  cfg.s0 = 25;
  cfg.epsilon = 0.02;
  cfg.delta = 0.1;
  cfg.method = BoundMethod::hoeffding_union;
  cfg.objective = Objective{{{"c1", 1.0}}};

  const SelectionReport report = psp(matrix, cfg);
  ConstraintSpace unconstrained;
  for (const auto& entry : report.trace) {
    ConfidenceRectangle rect;
    rect.intervals = entry.intervals;
    rect.delta = cfg.delta;
    rect.method = cfg.method;
    std::vector<std::string> evaluated;
    for (const auto& [key, iv] : entry.intervals) {
      if (!contains(evaluated, key.first)) evaluated.push_back(key.first);
    }
    // every dropped codec is provably suboptimal against the conservative
    // upper bound (no constraints here, so feasibility cannot prune)
    double best_upper = std::numeric_limits<double>::infinity();
    for (const auto& h : entry.conservative) {
      best_upper =
          std::min(best_upper, objective_interval(rect, cfg.objective, h).hi);
    }
    for (const auto& h : evaluated) {
      if (contains(entry.active_codecs, h)) continue;
      CHECK(objective_interval(rect, cfg.objective, h).lo > best_upper);
    }
  }
}

TEST_CASE("sample economy") {
  const SyntheticWorld world({"a", "b"}, {"c1"},
                             {DistSpec::uniform(0.0, 1.0), DistSpec::uniform(0.0, 1.0)}, 6);
  const CriterionMatrix matrix = sample_matrix(world, 1000, 8);
  PspConfig cfg;
  cfg.s0 = 30;
  cfg.epsilon = 0.05;
  cfg.delta = 0.1;
  cfg.method = BoundMethod::hoeffding_union;
  cfg.objective = Objective{{{"c1", 1.0}}};

  const SelectionReport report = psp(matrix, cfg);
  std::size_t from_trace = 0;
  for (const auto& entry : report.trace) from_trace += entry.batch_size;
  CHECK(report.samples_used == from_trace);
  const BatchSchedule plan = batch_schedule(1000, 30);
  CHECK(report.samples_used <= plan.total_used());
  // the doubling plan never uses more than twice the final batch
  CHECK(report.samples_used < 2 * report.trace.back().batch_size);
}

TEST_CASE("a one-iteration run matches global sampling") {
  const SyntheticWorld world(
      {"a", "b", "c"}, {"c1", "c2"},
      {DistSpec::uniform(0.0, 0.6), DistSpec::beta(2.0, 4.0), DistSpec::uniform(0.2, 0.8),
       DistSpec::beta(4.0, 2.0), DistSpec::uniform(0.1, 0.5), DistSpec::beta(3.0, 3.0)},
      19);
  Rng rng{33};
  for (auto method : {BoundMethod::finite_sample_emd, BoundMethod::asymptotic_emd,
                      BoundMethod::hoeffding_union, BoundMethod::gaussian_chernoff_union}) {
    // 40 <= m < 80 gives exactly one batch of 40
    const CriterionMatrix matrix = sample_matrix(world, 70, rng.next());
    PspConfig pc;
    pc.s0 = 40;
    pc.epsilon = 0.01;
    pc.delta = 0.1;
    pc.method = method;
    pc.objective = Objective{{{"c1", 0.3}, {"c2", 0.7}}};
    pc.constraints.halfspaces.push_back({{{"c1", 1.0}}, 0.6});

    GsConfig gc;
    gc.delta = pc.delta;
    gc.method = method;
    gc.objective = pc.objective;
    gc.constraints = pc.constraints;

    const SelectionReport via_psp = psp(matrix, pc);
    const SelectionReport via_gs =
        global_sampling(matrix.slice({0, 1, 2}, 0, 40), gc);
    CHECK(via_psp.trace.size() == 1);
    CHECK(via_psp.liberal_set == via_gs.liberal_set);
    CHECK(via_psp.conservative_set == via_gs.conservative_set);
    for (const auto& [key, iv] : via_gs.rectangle.intervals) {
      if (requires_bounded(method)) {
        CHECK(via_psp.rectangle.at(key.first, key.second) == iv);
      } else {
        const Interval& p = via_psp.rectangle.at(key.first, key.second);
        CHECK(p.lo == doctest::Approx(iv.lo).epsilon(1e-12));
        CHECK(p.hi == doctest::Approx(iv.hi).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("an emptied intersection is survivable and uncertified") {
  // codec A jumps from a tight low batch to a tight high batch, so the
  // round-2 intersection is empty; B overlaps itself and keeps the run alive
  CriterionMatrix matrix({"A", "B"}, {"q"}, {"s0", "s1", "s2", "s3", "s4", "s5"},
                         {0.0, 0.1, 0.9, 1.0, 0.9, 1.0,
                          0.0, 0.2, 0.1, 0.3, 0.1, 0.3});
  PspConfig cfg;
  cfg.s0 = 2;
  cfg.epsilon = 0.05;
  cfg.delta = 0.1;
  cfg.method = BoundMethod::gaussian_chernoff_union;
  cfg.objective = Objective{{{"q", 1.0}}};

  const SelectionReport report = psp(matrix, cfg);
  CHECK(!report.certified);
  CHECK(report.trace.size() == 2);
  CHECK(report.trace[0].violations.empty());
  CHECK(report.trace[1].violations == std::vector<CellKey>{{"A", "q"}});
  // the cell is reset to the latest batch's interval around that batch mean
  CHECK(report.rectangle.at("A", "q").lo > 0.5);
  CHECK(report.rectangle.at("A", "q").contains(0.95));
}

TEST_CASE("pruning localizes later statistics to the survivors") {
  // "noisy" is far worse and far more spread out; once it is pruned after
  // batch 1, the batch-2 half-width is driven by the survivors' small spread
  const std::size_t m = 150;
  std::vector<std::string> samples;
  for (std::size_t i = 0; i < m; ++i) samples.push_back("s" + std::to_string(i));
  std::vector<double> values;
  for (std::size_t i = 0; i < m; ++i) values.push_back(i % 2 == 0 ? 0.25 : 0.35);  // calm
  for (std::size_t i = 0; i < m; ++i) values.push_back(i % 2 == 0 ? 0.27 : 0.37);  // calm2
  for (std::size_t i = 0; i < m; ++i) values.push_back(i % 2 == 0 ? 0.70 : 1.00);  // noisy
  const CriterionMatrix matrix({"calm", "calm2", "noisy"}, {"q"}, samples, values);

  PspConfig cfg;
  cfg.s0 = 50;
  cfg.epsilon = 0.01;
  cfg.delta = 0.1;
  cfg.method = BoundMethod::gaussian_chernoff_union;
  cfg.objective = Objective{{{"q", 1.0}}};

  const SelectionReport report = psp(matrix, cfg);
  REQUIRE(report.trace.size() == 2);
  CHECK(report.trace[0].active_codecs == std::vector<std::string>{"calm", "calm2"});
  CHECK(report.trace[1].intervals.count({"noisy", "q"}) == 0);

  // counterfactual batch-2 rectangle with the pruned codec still present
  const ConfidenceRectangle with_noisy =
      build_rectangle(matrix.slice({0, 1, 2}, 50, 100), cfg.method, cfg.delta, 2, 3);
  const double actual = report.trace[1].intervals.at({"calm", "q"}).width();
  CHECK(actual < 0.5 * with_noisy.at("calm", "q").width());
}

TEST_CASE("constraint pruning removes provably infeasible codecs") {
  const SyntheticWorld world({"lowcost", "overload"}, {"score", "load"},
                             {DistSpec::point(0.5), DistSpec::point(0.2),
                              DistSpec::point(0.3), DistSpec::point(0.9)},
                             2);
  const CriterionMatrix matrix = sample_matrix(world, 200, 14);
  PspConfig cfg;
  cfg.s0 = 25;
  cfg.epsilon = 0.05;
  cfg.delta = 0.05;
  cfg.method = BoundMethod::gaussian_chernoff_union;
  cfg.objective = Objective{{{"score", 1.0}}};
  cfg.constraints.halfspaces.push_back({{{"load", 1.0}}, 0.5});

  const SelectionReport report = psp(matrix, cfg);
  CHECK(!contains(report.trace.back().active_codecs, "overload"));
  CHECK(report.liberal_set == std::vector<std::string>{"lowcost"});
  CHECK(report.conservative_set == std::vector<std::string>{"lowcost"});
}

TEST_CASE("no feasible codec leaves an empty active set") {
  const SyntheticWorld world({"A", "B"}, {"load"},
                             {DistSpec::point(0.8), DistSpec::point(0.9)}, 2);
  const CriterionMatrix matrix = sample_matrix(world, 100, 1);
  PspConfig cfg;
  cfg.s0 = 25;
  cfg.epsilon = 0.05;
  cfg.delta = 0.05;
  cfg.method = BoundMethod::gaussian_chernoff_union;
  cfg.objective = Objective{{{"load", 1.0}}};
  cfg.constraints.halfspaces.push_back({{{"load", 1.0}}, 0.5});

  const SelectionReport report = psp(matrix, cfg);
  CHECK(report.no_feasible_codec);
  CHECK(report.liberal_set.empty());
  CHECK(report.trace.back().active_codecs.empty());
  CHECK(report.terminated_reason == TerminationReason::singleton);
}

TEST_CASE("psp validates its configuration") {
  const SyntheticWorld world({"A"}, {"q"}, {DistSpec::point(0.5)}, 2);
  const CriterionMatrix matrix = sample_matrix(world, 100, 1);
  PspConfig cfg;
  cfg.s0 = 25;
  cfg.epsilon = 0.05;
  cfg.delta = 0.05;
  cfg.method = BoundMethod::hoeffding_union;
  cfg.objective = Objective{{{"q", 1.0}}};

  PspConfig bad = cfg;
  bad.delta = 1.5;
  CHECK_THROWS_AS(psp(matrix, bad), ConfigurationError);
  bad = cfg;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(psp(matrix, bad), ConfigurationError);
  bad = cfg;
  bad.s0 = 1;
  CHECK_THROWS_AS(psp(matrix, bad), ConfigurationError);
  bad = cfg;
  bad.objective = Objective{{{"nope", 1.0}}};
  CHECK_THROWS_AS(psp(matrix, bad), ConfigurationError);
}
