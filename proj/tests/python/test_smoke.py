"""Smoke tests for the Python bindings."""

import math

import pytest

import codecsel as cs


def test_halfwidth_formulas():
    eps = cs.epsilon_finite_emd(d=0.0, m=16000, n_criteria=2, delta=0.01)
    assert 2 * eps == pytest.approx(0.0821, abs=5e-4)
    hoe = cs.epsilon_hoeffding(m=16000, n_codecs=13, n_criteria=2, delta=0.01)
    assert 0.031 <= 2 * hoe <= 0.034
    assert cs.epsilon_gaussian_chernoff(0.5, 16000, 13, 2, 0.01) == pytest.approx(hoe)
    var = cs.VarianceEstimate(sigma_sq=0.02)
    asym = cs.epsilon_asymptotic_emd(0.01, var, 3200, 2, 0.01, cs.Tails.two)
    assert asym == pytest.approx(0.03573, abs=1e-5)


def test_parameter_validation_raises():
    with pytest.raises(ValueError):
        cs.epsilon_hoeffding(100, 13, 2, 1.5)


def test_matrix_and_emd():
    matrix = cs.CriterionMatrix(
        codec_ids=["A", "B"],
        criterion_ids=["c"],
        sample_ids=["s0", "s1", "s2", "s3"],
        values=[0.2, 0.8, 0.4, 0.6, 0.5, 0.5, 0.5, 0.5],
    )
    assert cs.emd(matrix, "c") == pytest.approx(0.2)
    assert matrix.mean(0, 0) == pytest.approx(0.5)


def test_global_sampling_selects_the_dominating_codec():
    world = cs.SyntheticWorld(
        codec_ids=["good", "bad"],
        criterion_ids=["q"],
        dists=[cs.DistSpec.point(0.2), cs.DistSpec.point(0.8)],
        seed=7,
    )
    matrix = cs.sample_matrix(world, m=64, seed=1)
    cfg = cs.GsConfig(
        delta=0.05,
        method=cs.BoundMethod.gaussian_chernoff_union,
        objective=cs.Objective({"q": 1.0}),
    )
    report = cs.global_sampling(matrix, cfg)
    assert report.liberal_set == ["good"]
    assert report.conservative_set == ["good"]
    lower, upper = report.sandwich
    assert lower == pytest.approx(0.2)
    assert upper == pytest.approx(0.2)


def test_psp_terminates_with_certificate():
    world = cs.SyntheticWorld(
        codec_ids=["good", "bad"],
        criterion_ids=["q"],
        dists=[cs.DistSpec.point(0.1), cs.DistSpec.point(0.9)],
        seed=3,
    )
    matrix = cs.sample_matrix(world, m=400, seed=5)
    cfg = cs.PspConfig(
        s0=25,
        epsilon=0.05,
        delta=0.01,
        method=cs.BoundMethod.gaussian_chernoff_union,
        objective=cs.Objective({"q": 1.0}),
    )
    report = cs.psp(matrix, cfg)
    assert report.terminated_reason == cs.TerminationReason.epsilon_optimal
    assert report.liberal_set == ["good"]
    assert report.certified
    assert report.samples_used == 25


def test_batch_schedule_matches_doubling_plan():
    plan = cs.batch_schedule(16000, 25)
    assert plan.iterations == 9
    assert plan.sizes == [25, 50, 100, 200, 400, 800, 1600, 3200, 6400]
    assert plan.total_used() == 25 * (2**9 - 1)


def test_sampling_is_deterministic():
    world = cs.SyntheticWorld(
        codec_ids=["A"],
        criterion_ids=["q"],
        dists=[cs.DistSpec.beta(2.0, 5.0)],
        seed=11,
    )
    a = cs.sample_matrix(world, m=50, seed=2)
    b = cs.sample_matrix(world, m=50, seed=2)
    assert [a.value(0, 0, i) for i in range(50)] == [b.value(0, 0, i) for i in range(50)]
    assert abs(world.true_mean(0, 0) - 2.0 / 7.0) < 1e-12


def test_oracle_and_constraints():
    world = cs.SyntheticWorld(
        codec_ids=["A", "B"],
        criterion_ids=["q", "load"],
        dists=[
            cs.DistSpec.point(0.2),
            cs.DistSpec.point(0.9),
            cs.DistSpec.point(0.5),
            cs.DistSpec.point(0.1),
        ],
        seed=0,
    )
    space = cs.ConstraintSpace([cs.HalfSpace({"load": 1.0}, 0.5)])
    sel = cs.oracle_select(world, cs.Objective({"q": 1.0}), space)
    assert sel.feasible == ["B"]
    assert sel.optimal == ["B"]
    assert sel.value == pytest.approx(0.5)
