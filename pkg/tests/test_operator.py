import math
from dataclasses import replace

import numpy as np
import pytest

from pericone import (
    Constant,
    DomainError,
    FourierSeries,
    GridFunction,
    PowerLawRadial,
    Problem,
    SingularityError,
    annulus_bounds,
    apply_T,
    cone_membership,
    fixed_point_residual,
    ode_residual,
)

import oracles
from conftest import (
    SUPERLINEAR_TERMS,
    kernel_cone_points,
    make_problem,
    smooth_cone_points,
)


def test_constant_nonlinearity_inverts_kernel(bench_tables):
    # f identically 4: T x = lam * 4 * integral of G = lam * 4 / k^2
    prob = make_problem(1.0, 2.0, 0.3)
    prob = replace(prob, f=PowerLawRadial((((4.0, 0.0),), ((4.0, 0.0),))))
    x = GridFunction(2, 256, 1.0, np.full((2, 256), 0.7))
    out = apply_T(prob, bench_tables, x)
    assert np.max(np.abs(out.values - 0.3 * 4.0)) <= 1e-8


def test_lambda_zero_annihilates(bench_tables):
    prob = make_problem(1.0, 2.0, 0.0)
    x = GridFunction(2, 256, 1.0, np.full((2, 256), 0.7))
    out = apply_T(prob, bench_tables, x)
    assert np.max(np.abs(out.values)) == 0.0


def test_linearity_in_lambda(bench_tables):
    prob1 = make_problem(1.0, 2.0, 0.2)
    prob2 = make_problem(1.0, 2.0, 0.4)
    x = GridFunction(2, 256, 1.0, np.full((2, 256), 1.3))
    y1 = apply_T(prob1, bench_tables, x)
    y2 = apply_T(prob2, bench_tables, x)
    assert np.max(np.abs(y2.values - 2.0 * y1.values)) <= 1e-12


def test_cone_invariance(bench_tables, superlinear_small):
    prob, cc = superlinear_small
    rng = np.random.default_rng(11)
    pts = smooth_cone_points(prob, 256, cc.sigma, 50, rng)
    pts += kernel_cone_points(prob, bench_tables, 50, rng)
    for x in pts:
        out = apply_T(prob, bench_tables, x)
        rep = cone_membership(out, cc.sigma)
        assert rep.margin >= -1e-10
        assert rep.member


def test_operator_estimates_on_annulus(bench_tables, superlinear_small):
    prob, cc = superlinear_small
    rng = np.random.default_rng(23)
    for r in (0.3, 1.0, 5.0):
        bounds = annulus_bounds(prob.f, r, cc.sigma, prob.n)
        low = prob.lam * cc.Gamma * bounds.eta * r
        high = prob.lam * (cc.C_hat * bounds.M_hat
                           + float((cc.M * cc.int_abs_e).sum()))
        pts = smooth_cone_points(prob, 256, cc.sigma, 20, rng, norm=r)
        pts += kernel_cone_points(prob, bench_tables, 15, rng, norm=r)
        for x in pts:
            out = apply_T(prob, bench_tables, x)
            slack = 1e-8 * (1.0 + x.norm)
            assert out.norm >= low - slack
            assert out.norm <= high + slack


def test_fixed_point_residual_at_oracle_root(bench_tables):
    lam = 0.05
    norms = oracles.constant_solution_norms(SUPERLINEAR_TERMS, lam)
    assert len(norms) == 2
    prob = make_problem(1.0, 2.0, lam)
    for norm in norms:
        c = norm / 2.0
        x = GridFunction(2, 256, 1.0, np.full((2, 256), c))
        assert fixed_point_residual(prob, bench_tables, x) <= 1e-8


def test_ode_residual_constant_solution(bench_tables):
    lam = 0.05
    norms = oracles.constant_solution_norms(SUPERLINEAR_TERMS, lam)
    prob = make_problem(1.0, 2.0, lam)
    c = norms[0] / 2.0
    x = GridFunction(2, 256, 1.0, np.full((2, 256), c))
    assert ode_residual(prob, x) <= 1e-8


def test_ode_residual_flags_non_solution(bench_tables):
    prob = make_problem(1.0, 2.0, 0.05)
    x = GridFunction(2, 256, 1.0, np.full((2, 256), 5.0))
    assert ode_residual(prob, x) > 0.1


def test_singularity_guard(bench_tables):
    prob = make_problem(1.0, 2.0, 0.05)
    x = GridFunction(2, 256, 1.0, np.zeros((2, 256)))
    with pytest.raises(SingularityError):
        apply_T(prob, bench_tables, x)


def test_mixed_split_violation_raises(bench_tables):
    # pure-growth f with a negative e: at small amplitude the pointwise
    # split g*f/2 + e dips below zero and the operator must refuse
    prob = Problem(
        n=1, period=1.0,
        a=(Constant(1.0),), g=(Constant(1.0),),
        e=(FourierSeries(-0.1, (0.2,)),),
        f=PowerLawRadial((((1.0, 2.0),),)), lam=1.0)
    x = GridFunction(1, 256, 1.0, np.full((1, 256), 0.1))
    with pytest.raises(DomainError):
        apply_T(prob, [bench_tables[0]], x)
    # at large amplitude the same profile is admissible
    x_big = GridFunction(1, 256, 1.0, np.full((1, 256), 3.0))
    out = apply_T(prob, [bench_tables[0]], x_big)
    assert out.values.min() > 0.0


def test_table_grid_mismatch_rejected(bench_tables):
    prob = make_problem(1.0, 2.0, 0.05)
    x = GridFunction(2, 128, 1.0, np.full((2, 128), 1.0))
    with pytest.raises(DomainError):
        apply_T(prob, bench_tables, x)
