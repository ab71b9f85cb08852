import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hypermetrics.geometry import Domain, DomainMismatch, dist_to_boundary, NumericUnderflow, random_finite_domain, sample_interior, unit
from hypermetrics.metrics import (
    TRUE_METRICS,
    MetricKind as K,
    apollonian,
    asinh_log,
    cassinian,
    evaluate,
    evaluate_all,
    evaluate_many,
    gromov_product,
    half_apollonian,
    j_gehring_osgood,
    j_tilde,
    metric_function,
    rho_ball,
    rho_half_space,
    seittenranta,
    tau_tilde,
    triangular_ratio,
    u_metric,
)
from hypermetrics.suprema import InsufficientBoundary

e1, e2 = unit(1, 2), unit(2, 2)
D0 = Domain.punctured([0, 0])
LOG3 = math.log(3)


def close(a, b, rel=1e-12):
    return a == pytest.approx(b, rel=rel, abs=1e-300)


# --- worked values ------------------------------------------------------------------

def test_u_examples():
    assert close(u_metric(Domain.ball(2), 0.5 * e1, -0.5 * e1).value, 2 * LOG3)
    assert u_metric(D0, e1, e1).value == 0.0
    assert close(u_metric(D0, e1, 3 * e1).value, 2 * math.log(5 / math.sqrt(3)))


def test_tau_tilde_examples():
    assert close(tau_tilde(D0, e1, -e1).value, LOG3)
    assert tau_tilde(D0, e1, e1).value == 0.0
    assert close(tau_tilde(D0, e1, 3 * e1).value, math.log(1 + 2 / math.sqrt(3)))


def test_tau_tilde_witness_is_the_puncture():
    w = tau_tilde(D0, e1, 3 * e1).witness
    np.testing.assert_array_equal(w.argmax[0], [0, 0])


def test_j_examples():
    assert close(j_gehring_osgood(D0, e1, 3 * e1).value, 0.5 * math.log(5))
    assert j_gehring_osgood(D0, e1, e1).value == 0.0
    j = j_gehring_osgood(D0, e1, -e1).value
    assert close(j, LOG3)
    assert close(u_metric(D0, e1, -e1).value, 2 * j)


def test_j_tilde_examples():
    assert close(j_tilde(Domain.two_punctured(-e1, e1), [0, 0], 3 * e2).value, math.log(4))
    assert j_tilde(D0, e1, e1).value == 0.0
    assert close(j_tilde(D0, e1, 3 * e1).value, LOG3)


def test_rho_ball_examples():
    assert close(rho_ball([0, 0], 0.5 * e1).value, LOG3)
    assert rho_ball(0.3 * e1, 0.3 * e1).value == 0.0
    assert close(rho_ball(0.5 * e1, -0.5 * e1).value, 2 * LOG3)


def test_rho_half_space_examples():
    assert close(rho_half_space(2 * e2, 0.5 * e2).value, 2 * math.log(2))
    assert rho_half_space(e2, e2).value == 0.0
    assert close(rho_half_space(e2, e1 + e2).value, 2 * math.asinh(0.5))


def test_cassinian_examples():
    assert close(cassinian(D0, e1, 3 * e1).value, 2 / 3)
    assert cassinian(D0, e1, e1).value == 0.0
    assert close(cassinian(D0, e1, -e1).value, 2.0)


def test_seittenranta_examples():
    assert close(seittenranta(D0, e1, 3 * e1).value, LOG3)
    assert seittenranta(D0, e1, e1).value == 0.0
    assert close(seittenranta(D0, e1, -e1).value, LOG3)


def test_triangular_ratio_examples():
    assert close(triangular_ratio(D0, e1, -e1).value, 1.0)
    assert triangular_ratio(D0, e1, e1).value == 0.0
    assert close(triangular_ratio(D0, e1, 3 * e1).value, 0.5)


def test_half_apollonian_examples():
    assert close(half_apollonian(D0, e1, 3 * e1).value, LOG3)
    assert half_apollonian(D0, e1, e1).value == 0.0
    assert half_apollonian(D0, e1, -e1).value == 0.0


def test_apollonian_examples():
    a = apollonian(D0, e1, 3 * e1).value
    assert close(a, LOG3)
    assert apollonian(D0, e1, e1).value == 0.0
    d = seittenranta(D0, e1, 3 * e1).value
    assert a <= d <= math.log(math.exp(a) + 2)
    assert close(math.log(math.exp(a) + 2), math.log(5))


def test_evaluate_dispatch():
    assert close(evaluate(K.U, Domain.ball(2), 0.5 * e1, -0.5 * e1).value, 2 * LOG3)
    assert close(evaluate("tau_tilde", D0, e1, -e1).value, LOG3)
    with pytest.raises(DomainMismatch):
        evaluate(K.RHO_BALL, Domain.half_space(2), e2, 2 * e2)
    with pytest.raises(DomainMismatch):
        evaluate(K.RHO_HALF_SPACE, Domain.ball(2), 0.1 * e2, 0.2 * e2)


def test_metric_names_are_fixed():
    assert [k.value for k in K] == ["u", "tau_tilde", "j_go", "j_tilde", "rho_ball", "rho_half_space",
                                    "cassinian", "seittenranta", "s", "eta", "alpha"]


def test_pair_metrics_need_two_boundary_points():
    D = Domain.finite([[0, 0]], include_infinity=False)
    with pytest.raises(InsufficientBoundary):
        evaluate(K.SEITTENRANTA, D, e1, 3 * e1)
    with pytest.raises(InsufficientBoundary):
        evaluate(K.APOLLONIAN, D, e1, 3 * e1)


def test_near_boundary_guard():
    with pytest.raises(NumericUnderflow):
        evaluate(K.U, Domain.half_space(2), [0, 1e-13], [0, 1])
    with pytest.raises(NumericUnderflow):
        rho_ball([1 - 1e-13, 0], [0, 0])


def test_u_open_question_values():
    # u is neither j_tilde nor 2 j_tilde at generic points of the punctured plane
    x, y = 2 * e1, e1
    assert close(u_metric(D0, x, y).value, math.log(9 / 2))
    assert close(j_tilde(D0, x, y).value, math.log(2))


def test_asinh_log_matches_asinh():
    s = np.geomspace(1e-300, 1e300, 2001)
    np.testing.assert_allclose(asinh_log(s), np.arcsinh(s), rtol=1e-14)


# --- oracle agreement --------------------------------------------------------------

FINITE_DOMAINS = [D0, Domain.two_punctured(-e1, e1), random_finite_domain(5, 2, 1),
                  random_finite_domain(4, 3, 2), Domain.finite([[0, 0], [1, 1]], include_infinity=False)]


@pytest.mark.parametrize("domain", FINITE_DOMAINS, ids=repr)
def test_point_boundary_metrics_match_mpmath(domain):
    P = sample_interior(domain, None, 3, 60)
    pts = domain.points.tolist()
    ref = {
        K.U: lambda x, y: oracles.u(domain.kind, pts, x, y),
        K.J_TILDE: lambda x, y: oracles.j_tilde(domain.kind, pts, x, y),
        K.J_GEHRING_OSGOOD: lambda x, y: oracles.j_go(domain.kind, pts, x, y),
        K.TAU_TILDE: lambda x, y: oracles.tau_tilde(pts, x, y),
        K.CASSINIAN: lambda x, y: oracles.cassinian(pts, x, y),
        K.TRIANGULAR_RATIO: lambda x, y: oracles.triangular(pts, x, y),
        K.HALF_APOLLONIAN: lambda x, y: oracles.eta(pts, x, y),
        K.SEITTENRANTA: lambda x, y: oracles.seittenranta(pts, x, y, domain.include_infinity),
        K.APOLLONIAN: lambda x, y: oracles.apollonian(pts, x, y, domain.include_infinity),
    }
    X, Y = P[:30], P[30:]
    got = evaluate_all(list(ref), domain, X, Y)
    for kind, f in ref.items():
        want = np.array([float(f(x, y)) for x, y in zip(X, Y)])
        np.testing.assert_allclose(got[kind], want, rtol=1e-12, err_msg=kind.value)


@pytest.mark.parametrize("domain", [Domain.ball(2), Domain.ball(3), Domain.half_space(2), Domain.half_space(3)],
                         ids=repr)
def test_closed_form_metrics_match_mpmath(domain):
    P = sample_interior(domain, None, 5, 200)
    X, Y = P[:100], P[100:]
    rho = K.RHO_BALL if domain.kind == "ball" else K.RHO_HALF_SPACE
    got = evaluate_all([K.U, K.J_TILDE, K.J_GEHRING_OSGOOD, rho], domain, X, Y)
    for kind, f in [(K.U, oracles.u), (K.J_TILDE, oracles.j_tilde), (K.J_GEHRING_OSGOOD, oracles.j_go)]:
        want = [float(f(domain.kind, [], x, y)) for x, y in zip(X, Y)]
        np.testing.assert_allclose(got[kind], want, rtol=1e-12, err_msg=kind.value)
    rf = oracles.rho_ball if domain.kind == "ball" else oracles.rho_half_space
    np.testing.assert_allclose(got[rho], [float(rf(x, y)) for x, y in zip(X, Y)], rtol=1e-12)


def test_close_pairs_keep_relative_precision():
    x = np.array([0.3, 0.4])
    for h in (1e-4, 1e-8, 1e-12):
        y = x + h * np.array([0.6, -0.8])
        for kind, f in [(K.U, oracles.u), (K.J_TILDE, oracles.j_tilde), (K.J_GEHRING_OSGOOD, oracles.j_go)]:
            assert close(evaluate(kind, Domain.ball(2), x, y).value, float(f("ball", [], x, y)), rel=1e-9)
        assert close(evaluate(K.RHO_BALL, Domain.ball(2), x, y).value, float(oracles.rho_ball(x, y)), rel=1e-9)


# --- invariants -----------------------------------------------------------------

ALL_DOMAINS = [D0, Domain.two_punctured(-e1, e1), random_finite_domain(5, 2, 0), Domain.ball(2), Domain.half_space(2)]


@pytest.mark.parametrize("domain", ALL_DOMAINS, ids=repr)
def test_metric_axioms_on_sampled_triples(domain):
    n = 3000 if domain.has_point_boundary else 600
    P = sample_interior(domain, None, 41, 3 * n)
    X, Y, Z = P[:n], P[n:2 * n], P[2 * n:]
    kinds = [K.U, K.TAU_TILDE, K.J_GEHRING_OSGOOD, K.J_TILDE, K.CASSINIAN, K.SEITTENRANTA, K.HALF_APOLLONIAN]
    xy, yx = evaluate_all(kinds, domain, X, Y), evaluate_all(kinds, domain, Y, X)
    xz, zy = evaluate_all(kinds, domain, X, Z), evaluate_all(kinds, domain, Z, Y)
    for k in kinds:
        np.testing.assert_allclose(xy[k], yx[k], rtol=1e-12, atol=1e-15, err_msg=k.value)
        assert np.all(xy[k] >= 0)
        slack = xz[k] + zy[k] - xy[k]
        assert np.all(slack >= -1e-12 * np.maximum(1, xy[k])), k.value


@pytest.mark.parametrize("domain", ALL_DOMAINS, ids=repr)
def test_zero_iff_equal(domain):
    P = sample_interior(domain, None, 43, 20)
    for kind in TRUE_METRICS + (K.TRIANGULAR_RATIO,):
        if kind is K.SEITTENRANTA and domain.boundary_count() < 2:
            continue
        assert np.all(evaluate_many(kind, domain, P, P) == 0)
        assert np.all(evaluate_many(kind, domain, P[:10], P[10:]) > 0)


SIMILARITY_INVARIANT = [K.U, K.TAU_TILDE, K.J_GEHRING_OSGOOD, K.J_TILDE, K.SEITTENRANTA,
                        K.TRIANGULAR_RATIO, K.HALF_APOLLONIAN, K.APOLLONIAN]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.01, 100), st.floats(-10, 10), st.floats(-10, 10))
def test_similarity_invariance(seed, lam, v1, v2):
    D = random_finite_domain(4, 2, seed)
    E = D.transformed(lam, [v1, v2])
    P = sample_interior(D, None, seed, 2)
    x, y = P
    fx, fy = lam * x + [v1, v2], lam * y + [v1, v2]
    for k in SIMILARITY_INVARIANT:
        a = evaluate(k, D, x, y).value
        b = evaluate(k, E, fx, fy).value
        assert b == pytest.approx(a, rel=1e-9, abs=1e-12), k.value
    c = evaluate(K.CASSINIAN, D, x, y).value
    assert evaluate(K.CASSINIAN, E, fx, fy).value == pytest.approx(c / lam, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.05, 20), st.floats(-10, 10))
def test_half_space_similarity_invariance(seed, lam, v1):
    # horizontal translations and dilations map the half-plane to itself
    D = Domain.half_space(2)
    x, y = sample_interior(D, None, seed, 2)
    fx, fy = lam * x + [v1, 0], lam * y + [v1, 0]
    for k in SIMILARITY_INVARIANT + [K.RHO_HALF_SPACE]:
        assert evaluate(k, D, fx, fy).value == pytest.approx(evaluate(k, D, x, y).value, rel=1e-8, abs=1e-12)
    assert evaluate(K.CASSINIAN, D, fx, fy).value == pytest.approx(evaluate(K.CASSINIAN, D, x, y).value / lam,
                                                                    rel=1e-8)


def test_seittenranta_equals_j_tilde_on_punctured_space():
    for seed, p in [(1, [0, 0]), (2, [1.5, -0.5])]:
        D = Domain.punctured(p)
        P = sample_interior(D, None, seed, 2000)
        v = evaluate_all([K.SEITTENRANTA, K.J_TILDE], D, P[:1000], P[1000:])
        np.testing.assert_allclose(v[K.SEITTENRANTA], v[K.J_TILDE], rtol=1e-14)


def test_u_equals_rho_on_ball_diameters():
    for r in np.linspace(0.05, 0.95, 19):
        for dim in (2, 3):
            x = np.zeros(dim)
            x[0] = r
            v = evaluate_all([K.U, K.RHO_BALL], Domain.ball(dim), x, -x)
            assert v[K.U][0] == pytest.approx(v[K.RHO_BALL][0], rel=1e-12)


@pytest.mark.parametrize("domain", ALL_DOMAINS, ids=repr)
def test_u_below_2_j_tilde_iff_far_apart(domain):
    P = sample_interior(domain, None, 47, 40000)
    X, Y = P[:20000], P[20000:]
    v = evaluate_all([K.U, K.J_TILDE], domain, X, Y)
    dX, dY = dist_to_boundary(domain, X), dist_to_boundary(domain, Y)
    L2 = np.sum((X - Y) ** 2, axis=1)
    far = L2 >= dX * dY
    clear = np.abs(L2 - dX * dY) > 1e-9 * dX * dY
    holds = v[K.U] <= 2 * v[K.J_TILDE] * (1 + 1e-12)
    assert np.array_equal(far[clear], holds[clear])
    assert far.any() and (~far).any()


# --- Gromov product ------------------------------------------------------------------

def test_gromov_product_examples():
    euclid = lambda a, b: float(np.linalg.norm(np.asarray(a) - np.asarray(b)))
    assert gromov_product(euclid, [0, 0], [2, 0], [1, 0]) == 0.0
    x, z = np.array([0.3, 0.2]), np.array([1.0, -2.0])
    assert gromov_product(euclid, x, x, z) == euclid(x, z)
    d = metric_function("u", D0)
    assert gromov_product(d, e1, 3 * e1, e1) == 0.0


@pytest.mark.parametrize("domain", [D0, Domain.ball(2)], ids=repr)
def test_gromov_product_nonnegative_for_true_metrics(domain):
    P = sample_interior(domain, None, 53, 60)
    for kind in TRUE_METRICS:
        if not (kind is K.SEITTENRANTA and domain.boundary_count() < 2):
            d = metric_function(kind, domain)
            for x, y, z in zip(P[:20], P[20:40], P[40:]):
                assert gromov_product(d, x, y, z) >= -1e-12
