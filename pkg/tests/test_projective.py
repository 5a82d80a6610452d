"""Projective points, FS geometry, cone domains, weights, and lifts."""
import math

import numpy as np
import pytest

from discenv.projective import (AffineBall, ConstantWeight, Domain, FsBall,
                                HomPolynomial, HyperplaneComplement,
                                Intersection, LiftedWeight, LogPolyWeight,
                                ProjPoint, Tube, ZeroWeight, affine_lift,
                                chart, fs_distance, lelong_lift, lift,
                                lift_weight, project, psh_correspondence)


def test_project_canonicalizes():
    p = project(np.array([2.0, 0.0, 0.0]))
    assert np.allclose(p.vec, [1.0, 0.0, 0.0])


def test_project_phase_normalization():
    p = project(np.array([0.0, 3.0j, 0.0]))
    assert np.allclose(p.vec, [0.0, 1.0, 0.0])


def test_scalar_invariance():
    z = np.array([1.0 + 2.0j, -0.3, 0.7j])
    assert np.allclose(project(z).vec, project(5.0j * z).vec)


def test_project_lift_roundtrip():
    rng = np.random.default_rng(0)
    for _ in range(5):
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        p = project(z)
        assert np.allclose(project(lift(p)).vec, p.vec)
        assert np.linalg.norm(lift(p)) == pytest.approx(1.0, abs=1e-14)


def test_zero_vector_rejected():
    with pytest.raises(ValueError):
        project(np.zeros(3))


def test_fs_distance_basic():
    e0 = project(np.array([1.0, 0.0]))
    e1 = project(np.array([0.0, 1.0]))
    diag = project(np.array([1.0, 1.0]))
    assert fs_distance(e0, e0) == 0.0
    assert fs_distance(e0, e1) == pytest.approx(math.pi / 2, abs=1e-14)
    assert fs_distance(e0, diag) == pytest.approx(math.pi / 4, abs=1e-14)


def test_fs_distance_triangle_inequality():
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b, c = (project(rng.standard_normal(3) + 1j * rng.standard_normal(3))
                   for _ in range(3))
        assert fs_distance(a, c) <= fs_distance(a, b) + fs_distance(b, c) + 1e-12


def test_lifted_weight_values():
    phi = lift_weight(ZeroWeight())
    assert phi.value(np.array([1.0, 0.0])) == pytest.approx(0.0)
    assert phi.value(np.array([2.0, 0.0])) == pytest.approx(math.log(2.0))
    phic = lift_weight(ConstantWeight(1.5))
    z = np.array([0.3, 0.4j])
    assert phic.value(z) == pytest.approx(1.5 + math.log(0.5))


def test_lifted_weight_log_homogeneity():
    rng = np.random.default_rng(2)
    poly = HomPolynomial(((2, 0), (0, 2)), (1.0, -0.5j))
    phi = lift_weight(LogPolyWeight(poly))
    for _ in range(10):
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        lam = 10.0 ** rng.uniform(-3, 3) * np.exp(2j * np.pi * rng.uniform())
        assert phi.value(lam * z) == pytest.approx(
            phi.value(z) + math.log(abs(lam)), abs=1e-12)


def test_psh_correspondence_roundtrip():
    def v(z_rows):
        return np.log(np.abs(z_rows[:, 0])) - np.log(
            np.linalg.norm(z_rows, axis=1))

    u, v_back = psh_correspondence(v)
    rng = np.random.default_rng(3)
    z = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
    assert np.allclose(v_back(z), v(z), atol=1e-12)
    # v == 0 lifts to log norm
    u0, _ = psh_correspondence(lambda z_rows: np.zeros(z_rows.shape[0]))
    assert np.allclose(u0(z), np.log(np.linalg.norm(z, axis=1)))


def test_lelong_lift():
    u_tilde = lelong_lift(lambda w: np.zeros(np.atleast_2d(w).shape[0]))
    z = np.array([[2.0, 1.0], [1.0, 5.0]], dtype=complex)
    assert np.allclose(u_tilde(z), [math.log(2.0), 0.0])
    # restriction to z_0 = 1 recovers u; homogeneity on samples
    def u(w):
        w = np.atleast_2d(w)
        return np.linalg.norm(w, axis=1).real

    ut = lelong_lift(u)
    rng = np.random.default_rng(4)
    for _ in range(5):
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        lam = 2.0 * np.exp(0.3j)
        assert ut(lam * z)[0] == pytest.approx(
            ut(z.reshape(1, -1))[0] + math.log(abs(lam)), abs=1e-12)
    # log-plus example: u = log^+ ||.||, z = (2, 2w) with |w| <= 1 -> log 2
    def logplus(w):
        w = np.atleast_2d(w)
        n = np.linalg.norm(w, axis=1)
        return np.where(n > 1, np.log(n), 0.0)

    lp = lelong_lift(logplus)
    assert lp(np.array([2.0, 2.0 * 0.5]))[0] == pytest.approx(math.log(2.0))
    # z_0 = 0 convention
    assert lelong_lift(u)(np.array([0.0, 1.0]))[0] == -np.inf


# ---------------------------------------------------------------------------
# domains


def _domains():
    center = ProjPoint(np.array([1.0, 0.0]))
    ball = FsBall(center, 0.5)
    tube = Tube((center, ProjPoint(np.array([1.0, 1.0]))), 0.3)
    hyp = HyperplaneComplement(np.array([0.0, 1.0]))
    aff = AffineBall(np.zeros(1, dtype=complex), 1.0)
    inter = Intersection((ball, hyp))
    return [ball, tube, hyp, aff, inter]


def test_domain_scalar_invariance():
    rng = np.random.default_rng(5)
    for dom in _domains():
        for _ in range(20):
            z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            lam = 10.0 ** rng.uniform(-3, 3) * np.exp(2j * np.pi * rng.uniform())
            assert dom.contains(z) == dom.contains(lam * z)


def test_domain_dist_lb_conservative():
    # dist_lb(w) must lower-bound the distance to sampled complement points
    rng = np.random.default_rng(6)
    for dom in _domains():
        for _ in range(30):
            w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            if not dom.contains(w):
                continue
            lb = dom.dist_lb(w)
            probes = w[None, :] + (lb * 0.999) * _unit_rows(rng, 40, 2)
            inside = dom.clearance_many(probes) > 0
            assert np.all(inside), type(dom).__name__


def _unit_rows(rng, n, m):
    z = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    return z / np.linalg.norm(z, axis=1)[:, None]


def test_domain_sample_points_inside():
    rng = np.random.default_rng(7)
    for dom in _domains():
        pts = dom.sample_points(rng, 32)
        assert pts.shape == (32, 2)
        assert np.all(dom.clearance_many(pts) > 0)


def test_domain_json_roundtrip():
    for dom in _domains():
        dom2 = Domain.from_json(dom.to_json())
        rng = np.random.default_rng(8)
        z = rng.standard_normal((16, 2)) + 1j * rng.standard_normal((16, 2))
        assert np.allclose(dom.clearance_many(z), dom2.clearance_many(z))


def test_hyperplane_clearance_angle():
    hyp = HyperplaneComplement(np.array([0.0, 1.0]))
    # point (1, 0): on the hyperplane z_1 = 0? no -- normal is e_1, so
    # <z, a> = z_1; z = (1, 1) has angle arcsin(1/sqrt(2)) = pi/4
    assert hyp.clearance(np.array([1.0, 1.0])) == pytest.approx(math.pi / 4)
    assert hyp.clearance(np.array([1.0, 0.0])) == pytest.approx(0.0, abs=1e-15)


def test_affine_ball_membership():
    aff = AffineBall(np.zeros(1, dtype=complex), 1.0)
    assert aff.contains(affine_lift(np.array([0.5 + 0j])))
    assert not aff.contains(affine_lift(np.array([2.0 + 0j])))
    assert not aff.contains(np.array([0.0, 1.0]))  # hyperplane at infinity


def test_chart_roundtrip():
    u = np.array([0.3 - 0.1j, 2.0j])
    assert np.allclose(chart(affine_lift(u)), u)


def test_weight_json_roundtrip():
    from discenv.projective import Weight

    for w in (ZeroWeight(), ConstantWeight(2.0),
              LogPolyWeight(HomPolynomial(((1, 1),), (2.0,)))):
        w2 = Weight.from_json(w.to_json())
        z = np.array([[1.0, 0.5j], [0.2, 1.0]], dtype=complex)
        assert np.allclose(w.value_proj_many(z), w2.value_proj_many(z))


def test_log_poly_weight_value():
    # P(z) = z_0 z_1, degree 2: phi = 0.5 log|z_0 z_1| - log ||z||
    w = LogPolyWeight(HomPolynomial(((1, 1),), (1.0,)))
    z = np.array([[1.0, 1.0]], dtype=complex)
    assert w.value_proj_many(z)[0] == pytest.approx(-0.5 * math.log(2.0))


def test_lifted_weight_domain_check():
    from discenv.errors import DomainError

    ball = FsBall(ProjPoint(np.array([1.0, 0.0])), 0.2)
    phi = LiftedWeight(ZeroWeight(), ball)
    with pytest.raises(DomainError):
        phi.value(np.array([0.0, 1.0]))
