"""Hull certificates, conversions, schedules, and boundary normalization."""
import math

import numpy as np
import pytest

from discenv.discs import AnalyticDiscLift, BoundaryGrid, CompositeDisc
from discenv.envelope import DiscFamilySpec, OptimizerConfig
from discenv.errors import InfeasibleDiscError
from discenv.hull import (CompactSetSpec, HullCertificate, b_to_bprime,
                          bprime_to_b, center_report, hull_test, lambda_c_rho,
                          lambda_schedule, normalize_disc, spherical_lift)
from discenv.projective import ProjPoint

SMALL = OptimizerConfig(starts=5, budget=300, seed=1, search_nodes=128)


def circle_set(n=64):
    # 64 samples keep the sampled-tube gap (~pi/128) well inside delta=0.05
    th = 2.0 * np.pi * np.arange(n) / n
    pts = tuple(ProjPoint(np.array([1.0, np.exp(1j * t)]) / math.sqrt(2.0))
                for t in th)
    return CompactSetSpec(pts, name="circle")


def test_lambda_c_rho_roundtrips():
    assert lambda_c_rho(0.0) == {"lambda": 0.0, "C": 1.0, "rho": 1.0}
    out = lambda_c_rho(math.log(2.0))
    assert out["C"] == pytest.approx(2.0) and out["rho"] == pytest.approx(0.5)
    out = lambda_c_rho(math.exp(-3.0), source="rho")
    assert out["lambda"] == pytest.approx(3.0)
    assert out["C"] == pytest.approx(math.exp(3.0))
    for lam in (0.0, 0.7, -1.3):
        a = lambda_c_rho(lam)
        assert lambda_c_rho(a["C"], "C")["lambda"] == pytest.approx(lam,
                                                                    abs=1e-15)
        assert lambda_c_rho(a["rho"], "rho")["lambda"] == pytest.approx(
            lam, abs=1e-15)
    with pytest.raises(ValueError):
        lambda_c_rho(-1.0, source="C")


def test_spherical_lift_counts_and_norms():
    K = CompactSetSpec((ProjPoint(np.array([1.0, 0.0])),))
    lifted = spherical_lift(K, 4)
    assert lifted.samples.shape == (4, 2)
    assert np.allclose(np.linalg.norm(lifted.samples, axis=1), 1.0,
                       atol=1e-15)
    # projecting back recovers the K sample
    for row in lifted.samples:
        assert ProjPoint(row).isclose(K.samples[0], 1e-12)


def test_compact_set_dedups():
    p = ProjPoint(np.array([1.0, 0.0]))
    K = CompactSetSpec((p, ProjPoint(np.array([2.0, 0.0])), p))
    assert len(K.samples) == 1


def test_hull_point_on_K_constant_disc():
    K = circle_set()
    x = K.samples[0]
    cert = hull_test(x, K, 1.0, 0.01, 0.05)
    assert isinstance(cert, HullCertificate)
    assert cert.value == 0.0
    assert cert.witness.degree == 0


def test_hull_circle_case():
    K = circle_set()
    x = ProjPoint(np.array([1.0, 0.0]))
    cert = hull_test(x, K, 0.5 * math.log(2.0), 0.01, 0.05,
                     DiscFamilySpec(m=2), SMALL)
    assert isinstance(cert, HullCertificate)
    assert cert.value <= 0.5 * math.log(2.0) + 1e-6
    rep = cert.revalidate(K)
    assert rep["ok"]


def test_hull_failure_is_one_sided():
    K = circle_set()
    x = ProjPoint(np.array([1.0, 0.0]))
    out = hull_test(x, K, 0.1, 0.01, 0.05, DiscFamilySpec(m=2), SMALL)
    assert isinstance(out, dict) and not out["certified"]
    assert "does not witness exclusion" in out["statement"]
    assert out["best_value"] == pytest.approx(0.5 * math.log(2.0), abs=0.05)


def test_schedule_on_K_point_all_zero():
    K = circle_set()
    x = K.samples[3]
    res = lambda_schedule(x, K, [0.3, 0.1, 0.03], DiscFamilySpec(m=2), SMALL)
    assert all(v == 0.0 for v in res["estimates"])


def test_schedule_rejects_bad_order():
    K = circle_set()
    x = ProjPoint(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        lambda_schedule(x, K, [0.1, 0.3], DiscFamilySpec(m=2), SMALL)


def test_normalize_constant_boundary_norm():
    d = AnalyticDiscLift(np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex))
    grid = BoundaryGrid(1024)
    comp = normalize_disc(d, 0.9, grid)
    import discenv.kernels as kernels

    vals = kernels.eval_poly(comp.base.coeffs, grid.nodes)
    vals = vals / np.exp(comp.exponent_values(grid.nodes))[:, None]
    norms = np.linalg.norm(vals, axis=1)
    assert np.abs(norms - 1.0).max() < 1e-12  # constant Dirichlet data


def test_normalize_nonconstant_boundary_decreasing():
    d = AnalyticDiscLift(np.array([[1.5, 0.3], [0.4, 1.0]], dtype=complex))
    grid = BoundaryGrid(2048)
    import discenv.kernels as kernels

    errs = []
    for r in (0.9, 0.99, 0.999):
        comp = normalize_disc(d, r, grid)
        vals = kernels.eval_poly(comp.base.coeffs, grid.nodes)
        vals = vals / np.exp(comp.exponent_values(grid.nodes))[:, None]
        errs.append(float(np.abs(np.linalg.norm(vals, axis=1) - 1.0).max()))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 1e-3


def test_normalize_center_matches_functional():
    # -log||p|| equals the omega functional of the original disc (phi = 0)
    from discenv.functionals import omega_functional_direct
    from discenv.projective import ZeroWeight

    d = AnalyticDiscLift(np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex))
    comp = normalize_disc(d, 0.999, BoundaryGrid(4096))
    rep = center_report(comp)
    ref = omega_functional_direct(ZeroWeight(), d).total
    assert rep["neg_log_norm"] == pytest.approx(ref, abs=1e-6)


def test_normalize_rejects_bad_radius():
    d = AnalyticDiscLift(np.array([[1.0], [0.5]], dtype=complex))
    with pytest.raises(ValueError):
        normalize_disc(d, 1.0)


def test_b_to_bprime_constant_certificate():
    K = circle_set()
    x = K.samples[0]
    cert = hull_test(x, K, 1.0, 0.01, 0.05)
    rep = b_to_bprime(cert, K, 16, 0.1, 0.99)
    assert rep["center_norm"] == pytest.approx(1.0, abs=1e-10)
    assert rep["bound_ok"]


def test_b_to_bprime_tube_violation():
    K = circle_set()
    x = ProjPoint(np.array([1.0, 0.0]))
    cert = hull_test(x, K, 0.5 * math.log(2.0), 0.01, 0.05,
                     DiscFamilySpec(m=2), SMALL)
    with pytest.raises(InfeasibleDiscError):
        b_to_bprime(cert, K, 16, 1e-6, 0.999)


def test_bprime_to_b_unit_boundary():
    # normalized (1, t)/sqrt(2): boundary norm exactly 1
    d = AnalyticDiscLift(np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex))
    comp = normalize_disc(d, 0.999, BoundaryGrid(2048))
    rep = bprime_to_b(comp, 1e-3, BoundaryGrid(2048))
    assert rep["bound_ok"]
    assert rep["functional"] == pytest.approx(rep["neg_log_center_norm"],
                                              abs=1e-3)


def test_bprime_to_b_rejects_large_boundary_norm():
    d = AnalyticDiscLift(np.array([[2.0, 0.0], [0.0, 1.0]], dtype=complex))
    comp = CompositeDisc(d, np.zeros(1, dtype=complex))
    with pytest.raises(InfeasibleDiscError):
        bprime_to_b(comp, 1e-3)
