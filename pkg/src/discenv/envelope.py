"""Envelope estimation: constrained minimization of disc functionals over
polynomial disc families with pinned center, plus lower-bound certificates
from a library of known admissible candidate functions.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .discs import AnalyticDiscLift, BoundaryGrid, DEFAULT_NODES
from .errors import ConfigError, DomainError
from .functionals import omega_functional_lifted, sz_functional
from .projective import (AffineBall, Domain, FsBall, LiftedWeight, ProjPoint,
                         Tube, Weight, chart)

# exterior penalty weight and the search-time margin inflation; the final
# witness is re-checked penalty-free against the family margin itself
PENALTY_RHO = 1.0e4
ETA_INFLATION = 1.5
ORIGIN_FLOOR = 1e-4
_INTERIOR_RADII = (0.25, 0.5, 0.75)
_INTERIOR_ANGLES = 16


@dataclass(frozen=True)
class DiscFamilySpec:
    degree: int = 6
    m: int = 2
    center: ProjPoint | None = None
    bound: float = 10.0
    eta: float = 1e-3

    def with_center(self, x: ProjPoint) -> "DiscFamilySpec":
        return DiscFamilySpec(self.degree, self.m, x, self.bound, self.eta)


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 20
    budget: int = 2000
    seed: int = 7
    search_nodes: int = 256
    workers: int = 1


@dataclass
class EnvelopeEstimate:
    upper: float | None
    witness: AnalyticDiscLift | None
    lower: float | None
    lower_candidate: str | None
    gap: float | None
    trace: list
    settings: dict
    feasible: bool
    witnesses: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "upper": self.upper,
            "witness": self.witness.to_json() if self.witness else None,
            "lower": self.lower,
            "lower_candidate": self.lower_candidate,
            "gap": self.gap,
            "trace": self.trace,
            "settings": self.settings,
            "feasible": self.feasible,
        }


@dataclass(frozen=True)
class _ObjectiveSpec:
    """Everything a restart worker needs; picklable."""

    mode: str
    c0: np.ndarray
    degree: int
    domain: Domain
    weight: Weight
    bound: float
    eta_search: float
    nodes: np.ndarray
    interior_nodes: np.ndarray

    @property
    def m(self) -> int:
        return self.c0.size

    @property
    def dim(self) -> int:
        return 2 * self.degree * self.m


def _theta_to_coeffs(spec: _ObjectiveSpec, theta: np.ndarray) -> np.ndarray:
    c = theta.reshape(spec.degree, 2 * spec.m)
    cplx = c[:, : spec.m] + 1j * c[:, spec.m:]
    return np.concatenate([spec.c0[None, :], cplx], axis=0)


def _coeffs_to_theta(spec: _ObjectiveSpec, coeffs: np.ndarray) -> np.ndarray:
    tail = np.zeros((spec.degree, spec.m), dtype=np.complex128)
    k = min(spec.degree, coeffs.shape[0] - 1)
    tail[:k] = coeffs[1: 1 + k]
    return np.concatenate([tail.real, tail.imag], axis=1).reshape(-1)


def _clip_bound(spec: _ObjectiveSpec, theta: np.ndarray) -> np.ndarray:
    c = theta.reshape(spec.degree, 2 * spec.m)
    nrm = np.sqrt((c * c).sum(axis=1))
    over = nrm > spec.bound
    if np.any(over):
        c = c.copy()
        c[over] *= (spec.bound / nrm[over])[:, None]
        return c.reshape(-1)
    return theta


def _objective(spec: _ObjectiveSpec, theta: np.ndarray) -> float:
    coeffs = _theta_to_coeffs(spec, theta)
    pts = kernels.eval_poly(coeffs, spec.nodes)
    lognorms = 0.5 * np.log(np.einsum("ij,ij->i", pts, pts.conj()).real)
    if spec.mode == "omega":
        value = float(np.mean(spec.weight.value_proj_many(pts) + lognorms))
        # center is a unit vector, so -log|f(0)| = 0
    else:
        mags0 = np.abs(pts[:, 0])
        if np.any(mags0 == 0):
            return math.inf
        charts = pts[:, 1:] / pts[:, :1]
        interior = float(np.mean(np.log(mags0))) - math.log(abs(spec.c0[0]))
        value = interior + float(np.mean(spec.weight.value_affine_many(charts)))
    clear = np.clip(spec.domain.clearance_many(pts), -10.0, None)
    pen = PENALTY_RHO * float(np.mean(np.square(
        np.maximum(0.0, spec.eta_search - clear))))
    inner = kernels.lognorm(coeffs, spec.interior_nodes)
    min_ln = min(float(lognorms.min()), float(inner.min()))
    floor_ln = math.log(ORIGIN_FLOOR)
    if min_ln < floor_ln:
        pen += 10.0 * (floor_ln - min_ln) ** 2
    if not math.isfinite(value):
        return math.inf
    return value + pen


def _restart_job(args):
    spec, theta0, seed, restart, budget = args
    rng = np.random.default_rng([seed, restart, 17])
    theta = _clip_bound(spec, np.asarray(theta0, dtype=float))
    best = _objective(spec, theta)
    sigma = 0.25
    dim = spec.dim
    evals = 1
    while evals < budget:
        if rng.uniform() < 0.5:
            prop = theta + sigma * rng.standard_normal(dim) / math.sqrt(dim)
        else:
            prop = theta.copy()
            prop[rng.integers(dim)] += sigma * rng.standard_normal()
        prop = _clip_bound(spec, prop)
        f = _objective(spec, prop)
        evals += 1
        if f < best:
            best, theta = f, prop
            sigma = min(sigma * 1.4, 2.0)
        else:
            sigma = max(sigma * 0.98, 1e-10)
    return restart, best, theta


def _interior_probe_nodes() -> np.ndarray:
    ang = np.exp(2j * np.pi * np.arange(_INTERIOR_ANGLES) / _INTERIOR_ANGLES)
    pts = [np.array([0.0 + 0j])]
    pts.extend(r * ang for r in _INTERIOR_RADII)
    return np.concatenate(pts)


def _constructed_seeds(spec: _ObjectiveSpec) -> list:
    """Deterministic warm starts: the constant disc, plus Mobius-type
    degree-1 discs aimed at ball/tube anchors (the only disc shapes that
    can trade center distance against boundary containment)."""
    seeds = [np.zeros(spec.dim)]
    dom, c0 = spec.domain, spec.c0

    def push(c1):
        tail = np.zeros((spec.degree, spec.m), dtype=np.complex128)
        tail[0] = c1
        seeds.append(np.concatenate([tail.real, tail.imag], axis=1).reshape(-1))

    if spec.mode == "sz" and isinstance(dom, AffineBall):
        x_aff = chart(c0)
        sep = float(np.linalg.norm(x_aff - dom.center))
        if sep > 1e-12:
            amax = (dom.radius - 2.0 * spec.eta_search) / sep
            mu = abs(c0[0])  # c0 = (1, x) / |(1, x)|, first coord real > 0
            for frac in (0.97, 0.9, 0.75, 0.5, 0.25):
                a = frac * min(amax, 0.999)
                if a <= 0:
                    continue
                c1_aff = dom.center + a * a * (x_aff - dom.center)
                c1 = (-mu / a) * np.concatenate([[1.0 + 0j], c1_aff])
                push(c1)
    anchors = []
    if isinstance(dom, FsBall):
        anchors = [dom.center.vec]
    elif isinstance(dom, Tube):
        idx = np.linspace(0, len(dom.samples) - 1, min(8, len(dom.samples)))
        anchors = [dom.samples[int(i)].vec for i in idx]
    for k in anchors:
        perp = k - np.vdot(c0, k) * c0
        nrm = float(np.linalg.norm(perp))
        if nrm < 1e-9:
            continue
        perp /= nrm
        for beta in (0.25, 0.5, 0.75, 1.0, 1.5, 2.5):
            push(beta * perp)
    return seeds


def evaluate_witness(mode: str, disc: AnalyticDiscLift, domain: Domain,
                     weight: Weight, eta: float,
                     grid: BoundaryGrid) -> tuple[float, bool]:
    """Penalty-free functional value and feasibility of a witness disc."""
    pts = kernels.eval_poly(disc.coeffs, grid.nodes)
    clear = domain.clearance_many(pts)
    feasible = bool(np.all(clear >= eta)) and disc.min_norm_on_grid() >= disc.delta_min
    if mode == "omega":
        value = omega_functional_lifted(LiftedWeight(weight), disc, grid).total
    else:
        value = sz_functional(weight, disc, None, grid, route="jensen").total
    return value, feasible


def build_objective_spec(mode: str, x: ProjPoint, domain: Domain,
                         weight: Weight, family: DiscFamilySpec,
                         opt: OptimizerConfig) -> _ObjectiveSpec:
    if mode not in ("omega", "sz"):
        raise ConfigError(f"unknown envelope mode {mode!r}")
    c0 = np.array(x.vec)
    if mode == "sz" and abs(c0[0]) < 1e-14:
        raise DomainError("sz mode needs a center in the chart z_0 != 0")
    grid = BoundaryGrid(opt.search_nodes)
    return _ObjectiveSpec(mode, c0, family.degree, domain, weight,
                          family.bound, ETA_INFLATION * family.eta,
                          grid.nodes, _interior_probe_nodes())


def minimize(mode: str, x: ProjPoint, domain: Domain, weight: Weight,
             family: DiscFamilySpec, opt: OptimizerConfig,
             final_grid: BoundaryGrid | None = None,
             library: "CandidateLibrary | None" = None,
             warm_theta: np.ndarray | None = None) -> EnvelopeEstimate:
    final_grid = final_grid or BoundaryGrid(DEFAULT_NODES)
    spec = build_objective_spec(mode, x, domain, weight, family, opt)
    seeds = _constructed_seeds(spec)
    if warm_theta is not None:
        seeds.insert(0, np.asarray(warm_theta, dtype=float))
    jobs = []
    rng_master = np.random.default_rng([opt.seed, 0xE1])
    for r in range(opt.starts):
        if r < len(seeds):
            theta0 = seeds[r]
        else:
            mags = 10.0 ** rng_master.uniform(-2.0, math.log10(max(min(family.bound, 2.0), 0.011)),
                                              (spec.degree, 1))
            c = mags * (rng_master.standard_normal((spec.degree, spec.m)) +
                        1j * rng_master.standard_normal((spec.degree, spec.m)))
            theta0 = np.concatenate([c.real, c.imag], axis=1).reshape(-1)
        jobs.append((spec, theta0, opt.seed, r, opt.budget))
    if opt.workers > 1:
        with ProcessPoolExecutor(max_workers=opt.workers) as pool:
            results = list(pool.map(_restart_job, jobs))
    else:
        results = [_restart_job(j) for j in jobs]
    results.sort(key=lambda t: t[0])

    witnesses = []
    finals = []
    for restart, _pen, theta in results:
        disc = AnalyticDiscLift(_theta_to_coeffs(spec, theta))
        value, feasible = evaluate_witness(mode, disc, domain, weight,
                                           family.eta, final_grid)
        finals.append((value if feasible else math.inf, restart))
        if feasible:
            witnesses.append((value, restart, disc))
    # the undescended seeds are legitimate witnesses too; keeping them
    # guards against penalty descent drifting a good seed out of the
    # feasible set
    for i, theta0 in enumerate(seeds):
        disc = AnalyticDiscLift(_theta_to_coeffs(spec, _clip_bound(spec, theta0)))
        value, feasible = evaluate_witness(mode, disc, domain, weight,
                                           family.eta, final_grid)
        if feasible:
            witnesses.append((value, opt.starts + i, disc))

    trace = []
    best_so_far = math.inf
    for value, _r in finals:
        best_so_far = min(best_so_far, value)
        trace.append(best_so_far if math.isfinite(best_so_far) else None)

    settings = {
        "mode": mode, "degree": family.degree, "bound": family.bound,
        "eta": family.eta, "starts": opt.starts, "budget": opt.budget,
        "seed": opt.seed, "search_nodes": opt.search_nodes,
        "final_nodes": final_grid.n,
    }
    lower = lower_id = None
    if library is not None:
        lower, lower_id = library.lower_bound(x)
    if not witnesses:
        return EnvelopeEstimate(None, None, lower, lower_id, None, trace,
                                settings, False)
    value, _restart, disc = min(witnesses, key=lambda t: (t[0], t[1]))
    gap = None if lower is None or not math.isfinite(lower) else value - lower
    if lower is not None and math.isfinite(lower) and lower > value + 1e-6:
        settings["inconsistent_bounds"] = True
    return EnvelopeEstimate(value, disc, lower, lower_id, gap, trace,
                            settings, True,
                            witnesses=[(v, d) for v, _r, d in witnesses])


# ---------------------------------------------------------------------------
# Candidate library for lower bounds


@dataclass
class _Candidate:
    name: str
    value_fn: object  # rows of cone representatives -> values
    shift: float
    violation: float  # max over W samples of (v + shift - phi)

    @property
    def excluded(self) -> bool:
        return self.violation > 1e-12


class CandidateLibrary:
    """Named admissible candidates v with v <= phi on sampled W; each gives
    the pointwise lower bound v(x) for the envelope."""

    def __init__(self, mode: str, domain: Domain, weight: Weight,
                 seed: int = 0, n_samples: int = 512):
        self.mode = mode
        self.domain = domain
        self.weight = weight
        rng = np.random.default_rng([seed, 0xCA])
        self._samples = domain.sample_points(rng, n_samples)
        if mode == "omega":
            self._phi_samples = weight.value_proj_many(self._samples)
        else:
            self._phi_samples = weight.value_affine_many(chart(self._samples))
        self.candidates: list[_Candidate] = []
        self._build_defaults()

    def _affine(self, z_rows):
        return chart(np.atleast_2d(z_rows))

    def _build_defaults(self):
        phi_min = float(np.min(self._phi_samples))
        if math.isfinite(phi_min):
            self.add("constant", lambda z: np.full(np.atleast_2d(z).shape[0], phi_min),
                     shift=0.0)
        m = self._samples.shape[1]
        if self.mode == "omega":
            for i in range(m):
                def v(z, i=i):
                    z = np.atleast_2d(np.asarray(z, dtype=np.complex128))
                    with np.errstate(divide="ignore"):
                        return np.log(np.abs(z[:, i])) - np.log(np.linalg.norm(z, axis=1))
                self.add(f"log_coord_{i}", v)
        else:
            def logplus(z):
                u = self._affine(z)
                n = np.linalg.norm(u, axis=1)
                return np.where(n > 1.0, np.log(np.maximum(n, 1e-300)), 0.0)

            self.add("log_plus_norm", logplus)
            for i in range(m - 1):
                def v(z, i=i):
                    u = self._affine(z)
                    with np.errstate(divide="ignore"):
                        return np.log(np.abs(u[:, i]))
                self.add(f"log_affine_coord_{i}", v)

    def add(self, name: str, value_fn, shift: float | None = None):
        vals = np.asarray(value_fn(self._samples), dtype=float)
        excess = vals - self._phi_samples
        worst = float(np.max(excess[np.isfinite(excess)], initial=-math.inf))
        if shift is None:
            shift = -max(worst, 0.0) if math.isfinite(worst) else 0.0
            # a candidate already below phi keeps shift 0 (shifting up would
            # break admissibility off the sample set)
            if worst < 0:
                shift = 0.0
        violation = worst + shift
        self.candidates.append(_Candidate(name, value_fn, shift, violation))

    def lower_bound(self, x: ProjPoint) -> tuple[float, str | None]:
        best = -math.inf
        best_name = None
        z = x.vec.reshape(1, -1)
        for c in self.candidates:
            if c.excluded:
                continue
            val = float(np.asarray(c.value_fn(z), dtype=float)[0]) + c.shift
            if val > best:
                best, best_name = val, c.name
        return best, best_name


def envelope_grid(mode: str, points: list, domain: Domain, weight: Weight,
                  family: DiscFamilySpec, opt: OptimizerConfig,
                  final_grid: BoundaryGrid | None = None,
                  library: CandidateLibrary | None = None) -> list:
    """Elementwise minimize with neighbor warm starts (the previous witness
    re-centered at the next point)."""
    out = []
    warm = None
    for x in points:
        fam = family.with_center(x)
        est = minimize(mode, x, domain, weight, fam, opt, final_grid,
                       library=library, warm_theta=warm)
        if est.witness is not None:
            spec = build_objective_spec(mode, x, domain, weight, fam, opt)
            warm = _coeffs_to_theta(spec, est.witness.coeffs)
        out.append(est)
    return out
