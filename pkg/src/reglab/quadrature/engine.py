"""Deterministic quadrature over boxes: tensor Gauss-Legendre, nested
adaptive Gauss-Kronrod, and scrambled Sobol QMC.

All rules take a batch integrand f(points) -> values with points of shape
(N, dims), and return (value, error_estimate, evaluations). Error estimates
are heuristic: the Gauss-Legendre estimate is the delta against a half-level
run, the adaptive estimate comes from QUADPACK, and the QMC estimate is
three standard errors over scrambled replicates. Results are deterministic
for a fixed (rule, level, depth, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy import integrate
from scipy.stats import qmc

from ..numerics import HPReal

RULES = ("gauss_legendre_tensor", "adaptive_gk", "qmc_sobol")


@dataclass(frozen=True)
class QuadratureConfig:
    rule: str = "gauss_legendre_tensor"
    level: int = 64
    depth: int = 0
    seed: int = 12345
    prec: int = 15

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}; choose from {RULES}")
        if self.level < 2:
            raise ValueError("level must be at least 2")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")


@dataclass
class QuadratureResult:
    value: HPReal
    error_estimate: HPReal
    evaluations: int
    config: QuadratureConfig

    def to_dict(self) -> dict:
        return {
            "value": self.value.to_decimal(),
            "error_estimate": self.error_estimate.to_decimal(),
            "evaluations": self.evaluations,
            "config": asdict(self.config),
        }


def make_result(value: float, err: float, evals: int, cfg: QuadratureConfig) -> QuadratureResult:
    return QuadratureResult(
        HPReal(value, cfg.prec), HPReal(abs(err), cfg.prec), evals, cfg
    )


def _panels(lo: float, hi: float, depth: int) -> np.ndarray:
    return np.linspace(lo, hi, 2**depth + 1)


def gl_grid(lo, hi, level: int, depth: int, dims: int):
    """Tensor nodes/weights on [lo,hi]^dims with 2^depth panels per axis."""
    x, w = np.polynomial.legendre.leggauss(level)
    edges = _panels(lo, hi, depth)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    n1 = np.concatenate(nodes)
    w1 = np.concatenate(weights)
    grids = np.meshgrid(*([n1] * dims), indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=-1)
    wt = w1
    for _ in range(dims - 1):
        wt = np.multiply.outer(wt, w1)
    return pts, wt.reshape(-1)


def _gl_pass(f, lo, hi, level, depth, dims):
    pts, wt = gl_grid(lo, hi, level, depth, dims)
    vals = np.asarray(f(pts), dtype=np.float64)
    # fixed-order pairwise summation for bit-stable accumulation
    order = np.arange(len(wt))
    terms = (vals * wt)[order]
    while len(terms) > 1:
        if len(terms) % 2:
            terms = np.concatenate([terms, [0.0]])
        terms = terms[0::2] + terms[1::2]
    return float(terms[0]), len(wt)


def integrate_box(
    f: Callable, lo: float, hi: float, dims: int, cfg: QuadratureConfig
) -> Tuple[float, float, int]:
    """Integrate f over [lo, hi]^dims with the configured rule."""
    if cfg.rule == "gauss_legendre_tensor":
        coarse, n1 = _gl_pass(f, lo, hi, max(2, cfg.level // 2), cfg.depth, dims)
        fine, n2 = _gl_pass(f, lo, hi, cfg.level, cfg.depth, dims)
        return fine, abs(fine - coarse), n1 + n2
    if cfg.rule == "adaptive_gk":
        return _adaptive(f, lo, hi, dims, cfg)
    if cfg.rule == "qmc_sobol":
        return _qmc(f, lo, hi, dims, cfg)
    raise ValueError(cfg.rule)


def _adaptive(f, lo, hi, dims, cfg):
    evals = [0]
    tol = 10.0 ** (-min(cfg.prec, 12))
    if dims > 3:
        raise ValueError("adaptive rule supports up to 3 dimensions")

    def scalar(point):
        evals[0] += 1
        return float(f(np.array([point], dtype=np.float64))[0])

    def nest(fixed, d):
        if d == dims:
            return scalar(fixed)
        val, err = integrate.quad(
            lambda t: nest(fixed + [t], d + 1),
            lo,
            hi,
            epsabs=tol,
            epsrel=tol,
            limit=200 * (cfg.depth + 1),
        )
        if d == 0:
            nest.top_err = err
        return val

    nest.top_err = 0.0
    value = nest([], 0)
    return value, nest.top_err, evals[0]


def _qmc(f, lo, hi, dims, cfg):
    replicates = 8
    rng = np.random.default_rng(cfg.seed)
    means = []
    # for the QMC rule, level is log2 of the points per replicate
    n = 2 ** min(max(cfg.level, 8), 24)
    for _ in range(replicates):
        eng = qmc.Sobol(d=dims, scramble=True, seed=rng)
        u = eng.random(n)
        pts = lo + (hi - lo) * u
        means.append(float(np.mean(np.asarray(f(pts), dtype=np.float64))))
    means = np.array(means)
    vol = (hi - lo) ** dims
    value = vol * means.mean()
    err = vol * 3.0 * means.std(ddof=1) / np.sqrt(replicates)
    return value, err, replicates * n
