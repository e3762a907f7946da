"""Picard iteration with the a-priori Cauchy tail bound as stopping rule."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from tricontract.analysis import ContractionCertificate
from tricontract.errors import DomainError, NumericError
from tricontract.metric import EuclideanSpace, FiniteMetricSpace, SelfMap, Space, apply_map, distance
from tricontract.phi import PhiSpec, continuity_modulus, phi_eval, phi_lower_bound_k

DEFAULT_MAX_ITER = 10**6
MAX_REDRAWS = 100


class VerdictKind(str, enum.Enum):
    FIXED_POINT = "FixedPointReached"
    PERIOD2 = "Period2Detected"
    TOLERANCE = "ToleranceReached"
    BUDGET = "BudgetExhausted"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    point: Any = None
    partner: Any = None
    bound: Optional[float] = None


def _jsonable(p):
    return p.tolist() if isinstance(p, np.ndarray) else p


@dataclass
class IterationTrace:
    start: Any
    steps: list
    d0: float
    d_seq: list[float]
    verdict: Verdict
    alpha: float
    k: float
    bounds: list[float] = field(default_factory=list)

    @property
    def n(self) -> int:
        """Index of the last iterate."""
        return len(self.steps) - 1

    def to_dict(self) -> dict:
        v = self.verdict
        return {
            "start": _jsonable(self.start),
            "steps": [_jsonable(s) for s in self.steps],
            "d0": self.d0,
            "d_seq": list(self.d_seq),
            "alpha": self.alpha,
            "k": self.k,
            "tail_bounds": list(self.bounds),
            "verdict": {
                "kind": v.kind.value,
                "point": _jsonable(v.point),
                "partner": _jsonable(v.partner),
                "bound": v.bound,
            },
        }


def _check_alpha(alpha: float, allow_zero: bool = False) -> None:
    lo_ok = alpha >= 0.0 if allow_zero else alpha > 0.0
    if not (lo_ok and alpha < 1.0):
        interval = "[0, 1)" if allow_zero else "(0, 1)"
        raise DomainError(f"alpha must lie in {interval}, got {alpha}")


def cauchy_tail_bound(alpha: float, k: float, d0: float, n: int) -> float:
    """``alpha**(n-1) * d0 / ((1 - alpha) * k)``, a bound on ``d(x_n, x_{n+p})`` for all p >= 1."""
    _check_alpha(alpha, allow_zero=True)
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    if d0 < 0:
        raise DomainError(f"d0 must be non-negative, got {d0}")
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    return alpha ** (n - 1) * d0 / ((1.0 - alpha) * k)


def a_priori_iteration_count(alpha: float, k: float, d0: float, eps: float) -> int:
    """Least n >= 1 whose tail bound is below eps."""
    _check_alpha(alpha)
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if cauchy_tail_bound(alpha, k, d0, 1) < eps:
        return 1
    # log estimate, then settle on the exact boundary by direct evaluation
    n = max(1, 1 + math.ceil(math.log(eps * (1.0 - alpha) * k / d0) / math.log(alpha)))
    while n > 1 and cauchy_tail_bound(alpha, k, d0, n - 1) < eps:
        n -= 1
    while not cauchy_tail_bound(alpha, k, d0, n) < eps:
        n += 1
    return n


def _same(space: Space, p, q) -> bool:
    if isinstance(space, FiniteMetricSpace):
        return p == q
    return bool(np.array_equal(p, q))


def _d_value(space: Space, phi: PhiSpec, x, y, z) -> float:
    return phi_eval(phi, distance(space, x, y), distance(space, y, z), distance(space, x, z))


def picard_iterate(
    space: Space,
    map: SelfMap,
    x0,
    certificate: ContractionCertificate,
    eps: float = 1e-9,
    max_iter: int = DEFAULT_MAX_ITER,
) -> IterationTrace:
    """Run ``x_{n+1} = T x_n`` from ``x0``.

    On a finite space the orbit stops at the first fixed point, or at the
    first ``x_n`` with ``T^2 x_n = x_n != T x_n``. On a Euclidean space it
    stops at the first n whose tail bound drops below ``eps``, which is
    exactly :func:`a_priori_iteration_count` for the orbit's ``d0``.
    """
    if not certificate.contracting:
        raise DomainError(
            f"certificate is not contracting (alpha_star={certificate.alpha_star}); "
            "the fixed point theorem does not apply"
        )
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    map.check(space)
    phi = certificate.phi
    alpha = certificate.alpha_star
    k = phi_lower_bound_k(phi)
    if isinstance(space, FiniteMetricSpace):
        space.index(x0)
        x = x0
    else:
        x = space.point(x0)
    T = lambda p: apply_map(map, space, p)  # noqa: E731

    steps = [x]
    verdict = None
    finite = isinstance(space, FiniteMetricSpace)
    x1 = T(x)
    x2 = T(x1)
    d0 = _d_value(space, phi, x, x1, x2)

    nxt = x1
    while verdict is None:
        n = len(steps) - 1
        cur = steps[-1]
        if _same(space, nxt, cur):
            verdict = Verdict(VerdictKind.FIXED_POINT, cur)
            break
        nxt2 = T(nxt)
        if _same(space, nxt2, cur):
            verdict = Verdict(VerdictKind.PERIOD2, cur, nxt)
            break
        if not finite and n >= 1:
            bound = cauchy_tail_bound(alpha, k, d0, n)
            if bound < eps:
                verdict = Verdict(VerdictKind.TOLERANCE, cur, bound=bound)
                break
        if n >= max_iter:
            verdict = Verdict(VerdictKind.BUDGET, cur)
            break
        steps.append(nxt)
        nxt = nxt2

    ext = steps + [T(steps[-1])]
    ext.append(T(ext[-1]))
    d_seq = [_d_value(space, phi, ext[i], ext[i + 1], ext[i + 2]) for i in range(len(steps))]
    bounds = [cauchy_tail_bound(alpha, k, d0, n) for n in range(1, len(steps))]
    return IterationTrace(
        start=steps[0], steps=steps, d0=d0, d_seq=d_seq, verdict=verdict, alpha=alpha, k=k, bounds=bounds
    )


def _ball(rng: np.random.Generator, dim: int, radius: float, center=None) -> np.ndarray:
    v = rng.standard_normal(dim)
    norm = np.linalg.norm(v)
    while norm == 0.0:
        v = rng.standard_normal(dim)
        norm = np.linalg.norm(v)
    r = radius * rng.random() ** (1.0 / dim)
    p = v / norm * r
    return p if center is None else center + p


def sampled_alpha_estimate(
    space: EuclideanSpace, map: SelfMap, phi: PhiSpec, samples: int, radius: float, seed: int
) -> float:
    """Largest triangle ratio over random triples from the ball of the given radius.

    This is a LOWER bound on the true contraction constant, never a
    certificate: a sample can only miss the worst triple.
    """
    if not isinstance(space, EuclideanSpace):
        raise DomainError("sampled estimates are for Euclidean spaces; use certify on finite spaces")
    if samples < 1:
        raise DomainError(f"samples must be at least 1, got {samples}")
    if not radius > 0:
        raise DomainError(f"radius must be positive, got {radius}")
    map.check(space)
    rng = np.random.default_rng(seed)
    dim = space.dimension
    best = 0.0
    for _ in range(samples):
        for _attempt in range(MAX_REDRAWS + 1):
            x, y, z = (_ball(rng, dim, radius) for _ in range(3))
            pre = _d_value(space, phi, x, y, z)
            if min(distance(space, x, y), distance(space, y, z), distance(space, x, z)) > 0.0:
                break
        else:
            raise NumericError(f"could not draw a non-degenerate triple in {MAX_REDRAWS} redraws")
        post = _d_value(space, phi, map(x), map(y), map(z))
        best = max(best, post / pre)
    return best


def continuity_probe(
    space: EuclideanSpace,
    map: SelfMap,
    phi: PhiSpec,
    k: float,
    alpha: float,
    eps: float,
    x0,
    samples: int = 1000,
    seed: int = 0,
) -> bool:
    """Check ``d(Tx0, Tx) < eps`` on random x within the continuity modulus of x0."""
    delta = continuity_modulus(phi, k, alpha, eps)
    map.check(space)
    rng = np.random.default_rng(seed)
    x0 = space.point(x0)
    tx0 = map(x0)
    for _ in range(samples):
        x = _ball(rng, space.dimension, delta, x0)
        if not distance(space, x0, x) < delta:
            continue
        if not distance(space, tx0, map(x)) < eps:
            return False
    return True
