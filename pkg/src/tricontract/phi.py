"""The class of triangle functionals and its four built-in members.

A functional ``phi: [0, inf)^3 -> [0, inf)`` belongs to the class when it is
symmetric, continuous, non-decreasing, bounded below by ``k * a`` for some
``k > 0``, and vanishes only at the origin.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from tricontract.errors import DomainError, NumericError

GRID_BOUND = 10.0
BISECTION_CAP = 200
TOL = 1e-9

Triple = tuple[float, float, float]


class PhiFamily(str, enum.Enum):
    SUM = "sum"
    MAX = "max"
    PNORM = "pnorm"
    SQRTSQ = "sqrtsq"


@dataclass(frozen=True)
class PhiSpec:
    """One of the built-in functionals; ``p`` is set only for ``PNORM``."""

    family: PhiFamily
    p: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "family", PhiFamily(self.family))
        if self.family is PhiFamily.PNORM:
            if isinstance(self.p, bool) or not isinstance(self.p, (int, np.integer)):
                raise DomainError(f"pnorm requires an integer p >= 2, got {self.p!r}")
            if self.p < 2:
                raise DomainError(f"pnorm requires p >= 2, got {self.p}")
            object.__setattr__(self, "p", int(self.p))
        elif self.p is not None:
            raise DomainError(f"{self.family.value} takes no parameter p")

    @classmethod
    def parse(cls, text: str) -> "PhiSpec":
        """Parse ``sum``, ``max``, ``sqrtsq`` or ``pnorm:<p>``."""
        name, sep, arg = text.strip().partition(":")
        try:
            family = PhiFamily(name.lower())
        except ValueError:
            raise DomainError(f"unknown phi {text!r}; expected sum, max, pnorm:<p> or sqrtsq") from None
        if family is PhiFamily.PNORM:
            if not sep or not arg.isdigit():
                raise DomainError(f"pnorm needs an integer exponent, e.g. pnorm:2 (got {text!r})")
            return cls(family, int(arg))
        if sep:
            raise DomainError(f"{family.value} takes no parameter (got {text!r})")
        return cls(family)

    def __str__(self) -> str:
        if self.family is PhiFamily.PNORM:
            return f"pnorm:{self.p}"
        return self.family.value

    def __call__(self, a: float, b: float, c: float) -> float:
        return phi_eval(self, a, b, c)


SUM = PhiSpec(PhiFamily.SUM)
MAX = PhiSpec(PhiFamily.MAX)
SQRTSQ = PhiSpec(PhiFamily.SQRTSQ)


def pnorm(p: int) -> PhiSpec:
    return PhiSpec(PhiFamily.PNORM, p)


def _check_arg(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"phi arguments must be finite and non-negative, got {x!r}")
    return x


def phi_eval(spec: PhiSpec, a: float, b: float, c: float) -> float:
    a, b, c = _check_arg(a), _check_arg(b), _check_arg(c)
    fam = spec.family
    if fam is PhiFamily.SUM:
        return a + b + c
    if fam is PhiFamily.MAX:
        return max(a, b, c)
    if fam is PhiFamily.PNORM:
        m = max(a, b, c)
        if m == 0.0:
            return 0.0
        # scale by the max so large p does not overflow
        p = spec.p
        return m * ((a / m) ** p + (b / m) ** p + (c / m) ** p) ** (1.0 / p)
    return (math.sqrt(a) + math.sqrt(b) + math.sqrt(c)) ** 2


def phi_lower_bound_k(spec: PhiSpec) -> float:
    """A sound constant k with ``k * a <= phi(a, b, c)``.

    Each built-in dominates its largest argument, so 1 works for all of them.
    """
    return 1.0


@dataclass
class PhiAxiomReport:
    symmetric_ok: bool = True
    monotone_ok: bool = True
    lower_bound_ok: bool = True
    zero_iff_ok: bool = True
    continuity_sampled_ok: bool = True
    counterexample: Optional[tuple[Triple, ...]] = None
    samples_used: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return (
            self.symmetric_ok
            and self.monotone_ok
            and self.lower_bound_ok
            and self.zero_iff_ok
            and self.continuity_sampled_ok
        )

    def _fail(self, flag: str, *inputs: Sequence[float]) -> None:
        setattr(self, flag, False)
        self.failures.append(flag)
        if self.counterexample is None:
            self.counterexample = tuple(tuple(float(v) for v in t) for t in inputs)


def _close(x: float, y: float, rel: float = 1e-12) -> bool:
    return abs(x - y) <= rel * max(1.0, abs(x), abs(y))


def check_phi_axioms(
    phi: Union[PhiSpec, Callable[[float, float, float], float]],
    grid_size: int = 5,
    random_samples: int = 1000,
    seed: int = 0,
    k: Optional[float] = None,
) -> PhiAxiomReport:
    """Test the class axioms on a grid over ``[0, 10]^3`` plus random samples.

    ``phi`` is normally a :class:`PhiSpec`; any callable is accepted so that
    deliberately broken functionals can be fed through the same checks. The
    continuity flag is a sampled heuristic, not a proof.
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    if random_samples < 0:
        raise DomainError("random_samples must be non-negative")
    if k is None:
        k = phi_lower_bound_k(phi) if isinstance(phi, PhiSpec) else 1.0
    f = phi
    rng = np.random.default_rng(seed)
    report = PhiAxiomReport()

    axis = np.linspace(0.0, GRID_BOUND, grid_size)
    grid = [tuple(float(v) for v in t) for t in itertools.product(axis, repeat=3)]
    rand = [tuple(float(v) for v in t) for t in rng.uniform(0.0, GRID_BOUND, size=(random_samples, 3))]
    points = grid + rand
    values = {t: f(*t) for t in points}
    report.samples_used = len(points)

    for t in points:
        v = values[t]
        if report.symmetric_ok:
            for perm in itertools.permutations(t):
                if not _close(f(*perm), v):
                    report._fail("symmetric_ok", t, perm)
                    break
        if report.lower_bound_ok:
            for i in range(3):
                if k * t[i] > v + TOL:
                    report._fail("lower_bound_ok", t)
                    break

    # monotonicity: grid neighbours along each coordinate, then random increments
    step = axis[1] - axis[0]
    for t in grid:
        for i in range(3):
            if t[i] + step > GRID_BOUND + 1e-12:
                continue
            u = list(t)
            u[i] += step
            u = tuple(u)
            if f(*u) < values[t] - 1e-12 * max(1.0, abs(values[t])):
                report._fail("monotone_ok", t, u)
                break
        if not report.monotone_ok:
            break
    if report.monotone_ok:
        incs = rng.uniform(0.0, GRID_BOUND, size=(len(rand), 3))
        for t, inc in zip(rand, incs):
            u = tuple(float(x + d) for x, d in zip(t, inc))
            if f(*u) < values[t] - 1e-12 * max(1.0, abs(values[t])):
                report._fail("monotone_ok", t, u)
                break

    origin = (0.0, 0.0, 0.0)
    if f(*origin) != 0.0:
        report._fail("zero_iff_ok", origin)
    else:
        for t in points:
            if max(t) > 1e-12 and not values[t] > 0.0:
                report._fail("zero_iff_ok", t)
                break

    # sampled modulus: the same perturbation direction at shrinking scales
    scales = (1e-2, 1e-4, 1e-8)
    n_cont = max(1, min(len(points), 1000))
    base = np.asarray(points[:n_cont])
    dirs = rng.uniform(-1.0, 1.0, size=base.shape)
    worst = []
    for h in scales:
        moved = np.maximum(base + h * dirs, 0.0)
        diffs = [abs(f(*u) - f(*v)) for u, v in zip(base.tolist(), moved.tolist())]
        i_max = int(np.argmax(diffs))
        worst.append((diffs[i_max], tuple(base[i_max]), tuple(moved[i_max])))
    for (d_prev, _, _), (d_next, u, v) in zip(worst, worst[1:]):
        if d_next > d_prev + 1e-15:
            report._fail("continuity_sampled_ok", u, v)
            break
    if report.continuity_sampled_ok and worst[-1][0] > 1e-2 * worst[0][0] + 1e-12:
        report._fail("continuity_sampled_ok", worst[-1][1], worst[-1][2])
    return report


def continuity_modulus(spec: PhiSpec, k: float, alpha: float, eps: float) -> float:
    """Return delta > 0 with ``phi(2*delta, 2*delta, 2*delta) < eps * k / alpha``.

    Any map contracting triangles for ``(spec, alpha)`` then sends points
    within ``delta`` of ``x0`` to points within ``eps`` of ``T x0``.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if not eps > 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not k > 0.0:
        raise DomainError(f"k must be positive, got {k}")
    target = eps * k / alpha

    def g(t: float) -> float:
        return phi_eval(spec, 2 * t, 2 * t, 2 * t)

    lo, hi = 0.0, GRID_BOUND
    if g(hi) < target:
        return hi
    for _ in range(BISECTION_CAP):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if g(mid) < target:
            lo = mid
        else:
            hi = mid
    if not lo > 0.0:
        raise NumericError(f"bisection found no positive delta for eps={eps}")
    return lo


def phi_eval_array(spec: PhiSpec, a, b, c) -> np.ndarray:
    """Elementwise :func:`phi_eval` over arrays of non-negative arguments."""
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    if np.any(~np.isfinite(a) | ~np.isfinite(b) | ~np.isfinite(c)) or np.any((a < 0) | (b < 0) | (c < 0)):
        raise DomainError("phi arguments must be finite and non-negative")
    fam = spec.family
    if fam is PhiFamily.SUM:
        return a + b + c
    if fam is PhiFamily.MAX:
        return np.maximum(np.maximum(a, b), c)
    if fam is PhiFamily.PNORM:
        m = np.maximum(np.maximum(a, b), c)
        safe = np.where(m > 0, m, 1.0)
        p = spec.p
        s = (a / safe) ** p + (b / safe) ** p + (c / safe) ** p
        return np.where(m > 0, m * s ** (1.0 / p), 0.0)
    return (np.sqrt(a) + np.sqrt(b) + np.sqrt(c)) ** 2
