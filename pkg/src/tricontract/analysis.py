"""Exhaustive certification of the contracting-triangles inequality on finite spaces."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from tricontract.errors import DomainError
from tricontract.metric import FiniteMetricSpace, SelfMap
from tricontract.phi import SUM, PhiSpec, pnorm, phi_eval_array

STRICT_TOL = 1e-9
VIOLATION_TOL = 1e-9
TIE_TOL = 1e-12


@dataclass(frozen=True)
class ContractionCertificate:
    """Smallest alpha for which ``phi(images) <= alpha * phi(preimages)`` on every triple.

    ``witness`` is None only for certificates built with :meth:`assumed`,
    which carry an externally supplied alpha (e.g. a sampled estimate on a
    Euclidean space) and prove nothing by themselves.
    """

    phi: PhiSpec
    alpha_star: float
    witness: Optional[tuple[str, str, str]]
    contracting: bool
    triples_checked: int

    @classmethod
    def assumed(cls, phi: PhiSpec, alpha: float) -> "ContractionCertificate":
        if not 0.0 <= alpha < 1.0:
            raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
        return cls(phi, float(alpha), None, True, 0)

    def to_dict(self) -> dict:
        return {
            "phi": str(self.phi),
            "alpha_star": self.alpha_star,
            "witness": list(self.witness) if self.witness is not None else None,
            "contracting": self.contracting,
            "triples_checked": self.triples_checked,
        }


class TripleRatio(NamedTuple):
    triple: tuple[str, str, str]
    image_phi: float
    preimage_phi: float

    @property
    def ratio(self) -> float:
        return self.image_phi / self.preimage_phi


@dataclass(frozen=True)
class PeriodicityReport:
    fixed_points: tuple[str, ...]
    period2_points: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"fixed_points": list(self.fixed_points), "period2_points": list(self.period2_points)}


def _prepare(space: FiniteMetricSpace, map: SelfMap):
    if len(space) < 3:
        raise DomainError(f"need at least 3 points, got {len(space)}")
    map.check(space)
    n = len(space)
    idx = np.array(list(itertools.combinations(range(n), 3)), dtype=int)
    img = np.array([space.index(map(lab)) for lab in space.labels], dtype=int)
    return idx, img


def _triangle_values(space: FiniteMetricSpace, map: SelfMap, phi: PhiSpec):
    """Index triples plus phi of the image and preimage triangles for each."""
    idx, img = _prepare(space, map)
    D = space.dist
    i, j, k = idx[:, 0], idx[:, 1], idx[:, 2]
    pre = phi_eval_array(phi, D[i, j], D[j, k], D[i, k])
    ti, tj, tk = img[i], img[j], img[k]
    post = phi_eval_array(phi, D[ti, tj], D[tj, tk], D[ti, tk])
    return idx, post, pre


def _labels(space: FiniteMetricSpace, row) -> tuple[str, str, str]:
    return tuple(space.labels[t] for t in row)


def triple_table(space: FiniteMetricSpace, map: SelfMap, phi: PhiSpec) -> list[TripleRatio]:
    """phi of every image triangle next to phi of its preimage, in label order."""
    idx, post, pre = _triangle_values(space, map, phi)
    return [TripleRatio(_labels(space, row), float(a), float(b)) for row, a, b in zip(idx, post, pre)]


def certify(space: FiniteMetricSpace, map: SelfMap, phi: PhiSpec) -> ContractionCertificate:
    idx, post, pre = _triangle_values(space, map, phi)
    # pairwise-distinct points have positive distances, so pre > 0 for every built-in phi
    ratios = post / pre
    alpha_star = float(ratios.max())
    near = np.flatnonzero(ratios >= alpha_star - TIE_TOL * max(1.0, alpha_star))
    witness = min(tuple(sorted(_labels(space, idx[t]))) for t in near)
    return ContractionCertificate(
        phi=phi,
        alpha_star=alpha_star,
        witness=witness,
        contracting=alpha_star < 1.0 - STRICT_TOL,
        triples_checked=len(idx),
    )


def check_contraction(space: FiniteMetricSpace, map: SelfMap, phi: PhiSpec, alpha: float) -> list[TripleRatio]:
    """Every triple on which the inequality fails for the given alpha."""
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    return [t for t in triple_table(space, map, phi) if t.image_phi > alpha * t.preimage_phi + VIOLATION_TOL]


def periodicity_report(space: FiniteMetricSpace, map: SelfMap) -> PeriodicityReport:
    map.check(space)
    fixed = tuple(x for x in space.labels if map(x) == x)
    period2 = tuple(x for x in space.labels if map(x) != x and map(map(x)) == x)
    return PeriodicityReport(fixed, period2)


def petrov_perimeter_check(space: FiniteMetricSpace, map: SelfMap) -> ContractionCertificate:
    """Certification with the perimeter functional ``a + b + c``."""
    return certify(space, map, SUM)


def corollary_squared_check(space: FiniteMetricSpace, map: SelfMap) -> tuple[ContractionCertificate, float]:
    """Certify with the Euclidean 2-norm and return ``beta = alpha_star**2``.

    ``beta`` is the constant in the squared-distance form
    ``sum d^2(T.,T.) <= beta * sum d^2(.,.)``.
    """
    cert = certify(space, map, pnorm(2))
    return cert, cert.alpha_star**2
