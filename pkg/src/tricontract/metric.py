"""Finite metric spaces, Euclidean spaces and self-maps on them."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence, Union

import numpy as np
from scipy.sparse.csgraph import shortest_path

from tricontract.errors import DomainError, MetricError, MetricInvalidError

TRIANGLE_TOL = 1e-9

Point = Union[str, np.ndarray]


@dataclass(frozen=True)
class MetricValidationReport:
    symmetric_ok: bool
    zero_diagonal_ok: bool
    positivity_ok: bool
    triangle_ok: bool
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return self.symmetric_ok and self.zero_diagonal_ok and self.positivity_ok and self.triangle_ok

    def describe(self) -> str:
        if self.ok:
            return "metric axioms hold"
        return "; ".join(v["message"] for v in self.violations)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labelled points with a distance matrix.

    The default constructor rejects anything that is not a metric. Use
    :meth:`unchecked` to hold an arbitrary square matrix, e.g. to inspect it
    with :func:`validate_metric`.
    """

    labels: tuple[str, ...]
    dist: np.ndarray
    _index: dict = field(init=False, repr=False, compare=False)

    def __init__(self, labels: Sequence[str], dist, *, check: bool = True):
        labels = tuple(labels)
        for lab in labels:
            if not isinstance(lab, str):
                raise MetricError(f"point labels must be strings, got {lab!r}")
        if len(set(labels)) != len(labels):
            dupes = sorted({lab for lab in labels if labels.count(lab) > 1})
            raise MetricError(f"duplicate point labels: {', '.join(dupes)}")
        try:
            arr = np.array(dist, dtype=float)
        except (TypeError, ValueError) as exc:
            raise MetricError(f"distance matrix is not numeric or is ragged: {exc}") from None
        n = len(labels)
        if arr.shape != (n, n):
            raise MetricError(f"distance matrix has shape {arr.shape}, expected ({n}, {n}) for {n} labels")
        if not np.all(np.isfinite(arr)):
            raise MetricError("distance matrix contains non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", arr)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})
        if check:
            report = validate_metric(self)
            if not report.ok:
                raise MetricInvalidError(f"not a metric: {report.describe()}", report)

    @classmethod
    def unchecked(cls, labels: Sequence[str], dist) -> "FiniteMetricSpace":
        return cls(labels, dist, check=False)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.dist, other.dist)

    def __hash__(self) -> int:
        return hash((self.labels, self.dist.tobytes()))

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except (KeyError, TypeError):
            raise KeyError(f"unknown point {label!r}") from None

    def d(self, p: str, q: str) -> float:
        return float(self.dist[self.index(p), self.index(q)])

    def scaled(self, factor: float) -> "FiniteMetricSpace":
        return FiniteMetricSpace(self.labels, self.dist * factor)

    def relabeled(self, mapping: Mapping[str, str]) -> "FiniteMetricSpace":
        return FiniteMetricSpace([mapping[lab] for lab in self.labels], self.dist)


@dataclass(frozen=True)
class EuclideanSpace:
    dimension: int

    def __post_init__(self):
        if not isinstance(self.dimension, (int, np.integer)) or self.dimension < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.dimension!r}")

    def point(self, x) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if arr.shape != (self.dimension,):
            raise KeyError(f"point {x!r} is not in R^{self.dimension}")
        return arr


Space = Union[FiniteMetricSpace, EuclideanSpace]


class MapKind(str, enum.Enum):
    TABLE = "table"
    AFFINE = "affine"


@dataclass(frozen=True, eq=False)
class SelfMap:
    """A total map ``T: X -> X``: a lookup table or ``x -> A x + b``."""

    kind: MapKind
    table: Optional[Mapping[str, str]] = None
    matrix_A: Optional[np.ndarray] = None
    vector_b: Optional[np.ndarray] = None

    @classmethod
    def from_table(cls, table: Mapping[str, str], space: Optional[FiniteMetricSpace] = None) -> "SelfMap":
        m = cls(MapKind.TABLE, table=dict(table))
        if space is not None:
            m.check(space)
        return m

    @classmethod
    def affine(cls, A, b=None) -> "SelfMap":
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if A.shape[0] != A.shape[1]:
            raise DomainError(f"affine matrix must be square, got shape {A.shape}")
        b = np.zeros(A.shape[0]) if b is None else np.atleast_1d(np.asarray(b, dtype=float))
        if b.shape != (A.shape[0],):
            raise DomainError(f"offset has shape {b.shape}, expected ({A.shape[0]},)")
        A.setflags(write=False)
        b.setflags(write=False)
        return cls(MapKind.AFFINE, matrix_A=A, vector_b=b)

    @classmethod
    def constant(cls, space: FiniteMetricSpace, target: str) -> "SelfMap":
        return cls.from_table({lab: target for lab in space.labels}, space)

    @classmethod
    def identity(cls, space: FiniteMetricSpace) -> "SelfMap":
        return cls.from_table({lab: lab for lab in space.labels}, space)

    def check(self, space: Space) -> None:
        if self.kind is MapKind.TABLE:
            if not isinstance(space, FiniteMetricSpace):
                raise MetricError("a table map needs a finite metric space")
            missing = [lab for lab in space.labels if lab not in self.table]
            if missing:
                raise MetricError(f"map is not total; no image for {', '.join(missing)}")
            for src, dst in self.table.items():
                if src not in space:
                    raise MetricError(f"map references unknown point {src!r}")
                if dst not in space:
                    raise MetricError(f"map sends {src!r} to unknown point {dst!r}")
        else:
            if not isinstance(space, EuclideanSpace):
                raise MetricError("an affine map needs a Euclidean space")
            if self.matrix_A.shape != (space.dimension, space.dimension):
                raise MetricError(f"affine map of dimension {self.matrix_A.shape[0]} on R^{space.dimension}")

    def __call__(self, p):
        if self.kind is MapKind.TABLE:
            try:
                return self.table[p]
            except (KeyError, TypeError):
                raise KeyError(f"unknown point {p!r}") from None
        return self.matrix_A @ np.asarray(p, dtype=float) + self.vector_b

    def relabeled(self, mapping: Mapping[str, str]) -> "SelfMap":
        return SelfMap.from_table({mapping[s]: mapping[t] for s, t in self.table.items()})


def validate_metric(space: FiniteMetricSpace) -> MetricValidationReport:
    D = space.dist
    labs = space.labels
    n = len(labs)
    violations = []

    asym = np.argwhere(D != D.T)
    for i, j in asym:
        if i < j:
            violations.append({
                "axiom": "symmetry", "points": (labs[i], labs[j]),
                "values": (float(D[i, j]), float(D[j, i])),
                "message": f"d({labs[i]},{labs[j]})={D[i, j]:g} != d({labs[j]},{labs[i]})={D[j, i]:g}",
            })
    symmetric_ok = len(asym) == 0

    diag = np.flatnonzero(np.diag(D) != 0)
    for i in diag:
        violations.append({
            "axiom": "zero_diagonal", "points": (labs[i],), "values": (float(D[i, i]),),
            "message": f"d({labs[i]},{labs[i]})={D[i, i]:g} != 0",
        })

    off = ~np.eye(n, dtype=bool)
    nonpos = np.argwhere(off & ~(D > 0))
    for i, j in nonpos:
        violations.append({
            "axiom": "positivity", "points": (labs[i], labs[j]), "values": (float(D[i, j]),),
            "message": f"d({labs[i]},{labs[j]})={D[i, j]:g} is not positive",
        })

    # bad[i, j, k]: d(i,k) > d(i,j) + d(j,k) + tol
    bad = D[:, None, :] > D[:, :, None] + D[None, :, :] + TRIANGLE_TOL
    tri = np.argwhere(bad)
    for i, j, k in tri:
        violations.append({
            "axiom": "triangle", "points": (labs[i], labs[j], labs[k]),
            "values": (float(D[i, k]), float(D[i, j]), float(D[j, k])),
            "message": (
                f"triangle inequality fails for ({labs[i]},{labs[j]},{labs[k]}): "
                f"d({labs[i]},{labs[k]})={D[i, k]:g} > d({labs[i]},{labs[j]})+d({labs[j]},{labs[k]})"
                f"={D[i, j] + D[j, k]:g}"
            ),
        })

    return MetricValidationReport(
        symmetric_ok=symmetric_ok,
        zero_diagonal_ok=len(diag) == 0,
        positivity_ok=len(nonpos) == 0,
        triangle_ok=len(tri) == 0,
        violations=tuple(violations),
    )


def distance(space: Space, p: Point, q: Point) -> float:
    if isinstance(space, FiniteMetricSpace):
        return space.d(p, q)
    return float(np.linalg.norm(space.point(p) - space.point(q)))


def apply_map(map: SelfMap, space: Space, p: Point) -> Point:
    if isinstance(space, FiniteMetricSpace):
        space.index(p)
        image = map(p)
        space.index(image)
        return image
    return space.point(map(space.point(p)))


def random_finite_metric(n: int, seed: int, low: float = 1.0, high: float = 2.0) -> FiniteMetricSpace:
    """Random metric on ``n`` points: complete-graph weights, then shortest paths."""
    if n < 3:
        raise DomainError(f"need at least 3 points, got {n}")
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    w[iu] = rng.uniform(low, high, size=len(iu[0]))
    w = w + w.T
    d = shortest_path(w, method="FW", directed=False)
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    width = len(str(n - 1))
    return FiniteMetricSpace([f"P{i:0{width}d}" for i in range(n)], d)


def _where(path: str) -> str:
    return f"at {path}" if path else "at document root"


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MetricError(f"{_where(path)}: expected a number, got {json.dumps(value)}")
    return float(value)


def parse_space(document: str, validate: bool = True) -> tuple[FiniteMetricSpace, Optional[SelfMap]]:
    """Parse the JSON space format; see :func:`serialize_space` for the inverse.

    With ``validate=False`` a well-formed matrix is returned even when it
    breaks a metric axiom, so it can be reported on rather than rejected.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MetricError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise MetricError(f"{_where('')}: expected an object with 'points' and 'distances'")
    extra = sorted(set(doc) - {"points", "distances", "map"})
    if extra:
        raise MetricError(f"{_where('')}: unknown key(s) {', '.join(map(repr, extra))}")
    for key in ("points", "distances"):
        if key not in doc:
            raise MetricError(f"{_where('')}: missing required key {key!r}")

    points = doc["points"]
    if not isinstance(points, list):
        raise MetricError(f"{_where('points')}: expected a list of labels")
    seen = set()
    for i, lab in enumerate(points):
        if not isinstance(lab, str):
            raise MetricError(f"{_where(f'points[{i}]')}: label must be a string, got {json.dumps(lab)}")
        if lab in seen:
            raise MetricError(f"{_where(f'points[{i}]')}: duplicate label {lab!r}")
        seen.add(lab)

    rows = doc["distances"]
    n = len(points)
    if not isinstance(rows, list) or len(rows) != n:
        raise MetricError(f"{_where('distances')}: expected a list of {n} rows")
    matrix = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MetricError(f"{_where(f'distances[{i}]')}: expected a row of {n} numbers (matrix must be square)")
        matrix.append([_number(v, f"distances[{i}][{j}]") for j, v in enumerate(row)])

    space = FiniteMetricSpace.unchecked(points, matrix)
    if validate:
        report = validate_metric(space)
        if not report.ok:
            raise MetricInvalidError(f"not a metric: {report.describe()}", report)

    selfmap = None
    if "map" in doc:
        table = doc["map"]
        if not isinstance(table, dict):
            raise MetricError(f"{_where('map')}: expected an object from label to label")
        for src, dst in table.items():
            if src not in seen:
                raise MetricError(f"{_where(f'map.{src}')}: unknown point {src!r}")
            if not isinstance(dst, str) or dst not in seen:
                raise MetricError(f"{_where(f'map.{src}')}: image {json.dumps(dst)} is not a point")
        missing = [lab for lab in points if lab not in table]
        if missing:
            raise MetricError(f"{_where('map')}: map is not total; no image for {', '.join(missing)}")
        selfmap = SelfMap.from_table({lab: table[lab] for lab in points})
    return space, selfmap


def _json_number(x: float):
    return int(x) if float(x).is_integer() and abs(x) < 2**53 else float(x)


def serialize_space(space: FiniteMetricSpace, selfmap: Optional[SelfMap] = None) -> str:
    doc: dict[str, Any] = {
        "points": list(space.labels),
        "distances": [[_json_number(v) for v in row] for row in space.dist.tolist()],
    }
    if selfmap is not None:
        doc["map"] = {lab: selfmap(lab) for lab in space.labels}
    return json.dumps(doc, indent=2) + "\n"
