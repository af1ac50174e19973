"""Open subsets of R^n and their boundary-distance functions.

Every distance formula in this library consumes a domain through exactly
two queries: membership in the open interior and the clearance
d(x) = dist(x, boundary).  The built-in variants implement both in closed
form:

* ``UnitBall(n)``        interior {|x| < 1},      d(x) = 1 - |x|
* ``HalfSpace(n)``       interior {x_n > 0},      d(x) = x_n
* ``PuncturedSpace(n)``  interior R^n minus {0},  d(x) = |x|
* ``Interval(a, b)``     interior (a, b),         d(x) = min(x-a, b-x)
* ``GenericDomain``      caller-supplied oracles (1-Lipschitz clearance
                         is a *tested* requirement, not an assumption)

Boundaries are represented implicitly through these closed forms; no
meshes.  All operations are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

#: Default clearance used by samplers.  Keeps 1/sqrt(d(x) d(y)) finite in
#: double precision while still exercising near-boundary behaviour.
DEFAULT_MIN_CLEARANCE = 1e-6

_MAX_REJECTION_ROUNDS = 200


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce a scalar or coordinate sequence to a finite 1-D float array."""
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.ndim != 1:
        raise ValueError(f"a point must be a 1-D coordinate vector, got shape {p.shape}")
    if p.size < 1:
        raise ValueError("a point needs at least one coordinate")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite (no NaN/inf)")
    if dim is not None and p.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim} coordinates, got {p.size}")
    return p


def as_points(xs, dim: int) -> np.ndarray:
    """Coerce to an (N, dim) float array of finite coordinates."""
    a = np.asarray(xs, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, dim) if dim == 1 else a[None, :]
    if a.ndim != 2 or a.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got array shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("point coordinates must be finite (no NaN/inf)")
    return a


class Domain:
    """Base class: an open set D in R^n with a clearance function."""

    dimension: int

    # -- scalar API ---------------------------------------------------

    def contains(self, x) -> bool:
        """True iff x lies in the open interior."""
        p = as_point(x, self.dimension)
        return bool(self.contains_many(p[None, :])[0])

    def boundary_distance(self, x) -> float:
        """Distance from an interior point to the boundary (> 0)."""
        p = as_point(x, self.dimension)
        if not self.contains(p):
            raise ValueError(f"point {p.tolist()} is not inside {self.spec_string()}")
        return float(self.clearance_many(p[None, :])[0])

    # -- vector API (no containment side effects) ---------------------

    def clearance_many(self, xs: np.ndarray) -> np.ndarray:
        """Signed clearance of each row; <= 0 outside for closed-form variants."""
        raise NotImplementedError

    def contains_many(self, xs: np.ndarray) -> np.ndarray:
        return self.clearance_many(xs) > 0.0

    # -- sampling support ---------------------------------------------

    def sample_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Axis-aligned box used for rejection sampling (artifact choice
        for unbounded variants)."""
        raise NotImplementedError

    def max_feasible_clearance(self) -> float:
        """Upper bound on clearances reachable inside the sample box."""
        raise NotImplementedError

    def spec_string(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"{type(self).__name__}({self.spec_string()!r})"


@dataclass(frozen=True, repr=False)
class UnitBall(Domain):
    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def clearance_many(self, xs):
        xs = as_points(xs, self.dimension)
        return 1.0 - np.linalg.norm(xs, axis=1)

    def sample_box(self):
        n = self.dimension
        return -np.ones(n), np.ones(n)

    def max_feasible_clearance(self):
        return 1.0

    def spec_string(self):
        return f"ball:{self.dimension}"


@dataclass(frozen=True, repr=False)
class HalfSpace(Domain):
    dimension: int

    #: rejection box extent: last coordinate in (0, 4], others in [-2, 2]
    _SIDE = 2.0
    _HEIGHT = 4.0

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def clearance_many(self, xs):
        xs = as_points(xs, self.dimension)
        return xs[:, -1].copy()

    def sample_box(self):
        n = self.dimension
        lo = np.full(n, -self._SIDE)
        hi = np.full(n, self._SIDE)
        lo[-1] = 0.0
        hi[-1] = self._HEIGHT
        return lo, hi

    def max_feasible_clearance(self):
        return self._HEIGHT

    def spec_string(self):
        return f"halfspace:{self.dimension}"


@dataclass(frozen=True, repr=False)
class PuncturedSpace(Domain):
    dimension: int

    _SIDE = 2.0

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def clearance_many(self, xs):
        xs = as_points(xs, self.dimension)
        return np.linalg.norm(xs, axis=1)

    def contains_many(self, xs):
        # the puncture itself is the only excluded point
        return self.clearance_many(xs) > 0.0

    def sample_box(self):
        n = self.dimension
        return np.full(n, -self._SIDE), np.full(n, self._SIDE)

    def max_feasible_clearance(self):
        return self._SIDE

    def spec_string(self):
        return f"punctured:{self.dimension}"


@dataclass(frozen=True, repr=False)
class Interval(Domain):
    """Open interval (a, b) as a 1-dimensional domain."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("interval endpoints must be finite")
        if not self.a < self.b:
            raise ValueError(f"interval requires a < b, got ({self.a}, {self.b})")

    @property
    def dimension(self) -> int:
        return 1

    def clearance_many(self, xs):
        xs = as_points(xs, 1)
        t = xs[:, 0]
        return np.minimum(t - self.a, self.b - t)

    def sample_box(self):
        return np.array([self.a]), np.array([self.b])

    def max_feasible_clearance(self):
        return 0.5 * (self.b - self.a)

    def spec_string(self):
        return f"interval:{self.a:g}:{self.b:g}"


@dataclass(frozen=True, repr=False)
class GenericDomain(Domain):
    """Domain defined by caller oracles.

    ``distance_fn`` maps an (N, n) array to clearances and must be
    1-Lipschitz (checked by :func:`lipschitz_defect`, not assumed);
    ``membership_fn`` maps an (N, n) array to booleans.  ``box`` bounds
    the region used by samplers and grid builders.
    """

    dimension: int
    distance_fn: Callable[[np.ndarray], np.ndarray]
    membership_fn: Callable[[np.ndarray], np.ndarray]
    box: tuple[tuple[float, ...], tuple[float, ...]]

    def clearance_many(self, xs):
        xs = as_points(xs, self.dimension)
        d = np.asarray(self.distance_fn(xs), dtype=float)
        if d.shape != (xs.shape[0],):
            raise ValueError("distance oracle must return one value per point")
        return d

    def contains_many(self, xs):
        xs = as_points(xs, self.dimension)
        inside = np.asarray(self.membership_fn(xs), dtype=bool)
        if inside.shape != (xs.shape[0],):
            raise ValueError("membership oracle must return one value per point")
        return inside

    def sample_box(self):
        lo, hi = self.box
        return np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)

    def max_feasible_clearance(self):
        lo, hi = self.sample_box()
        return 0.5 * float(np.max(hi - lo))

    def spec_string(self):
        return f"generic:{self.dimension}"


# ---------------------------------------------------------------------------
# Point sets in the complement (generalized clearance d_{D,A})
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointSet:
    """Nonempty finite set of points lying outside an open domain."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("PointSet needs a nonempty (m, n) array of points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("PointSet coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @classmethod
    def outside(cls, domain: Domain, points) -> "PointSet":
        """Build a PointSet, verifying every member lies outside ``domain``."""
        pts = as_points(points, domain.dimension)
        if pts.shape[0] < 1:
            raise ValueError("PointSet must be nonempty")
        inside = domain.contains_many(pts)
        if np.any(inside):
            bad = pts[np.argmax(inside)]
            raise ValueError(f"point {bad.tolist()} lies inside the domain")
        return cls(pts)


def distance_to_set(x, point_set: PointSet) -> float:
    """min over a in A of |x - a|."""
    pts = point_set.points
    p = as_point(x, pts.shape[1])
    return float(np.min(np.linalg.norm(pts - p[None, :], axis=1)))


def distance_to_set_many(xs: np.ndarray, point_set: PointSet) -> np.ndarray:
    pts = point_set.points
    xs = as_points(xs, pts.shape[1])
    diff = xs[:, None, :] - pts[None, :, :]
    return np.min(np.linalg.norm(diff, axis=2), axis=1)


# ---------------------------------------------------------------------------
# Seeded interior sampling
# ---------------------------------------------------------------------------


def sample_interior(
    domain: Domain,
    count: int,
    seed: int,
    min_clearance: float = DEFAULT_MIN_CLEARANCE,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Deterministic rejection sample of ``count`` interior points.

    Points are uniform over the domain's sample box, filtered to
    clearance >= ``min_clearance``.  The same (domain, count, seed,
    min_clearance) always yields the same array.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not min_clearance > 0.0:
        raise ValueError("min_clearance must be positive")
    if min_clearance >= domain.max_feasible_clearance():
        raise ValueError(
            f"min_clearance {min_clearance} is infeasible for {domain.spec_string()}"
        )
    if rng is None:
        rng = np.random.default_rng(seed)
    lo, hi = domain.sample_box()
    out = np.empty((count, domain.dimension))
    have = 0
    for _ in range(_MAX_REJECTION_ROUNDS):
        batch = max(1024, 2 * (count - have))
        cand = rng.uniform(lo, hi, size=(batch, domain.dimension))
        ok = domain.contains_many(cand) & (domain.clearance_many(cand) >= min_clearance)
        take = cand[ok][: count - have]
        out[have : have + take.shape[0]] = take
        have += take.shape[0]
        if have == count:
            return out
    raise ValueError(
        f"could not reach clearance {min_clearance} in {domain.spec_string()}; "
        "clearance is likely infeasible for the sample box"
    )


def sample_complement(domain: Domain, count: int, seed: int) -> PointSet:
    """Seeded sample of points in the complement of a built-in domain.

    Used to exercise the generalized clearance d_{D,A}.  For the
    punctured space the complement is the single puncture.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    n = domain.dimension
    if isinstance(domain, PuncturedSpace):
        return PointSet.outside(domain, np.zeros((1, n)))
    if isinstance(domain, UnitBall):
        dirs = rng.normal(size=(count, n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        radii = rng.uniform(1.0, 2.0, size=(count, 1))
        return PointSet.outside(domain, dirs * radii)
    if isinstance(domain, HalfSpace):
        pts = rng.uniform(-2.0, 2.0, size=(count, n))
        pts[:, -1] = -rng.uniform(0.0, 2.0, size=count)
        return PointSet.outside(domain, pts)
    if isinstance(domain, Interval):
        width = domain.b - domain.a
        offs = rng.uniform(0.0, width, size=count)
        side = rng.random(count) < 0.5
        vals = np.where(side, domain.a - offs, domain.b + offs)
        return PointSet.outside(domain, vals.reshape(-1, 1))
    raise ValueError(f"cannot sample the complement of {domain.spec_string()}")


def lipschitz_defect(
    domain: Domain,
    count: int = 2000,
    seed: int = 0,
    min_clearance: float = 1e-9,
) -> float:
    """Max of |d(x) - d(y)| - |x - y| over sampled interior pairs.

    Nonpositive (up to rounding) iff the clearance function is
    1-Lipschitz on the sample.  Intended for validating GenericDomain
    oracles as well as the built-ins.
    """
    xs = sample_interior(domain, count, seed, min_clearance)
    ys = sample_interior(domain, count, seed + 1, min_clearance)
    dx = domain.clearance_many(xs)
    dy = domain.clearance_many(ys)
    gap = np.abs(dx - dy) - np.linalg.norm(xs - ys, axis=1)
    return float(np.max(gap))


# ---------------------------------------------------------------------------
# Domain spec strings (shared with the CLI)
# ---------------------------------------------------------------------------


def parse_domain(spec: str) -> Domain:
    """Parse "ball:2", "halfspace:3", "punctured:2" or "interval:0:1"."""
    parts = spec.strip().lower().split(":")
    kind = parts[0]
    try:
        if kind == "ball" and len(parts) == 2:
            return UnitBall(int(parts[1]))
        if kind == "halfspace" and len(parts) == 2:
            return HalfSpace(int(parts[1]))
        if kind == "punctured" and len(parts) == 2:
            return PuncturedSpace(int(parts[1]))
        if kind == "interval" and len(parts) == 3:
            return Interval(float(parts[1]), float(parts[2]))
    except ValueError as exc:
        raise ValueError(f"bad domain spec {spec!r}: {exc}") from None
    raise ValueError(
        f"unknown domain spec {spec!r} "
        "(expected ball:N, halfspace:N, punctured:N or interval:A:B)"
    )
