"""Moebius machinery: absolute ratio, ball automorphisms, ball-to-half-space.

Only the two map families the distortion estimates need are implemented:

* :class:`BallAutomorphism` -- inversion in the sphere orthogonal to the
  unit sphere centred at a/|a|^2.  Maps the ball onto itself, swaps the
  base point a and the origin, and is a hyperbolic isometry.
* :class:`BallToHalfSpace` -- inversion centred at the north pole followed
  by reflection of the last coordinate.  Maps the open unit ball onto the
  upper half-space, the south pole to the boundary origin, and the centre
  to e_n.  The normalization is a free choice; the isometry property
  rho_H(g(x), g(y)) = rho_B(x, y) is the acceptance oracle that pins any
  correct construction.

All maps are pure and stateless.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domains import as_point, as_points


def absolute_ratio(a, b, c, d) -> float:
    """|a,b,c,d| = (|a-c| |b-d|) / (|a-b| |c-d|).

    Invariant (degree-0 homogeneous) under similarity transforms and, up
    to rounding, under every Moebius map implemented here.
    """
    a = as_point(a)
    b = as_point(b, a.size)
    c = as_point(c, a.size)
    d = as_point(d, a.size)
    ab = float(np.linalg.norm(a - b))
    cd = float(np.linalg.norm(c - d))
    ac = float(np.linalg.norm(a - c))
    bd = float(np.linalg.norm(b - d))
    scale = max(ab, cd, ac, bd)
    if scale == 0.0 or ab <= 1e-14 * scale or cd <= 1e-14 * scale:
        raise ValueError("degenerate configuration: |a-b| or |c-d| is ~0")
    return (ac * bd) / (ab * cd)


class MoebiusMap:
    """Base for point transformations used by the distortion estimates."""

    dimension: int

    def apply(self, x) -> np.ndarray:
        p = as_point(x, self.dimension)
        return self.apply_many(p[None, :])[0]

    def apply_many(self, xs: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(MoebiusMap):
    dimension: int

    def apply_many(self, xs):
        return as_points(xs, self.dimension).copy()


@dataclass(frozen=True)
class BallAutomorphism(MoebiusMap):
    """Self-map of the unit ball sending ``center`` to the origin."""

    center: np.ndarray
    dimension: int = field(init=False)

    def __post_init__(self):
        a = as_point(self.center)
        if np.linalg.norm(a) >= 1.0:
            raise ValueError("automorphism center must satisfy |a| < 1")
        object.__setattr__(self, "center", a)
        object.__setattr__(self, "dimension", a.size)

    def apply_many(self, xs):
        xs = as_points(xs, self.dimension)
        if np.any(np.linalg.norm(xs, axis=1) >= 1.0):
            raise ValueError("ball automorphism applied outside the unit ball")
        a = self.center
        a2 = float(a @ a)
        if a2 == 0.0:
            return xs.copy()
        pole = a / a2
        rad2 = (1.0 - a2) / a2  # |pole|^2 - 1
        diff = xs - pole[None, :]
        denom = np.sum(diff * diff, axis=1)
        return pole[None, :] + rad2 * diff / denom[:, None]


@dataclass(frozen=True)
class BallToHalfSpace(MoebiusMap):
    """Moebius bijection of the open unit ball onto {x_n > 0}."""

    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def apply_many(self, xs):
        xs = as_points(xs, self.dimension)
        if np.any(np.linalg.norm(xs, axis=1) >= 1.0):
            raise ValueError("ball-to-half-space map applied outside the unit ball")
        north = np.zeros(self.dimension)
        north[-1] = 1.0
        diff = xs - north[None, :]
        denom = np.sum(diff * diff, axis=1)
        img = north[None, :] + 2.0 * diff / denom[:, None]
        img[:, -1] = -img[:, -1]
        return img


def apply(mapping: MoebiusMap, x) -> np.ndarray:
    """Apply a Moebius map to a single point."""
    return mapping.apply(x)
