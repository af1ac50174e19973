"""Closed-form hyperbolic-type distances on open Euclidean domains.

The central quantity is the geometric-mean distance

    h_c(x, y) = log(1 + c |x-y| / sqrt(d(x) d(y))),

a metric on every open D whenever c >= 2 (and generally not below 2;
see :mod:`hypermetric.verify` for the falsification machinery).  The
comparison quantities implemented alongside it:

    j(x, y)    = log(1 + |x-y| / min(d(x), d(y)))
    phi(x, y)  = log(1 + max(|x-y|/sqrt(d(x)d(y)), |x-y|^2/(d(x)d(y))))
    rho_B      = hyperbolic distance of the unit ball (Poincare model)
    rho_H      = hyperbolic distance of the upper half-space
    f(t, c)    = log(1 + 2 c sinh(t/2))

phi is exposed as a comparison *quantity*, not a metric: it fails the
triangle inequality on symmetric near-boundary triples.

Inverse hyperbolics are evaluated through logarithmic forms (log1p /
arcsinh) so coincident and near-boundary arguments stay finite; every
distance returns exactly 0.0 for x == y.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .domains import Domain, HalfSpace, UnitBall, as_point, as_points

#: Internal agreement required between the two closed forms of rho_B.
_BALL_FORM_TOL = 1e-12


@dataclass(frozen=True)
class MetricParams:
    """Parameter bundle for h_c.  c < 2 is allowed (needed by the
    falsification scans) but flagged via :attr:`sub_sharp`."""

    c: float = 2.0

    def __post_init__(self):
        if not (np.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be a positive real, got {self.c}")

    @property
    def sub_sharp(self) -> bool:
        """True when c < 2, i.e. h_c may fail the triangle inequality."""
        return self.c < 2.0


class MetricKind(Enum):
    H = "h"
    J = "j"
    PHI = "phi"
    RHO_BALL = "rho-ball"
    RHO_HALFSPACE = "rho-halfspace"
    QUASIHYPERBOLIC = "k"

    @classmethod
    def parse(cls, name: str) -> "MetricKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown metric {name!r}")


# ---------------------------------------------------------------------------
# clearance plumbing
# ---------------------------------------------------------------------------


def _clearances(domain: Domain, xs: np.ndarray) -> np.ndarray:
    """Clearances of interior points; raises if any point is outside."""
    inside = domain.contains_many(xs)
    if not np.all(inside):
        bad = xs[np.argmin(inside)]
        raise ValueError(f"point {bad.tolist()} is not inside {domain.spec_string()}")
    d = domain.clearance_many(xs)
    if np.any(d <= 0.0):
        bad = xs[int(np.argmin(d))]
        raise ValueError(f"point {bad.tolist()} has nonpositive clearance")
    return d


def _pair_arrays(domain: Domain, x, y) -> tuple[np.ndarray, np.ndarray]:
    n = domain.dimension
    return as_point(x, n)[None, :], as_point(y, n)[None, :]


# ---------------------------------------------------------------------------
# h_c and its generalized form
# ---------------------------------------------------------------------------


def h_many(domain: Domain, xs: np.ndarray, ys: np.ndarray, c: float) -> np.ndarray:
    dx = _clearances(domain, xs)
    dy = _clearances(domain, ys)
    rho = np.linalg.norm(xs - ys, axis=1)
    return np.log1p(c * rho / np.sqrt(dx * dy))


def h_metric(domain: Domain, params: MetricParams, x, y) -> float:
    """log(1 + c |x-y| / sqrt(d(x) d(y))) for interior points."""
    xs, ys = _pair_arrays(domain, x, y)
    if np.array_equal(xs, ys):
        _clearances(domain, xs)
        return 0.0
    return float(h_many(domain, xs, ys, params.c)[0])


def h_metric_general(rho_xy: float, dA_x: float, dA_y: float, params: MetricParams) -> float:
    """h built from a precomputed separation and two clearances.

    ``h_metric`` is this composed with the boundary clearance; the
    clearances may instead come from any nonempty set in the complement
    (see :func:`hypermetric.domains.distance_to_set`).
    """
    if not rho_xy >= 0.0:
        raise ValueError(f"separation must be nonnegative, got {rho_xy}")
    if not (dA_x > 0.0 and dA_y > 0.0):
        raise ValueError("clearances must be positive")
    if rho_xy == 0.0:
        return 0.0
    return float(np.log1p(params.c * rho_xy / np.sqrt(dA_x * dA_y)))


# ---------------------------------------------------------------------------
# distance ratio metric j and the comparison quantity phi
# ---------------------------------------------------------------------------


def j_many(domain: Domain, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    dx = _clearances(domain, xs)
    dy = _clearances(domain, ys)
    rho = np.linalg.norm(xs - ys, axis=1)
    return np.log1p(rho / np.minimum(dx, dy))


def j_metric(domain: Domain, x, y) -> float:
    """log(1 + |x-y| / min(d(x), d(y)))."""
    xs, ys = _pair_arrays(domain, x, y)
    if np.array_equal(xs, ys):
        _clearances(domain, xs)
        return 0.0
    return float(j_many(domain, xs, ys)[0])


def phi_many(domain: Domain, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    dx = _clearances(domain, xs)
    dy = _clearances(domain, ys)
    r = np.linalg.norm(xs - ys, axis=1) / np.sqrt(dx * dy)
    return np.log1p(np.maximum(r, r * r))


def phi_quantity(domain: Domain, x, y) -> float:
    """log(1 + max(r, r^2)) with r = |x-y|/sqrt(d(x)d(y)).

    Comparable to j within factors of 2 but *not* a metric; the name
    avoids suggesting triangle-inequality guarantees.
    """
    xs, ys = _pair_arrays(domain, x, y)
    if np.array_equal(xs, ys):
        _clearances(domain, xs)
        return 0.0
    return float(phi_many(domain, xs, ys)[0])


# ---------------------------------------------------------------------------
# hyperbolic metrics of the two canonical models
# ---------------------------------------------------------------------------


def rho_halfspace_many(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    if np.any(xs[:, -1] <= 0.0) or np.any(ys[:, -1] <= 0.0):
        raise ValueError("half-space points need a positive last coordinate")
    q2 = np.sum((xs - ys) ** 2, axis=1)
    u = q2 / (2.0 * xs[:, -1] * ys[:, -1])
    # arcosh(1 + u) in a form that is exact at u = 0
    return np.log1p(u + np.sqrt(u * (u + 2.0)))


def rho_halfspace(x, y) -> float:
    """Hyperbolic distance of the upper half-space:
    cosh(rho) = 1 + |x-y|^2 / (2 x_n y_n)."""
    x = as_point(x)
    y = as_point(y, x.size)
    return float(rho_halfspace_many(x[None, :], y[None, :])[0])


def rho_ball_many(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    nx = np.linalg.norm(xs, axis=1)
    ny = np.linalg.norm(ys, axis=1)
    if np.any(nx >= 1.0) or np.any(ny >= 1.0):
        raise ValueError("ball points must satisfy |x| < 1")
    q = np.linalg.norm(xs - ys, axis=1)
    p = ((1.0 - nx) * (1.0 + nx)) * ((1.0 - ny) * (1.0 + ny))
    sp = np.sqrt(p)
    rho = 2.0 * np.arcsinh(q / sp)
    # cross-check through the tanh form:
    #   tanh(rho/2) = q / sqrt(q^2 + p)  =>  rho = 2 log(A + q) - log p
    # with A = hypot(q, sqrt(p)).
    a = np.hypot(q, sp)
    rho_tanh = 2.0 * np.log(a + q) - np.log(p)
    tol = _BALL_FORM_TOL * np.maximum(1.0, rho)
    if np.any(np.abs(rho - rho_tanh) > tol):
        worst = int(np.argmax(np.abs(rho - rho_tanh) - tol))
        raise ArithmeticError(
            "hyperbolic-ball closed forms disagree beyond "
            f"{_BALL_FORM_TOL}: sinh form {rho[worst]!r} vs tanh form {rho_tanh[worst]!r}"
        )
    return rho


def rho_ball(x, y) -> float:
    """Hyperbolic distance of the unit ball (Poincare model):
    sinh(rho/2) = |x-y| / sqrt((1-|x|^2)(1-|y|^2)).

    The tanh(rho/2) form is evaluated internally as a consistency check;
    disagreement beyond 1e-12 (relative above 1) raises ArithmeticError.
    """
    x = as_point(x)
    y = as_point(y, x.size)
    if np.array_equal(x, y):
        if np.linalg.norm(x) >= 1.0:
            raise ValueError("ball points must satisfy |x| < 1")
        return 0.0
    return float(rho_ball_many(x[None, :], y[None, :])[0])


# ---------------------------------------------------------------------------
# the comparison function f(t) = log(1 + 2 c sinh(t/2))
# ---------------------------------------------------------------------------


def comparison_f(t, c: float) -> float | np.ndarray:
    """log(1 + 2 c sinh(t/2)); strictly between c t/(2(1+c)) and c t for
    c >= 1/2, t > 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("t must be nonnegative")
    if not c > 0.0:
        raise ValueError("c must be positive")
    out = np.log1p(2.0 * c * np.sinh(0.5 * t))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# kind dispatch used by scans and the CLI
# ---------------------------------------------------------------------------


def validate_kind(kind: MetricKind, domain: Domain) -> None:
    if kind is MetricKind.RHO_BALL and not isinstance(domain, UnitBall):
        raise ValueError("rho-ball is only defined on ball domains")
    if kind is MetricKind.RHO_HALFSPACE and not isinstance(domain, HalfSpace):
        raise ValueError("rho-halfspace is only defined on half-space domains")


def pair_evaluator(kind: MetricKind, domain: Domain, params: MetricParams, k_controls=None):
    """Vectorized (xs, ys) -> distances evaluator for a metric kind.

    QUASIHYPERBOLIC evaluation runs one shortest-path query per pair and
    is far slower than the closed forms.
    """
    validate_kind(kind, domain)
    if kind is MetricKind.H:
        return lambda xs, ys: h_many(domain, xs, ys, params.c)
    if kind is MetricKind.J:
        return lambda xs, ys: j_many(domain, xs, ys)
    if kind is MetricKind.PHI:
        return lambda xs, ys: phi_many(domain, xs, ys)
    if kind is MetricKind.RHO_BALL:
        return lambda xs, ys: rho_ball_many(as_points(xs, domain.dimension),
                                            as_points(ys, domain.dimension))
    if kind is MetricKind.RHO_HALFSPACE:
        return lambda xs, ys: rho_halfspace_many(as_points(xs, domain.dimension),
                                                 as_points(ys, domain.dimension))
    if kind is MetricKind.QUASIHYPERBOLIC:
        from .quasihyperbolic import KControls, k_estimate_many

        controls = k_controls if k_controls is not None else KControls()
        return lambda xs, ys: k_estimate_many(domain, xs, ys, controls)
    raise ValueError(f"unsupported metric kind {kind}")
