"""Two-qubit X-states in t-, s- and delta-coordinates.

The three coordinate systems are linked by

    t-coordinates  (t1..t6, phases)  -- matrix entries of the Cholesky-type form
    s-coordinates  (s1..s5)          -- centred and scaled diagonal/off-diagonal data
    delta-coords   (s1, d1, d2, s4, s5)  on the quarter region s2, s3 >= 0

In delta-coordinates both determinants factor:

    det xi      = d1 d2 (1 - s4)(1 - s5)
    det xi^PT   = (d1 - s5 d2)(d2 - s4 d1)

All functions broadcast: coordinate fields may be floats or equally shaped
numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from typing import NamedTuple

import numpy as np

__all__ = [
    "DeltaCoords",
    "Extremum",
    "SCoords",
    "TCoords",
    "XDensity",
    "build_matrix",
    "check_delta",
    "check_s",
    "check_t",
    "delta_to_s",
    "det_difference",
    "det_xi",
    "det_xi_pt",
    "det_xi_pt_from_s",
    "extreme_points",
    "negative_eigenvalue_count",
    "partial_transpose",
    "s_to_delta",
    "s_to_t",
    "search_extremes",
    "t_to_s",
]

_TOL = 1e-12


@dataclass(frozen=True)
class TCoords:
    t1: float
    t2: float
    t3: float
    t4: float
    t5: float
    t6: float
    theta5: float = 0.0
    theta6: float = 0.0


@dataclass(frozen=True)
class SCoords:
    s1: float
    s2: float
    s3: float
    s4: float
    s5: float


@dataclass(frozen=True)
class DeltaCoords:
    s1: float
    delta1: float
    delta2: float
    s4: float
    s5: float

    def as_array(self) -> np.ndarray:
        """Stack the fields along a trailing axis, shape ``(..., 5)``."""
        return np.stack(np.broadcast_arrays(*self._values()), axis=-1).astype(float)

    @classmethod
    def from_array(cls, X) -> "DeltaCoords":
        X = np.asarray(X, dtype=float)
        return cls(*(X[..., j] for j in range(5)))

    def _values(self):
        return [getattr(self, f.name) for f in fields(self)]


@dataclass(frozen=True)
class XDensity:
    """Nonzero entries of an X-shaped 4x4 Hermitian matrix."""

    xi11: float
    xi22: float
    xi33: float
    xi44: float
    xi14: complex
    xi23: complex

    def matrix(self) -> np.ndarray:
        """Dense matrix, shape ``(..., 4, 4)``."""
        entries = np.broadcast_arrays(
            *(np.asarray(v) for v in (self.xi11, self.xi22, self.xi33, self.xi44, self.xi14, self.xi23))
        )
        shape = entries[0].shape
        m = np.zeros(shape + (4, 4), dtype=complex)
        m[..., 0, 0] = entries[0]
        m[..., 1, 1] = entries[1]
        m[..., 2, 2] = entries[2]
        m[..., 3, 3] = entries[3]
        m[..., 0, 3] = entries[4]
        m[..., 3, 0] = np.conj(entries[4])
        m[..., 1, 2] = entries[5]
        m[..., 2, 1] = np.conj(entries[5])
        return m

    def block_determinants(self):
        """The two 2x2 block determinants ``(xi11 xi44 - |xi14|^2, xi22 xi33 - |xi23|^2)``."""
        return (
            self.xi11 * self.xi44 - np.abs(self.xi14) ** 2,
            self.xi22 * self.xi33 - np.abs(self.xi23) ** 2,
        )

    def det(self):
        b1, b2 = self.block_determinants()
        return b1 * b2


def _all(cond) -> bool:
    return bool(np.all(cond))


def check_t(t: TCoords, tol: float = _TOL) -> TCoords:
    vals = [t.t1, t.t2, t.t3, t.t4, t.t5, t.t6]
    if not _all([np.asarray(v) >= -tol for v in vals]):
        raise ValueError("t-coordinates must be nonnegative")
    if not _all(np.abs(sum(vals) - 1.0) <= tol):
        raise ValueError("t-coordinates must sum to one")
    return t


def check_s(s: SCoords, tol: float = _TOL) -> SCoords:
    ok = (
        _all((s.s1 >= -tol) & (s.s1 <= 1 + tol))
        and _all((s.s4 >= -tol) & (s.s4 <= 1 + tol))
        and _all((s.s5 >= -tol) & (s.s5 <= 1 + tol))
        and _all(np.abs(s.s2) <= 1 - np.asarray(s.s1) + tol)
        and _all(np.abs(s.s3) <= np.asarray(s.s1) + tol)
    )
    if not ok:
        raise ValueError(f"s-coordinates out of range: {s}")
    return s


def check_delta(d: DeltaCoords, tol: float = _TOL) -> DeltaCoords:
    s1 = np.asarray(d.s1)
    ok = (
        _all((s1 >= -tol) & (s1 <= 1 + tol))
        and _all((d.s4 >= -tol) & (d.s4 <= 1 + tol))
        and _all((d.s5 >= -tol) & (d.s5 <= 1 + tol))
        and _all((d.delta1 >= -tol) & (d.delta1 <= ((1 - s1) / 2) ** 2 + tol))
        and _all((d.delta2 >= -tol) & (d.delta2 <= (s1 / 2) ** 2 + tol))
    )
    if not ok:
        raise ValueError(f"delta-coordinates out of range: {d}")
    return d


def s_to_t(s: SCoords, theta5=0.0, theta6=0.0) -> TCoords:
    check_s(s)
    xi44 = (1 - s.s1 - s.s2) / 2
    xi33 = (s.s1 - s.s3) / 2
    return TCoords(
        t1=(1 - s.s1 + s.s2) / 2,
        t2=(s.s1 + s.s3) / 2,
        t3=(1 - s.s5) * xi33,
        t4=(1 - s.s4) * xi44,
        t5=s.s4 * xi44,
        t6=s.s5 * xi33,
        theta5=theta5,
        theta6=theta6,
    )


def _ratio(num, den):
    num, den = np.broadcast_arrays(np.asarray(num, float), np.asarray(den, float))
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den > 0)
    return out if out.ndim else float(out)


def t_to_s(t: TCoords) -> SCoords:
    xi33 = t.t3 + t.t6
    xi44 = t.t4 + t.t5
    # s4, s5 are undetermined on a collapsed block; continuity picks 0
    return SCoords(
        s1=t.t2 + xi33,
        s2=t.t1 - xi44,
        s3=t.t2 - xi33,
        s4=_ratio(t.t5, xi44),
        s5=_ratio(t.t6, xi33),
    )


def s_to_delta(s: SCoords) -> DeltaCoords:
    check_s(s)
    if not _all((np.asarray(s.s2) >= 0) & (np.asarray(s.s3) >= 0)):
        raise ValueError("s_to_delta is defined on the quarter region s2, s3 >= 0")
    return DeltaCoords(
        s1=s.s1,
        delta1=((1 - s.s1) ** 2 - s.s2**2) / 4,
        delta2=(s.s1**2 - s.s3**2) / 4,
        s4=s.s4,
        s5=s.s5,
    )


def delta_to_s(d: DeltaCoords) -> SCoords:
    """Inverse of :func:`s_to_delta`, landing in the quarter region."""
    check_delta(d)
    s2 = np.sqrt(np.clip((1 - d.s1) ** 2 - 4 * np.asarray(d.delta1), 0, None))
    s3 = np.sqrt(np.clip(np.asarray(d.s1) ** 2 - 4 * np.asarray(d.delta2), 0, None))
    if s2.ndim == 0:
        s2, s3 = float(s2), float(s3)
    return SCoords(d.s1, s2, s3, d.s4, d.s5)


def det_xi(d: DeltaCoords):
    return d.delta1 * d.delta2 * (1 - d.s4) * (1 - d.s5)


def det_xi_pt(d: DeltaCoords):
    return (d.delta1 - d.s5 * d.delta2) * (d.delta2 - d.s4 * d.delta1)


def det_difference(d: DeltaCoords):
    """``det xi^PT - det xi`` in its factored form."""
    return (d.delta1 - d.delta2) * (d.s5 * d.delta2 - d.s4 * d.delta1)


def det_xi_pt_from_s(s: SCoords):
    """``det xi^PT`` directly in s-coordinates; even in s2 and s3."""
    p = (1 - s.s1) ** 2 - s.s2**2
    q = s.s1**2 - s.s3**2
    return (p - s.s5 * q) * (q - s.s4 * p) / 16


def build_matrix(t: TCoords) -> XDensity:
    check_t(t)
    return XDensity(
        xi11=t.t1,
        xi22=t.t2,
        xi33=t.t3 + t.t6,
        xi44=t.t4 + t.t5,
        xi14=np.sqrt(t.t1 * t.t5) * np.exp(1j * np.asarray(t.theta5)),
        xi23=np.sqrt(t.t2 * t.t6) * np.exp(1j * np.asarray(t.theta6)),
    )


def partial_transpose(x: XDensity) -> XDensity:
    """Partial transpose on the second qubit: swaps the two anti-diagonal entries.

    The result is X-shaped but need not be positive semidefinite.
    """
    return XDensity(x.xi11, x.xi22, x.xi33, x.xi44, xi14=x.xi23, xi23=x.xi14)


def negative_eigenvalue_count(x: XDensity, tol: float = 1e-13) -> np.ndarray:
    """Number of eigenvalues below ``-tol`` for each matrix in ``x``."""
    eig = np.linalg.eigvalsh(x.matrix())
    return np.sum(eig < -tol, axis=-1)


class Extremum(NamedTuple):
    label: str
    point: DeltaCoords
    value: Fraction


def extreme_points() -> list[Extremum]:
    """Witness points for the extreme values of the determinants."""
    third = Fraction(1, 3)
    half = Fraction(1, 2)
    return [
        Extremum(
            "max det_xi",
            DeltaCoords(half, Fraction(1, 16), Fraction(1, 16), Fraction(0), Fraction(0)),
            Fraction(1, 256),
        ),
        Extremum(
            "max det_xi_pt",
            DeltaCoords(half, Fraction(1, 16), Fraction(1, 16), Fraction(0), Fraction(0)),
            Fraction(1, 256),
        ),
        Extremum(
            "min det_xi_pt",
            DeltaCoords(Fraction(0), Fraction(1, 4), Fraction(0), Fraction(1), Fraction(0)),
            Fraction(-1, 16),
        ),
        Extremum(
            "max det_difference",
            DeltaCoords(third, ((1 - third) / 2) ** 2, (third / 2) ** 2, Fraction(0), Fraction(1)),
            Fraction(1, 432),
        ),
    ]


def _cube_to_delta(x: np.ndarray) -> DeltaCoords:
    # unit cube (s1, u1, u2, s4, s5) -> delta box, with d1 = a u1, d2 = b u2
    s1 = x[..., 0]
    return DeltaCoords(
        s1=s1,
        delta1=((1 - s1) / 2) ** 2 * x[..., 1],
        delta2=(s1 / 2) ** 2 * x[..., 2],
        s4=x[..., 3],
        s5=x[..., 4],
    )


_OBJECTIVES = {
    "max det_xi": (det_xi, 1.0),
    "max det_xi_pt": (det_xi_pt, 1.0),
    "min det_xi_pt": (det_xi_pt, -1.0),
    "max det_difference": (det_difference, 1.0),
}


def search_extremes(grid_points: int = 13, n_starts: int = 8) -> dict[str, tuple[float, DeltaCoords]]:
    """Grid search plus bounded local refinement over the whole delta box.

    Returns ``{label: (extreme value found, location)}``; independent of the
    analytic witnesses in :func:`extreme_points`.
    """
    from scipy.optimize import minimize

    axis = np.linspace(0.0, 1.0, grid_points)
    grid = np.stack(np.meshgrid(*([axis] * 5), indexing="ij"), axis=-1).reshape(-1, 5)
    found = {}
    for label, (func, sign) in _OBJECTIVES.items():
        values = sign * func(_cube_to_delta(grid))
        best_idx = np.argsort(values)[::-1][:n_starts]
        best_val, best_x = values[best_idx[0]], grid[best_idx[0]]
        for x0 in grid[best_idx]:
            res = minimize(
                lambda x: -sign * func(_cube_to_delta(x)),
                x0,
                method="L-BFGS-B",
                bounds=[(0.0, 1.0)] * 5,
                options={"ftol": 1e-15, "gtol": 1e-12},
            )
            if -res.fun > best_val:
                best_val, best_x = -res.fun, np.clip(res.x, 0.0, 1.0)
        point = _cube_to_delta(best_x)
        found[label] = (float(func(point)), point)
    return found
