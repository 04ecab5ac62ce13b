"""Grid and shooting oracles for low-lying levels of H = kappa p^2 + V(x).

Two deliberately independent routes:

* ``ground_state`` / ``eigenvalue_by_index``   second-order finite
  differences on a symmetric Dirichlet grid, solved as a symmetric
  tridiagonal eigenproblem (Sturm bisection plus inverse iteration via
  LAPACK) with Richardson extrapolation from the (n, 2n-1) grid pair;
* ``shooting_ground_energy``                   Numerov integration with
  bisection on the interior node count.

The tridiagonal solve passes an explicit absolute tolerance to LAPACK.
The default (norm-relative) tolerance is useless for potentials with
enormous walls, e.g. the exponential wall of a Morse well sampled at
x = -30 dwarfs a ground level of order one and costs eight digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import (DomainError, DomainTooSmallError, IterationLimitError,
                     SingularPointError)
from .potentials import Family, PotentialSpec

_BOUNDARY_LEAK = 1.0e-10
_EIG_TOL = 1.0e-13


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class Grid:
    """n points spanning [-half_width, half_width], Dirichlet at the ends.

    ``n`` must be odd so x = 0 is a node; spacing is 2 half_width/(n-1).
    Use n = 1 (mod 4) when the convergence-ratio diagnostic matters, so the
    coarse companion grid is odd as well.
    """

    half_width: float
    n: int

    def __post_init__(self):
        if self.half_width <= 0.0:
            raise DomainError("grid half_width must be positive")
        if self.n < 3 or self.n % 2 == 0:
            raise DomainError("grid size must be odd and at least 3")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)


@dataclass(frozen=True)
class OracleResult:
    eigenvalue: float            # raw value on the requested grid
    eigenfunction: np.ndarray    # sampled on the full grid, zeros at the walls
    parity: Optional[Parity]
    refinement_estimate: float   # Richardson value from grids (n, 2n-1)
    convergence_ratio: float     # coarse/fine error ratio, ~4 in the h^2 regime
    x: np.ndarray


def _potential_on(spec: PotentialSpec, x: np.ndarray) -> np.ndarray:
    return np.asarray(spec(x), dtype=float)


def _solve_sector(spec: PotentialSpec, grid: Grid, k: int,
                  parity: Optional[Parity]) -> Tuple[float, np.ndarray]:
    """Eigenpair k in the parity sector; eigenvector on the full grid."""
    t = spec.kappa / grid.spacing ** 2
    inner = grid.nodes[1:-1]
    if parity is None:
        d = 2.0 * t + _potential_on(spec, inner)
        e = np.full(len(inner) - 1, -t)
    elif parity is Parity.ODD:
        # Dirichlet at 0: the positive-side block is already the odd sector
        half = inner[inner > 0.0]
        d = 2.0 * t + _potential_on(spec, half)
        e = np.full(len(half) - 1, -t)
    else:
        # even sector: center node with a sqrt(2)-symmetrized first coupling
        xs = inner[inner >= 0.0]
        d = 2.0 * t + _potential_on(spec, xs)
        e = np.full(len(xs) - 1, -t)
        e[0] = -math.sqrt(2.0) * t
    if k >= len(d):
        raise DomainError(f"level index {k} exceeds the sector size {len(d)}")
    try:
        w, v = eigh_tridiagonal(d, e, select="i", select_range=(k, k), tol=_EIG_TOL)
    except LinAlgError as exc:
        raise IterationLimitError(f"tridiagonal eigensolve failed: {exc}") from exc
    vec = v[:, 0]
    if parity is None:
        psi = np.concatenate([[0.0], vec, [0.0]])
    elif parity is Parity.ODD:
        psi = np.concatenate([[0.0], -vec[::-1], [0.0], vec, [0.0]])
    else:
        body = vec.copy()
        body[0] *= math.sqrt(2.0)
        psi = np.concatenate([[0.0], body[1:][::-1], [body[0]], body[1:], [0.0]])
    return float(w[0]), psi


def _classify_parity(psi: np.ndarray) -> Optional[Parity]:
    scale = float(np.max(np.abs(psi)))
    if scale == 0.0:
        return None
    if np.max(np.abs(psi - psi[::-1])) < 1.0e-6 * scale:
        return Parity.EVEN
    if np.max(np.abs(psi + psi[::-1])) < 1.0e-6 * scale:
        return Parity.ODD
    return None


def eigenvalue_by_index(spec: PotentialSpec, grid: Grid, k: int,
                        parity: Optional[Parity] = None,
                        refine: bool = True) -> OracleResult:
    """Level k (within the parity sector if one is given), grid route."""
    if k < 0:
        raise DomainError("level index must be nonnegative")
    if spec.family is Family.COULOMB and parity is not Parity.ODD:
        raise SingularPointError(
            "the bare Coulomb shape is singular at the center node; "
            "solve the odd sector")
    raw, psi = _solve_sector(spec, grid, k, parity)
    peak = float(np.max(np.abs(psi)))
    if max(abs(psi[1]), abs(psi[-2])) > _BOUNDARY_LEAK * peak:
        raise DomainTooSmallError(
            "eigenfunction has not decayed at the box edge; enlarge half_width")
    psi = psi / math.sqrt(float(np.sum(psi ** 2)) * grid.spacing)
    if psi[np.argmax(np.abs(psi))] < 0.0:
        psi = -psi
    found_parity = parity if parity is not None else _classify_parity(psi)
    refined, ratio = raw, math.nan
    if refine:
        nc = (grid.n + 1) // 2
        if nc % 2 == 0:
            nc += 1
        e_c, _ = _solve_sector(spec, Grid(grid.half_width, nc), k, parity)
        e_f, _ = _solve_sector(spec, Grid(grid.half_width, 2 * grid.n - 1), k, parity)
        refined = (4.0 * e_f - raw) / 3.0
        denom = raw - e_f
        ratio = (e_c - raw) / denom if denom != 0.0 else math.nan
    return OracleResult(raw, psi, found_parity, refined, ratio, grid.nodes)


def ground_state(spec: PotentialSpec, grid: Grid,
                 parity: Optional[Parity] = None,
                 refine: bool = True) -> OracleResult:
    """Lowest level, full line by default or restricted to a parity sector.

    Parity sectors presume a symmetric potential; for asymmetric shapes
    (Morse) leave parity unset and classification reports None.
    """
    return eigenvalue_by_index(spec, grid, 0, parity=parity, refine=refine)


# -- Numerov shooting (independent of the matrix route) ----------------------

def _numerov_nodes(spec: PotentialSpec, energy: float, x: np.ndarray,
                   v: np.ndarray, parity: Optional[Parity]) -> int:
    """Interior node count of the Numerov solution swept from the start.

    By Sturm oscillation the count equals the number of sector levels
    below ``energy``, so the lowest level is where it steps from 0 to 1
    (a node entering through the far Dirichlet wall).
    """
    h = x[1] - x[0]
    k2 = (energy - v) / spec.kappa
    c = 1.0 + (h * h / 12.0) * k2
    if parity is Parity.EVEN:
        psi_prev = 1.0
        psi_cur = (1.0 - 5.0 * h * h * k2[0] / 12.0) / c[1]
    else:
        # odd sector or full-line sweep: node at the first point
        psi_prev = 0.0
        psi_cur = h
    nodes = 1 if c[0] > 0.0 and c[1] > 0.0 and psi_cur <= 0.0 else 0
    for i in range(1, len(x) - 1):
        nxt = ((12.0 - 10.0 * c[i]) * psi_cur - c[i - 1] * psi_prev) / c[i + 1]
        # the recursion alternates sign spuriously where c < 0 (a deeply
        # forbidden region on this mesh); true nodes need local c > 0
        if (c[i] > 0.0 and c[i + 1] > 0.0 and psi_cur != 0.0
                and (nxt == 0.0 or (nxt < 0.0) != (psi_cur < 0.0))):
            nodes += 1
        psi_prev, psi_cur = psi_cur, nxt
        if abs(psi_cur) > 1.0e250:
            psi_prev *= 1.0e-250
            psi_cur *= 1.0e-250
    return nodes


def shooting_ground_energy(spec: PotentialSpec, half_width: float, n: int = 20001,
                           parity: Optional[Parity] = None,
                           bracket: Optional[Tuple[float, float]] = None,
                           tol: float = 1.0e-12) -> float:
    """Ground level by Numerov integration and node-count bisection.

    With a parity the sweep runs over [0, half_width] from a symmetric or
    antisymmetric start; without one it runs across the full box from the
    left wall.  No level of the sector lies below min(V), so the node
    count there is zero, and the bracket grows until a node appears; the
    0 -> 1 transition is the lowest level (robust against growth steps
    that hop over several levels, unlike an edge-sign bisection).
    """
    if half_width <= 0.0 or n < 16:
        raise DomainError("shooting needs a positive box and a fine mesh")
    if parity is None:
        x = np.linspace(-half_width, half_width, n)
    else:
        x = np.linspace(0.0, half_width, n)
    v = np.empty_like(x)
    if parity is not None and spec.family is Family.COULOMB:
        if parity is not Parity.ODD:
            raise SingularPointError(
                "the bare Coulomb shape is singular at x = 0; "
                "shoot in the odd sector")
        v[1:] = _potential_on(spec, x[1:])
        v[0] = 0.0  # multiplies the exact node psi(0) = 0
    else:
        v[:] = _potential_on(spec, x)

    def nodes(energy: float) -> int:
        return _numerov_nodes(spec, energy, x, v, parity)

    if bracket is None:
        lo = float(np.min(v)) + 1.0e-12
        step = 0.5 * max(1.0, abs(lo))
        hi = lo + step
        for _ in range(80):
            if nodes(hi) >= 1:
                break
            step *= 1.4
            lo = hi
            hi += step
        else:
            raise IterationLimitError(
                "no node appeared while growing the bracket; "
                "provide an energy bracket")
    else:
        lo, hi = float(bracket[0]), float(bracket[1])
        if nodes(lo) != 0 or nodes(hi) < 1:
            raise DomainError("bracket does not straddle the lowest level")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if nodes(mid) >= 1:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)
