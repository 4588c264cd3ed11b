"""The mu pass: compare the Frobenius norm with the best mixed row-sum term.

The mixed term is ``sqrt(s_p(A) * s_{2-p}(A^dagger))`` over p in [0, 2]. Its
logarithm is a sum of two functions of the form ``log max_i sum_j exp(p c_ij)``,
each convex in p, so the objective is unimodal on [0, 2]. A coarse grid
therefore brackets the global minimum and golden-section search finishes it.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .errors import POutOfRange
from .matrix import SparseHermitianMatrix, adjoint, binary_normalized
from .quasinorms import RowPowerSums, frobenius_norm, p_grid

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MIN_GRID = 21


class InnerModel(str, Enum):
    MU_F = "MuF"
    MU_P = "MuP"


class MixedObjective:
    """``p -> sqrt(s_p(A) s_{2-p}(A^dagger))`` with the layouts cached."""

    def __init__(self, a: SparseHermitianMatrix):
        self.fwd = RowPowerSums(a)
        self.back = RowPowerSums(adjoint(a))

    def factors(self, p: float) -> tuple[float, float]:
        return self.fwd(p), self.back(2.0 - p)

    def __call__(self, p: float) -> float:
        a, b = self.factors(p)
        return math.sqrt(a * b)


def mu_objective(a: SparseHermitianMatrix, p: float) -> float:
    if not 0.0 <= p <= 2.0:
        raise POutOfRange(f"p must lie in [0, 2], got {p!r}")
    return MixedObjective(a)(p)


def golden_section(f, lo: float, hi: float, tol: float, max_iter: int = 200):
    """Minimize a unimodal ``f`` on [lo, hi]; returns ``(x, f(x))``."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _left_edge(f, outside: float, inside: float, level: float, tol: float) -> float:
    # f(outside) > level >= f(inside); the sublevel set of a convex f is an interval
    while abs(inside - outside) > tol:
        mid = 0.5 * (inside + outside)
        if f(mid) <= level:
            inside = mid
        else:
            outside = mid
    return inside


@dataclass(frozen=True)
class _Search:
    p_star: float
    mixed_min: float


def _search(obj: MixedObjective, grid_resolution: int, p_tol: float, tie_tol: float) -> _Search:
    if grid_resolution < MIN_GRID:
        raise ValueError(f"grid_resolution must be at least {MIN_GRID}")
    if not p_tol > 0:
        raise ValueError("p_tol must be positive")
    grid = p_grid(grid_resolution)
    vals = np.array([obj(float(p)) for p in grid])
    gmin = float(vals.min())
    level = gmin * (1.0 + tie_tol)
    i = int(np.argmax(vals <= level))
    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, len(grid) - 1)])
    x, fx = golden_section(obj, lo, hi, p_tol)

    if fx < gmin * (1.0 - tie_tol):
        p_star, at_star = x, fx
    else:
        p_star, at_star = float(grid[i]), float(vals[i])
        flat = i + 1 < len(grid) and vals[i + 1] <= level
        if flat and i > 0:
            p_star = _left_edge(obj, float(grid[i - 1]), p_star, level, p_tol)
            at_star = obj(p_star)
    mixed_min = min(gmin, fx, at_star)
    return _Search(p_star=p_star, mixed_min=mixed_min)


def minimize_mixed(a: SparseHermitianMatrix, grid_resolution: int = 201, p_tol: float = 1e-9,
                   tie_tol: float = 1e-12) -> tuple[float, float]:
    """Return ``(p_star, mixed_min)``.

    Ties within ``tie_tol`` (relative) go to the smallest p, so a flat
    objective reports ``p_star = 0``.
    """
    res = _search(MixedObjective(a), grid_resolution, p_tol, tie_tol)
    return res.p_star, res.mixed_min


@dataclass(frozen=True)
class MuResult:
    mu_value: float
    frobenius: float
    mixed_min: float
    p_star: float
    inner_model: InnerModel
    deqineq_all_p: bool
    s_p_at_star: float
    s_2mp_adj_at_star: float
    grid_resolution: int
    p_tol: float
    tie_tol: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["inner_model"] = self.inner_model.value
        return d


def mu(a: SparseHermitianMatrix, grid_resolution: int = 201, p_tol: float = 1e-9,
       tie_tol: float = 1e-12) -> MuResult:
    """Evaluate mu(A) and decide which inner model the pass selects.

    ``deqineq_all_p`` is the exact comparison ``||A||_F <= mixed term`` at
    every grid point and at the refined points, which reduces to a comparison
    against the smallest value seen. The model choice allows a relative
    ``tie_tol`` in favour of the Frobenius model.
    """
    # both sides scale by 2**k, so search on the prescaled matrix; decisions use
    # the rescaled values so they always match what is reported
    b, k = binary_normalized(a)
    res = _search(MixedObjective(b), grid_resolution, p_tol, tie_tol)
    fro = math.ldexp(frobenius_norm(b), k)
    mixed = math.ldexp(res.mixed_min, k)
    sp, sq = MixedObjective(a).factors(res.p_star)
    model = InnerModel.MU_F if fro <= mixed * (1.0 + tie_tol) else InnerModel.MU_P
    return MuResult(
        mu_value=min(fro, mixed),
        frobenius=fro,
        mixed_min=mixed,
        p_star=res.p_star,
        inner_model=model,
        deqineq_all_p=bool(fro <= mixed),
        s_p_at_star=sp,
        s_2mp_adj_at_star=sq,
        grid_resolution=grid_resolution,
        p_tol=p_tol,
        tie_tol=tie_tol,
    )
