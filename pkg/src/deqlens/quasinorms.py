"""Frobenius norm, the row power sums s_p, and the Hölder-type ordering checks.

``s_p(A)`` is the largest row sum of ``|A_ij|**p``. At ``p = 0`` the power sum
degenerates, so the count of nonzeros per row (the sparsity) is used instead;
it is also the ``p -> 0+`` limit of the power sum, which keeps every profile
continuous.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConjugateExponentMismatch, HypothesisViolated, POutOfRange
from .matrix import SparseHermitianMatrix, adjoint, binary_normalized, shape_summary

DEFAULT_GRID = 201
MONOTONE_SLACK = 1e-12
SPECTRAL_NORM_SLACK = 1e-9


class RowPowerSums:
    """Evaluate ``s_p`` repeatedly for one matrix without re-deriving its layout."""

    def __init__(self, a: SparseHermitianMatrix):
        self.dim = a.dim
        self.rows = a.rows
        self.mags = np.abs(a.values)
        self.count = int(np.bincount(a.rows, minlength=a.dim).max())

    def __call__(self, p: float) -> float:
        if p == 0:
            return float(self.count)
        with np.errstate(over="ignore", under="ignore"):
            sums = np.bincount(self.rows, weights=self.mags ** p, minlength=self.dim)
        return float(sums.max())


def _squared_magnitudes(values: np.ndarray) -> np.ndarray:
    # out-of-range squares round to inf or 0, which is the intended float result
    with np.errstate(over="ignore", under="ignore"):
        if np.iscomplexobj(values):
            return values.real * values.real + values.imag * values.imag
        return values * values


def frobenius_norm(a: SparseHermitianMatrix) -> float:
    # fsum is order-independent, so A and its adjoint give bit-identical norms;
    # the power-of-two prescale keeps tiny or huge entries from under/overflowing
    b, k = binary_normalized(a)
    return math.ldexp(math.sqrt(math.fsum(_squared_magnitudes(b.values).tolist())), k)


def s_p(a: SparseHermitianMatrix, p: float) -> float:
    """Max over rows of ``sum_j |A_ij|**p`` for ``p`` in (0, 2]. Use :func:`s_zero` for p = 0."""
    if not 0.0 < p <= 2.0:
        raise POutOfRange(f"s_p needs p in (0, 2], got {p!r}")
    return RowPowerSums(a)(p)


def s_zero(a: SparseHermitianMatrix) -> int:
    return shape_summary(a).s


@dataclass(frozen=True)
class QuasinormProfile:
    frobenius: float
    s_zero: int
    samples: tuple[tuple[float, float, float], ...]
    grid_resolution: int

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["p", "s_p_A", "s_2mp_Aadj", "mixed"])
        for p, sa, sb in self.samples:
            w.writerow([repr(p), repr(sa), repr(sb), repr(math.sqrt(sa * sb))])
        return out.getvalue()


def p_grid(grid_resolution: int) -> np.ndarray:
    return np.linspace(0.0, 2.0, grid_resolution)


def profile(a: SparseHermitianMatrix, grid_resolution: int = DEFAULT_GRID) -> QuasinormProfile:
    """Sample ``(p, s_p(A), s_{2-p}(A^dagger))`` on a uniform grid over [0, 2]."""
    if grid_resolution < 3:
        raise ValueError("grid_resolution must be at least 3")
    fwd = RowPowerSums(a)
    back = RowPowerSums(adjoint(a))
    samples = tuple(
        (float(p), fwd(float(p)), back(2.0 - float(p))) for p in p_grid(grid_resolution)
    )
    return QuasinormProfile(
        frobenius=frobenius_norm(a),
        s_zero=fwd.count,
        samples=samples,
        grid_resolution=grid_resolution,
    )


@dataclass(frozen=True)
class OrderingLink:
    epsilon: float
    label: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        """Amount by which ``lhs <= rhs`` is violated (negative when it holds)."""
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.slack <= MONOTONE_SLACK


@dataclass(frozen=True)
class OrderingReport:
    links: tuple[OrderingLink, ...]
    spectral_norm: float
    hypothesis_violated: bool

    @property
    def holds(self) -> bool:
        return all(link.holds for link in self.links)

    @property
    def worst_slack(self) -> float:
        return max(link.slack for link in self.links)


def check_sp_ordering(a: SparseHermitianMatrix, epsilons: Sequence[float] = (0.5,),
                      strict: bool = False) -> OrderingReport:
    """Check ``s_2 <= s_{2-eps} <= s_1 <= s_0`` for each epsilon in (0, 1).

    The chain is only promised for spectral norm at most 1. Outside that class
    the report is still produced but flagged; ``strict=True`` raises instead.
    """
    from .spectrum import eigenvalues

    eps = [float(e) for e in epsilons]
    if not eps or any(not 0.0 < e < 1.0 for e in eps):
        raise POutOfRange(f"every epsilon must lie in (0, 1), got {epsilons!r}")
    norm = float(np.max(np.abs(eigenvalues(a))))
    violated = norm > 1.0 + SPECTRAL_NORM_SLACK
    if violated and strict:
        raise HypothesisViolated(f"spectral norm {norm!r} exceeds 1")
    sums = RowPowerSums(a)
    s2, s1, s0 = sums(2.0), sums(1.0), sums(0.0)
    links = []
    for e in eps:
        mid = sums(2.0 - e)
        links += [
            OrderingLink(e, "s_2 <= s_(2-eps)", s2, mid),
            OrderingLink(e, "s_(2-eps) <= s_1", mid, s1),
            OrderingLink(e, "s_1 <= s_0", s1, s0),
        ]
    return OrderingReport(tuple(links), norm, violated)


def lp_quasinorm(x, p: float) -> float:
    x = np.abs(np.asarray(x))
    return float(np.sum(x ** p) ** (1.0 / p))


def lp_monotonicity_check(x, p1: float, p2: float) -> bool:
    """True iff ``||x||_p2 <= ||x||_p1`` (up to 1e-12) for ``p1 <= p2`` in (0, 2]."""
    if not (0.0 < p1 <= 2.0 and 0.0 < p2 <= 2.0) or p1 > p2:
        raise POutOfRange(f"need 0 < p1 <= p2 <= 2, got p1={p1!r}, p2={p2!r}")
    return lp_quasinorm(x, p2) <= lp_quasinorm(x, p1) + MONOTONE_SLACK


def holder_check(v, w, p: float, q: float) -> bool:
    """True iff ``sum |v_i w_i| <= ||v||_p ||w||_q`` (up to 1e-12)."""
    if p <= 1.0 or abs(1.0 / p + 1.0 / q - 1.0) > 1e-12:
        raise ConjugateExponentMismatch(f"p={p!r}, q={q!r} are not conjugate exponents")
    v = np.asarray(v)
    w = np.asarray(w)
    lhs = float(np.sum(np.abs(v * w)))
    return lhs <= lp_quasinorm(v, p) * lp_quasinorm(w, q) + MONOTONE_SLACK
