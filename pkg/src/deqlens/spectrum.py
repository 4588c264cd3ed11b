"""Hermitian spectrum, condition number and sparse-access membership.

The production path is LAPACK's Hermitian solver through ``numpy.linalg.eigh``.
A cyclic Jacobi solver is kept as a second route for small matrices, and the
power-iteration oracle at the bottom is independent of both; the test suite
cross-checks all three.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure
from .matrix import SparseHermitianMatrix, binary_normalized

DEFAULT_MEMBERSHIP_TOL = 1e-9
DESK_SCALE = 4096


def _off_diagonal(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _jacobi_real(s: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60):
    """Cyclic Jacobi on a real symmetric matrix. Returns (w, V), unsorted."""
    a = np.array(s, dtype=float)
    m = a.shape[0]
    v = np.eye(m)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(m), v
    for _ in range(max_sweeps):
        off = _off_diagonal(a)
        if off <= tol * scale:
            return np.diag(a).copy(), v
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * cp - sn * cq, sn * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * rp - sn * rq, sn * rp + c * rq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - sn * vq, sn * vp + c * vq
    off = _off_diagonal(a)
    raise ConvergenceFailure(
        f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal mass {off:.3e})",
        off_diagonal_mass=off,
    )


def jacobi_eigh(h: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60):
    """Eigenpairs of a dense Hermitian matrix by cyclic Jacobi, ascending.

    Complex input goes through the real symmetric embedding
    ``[[Re, -Im], [Im, Re]]``, whose spectrum is that of ``h`` with every
    eigenvalue doubled.
    """
    h = np.asarray(h)
    n = h.shape[0]
    if not np.iscomplexobj(h) or not np.any(h.imag):
        w, v = _jacobi_real(np.real(h), tol, max_sweeps)
        order = np.argsort(w, kind="stable")
        return w[order], v[:, order]
    emb = np.block([[h.real, -h.imag], [h.imag, h.real]])
    w, v = _jacobi_real(emb, tol, max_sweeps)
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    w = w[::2]
    u = v[:n, ::2] + 1j * v[n:, ::2]
    u /= np.linalg.norm(u, axis=0)
    return w, u


def eigenpairs(a: SparseHermitianMatrix, method: str = "lapack"):
    """All eigenpairs, eigenvalues ascending. ``method`` is 'lapack' or 'jacobi'."""
    if a.dim > DESK_SCALE:
        raise ValueError(f"dense solve limited to n <= {DESK_SCALE}, got {a.dim}")
    dense = a.to_dense()
    if method == "lapack":
        w, v = np.linalg.eigh(dense)
    elif method == "jacobi":
        w, v = jacobi_eigh(dense)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return np.asarray(w, dtype=float), v


def eigenvalues(a: SparseHermitianMatrix, method: str = "lapack") -> np.ndarray:
    return eigenpairs(a, method)[0]


def _column_norms(r: np.ndarray) -> np.ndarray:
    # divide by the column max first so squares cannot overflow or underflow;
    # real and imaginary parts are split because complex division can overflow
    if np.iscomplexobj(r):
        r = np.concatenate([r.real, r.imag])
    top = np.abs(r).max(axis=0)
    safe = np.where(top > 0, top, 1.0)
    return top * np.linalg.norm(r / safe, axis=0)


def eigen_residuals(a: SparseHermitianMatrix, w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``||A v_k - w_k v_k||_2`` for every eigenpair."""
    b, k = binary_normalized(a)
    r = b.to_dense() @ v - v * np.ldexp(np.asarray(w, dtype=float), -k)
    return np.ldexp(_column_norms(r), k)


@dataclass(frozen=True)
class SpectrumSummary:
    eigenvalues: tuple[float, ...]
    lambda_min: float
    lambda_max: float
    abs_min: float
    abs_max: float
    kappa: float
    abs_sum: float
    singular: bool
    sparse_access_member: bool
    membership_tol: float
    signed_strict: bool
    max_residual: float
    min_pair_residual: float

    def to_dict(self) -> dict:
        return {
            "eigenvalues": list(self.eigenvalues),
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "abs_min": self.abs_min,
            "abs_max": self.abs_max,
            "kappa": self.kappa,
            "abs_sum": self.abs_sum,
            "singular": self.singular,
            "sparse_access_member": self.sparse_access_member,
            "membership_tol": self.membership_tol,
            "signed_strict": self.signed_strict,
            "max_residual": self.max_residual,
        }


def _membership(abs_max, singular, lambda_min, tol, signed_strict):
    ok = abs_max <= 1.0 + tol and not singular
    if signed_strict:
        ok = ok and lambda_min > 0.0
    return bool(ok)


def summarize(w, residuals, membership_tol: float = DEFAULT_MEMBERSHIP_TOL,
              signed_strict: bool = False, singular_rtol: float = 0.0) -> SpectrumSummary:
    """Build a summary from ascending eigenvalues and their residuals.

    The smallest-magnitude eigenvalue counts as zero when it is exactly zero,
    when its own residual is at least as large as it is (the computed value is
    then not distinguishable from 0), or when it is ``<= singular_rtol * abs_max``.
    """
    w = np.asarray(w, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    mags = np.abs(w)
    k = int(np.argmin(mags))
    abs_min, abs_max = float(mags[k]), float(mags.max())
    min_res = float(residuals[k])
    singular = abs_min == 0.0 or abs_min <= min_res or abs_min <= singular_rtol * abs_max
    kappa = math.inf if singular else abs_max / abs_min
    lam_min, lam_max = float(w[0]), float(w[-1])
    return SpectrumSummary(
        eigenvalues=tuple(float(x) for x in w),
        lambda_min=lam_min,
        lambda_max=lam_max,
        abs_min=abs_min,
        abs_max=abs_max,
        kappa=kappa,
        abs_sum=math.fsum(mags.tolist()),
        singular=bool(singular),
        sparse_access_member=_membership(abs_max, singular, lam_min, membership_tol, signed_strict),
        membership_tol=float(membership_tol),
        signed_strict=bool(signed_strict),
        max_residual=float(residuals.max()),
        min_pair_residual=min_res,
    )


def spectrum(a: SparseHermitianMatrix, membership_tol: float = DEFAULT_MEMBERSHIP_TOL,
             signed_strict: bool = False, singular_rtol: float = 0.0,
             method: str = "lapack") -> SpectrumSummary:
    w, v = eigenpairs(a, method)
    return summarize(w, eigen_residuals(a, w, v), membership_tol, signed_strict, singular_rtol)


def scale_summary(spec: SpectrumSummary, c: float) -> SpectrumSummary:
    """Summary of ``c * A`` for ``c > 0`` from the summary of ``A``, without re-solving."""
    if not c > 0:
        raise ValueError("scale factor must be positive")
    w = np.asarray(spec.eigenvalues) * c
    mags = np.abs(w)
    abs_min, abs_max = spec.abs_min * c, spec.abs_max * c
    return replace(
        spec,
        eigenvalues=tuple(float(x) for x in w),
        lambda_min=spec.lambda_min * c,
        lambda_max=spec.lambda_max * c,
        abs_min=abs_min,
        abs_max=abs_max,
        kappa=spec.kappa if spec.singular else abs_max / abs_min,
        abs_sum=math.fsum(mags.tolist()),
        sparse_access_member=_membership(abs_max, spec.singular, spec.lambda_min,
                                         spec.membership_tol, spec.signed_strict),
        max_residual=spec.max_residual * c,
        min_pair_residual=spec.min_pair_residual * c,
    )


def condition_number(spec: SpectrumSummary) -> float:
    """|lambda|_max / |lambda|_min, or ``math.inf`` for a singular spectrum."""
    if spec.singular:
        return math.inf
    return spec.abs_max / spec.abs_min


def normalize(a: SparseHermitianMatrix, spec: SpectrumSummary):
    """Scale ``A`` to spectral norm 1. Returns the scaled matrix and its summary."""
    c = 1.0 / spec.abs_max
    out = scale_summary(spec, c)
    # x * (1/x) can land one ulp off; the largest magnitude is 1 by construction
    out = replace(out, abs_max=1.0,
                  kappa=out.kappa if out.singular else 1.0 / out.abs_min,
                  sparse_access_member=_membership(1.0, out.singular, out.lambda_min,
                                                   out.membership_tol, out.signed_strict))
    return a.scaled(c), out


def sparse_access_check(a: SparseHermitianMatrix, normalize_first: bool = False,
                        membership_tol: float = DEFAULT_MEMBERSHIP_TOL,
                        signed_strict: bool = False, singular_rtol: float = 0.0,
                        method: str = "lapack"):
    """Return ``(summary, member)``; ``normalize_first`` divides A by |lambda|_max."""
    spec = spectrum(a, membership_tol, signed_strict, singular_rtol, method)
    if normalize_first and spec.abs_max > 0:
        _, spec = normalize(a, spec)
    return spec, spec.sparse_access_member


# -- independent oracle -------------------------------------------------------

def _matvec(a: SparseHermitianMatrix, x: np.ndarray) -> np.ndarray:
    prod = a.values * x[a.cols]
    if np.iscomplexobj(prod):
        re = np.bincount(a.rows, weights=prod.real, minlength=a.dim)
        im = np.bincount(a.rows, weights=prod.imag, minlength=a.dim)
        return re + 1j * im
    return np.bincount(a.rows, weights=prod, minlength=a.dim)


def _dominant_of_square(apply, n, complex_, rtol, max_iter, seed):
    """Largest eigenvalue of the PSD operator x -> apply(apply(x))."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    if complex_:
        x = x + 1j * rng.standard_normal(n)
    x /= np.linalg.norm(x)
    theta = 0.0
    for _ in range(max_iter):
        y = apply(apply(x))
        theta = float(np.real(np.vdot(x, y)))
        res = np.linalg.norm(y - theta * x)
        ny = np.linalg.norm(y)
        if ny == 0.0 or not np.isfinite(ny):
            return theta, 0.0
        if res <= rtol * abs(theta):
            return theta, res
        x = y / ny
    raise ConvergenceFailure(f"power iteration stalled after {max_iter} steps (residual {res:.3e})")


def extremal_eigenvalues_oracle(a: SparseHermitianMatrix, rtol: float = 1e-10,
                                max_iter: int = 200_000, seed: int = 0):
    """``(abs_min, abs_max)`` by power iteration on A^2 and on A^-2.

    Uses only sparse mat-vecs and an LU factorization, never an eigensolver.
    ``abs_min`` is 0.0 when the LU factorization exposes an exact zero pivot.
    """
    cplx = a.is_complex
    top, _ = _dominant_of_square(lambda x: _matvec(a, x), a.dim, cplx, rtol, max_iter, seed)
    abs_max = math.sqrt(max(top, 0.0))
    lu, piv = scipy.linalg.lu_factor(a.to_dense(), check_finite=True)
    if np.any(np.diag(lu) == 0):
        return 0.0, abs_max
    inv_top, _ = _dominant_of_square(lambda x: scipy.linalg.lu_solve((lu, piv), x),
                                     a.dim, cplx, rtol, max_iter, seed + 1)
    abs_min = 1.0 / math.sqrt(inv_top) if inv_top > 0 else math.inf
    return abs_min, abs_max
