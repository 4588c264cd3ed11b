"""Dequantizability predicates and the final classification.

Every predicate keeps both sides of its inequality so a report can be audited
without recomputing anything. Comparisons are exact on the computed floats;
solver tolerances are handled upstream.
"""
from __future__ import annotations

import json
import math
import operator
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Integral, Real

from .config import AnalysisConfig
from .errors import DomainError, NotSparseAccess
from .matrix import SparseHermitianMatrix, adjoint, binary_normalized, shape_summary
from .mu_pass import MuResult, mu
from .quasinorms import _squared_magnitudes, frobenius_norm, s_p, s_zero
from .spectrum import SpectrumSummary, normalize, spectrum

SCHEMA_VERSION = 1

RELATIONS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}

NECESSARY = ("lemma_undeq_bound", "theorem_form_A", "theorem_form_B", "intermediate_sqrt_s_bound")


class Classification(str, Enum):
    DEQUANTIZABLE_SUFFICIENT = "DequantizableSufficient"
    DEQUANTIZABLE_BY_SPECTRUM = "DequantizableBySpectrum"
    INCONCLUSIVE = "Inconclusive"
    NOT_SPARSE_ACCESS = "NotSparseAccess"


@dataclass(frozen=True)
class Predicate:
    """Outcome of ``lhs <relation> rhs``; ``holds`` is None when not applicable."""

    name: str
    holds: bool | None
    lhs: object = None
    rhs: object = None
    relation: str = "<"
    note: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return self.holds is not None

    def to_dict(self) -> dict:
        d = {"holds": self.holds, "lhs": self.lhs, "rhs": self.rhs, "relation": self.relation}
        if self.note:
            d["note"] = self.note
        if self.extra:
            d["extra"] = dict(self.extra)
        return d


def _compare(name, lhs, rhs, relation, **kw) -> Predicate:
    return Predicate(name, bool(RELATIONS[relation](lhs, rhs)), lhs, rhs, relation, **kw)


def _not_applicable(name, reason) -> Predicate:
    return Predicate(name, None, note=reason)


def _require_member(spec: SpectrumSummary):
    if not spec.sparse_access_member:
        raise NotSparseAccess(
            f"not a sparse-access input (|lambda|_max={spec.abs_max!r}, singular={spec.singular})"
        )


def _frobenius_squared(a: SparseHermitianMatrix) -> float:
    return math.fsum(_squared_magnitudes(a.values).tolist())


def lemma_deq_sufficient(a: SparseHermitianMatrix, mu_result: MuResult) -> Predicate:
    """``||A||_F <= sqrt(s_p(A) s_{2-p}(A^dagger))`` at every checked p.

    The reported sides are the Frobenius norm and the smallest mixed term seen,
    which is the worst case over p. ``extra`` restates the same point as
    ``s_{2-p}(A^dagger) >= ||A||_F^2 / s_p(A)``.
    """
    m = mu_result
    fro_sq = _frobenius_squared(a)
    extra = {
        "worst_p": m.p_star,
        "margin": m.mixed_min - m.frobenius,
        "s_2mp_adj": m.s_2mp_adj_at_star,
        "frobenius_sq_over_s_p": fro_sq / m.s_p_at_star if m.s_p_at_star > 0 else math.inf,
    }
    pred = _compare("lemma_deq_sufficient", m.frobenius, m.mixed_min, "<=", extra=extra)
    assert pred.holds == m.deqineq_all_p
    return pred


def lemma_undeq_bound(a: SparseHermitianMatrix) -> Predicate:
    """``s_0(A) < ||A||_F^2 / s_2(A^dagger)`` or the same with A and A^dagger swapped.

    True means the necessary condition for un-dequantizability holds. Both
    sides are scale-invariant, so they are computed on the prescaled matrix.
    """
    b, _ = binary_normalized(a)
    adj = adjoint(b)
    fro_sq = _frobenius_squared(b)
    first = (float(s_zero(b)), fro_sq / s_p(adj, 2.0))
    second = (float(s_zero(adj)), fro_sq / s_p(b, 2.0))
    lhs, rhs = first if first[0] < first[1] or not second[0] < second[1] else second
    return _compare(
        "lemma_undeq_bound", lhs, rhs, "<",
        extra={"disjunct_A": list(first), "disjunct_Aadj": list(second)},
    )


def theorem_form_A(spec: SpectrumSummary, s: int) -> Predicate:
    """``kappa < sum|lambda_i| / (sqrt(s) |lambda|_min)``."""
    _require_member(spec)
    rhs = spec.abs_sum / (math.sqrt(s) * spec.abs_min)
    return _compare("theorem_form_A", spec.kappa, rhs, "<")


def theorem_form_B(spec: SpectrumSummary, s: int, n: int) -> Predicate:
    """``|lambda|_min > sqrt(s) / (kappa (n - 1) + 1)``."""
    _require_member(spec)
    rhs = math.sqrt(s) / (spec.kappa * (n - 1) + 1.0)
    return _compare("theorem_form_B", spec.abs_min, rhs, ">")


def intermediate_sqrt_s_bound(a: SparseHermitianMatrix, spec: SpectrumSummary, s: int) -> Predicate:
    """``sqrt(s) < ||A||_F / |lambda|_max`` (uses sum lambda_i^2 = ||A||_F^2)."""
    _require_member(spec)
    return _compare("intermediate_sqrt_s_bound", math.sqrt(s), frobenius_norm(a) / spec.abs_max, "<")


def _exact(d):
    if isinstance(d, Integral):
        return int(d)
    if isinstance(d, Fraction):
        return d
    if isinstance(d, float) and d.is_integer():
        return int(d)
    return None


def corollary_family_check(n: int, d) -> Predicate:
    """Whether ``d^n >= d^(n-1) (n-1) + 1`` for the diagonal family.

    True confirms the contradiction, i.e. the family is dequantizable. Integer
    and Fraction ``d`` are compared exactly; other reals use the factored form
    ``d >= (n-1) + d^(1-n)`` with a 1e-12 relative tolerance.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    n = int(n)
    if not isinstance(d, Real) or not d > n:
        raise DomainError(f"the family needs d > n, got n={n}, d={d!r}")
    exact = _exact(d)
    if exact is not None:
        lhs = exact ** n
        rhs = exact ** (n - 1) * (n - 1) + 1
        return _compare("corollary_family", lhs, rhs, ">=", extra={"n": n, "d": exact, "exact": True})
    d = float(d)
    rhs = (n - 1) + d ** (1 - n)
    holds = d >= rhs * (1.0 - 1e-12)
    return Predicate("corollary_family", bool(holds), d, rhs, ">=",
                     note="factored form, 1e-12 relative tolerance",
                     extra={"n": n, "d": d, "exact": False})


@dataclass(frozen=True)
class VerdictReport:
    matrix: dict
    mu: MuResult
    spectrum: SpectrumSummary
    predicates: dict
    classification: Classification
    triggers: tuple[str, ...]
    config: AnalysisConfig

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "matrix": dict(self.matrix),
            "mu": self.mu.to_dict(),
            "spectrum": self.spectrum.to_dict(),
            "predicates": {k: p.to_dict() for k, p in self.predicates.items()},
            "classification": self.classification.value,
            "triggers": list(self.triggers),
            "config": self.config.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), indent=2, allow_nan=False) + "\n"

    def summary_lines(self) -> list[str]:
        m, sp = self.mu, self.spectrum
        lines = [
            f"matrix: n={self.matrix['dim']} s={self.matrix['s']} nnz={self.matrix['nnz']}",
            f"frobenius={m.frobenius:.10g} mixed_min={m.mixed_min:.10g} p*={m.p_star:.6g}",
            f"mu={m.mu_value:.10g} inner_model={m.inner_model.value}",
            f"|lambda|min={sp.abs_min:.10g} |lambda|max={sp.abs_max:.10g} "
            f"kappa={sp.kappa:.10g} sparse_access={sp.sparse_access_member}",
        ]
        for name, p in self.predicates.items():
            if p.applicable:
                lines.append(f"  {name}: {p.lhs!s} {p.relation} {p.rhs!s} -> {p.holds}")
            else:
                lines.append(f"  {name}: n/a ({p.note})")
        trig = f" (triggered by {', '.join(self.triggers)})" if self.triggers else ""
        lines.append(f"classification: {self.classification.value}{trig}")
        return lines


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    return x


def classify(a: SparseHermitianMatrix, config: AnalysisConfig | None = None,
             family: tuple | None = None) -> VerdictReport:
    """Run every predicate on ``a`` and classify.

    Precedence: the sufficient lemma first, then sparse-access membership, then
    the failure of any necessary condition, otherwise inconclusive. ``family``
    is an optional ``(n, d)`` pair that adds the closed-form family check.
    """
    cfg = config or AnalysisConfig()
    spec = spectrum(a, cfg.membership_tol, cfg.signed_strict, cfg.singular_rtol, cfg.eigensolver)
    scale = 1.0
    if cfg.normalize and spec.abs_max > 0:
        scale = 1.0 / spec.abs_max
        a, spec = normalize(a, spec)
    shape = shape_summary(a)
    s = shape.s
    mres = mu(a, cfg.grid_resolution, cfg.p_tol, cfg.tie_tol)

    preds = {
        "lemma_deq_sufficient": lemma_deq_sufficient(a, mres),
        "lemma_undeq_bound": lemma_undeq_bound(a),
    }
    if spec.sparse_access_member:
        preds["theorem_form_A"] = theorem_form_A(spec, s)
        preds["theorem_form_B"] = theorem_form_B(spec, s, a.dim)
        preds["intermediate_sqrt_s_bound"] = intermediate_sqrt_s_bound(a, spec, s)
    else:
        reason = "singular" if spec.singular else "|lambda|_max exceeds 1"
        for name in NECESSARY[1:]:
            preds[name] = _not_applicable(name, f"not sparse-access input: {reason}")
    if family is not None:
        preds["corollary_family"] = corollary_family_check(*family)

    triggers: tuple[str, ...] = ()
    if preds["lemma_deq_sufficient"].holds:
        label = Classification.DEQUANTIZABLE_SUFFICIENT
        triggers = ("lemma_deq_sufficient",)
    elif not spec.sparse_access_member:
        label = Classification.NOT_SPARSE_ACCESS
    else:
        triggers = tuple(k for k in NECESSARY if preds[k].holds is False)
        label = Classification.DEQUANTIZABLE_BY_SPECTRUM if triggers else Classification.INCONCLUSIVE

    digest = {
        "dim": a.dim,
        "s": s,
        "nnz": shape.nnz,
        "herm_deviation": a.herm_deviation,
        "complex": a.is_complex,
        "normalized_by": scale,
    }
    return VerdictReport(digest, mres, spec, preds, label, triggers, cfg)
