import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deqlens import (
    AnalysisConfig,
    Classification,
    classify,
    corollary_family_check,
    diag_power_family,
    from_dense,
    identity,
    intermediate_sqrt_s_bound,
    lemma_deq_sufficient,
    lemma_undeq_bound,
    mu,
    spectrum,
    theorem_form_A,
    theorem_form_B,
)
from deqlens.errors import DomainError, NotSparseAccess
from deqlens.verdict import NECESSARY, RELATIONS

from conftest import corpus, hermitian_matrices


def assert_evidence_consistent(pred):
    if pred.applicable:
        assert pred.holds == RELATIONS[pred.relation](pred.lhs, pred.rhs)


def test_lemma_deq_examples(Y, D):
    pred = lemma_deq_sufficient(Y, mu(Y))
    assert pred.holds and pred.lhs == pytest.approx(math.sqrt(0.58), rel=1e-15)
    assert pred.rhs == pytest.approx(0.9, rel=1e-12)

    pred = lemma_deq_sufficient(D, mu(D))
    assert not pred.holds
    assert (pred.lhs, pred.rhs) == (pytest.approx(0.2581673694, abs=1e-10), pytest.approx(0.25, rel=1e-12))
    assert pred.extra["margin"] < 0

    i2 = identity(2)
    pred = lemma_deq_sufficient(i2, mu(i2))
    assert not pred.holds and pred.lhs == pytest.approx(math.sqrt(2)) and pred.rhs == 1.0


def test_lemma_undeq_examples(D, I3, J):
    pred = lemma_undeq_bound(D)
    # 0.06665.../0.0625 = 273/256
    assert pred.holds and pred.lhs == 1.0 and pred.rhs == pytest.approx(273 / 256, rel=1e-15)
    pred = lemma_undeq_bound(I3)
    assert pred.holds and (pred.lhs, pred.rhs) == (1.0, 3.0)
    pred = lemma_undeq_bound(J)
    assert not pred.holds and (pred.lhs, pred.rhs) == (2.0, 2.0)


def test_lemma_undeq_disjuncts_coincide_for_hermitian(D):
    extra = lemma_undeq_bound(D).extra
    assert extra["disjunct_A"] == extra["disjunct_Aadj"]


def test_theorem_form_A_examples(D, X):
    pred = theorem_form_A(spectrum(D), 1)
    assert pred.holds
    assert pred.lhs == pytest.approx(16.0, rel=1e-12) and pred.rhs == pytest.approx(21.0, rel=1e-12)
    for n in (2, 5, 11):
        pred = theorem_form_A(spectrum(identity(n)), 1)
        assert pred.holds and (pred.lhs, pred.rhs) == (1.0, float(n))
    pred = theorem_form_A(spectrum(X), 1)
    assert pred.holds and (pred.lhs, pred.rhs) == (1.0, 2.0)


def test_theorem_form_B_examples(D, X):
    pred = theorem_form_B(spectrum(D), 1, 3)
    assert not pred.holds
    assert pred.lhs == 0.015625 and pred.rhs == pytest.approx(1 / 33, rel=1e-12)
    for n in (2, 5, 11):
        pred = theorem_form_B(spectrum(identity(n)), 1, n)
        assert pred.holds and (pred.lhs, pred.rhs) == (1.0, 1 / n)
    pred = theorem_form_B(spectrum(X), 1, 2)
    # boundary equality counts as failure of the strict condition
    assert not pred.holds and (pred.lhs, pred.rhs) == (0.5, 0.5)


def test_intermediate_bound_examples(D, I3, J):
    pred = intermediate_sqrt_s_bound(D, spectrum(D), 1)
    assert pred.holds and pred.rhs == pytest.approx(math.sqrt(273) / 16, rel=1e-15)
    pred = intermediate_sqrt_s_bound(I3, spectrum(I3), 1)
    assert pred.holds and pred.rhs == pytest.approx(math.sqrt(3), rel=1e-15)
    # J has eigenvalues 1 and 0
    with pytest.raises(NotSparseAccess):
        intermediate_sqrt_s_bound(J, spectrum(J), 2)


def test_theorem_predicates_refuse_non_members(I3, J):
    big = spectrum(I3.scaled(2.0))
    with pytest.raises(NotSparseAccess):
        theorem_form_A(big, 1)
    with pytest.raises(NotSparseAccess):
        theorem_form_B(spectrum(J), 2, 2)


@pytest.mark.parametrize("n,d,lhs,rhs", [
    (3, 4, 64, 33),
    (2, 3, 9, 4),
    (5, 6, 7776, 5185),
    (12, 22, 22 ** 12, 22 ** 11 * 11 + 1),
])
def test_corollary_exact_examples(n, d, lhs, rhs):
    pred = corollary_family_check(n, d)
    assert pred.holds and (pred.lhs, pred.rhs) == (lhs, rhs)
    assert type(pred.lhs) is int and pred.extra["exact"]


@pytest.mark.parametrize("n,d", [(3, 3), (3, 2), (1, 4), (2.5, 4), (4, -1)])
def test_corollary_domain(n, d):
    with pytest.raises(DomainError):
        corollary_family_check(n, d)


def test_corollary_real_and_fraction_d():
    pred = corollary_family_check(3, 3.5)
    assert pred.holds and not pred.extra["exact"]
    pred = corollary_family_check(3, Fraction(7, 2))
    assert pred.holds and pred.lhs == Fraction(343, 8)
    assert corollary_family_check(3, 4.0).extra["exact"]


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 40), st.floats(0.001, 50.0))
def test_corollary_always_confirmed_above_n(n, gap):
    # d > n implies d^n - (n-1) d^(n-1) - 1 = d^(n-1)(d - n + 1) - 1 > 0
    assert corollary_family_check(n, n + gap).holds


def test_classify_examples(D, I3, Y):
    rep = classify(D)
    assert rep.classification is Classification.DEQUANTIZABLE_BY_SPECTRUM
    assert rep.triggers == ("theorem_form_B",)
    assert rep.predicates["theorem_form_A"].holds

    rep = classify(I3)
    assert rep.classification is Classification.INCONCLUSIVE and rep.triggers == ()
    assert all(rep.predicates[k].holds for k in NECESSARY)
    assert not rep.predicates["lemma_deq_sufficient"].holds

    rep = classify(Y)
    assert rep.classification is Classification.DEQUANTIZABLE_SUFFICIENT


def test_classify_non_member_keeps_mu_and_lemmas(J, I3):
    rep = classify(J)
    assert rep.classification is Classification.NOT_SPARSE_ACCESS
    for name in NECESSARY[1:]:
        assert rep.predicates[name].holds is None and "singular" in rep.predicates[name].note
    assert rep.predicates["lemma_undeq_bound"].applicable

    rep = classify(I3.scaled(2.0))
    assert rep.classification is Classification.NOT_SPARSE_ACCESS
    assert "exceeds" in rep.predicates["theorem_form_B"].note


def test_normalize_config_rescues_large_matrix(I3):
    rep = classify(I3.scaled(4.0), AnalysisConfig(normalize=True))
    assert rep.classification is Classification.INCONCLUSIVE
    assert rep.matrix["normalized_by"] == 0.25 and rep.spectrum.abs_max == 1.0


def test_form_B_depends_on_scale_form_A_does_not(D):
    # D scaled up to spectral norm 1: form B now holds (1/16 > 1/33)
    rep = classify(D, AnalysisConfig(normalize=True))
    assert rep.predicates["theorem_form_B"].holds
    assert rep.predicates["theorem_form_A"].holds
    assert rep.classification is Classification.INCONCLUSIVE


def test_family_predicate_attached(D):
    rep = classify(D, family=(3, 4))
    assert rep.predicates["corollary_family"].holds
    assert rep.to_dict()["predicates"]["corollary_family"]["lhs"] == 64


def test_report_json_shape(D):
    doc = json.loads(classify(D).to_json())
    assert set(doc) == {"schema_version", "matrix", "mu", "spectrum", "predicates",
                        "classification", "triggers", "config"}
    assert doc["classification"] == "DequantizableBySpectrum"
    for pred in doc["predicates"].values():
        assert {"holds", "lhs", "rhs"} <= set(pred)
    assert doc["mu"]["inner_model"] == "MuP"
    assert doc["matrix"] == {"dim": 3, "s": 1, "nnz": 3, "herm_deviation": 0.0,
                             "complex": False, "normalized_by": 1.0}


def test_report_json_encodes_infinite_kappa(J):
    doc = json.loads(classify(J).to_json())
    assert doc["spectrum"]["kappa"] == "inf"


def test_summary_lines_mention_classification(D):
    lines = classify(D).summary_lines()
    assert lines[-1] == "classification: DequantizableBySpectrum (triggered by theorem_form_B)"


@pytest.mark.parametrize("idx", range(0, 100, 5))
def test_corpus_evidence_and_precedence(idx):
    mats = corpus()
    a = mats[idx % len(mats)]
    rep = classify(a)
    for pred in rep.predicates.values():
        assert_evidence_consistent(pred)
    deq = rep.predicates["lemma_deq_sufficient"].holds
    assert deq == (rep.mu.inner_model.value == "MuF" and rep.mu.deqineq_all_p)
    if deq:
        expected = Classification.DEQUANTIZABLE_SUFFICIENT
    elif not rep.spectrum.sparse_access_member:
        expected = Classification.NOT_SPARSE_ACCESS
    elif any(rep.predicates[k].holds is False for k in NECESSARY):
        expected = Classification.DEQUANTIZABLE_BY_SPECTRUM
    else:
        expected = Classification.INCONCLUSIVE
    assert rep.classification is expected


@settings(max_examples=100, deadline=None)
@given(hermitian_matrices(max_n=5))
def test_classification_is_total(m):
    rep = classify(from_dense(m))
    assert rep.classification in set(Classification)
    for pred in rep.predicates.values():
        assert_evidence_consistent(pred)
    json.loads(rep.to_json())


@settings(max_examples=60, deadline=None)
@given(hermitian_matrices(max_n=5), st.floats(0.05, 1.0))
def test_form_A_outcome_scale_invariant(m, c):
    a = from_dense(m)
    sp = spectrum(a)
    if not sp.sparse_access_member:
        return
    sc = spectrum(a.scaled(c))
    if not sc.sparse_access_member:
        return
    s = int(np.count_nonzero(m, axis=1).max())
    p1, p2 = theorem_form_A(sp, s), theorem_form_A(sc, s)
    # only a near-tie can flip under rounding
    if abs(p1.lhs - p1.rhs) > 1e-9 * max(p1.lhs, p1.rhs):
        assert p1.holds == p2.holds


@pytest.mark.parametrize("n", range(2, 13))
def test_corollary_sweep_invariant(n):
    for d in range(n + 1, n + 11):
        assert corollary_family_check(n, d).holds
        rep = classify(diag_power_family(n, d))
        assert rep.classification is Classification.DEQUANTIZABLE_BY_SPECTRUM
        assert "theorem_form_B" in rep.triggers


@pytest.mark.parametrize("c", [1e-305, 1e-200, 1e200])
def test_classify_at_extreme_scales(D, c):
    rep = classify(D.scaled(c))
    # theorem form B and intermediate bound are scale-dependent; the lemmas are not
    assert rep.predicates["lemma_undeq_bound"].rhs == pytest.approx(273 / 256, rel=1e-14)
    assert not rep.predicates["lemma_deq_sufficient"].holds
    for pred in rep.predicates.values():
        assert_evidence_consistent(pred)
    json.loads(rep.to_json())


@settings(max_examples=60, deadline=None)
@given(hermitian_matrices(max_n=4), st.sampled_from([1e-320, 1e-300, 1e-160, 1e160, 1e300]))
def test_classification_total_at_extreme_scales(m, c):
    with np.errstate(over="ignore"):
        big = m * c
    if not np.all(np.isfinite(big)) or not np.any(big):
        return
    rep = classify(from_dense(big))
    for pred in rep.predicates.values():
        assert_evidence_consistent(pred)
    assert rep.predicates["lemma_deq_sufficient"].holds == rep.mu.deqineq_all_p
