from functools import lru_cache

import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from deqlens import (
    diag_power_family,
    from_coordinates,
    from_dense,
    identity,
    random_block_hermitian,
    random_support_hermitian,
)

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def D():
    """diag(1/4, 1/16, 1/64): the n=3, d=4 member of the diagonal family."""
    return from_coordinates(3, [(0, 0, 1 / 4), (1, 1, 1 / 16), (2, 2, 1 / 64)])


@pytest.fixture
def I3():
    return identity(3)


@pytest.fixture
def X():
    return from_coordinates(2, [(0, 1, 0.5), (1, 0, 0.5)])


@pytest.fixture
def J():
    return from_dense(np.full((2, 2), 0.5))


@pytest.fixture
def Y():
    return from_dense([[0.6, 0.3], [0.3, 0.2]])


def named_matrices():
    return {
        "D": diag_power_family(3, 4),
        "I3": identity(3),
        "X": from_coordinates(2, [(0, 1, 0.5), (1, 0, 0.5)]),
        "J": from_dense(np.full((2, 2), 0.5)),
        "Y": from_dense([[0.6, 0.3], [0.3, 0.2]]),
        "C": from_dense([[0.5, 0.25j], [-0.25j, -0.3]]),
    }


def grid_oracle(m, points=10_001):
    """Brute-force minimum of sqrt(s_p(A) s_{2-p}(A^H)) on a dense array."""
    a = np.abs(np.asarray(m))
    ps = np.linspace(0.0, 2.0, points)

    def sums(mat, exps):
        mask = mat > 0
        base = np.where(mask, mat, 1.0)[:, :, None]
        out = np.empty(len(exps))
        for k in range(0, len(exps), 512):
            e = exps[k:k + 512]
            out[k:k + 512] = ((base ** e) * mask[:, :, None]).sum(axis=1).max(axis=0)
        out[exps == 0] = mask.sum(axis=1).max()
        return out

    vals = np.sqrt(sums(a, ps) * sums(a.T, 2.0 - ps))
    k = int(np.argmin(vals))
    return float(ps[k]), float(vals[k]), vals


@lru_cache(maxsize=None)
def corpus():
    """Every fixed test matrix plus a seeded mix of generated ones."""
    mats = list(named_matrices().values())
    for n in range(2, 7):
        mats.append(identity(n))
        mats.append(diag_power_family(n, n + 1.5))
    for seed in range(40):
        n = 2 + seed % 7
        s = 1 + seed % n
        mats.append(random_block_hermitian(n, s, (0.05, 1.0), seed,
                                           signed=seed % 2 == 1, complex_entries=seed % 3 == 0))
        mats.append(random_support_hermitian(n, s, seed))
    return tuple(mats)


@st.composite
def hermitian_matrices(draw, max_n=6, complex_entries=True, scale=1.0):
    """Dense Hermitian arrays with a random zero pattern and |entries| <= scale."""
    n = draw(st.integers(1, max_n))
    elems = st.floats(-scale, scale, allow_nan=False, allow_infinity=False, width=64)
    re = draw(arrays(np.float64, (n, n), elements=elems))
    mask = draw(arrays(np.bool_, (n, n)))
    m = np.where(mask, re, 0.0)
    m = np.triu(m) + np.triu(m, 1).T
    if complex_entries and draw(st.booleans()):
        im = draw(arrays(np.float64, (n, n), elements=elems))
        im = np.where(mask, np.triu(im, 1), 0.0)
        m = m + 1j * (im - im.T)
    if not np.any(m):
        m[0, 0] = scale
    return m
