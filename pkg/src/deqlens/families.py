"""Deterministic matrix families: identity, the d^-i diagonal, and seeded random Hermitians."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from numbers import Integral, Real

import numpy as np

from .errors import DomainError
from .matrix import SparseHermitianMatrix, from_coordinates

PRNG_ID = "numpy.PCG64"
SPEC_TAG = "FamilySpec:"


class FamilyKind(str, Enum):
    IDENTITY = "Identity"
    DIAG_POWER = "DiagPower"
    RANDOM_BLOCK = "RandomBlockHermitian"
    RANDOM_SUPPORT = "RandomSupportHermitian"


def _check_n(n, least):
    if not isinstance(n, Integral) or n < least:
        raise DomainError(f"n must be an integer >= {least}, got {n!r}")
    return int(n)


def _check_s(n, s):
    if not isinstance(s, Integral) or not 1 <= s <= n:
        raise DomainError(f"sparsity must satisfy 1 <= s <= n={n}, got {s!r}")
    return int(s)


def identity(n: int) -> SparseHermitianMatrix:
    n = _check_n(n, 1)
    return from_coordinates(n, [(i, i, 1.0) for i in range(n)])


def diag_power_family(n: int, d) -> SparseHermitianMatrix:
    """Diagonal matrix with entry (i, i) = d^-(i+1), for d > n.

    Each entry is the correctly rounded value of the exact rational power.
    """
    n = _check_n(n, 2)
    if isinstance(d, bool) or not isinstance(d, Real) or not d > n:
        raise DomainError(f"the family needs real d > n, got n={n}, d={d!r}")
    base = Fraction(d) if not isinstance(d, Fraction) else d
    return from_coordinates(n, [(i, i, float(base ** -(i + 1))) for i in range(n)])


def _check_range(spectrum_range):
    lo, hi = (float(x) for x in spectrum_range)
    if not 0.0 < lo <= hi <= 1.0:
        raise DomainError(f"spectrum range must satisfy 0 < lo <= hi <= 1, got {spectrum_range!r}")
    return lo, hi


def _random_unitary(rng, b, complex_entries):
    g = rng.standard_normal((b, b))
    if complex_entries:
        g = g + 1j * rng.standard_normal((b, b))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _block_hermitian(n, s, spectrum_range, seed, signed=False, complex_entries=False):
    n = _check_n(n, 1)
    s = _check_s(n, s)
    lo, hi = _check_range(spectrum_range)
    rng = np.random.default_rng(seed)
    entries, spectrum = [], []
    start = 0
    while start < n:
        b = min(s, n - start)
        lam = rng.uniform(lo, hi, b)
        if signed:
            lam = lam * rng.choice([-1.0, 1.0], b)
        spectrum.extend(lam.tolist())
        if b == 1:
            block = lam.reshape(1, 1)
        else:
            q = _random_unitary(rng, b, complex_entries)
            block = (q * lam) @ q.conj().T
            block = (block + block.conj().T) / 2
        for i in range(b):
            for j in range(b):
                entries.append((start + i, start + j, block[i, j]))
        start += b
    return from_coordinates(n, entries), np.sort(np.array(spectrum))


def random_block_hermitian(n: int, s: int, spectrum_range=(0.1, 1.0), seed: int = 0,
                           signed: bool = False, complex_entries: bool = False) -> SparseHermitianMatrix:
    """Block-diagonal Hermitian with dense blocks of size <= s and a known spectrum.

    Each block is ``Q diag(lam) Q^H`` with ``lam`` uniform on ``spectrum_range``
    (sign-flipped at random when ``signed``); see :func:`block_spectrum`.
    """
    return _block_hermitian(n, s, spectrum_range, seed, signed, complex_entries)[0]


def block_spectrum(n, s, spectrum_range=(0.1, 1.0), seed=0, signed=False, complex_entries=False):
    """The construction-time spectrum of the matching :func:`random_block_hermitian`, ascending."""
    return _block_hermitian(n, s, spectrum_range, seed, signed, complex_entries)[1]


def random_support_hermitian(n: int, s: int, seed: int = 0) -> SparseHermitianMatrix:
    """Random symmetric support with at most ``s`` nonzeros per row, scaled to spectral norm 1.

    Every row gets a diagonal entry first; off-diagonal pairs are then drawn in
    random order while both rows have room. Values are uniform on [-1, 1].
    """
    n = _check_n(n, 1)
    s = _check_s(n, s)
    rng = np.random.default_rng(seed)
    room = np.full(n, s - 1)
    vals = {(i, i): rng.uniform(-1.0, 1.0) for i in range(n)}
    iu, ju = np.triu_indices(n, k=1)
    for k in rng.permutation(len(iu)):
        i, j = int(iu[k]), int(ju[k])
        if room[i] > 0 and room[j] > 0:
            v = rng.uniform(-1.0, 1.0)
            vals[(i, j)] = vals[(j, i)] = v
            room[i] -= 1
            room[j] -= 1
    keys = sorted(vals)
    dense = np.zeros((n, n))
    for i, j in keys:
        dense[i, j] = vals[(i, j)]
    top = float(np.max(np.abs(np.linalg.eigvalsh(dense))))
    return from_coordinates(n, [(i, j, vals[(i, j)] / top) for i, j in keys])


@dataclass(frozen=True)
class FamilySpec:
    kind: FamilyKind
    n: int
    d: object = None
    s: int | None = None
    spectrum_range: tuple[float, float] | None = None
    seed: int | None = None
    signed: bool = False
    complex_entries: bool = False
    prng_id: str = PRNG_ID

    def to_json(self) -> str:
        d = asdict(self)
        d["kind"] = self.kind.value
        if isinstance(self.d, Fraction):
            d["d"] = str(self.d)
        if self.spectrum_range is not None:
            d["spectrum_range"] = list(self.spectrum_range)
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FamilySpec":
        d = json.loads(text)
        d["kind"] = FamilyKind(d["kind"])
        if isinstance(d.get("d"), str):
            d["d"] = Fraction(d["d"])
        if d.get("spectrum_range") is not None:
            d["spectrum_range"] = tuple(d["spectrum_range"])
        return cls(**d)

    def header(self) -> list[str]:
        return [f"generated by deqlens ({self.kind.value})", f"{SPEC_TAG} {self.to_json()}"]


@dataclass(frozen=True)
class GeneratedMatrix:
    matrix: SparseHermitianMatrix
    spec: FamilySpec
    known_spectrum: np.ndarray | None
    singular: bool


def generate(spec: FamilySpec) -> GeneratedMatrix:
    from .spectrum import spectrum

    known = None
    k = spec.kind
    if k is FamilyKind.IDENTITY:
        a = identity(spec.n)
    elif k is FamilyKind.DIAG_POWER:
        a = diag_power_family(spec.n, spec.d)
    elif k is FamilyKind.RANDOM_BLOCK:
        rng_range = spec.spectrum_range or (0.1, 1.0)
        a, known = _block_hermitian(spec.n, spec.s, rng_range, spec.seed or 0,
                                    spec.signed, spec.complex_entries)
    elif k is FamilyKind.RANDOM_SUPPORT:
        a = random_support_hermitian(spec.n, spec.s, spec.seed or 0)
    else:
        raise DomainError(f"unknown family {k!r}")
    return GeneratedMatrix(a, spec, known, spectrum(a).singular)


def spec_from_comments(comments) -> FamilySpec | None:
    for c in comments:
        if c.startswith(SPEC_TAG):
            return FamilySpec.from_json(c[len(SPEC_TAG):].strip())
    return None
