"""Matrix Market coordinate reader/writer.

Files with the ``symmetric`` or ``hermitian`` qualifier store only the lower
triangle; the reader mirrors it. Floats are written with ``repr`` so a write
followed by a read reproduces every value exactly.
"""
from __future__ import annotations

import io
import os
from typing import Iterable

from .errors import MatrixMarketError
from .matrix import DEFAULT_HERM_TOL, SparseHermitianMatrix, from_coordinates

BANNER = "%%MatrixMarket"
FIELDS = ("real", "integer", "complex", "pattern")
SYMMETRIES = ("general", "symmetric", "hermitian")


def _parse_number(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise MatrixMarketError(f"cannot parse number {tok!r}", lineno) from None


def _parse(lines: Iterable[str], zero_tol, herm_tol):
    it = iter(enumerate(lines, start=1))
    try:
        lineno, first = next(it)
    except StopIteration:
        raise MatrixMarketError("empty file", 1) from None
    head = first.split()
    if len(head) != 5 or head[0] != BANNER:
        raise MatrixMarketError(f"expected '{BANNER} matrix coordinate <field> <symmetry>' header", lineno)
    obj, fmt, fld, sym = (h.lower() for h in head[1:])
    if obj != "matrix":
        raise MatrixMarketError(f"unsupported object {obj!r}", lineno)
    if fmt != "coordinate":
        raise MatrixMarketError(f"only coordinate format is supported, got {fmt!r}", lineno)
    if fld not in FIELDS:
        raise MatrixMarketError(f"unsupported field {fld!r}", lineno)
    if sym not in SYMMETRIES:
        raise MatrixMarketError(f"unsupported symmetry {sym!r}", lineno)
    if sym == "hermitian" and fld != "complex":
        raise MatrixMarketError("hermitian qualifier requires the complex field", lineno)

    comments = []
    size = None
    for lineno, line in it:
        s = line.strip()
        if s.startswith("%"):
            comments.append(s[1:].strip())
            continue
        if not s:
            continue
        toks = s.split()
        if len(toks) != 3:
            raise MatrixMarketError("size line must hold 'rows cols entries'", lineno)
        try:
            size = tuple(int(t) for t in toks)
        except ValueError:
            raise MatrixMarketError(f"cannot parse size line {s!r}", lineno) from None
        break
    if size is None:
        raise MatrixMarketError("missing size line", lineno)
    m, n, count = size
    if m != n:
        raise MatrixMarketError(f"matrix must be square, got {m}x{n}", lineno)
    if n < 1 or count < 0:
        raise MatrixMarketError("invalid size line", lineno)

    width = {"pattern": 2, "complex": 4}.get(fld, 3)
    entries = []
    for lineno, line in it:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        toks = s.split()
        if len(toks) != width:
            raise MatrixMarketError(f"expected {width} fields for a {fld} entry, got {len(toks)}", lineno)
        try:
            i, j = int(toks[0]) - 1, int(toks[1]) - 1
        except ValueError:
            raise MatrixMarketError(f"cannot parse indices in {s!r}", lineno) from None
        if not (0 <= i < n and 0 <= j < n):
            raise MatrixMarketError(f"index ({i + 1}, {j + 1}) outside 1..{n}", lineno)
        if fld == "pattern":
            v = 1.0
        elif fld == "complex":
            v = complex(_parse_number(toks[2], lineno), _parse_number(toks[3], lineno))
        else:
            v = _parse_number(toks[2], lineno)
        if sym != "general":
            if j > i:
                raise MatrixMarketError(f"{sym} file stores only the lower triangle; found ({i + 1}, {j + 1})", lineno)
            if i != j:
                entries.append((j, i, v.conjugate() if isinstance(v, complex) else v))
        entries.append((i, j, v))
        if len(entries) > 2 * count:
            raise MatrixMarketError(f"more than the declared {count} entries", lineno)
    stored = len(entries) if sym == "general" else sum(1 for e in entries if e[0] >= e[1])
    if stored != count:
        raise MatrixMarketError(f"declared {count} entries, found {stored}", lineno)
    return from_coordinates(n, entries, zero_tol=zero_tol, herm_tol=herm_tol), comments


def loads(text: str, zero_tol: float = 0.0, herm_tol: float = DEFAULT_HERM_TOL) -> SparseHermitianMatrix:
    return _parse(text.splitlines(), zero_tol, herm_tol)[0]


def read_matrix_market(path, zero_tol: float = 0.0, herm_tol: float = DEFAULT_HERM_TOL,
                       with_comments: bool = False):
    """Read a coordinate file. Set ``with_comments`` to also get header comments."""
    with open(path, "r", encoding="utf-8") as fh:
        a, comments = _parse(fh, zero_tol, herm_tol)
    return (a, comments) if with_comments else a


def _fmt(x: float) -> str:
    return repr(float(x))


def dumps(a: SparseHermitianMatrix, comments: Iterable[str] = ()) -> str:
    """Serialize ``a``. Exactly Hermitian input is written as its lower triangle."""
    cplx = a.is_complex
    exact = a.herm_deviation == 0.0
    fld = "complex" if cplx else "real"
    sym = ("hermitian" if cplx else "symmetric") if exact else "general"
    out = io.StringIO()
    out.write(f"{BANNER} matrix coordinate {fld} {sym}\n")
    for c in comments:
        for part in str(c).splitlines() or [""]:
            out.write(f"% {part}\n")
    triples = [(i, j, v) for i, j, v in a.entries() if not exact or i >= j]
    # column-major within the lower triangle, as most MM writers emit
    triples.sort(key=lambda t: (t[1], t[0]))
    out.write(f"{a.dim} {a.dim} {len(triples)}\n")
    for i, j, v in triples:
        if cplx:
            out.write(f"{i + 1} {j + 1} {_fmt(v.real)} {_fmt(v.imag)}\n")
        else:
            out.write(f"{i + 1} {j + 1} {_fmt(v)}\n")
    return out.getvalue()


def write_matrix_market(path, a: SparseHermitianMatrix, comments: Iterable[str] = ()) -> None:
    text = dumps(a, comments)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)
