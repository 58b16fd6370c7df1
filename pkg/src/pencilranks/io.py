"""Pencil document format: a small line-based text format for matrix pencils
and matrix polynomials.

Grammar (whitespace-separated tokens, ``#`` starts a comment):

    document   := header option* array+
    header     := "pencil" m n | "polynomial" m n d
    option     := "mode" ("rational" | "float") | "tolerance" FLOAT
    array      := name row{m}          name := "A" | "B" | "A3" ... "Ad"
    row        := entry{n}
    entry      := INT | INT "/" INT    (rational mode)
                | DECIMAL              (float mode)

A pencil document has exactly the arrays A and B; a polynomial document with
d coefficients has A, B, A3, ..., Ad.  When no ``mode`` line is present the
mode is inferred: entries containing ``.``, ``e`` or ``E`` make the document
float, otherwise it is rational.  Parse errors carry line and column numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import MatrixQ
from .kcf import Pencil


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class PencilDocument:
    m: int
    n: int
    entry_mode: str  # "rational" | "float"
    coefficients: tuple  # d matrices, rows of Fraction or float
    tolerance: float | None = None

    def __post_init__(self):
        if self.entry_mode not in ("rational", "float"):
            raise ValueError("entry_mode must be rational or float")
        if len(self.coefficients) < 2:
            raise ValueError("a document needs at least two coefficients")
        for M in self.coefficients:
            if len(M) != self.m or any(len(row) != self.n for row in M):
                raise ValueError("coefficient arrays must match dims")

    @property
    def d(self) -> int:
        return len(self.coefficients)

    @property
    def is_rational(self) -> bool:
        return self.entry_mode == "rational"

    def to_pencil(self) -> Pencil:
        if self.d != 2:
            raise ValueError("document has more than two coefficients")
        if not self.is_rational:
            raise ValueError("float documents have no exact pencil")
        return Pencil(MatrixQ(self.coefficients[0], cols=self.n),
                      MatrixQ(self.coefficients[1], cols=self.n))

    def to_float_arrays(self):
        import numpy as np

        return [np.array([[float(x) for x in row] for row in M])
                for M in self.coefficients]

    def to_matrix_polynomial(self):
        from .polyranks import MatrixPolynomial

        if not self.is_rational:
            raise ValueError("float documents have no exact polynomial")
        return MatrixPolynomial(tuple(MatrixQ(M, cols=self.n)
                                      for M in self.coefficients))

    @staticmethod
    def from_pencil(P: Pencil, tolerance: float | None = None) \
            -> "PencilDocument":
        return PencilDocument(
            m=P.m, n=P.n, entry_mode="rational",
            coefficients=(tuple(P.A.entries), tuple(P.B.entries)),
            tolerance=tolerance)

    @staticmethod
    def from_matrix_polynomial(P) -> "PencilDocument":
        return PencilDocument(
            m=P.m, n=P.n, entry_mode="rational",
            coefficients=tuple(tuple(C.entries) for C in P.coefficients))


def _array_names(d: int) -> list[str]:
    return ["A", "B"] + [f"A{k}" for k in range(3, d + 1)]


class _Tokens:
    def __init__(self, text: str):
        self.items: list[tuple[str, int, int]] = []
        for ln, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            col = 0
            for piece in line.split():
                col = line.index(piece, col) + 1
                self.items.append((piece, ln, col))
                col += len(piece) - 1
        self.pos = 0

    def next(self, expect: str) -> tuple[str, int, int]:
        if self.pos >= len(self.items):
            last = self.items[-1] if self.items else ("", 1, 1)
            raise ParseError(f"unexpected end of input, expected {expect}",
                             last[1], last[2])
        tok = self.items[self.pos]
        self.pos += 1
        return tok

    def peek(self) -> str | None:
        return self.items[self.pos][0] if self.pos < len(self.items) else None


def _parse_int(tokens: _Tokens, what: str) -> int:
    tok, ln, col = tokens.next(what)
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {tok!r}", ln, col)
    if value <= 0:
        raise ParseError(f"{what} must be positive, got {tok!r}", ln, col)
    return value


_FLOAT_MARKS = (".", "e", "E", "inf", "nan")


def parse_document(text: str) -> PencilDocument:
    tokens = _Tokens(text)
    kind, ln, col = tokens.next("header")
    if kind not in ("pencil", "polynomial"):
        raise ParseError(f"expected 'pencil' or 'polynomial', got {kind!r}",
                         ln, col)
    m = _parse_int(tokens, "row count")
    n = _parse_int(tokens, "column count")
    d = _parse_int(tokens, "coefficient count") if kind == "polynomial" else 2
    if d < 2:
        raise ParseError("a polynomial document needs d >= 2", ln, col)

    mode: str | None = None
    tolerance: float | None = None
    while tokens.peek() in ("mode", "tolerance"):
        key, ln, col = tokens.next("option")
        val, vln, vcol = tokens.next(f"{key} value")
        if key == "mode":
            if val not in ("rational", "float"):
                raise ParseError(f"mode must be rational or float, got {val!r}",
                                 vln, vcol)
            mode = val
        else:
            try:
                tolerance = float(val)
            except ValueError:
                raise ParseError(f"bad tolerance {val!r}", vln, vcol)
            if not tolerance > 0:
                raise ParseError("tolerance must be positive", vln, vcol)

    raw_entries: list[list[list[tuple[str, int, int]]]] = []
    for name in _array_names(d):
        tok, ln, col = tokens.next(f"array name {name!r}")
        if tok != name:
            raise ParseError(f"expected array name {name!r}, got {tok!r}",
                             ln, col)
        rows = []
        for _ in range(m):
            rows.append([tokens.next("matrix entry") for _ in range(n)])
        raw_entries.append(rows)
    if tokens.peek() is not None:
        tok, ln, col = tokens.next("")
        raise ParseError(f"unexpected trailing token {tok!r}", ln, col)

    if mode is None:
        floatish = any(mark in tok for M in raw_entries for row in M
                       for tok, _, _ in row for mark in _FLOAT_MARKS)
        mode = "float" if floatish else "rational"

    def convert(tok, ln, col):
        try:
            if mode == "rational":
                return Fraction(tok)
            return float(tok)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad {mode} entry {tok!r}: {exc}", ln, col)

    coefficients = tuple(
        tuple(tuple(convert(*e) for e in row) for row in M)
        for M in raw_entries)
    return PencilDocument(m=m, n=n, entry_mode=mode,
                          coefficients=coefficients, tolerance=tolerance)


def _format_entry(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def write_document(doc: PencilDocument) -> str:
    lines = []
    if doc.d == 2:
        lines.append(f"pencil {doc.m} {doc.n}")
    else:
        lines.append(f"polynomial {doc.m} {doc.n} {doc.d}")
    lines.append(f"mode {doc.entry_mode}")
    if doc.tolerance is not None:
        lines.append(f"tolerance {doc.tolerance!r}")
    for name, M in zip(_array_names(doc.d), doc.coefficients):
        lines.append(name)
        for row in M:
            lines.append(" ".join(_format_entry(x) for x in row))
    return "\n".join(lines) + "\n"


def load_document(path) -> PencilDocument:
    with open(path) as fh:
        return parse_document(fh.read())


def save_document(doc: PencilDocument, path) -> None:
    with open(path, "w") as fh:
        fh.write(write_document(doc))


__all__ = [
    "ParseError", "PencilDocument", "parse_document", "write_document",
    "load_document", "save_document",
]
