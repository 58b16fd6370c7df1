"""Tests for the pencil document format."""

from fractions import Fraction as F
from pathlib import Path

import pytest

from pencilranks import blocks
from pencilranks.io import (
    ParseError,
    PencilDocument,
    parse_document,
    write_document,
)

DATA = Path(__file__).parent / "data"


def test_parse_rational_pencil():
    doc = parse_document(DATA.joinpath("j3_1.pencil").read_text())
    assert (doc.m, doc.n, doc.d) == (3, 3, 2)
    assert doc.entry_mode == "rational"
    P = doc.to_pencil()
    assert P == blocks.jordan_pencil(3, 1)


def test_parse_float_with_tolerance():
    doc = parse_document(DATA.joinpath("float_noise.pencil").read_text())
    assert doc.entry_mode == "float"
    assert doc.tolerance == 1e-8
    A, B = doc.to_float_arrays()
    assert A[0][0] == 0.5
    with pytest.raises(ValueError):
        doc.to_pencil()


def test_parse_polynomial():
    doc = parse_document(DATA.joinpath("cubic.pencil").read_text())
    assert doc.d == 3
    P = doc.to_matrix_polynomial()
    assert P.coefficients[2].entries[0][0] == F(1, 2)


def test_mode_inference():
    rational = "pencil 1 1\nA\n1/2\nB\n3\n"
    assert parse_document(rational).entry_mode == "rational"
    floating = "pencil 1 1\nA\n0.5\nB\n3\n"
    assert parse_document(floating).entry_mode == "float"
    scientific = "pencil 1 1\nA\n5e-1\nB\n3\n"
    assert parse_document(scientific).entry_mode == "float"


def test_comments_and_whitespace_ignored():
    text = "# header\n pencil 1 2 # trailing\n\nA\n 1   2 \nB\n3 4\n"
    doc = parse_document(text)
    assert doc.coefficients[0] == ((F(1), F(2)),)


def test_roundtrip_corpus():
    for path in sorted(DATA.glob("*.pencil")):
        original = path.read_text()
        doc = parse_document(original)
        rendered = write_document(doc)
        reparsed = parse_document(rendered)
        assert reparsed == doc, path.name
        # idempotent rendering
        assert write_document(reparsed) == rendered, path.name


def test_roundtrip_preserves_tokens():
    # writing a parsed file keeps every matrix entry verbatim for rational
    # documents (whitespace and comments aside)
    text = DATA.joinpath("rational_entries.pencil").read_text()
    doc = parse_document(text)
    rendered = write_document(doc)
    orig_tokens = [t for line in text.splitlines()
                   for t in line.split("#")[0].split()]
    new_tokens = [t for line in rendered.splitlines()
                  for t in line.split("#")[0].split()]
    # the writer makes the implicit mode explicit; drop that line
    assert new_tokens[3:5] == ["mode", "rational"]
    assert new_tokens[:3] + new_tokens[5:] == orig_tokens


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_document("pencil 2 2\nA\n1 2\n3 oops\nB\n1 0\n0 1\n")
    assert err.value.line == 4 and err.value.column == 3
    with pytest.raises(ParseError, match="line 1"):
        parse_document("matrix 2 2\n")
    with pytest.raises(ParseError, match="row count"):
        parse_document("pencil x 2\n")
    with pytest.raises(ParseError, match="end of input"):
        parse_document("pencil 2 2\nA\n1 2\n")
    with pytest.raises(ParseError, match="trailing"):
        parse_document("pencil 1 1\nA\n1\nB\n2\nextra\n")
    with pytest.raises(ParseError, match="tolerance"):
        parse_document("pencil 1 1\ntolerance -1\nA\n1\nB\n2\n")


def test_document_validation():
    with pytest.raises(ValueError):
        PencilDocument(m=2, n=2, entry_mode="rational",
                       coefficients=(((F(1),),), ((F(1),),)))
    with pytest.raises(ValueError):
        PencilDocument(m=1, n=1, entry_mode="decimal",
                       coefficients=(((F(1),),), ((F(1),),)))


def test_from_pencil_roundtrip():
    P = blocks.q_pencil(2, F(1, 3), 2)
    doc = PencilDocument.from_pencil(P)
    assert parse_document(write_document(doc)).to_pencil() == P
