"""Orbit-family classification of real pencils with m, n <= 4.

A catalog (data/families.json) lists every family of canonical forms with no
zero minimal indices.  Classification strips zero indices (reported as
padding), transposes if needed, removes infinite divisors by an invertible
change of basis on the (A, B) pair, and matches the remaining Kronecker
invariants against the catalog, binding the family parameters.

Equivalence under GL_m x GL_n x GL_2 over the reals is decided through the
induced action on the divisor data: a GL_2 change of basis moves the
eigenvalue points of the projective line (infinity included) by a real
Moebius map while preserving minimal indices and divisor powers, so two
pencils are equivalent iff their minimal index multisets agree and some real
Moebius map carries one labeled point configuration onto the other.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import NamedTuple

from . import blocks
from .exact import MatrixQ, rank_exact
from .kcf import (
    EigenvalueDescriptor,
    KroneckerStructure,
    Pencil,
    direct_sum,
    eigenvalue_key,
    kronecker_structure,
)
from .minranks import _certified_root


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockSpec:
    """One canonical block of a family recipe.

    type "J": Jordan block J_size(a) + lambda*E (one parameter);
    type "Q": real block Q_{2*size}(a, b) + lambda*E (two parameters);
    type "L"/"R": singular column/row block of the given index (no parameters).
    """

    type: str
    size: int
    params: tuple[str, ...]


@dataclass(frozen=True)
class FamilyRecord:
    """One row of the family catalog."""

    name: str
    m: int
    n: int
    tensor_rank: int
    multilinear_rank: tuple[int, int, int]
    rho: tuple[int, int]
    blocks: tuple[BlockSpec, ...]
    distinct: tuple[str, ...]
    nonzero: tuple[str, ...]
    distinct_pairs: tuple

    @property
    def prime_count(self) -> int:
        return self.name.count("'")

    @property
    def symbols(self) -> tuple[str, ...]:
        out: list[str] = []
        for b in self.blocks:
            for s in b.params:
                if s not in out:
                    out.append(s)
        return tuple(out)


@dataclass(frozen=True)
class FamilyLabel:
    """A family name plus a concrete parameter binding."""

    name: str
    m: int
    n: int
    prime_count: int
    parameters: dict

    def __post_init__(self):
        rec = catalog().get(self.name)
        if rec is None:
            raise ValueError(f"unknown family name {self.name!r}")
        missing = [s for s in rec.symbols if s not in self.parameters]
        if missing:
            raise ValueError(f"family {self.name} missing parameters {missing}")


_CATALOG: dict[str, FamilyRecord] | None = None
_SHAPE_INDEX: dict[tuple, str] = {}


def catalog() -> dict[str, FamilyRecord]:
    """The family catalog, loaded once and indexed by name."""
    global _CATALOG
    if _CATALOG is None:
        raw = json.loads(
            resources.files("pencilranks").joinpath("data/families.json").read_text()
        )
        cat: dict[str, FamilyRecord] = {}
        for row in raw["families"]:
            rec = FamilyRecord(
                name=row["name"],
                m=row["m"],
                n=row["n"],
                tensor_rank=row["tensor_rank"],
                multilinear_rank=tuple(row["multilinear_rank"]),
                rho=tuple(row["rho"]),
                blocks=tuple(
                    BlockSpec(b["type"], b["size"], tuple(b["params"]))
                    for b in row["blocks"]
                ),
                distinct=tuple(row["distinct"]),
                nonzero=tuple(row["nonzero"]),
                distinct_pairs=tuple(
                    (tuple(p[0]), tuple(p[1])) for p in row["distinct_pairs"]
                ),
            )
            cat[rec.name] = rec
        _CATALOG = cat
        for rec in cat.values():
            key = _record_shape_key(rec)
            assert key not in _SHAPE_INDEX, (
                f"catalog shape collision: {rec.name} vs {_SHAPE_INDEX[key]}"
            )
            _SHAPE_INDEX[key] = rec.name
    return _CATALOG


def make_label(name: str, parameters: dict | None = None) -> FamilyLabel:
    rec = catalog()[name]
    return FamilyLabel(name=rec.name, m=rec.m, n=rec.n,
                       prime_count=rec.prime_count,
                       parameters=dict(parameters or {}))


def _record_real_groups(rec: FamilyRecord) -> dict[str, tuple[int, ...]]:
    """Jordan symbol -> sorted powers of the divisors at that eigenvalue."""
    groups: dict[str, list[int]] = {}
    for b in rec.blocks:
        if b.type == "J":
            groups.setdefault(b.params[0], []).append(b.size)
    return {s: tuple(sorted(v)) for s, v in groups.items()}


def _record_pair_groups(rec: FamilyRecord) -> dict[tuple[str, str], tuple[int, ...]]:
    """Q symbol pair -> sorted powers of the quadratic divisors at that pair."""
    groups: dict[tuple[str, str], list[int]] = {}
    for b in rec.blocks:
        if b.type == "Q":
            groups.setdefault((b.params[0], b.params[1]), []).append(b.size)
    return {s: tuple(sorted(v)) for s, v in groups.items()}


def _record_shape_key(rec: FamilyRecord) -> tuple:
    col = tuple(sorted(b.size for b in rec.blocks if b.type == "L"))
    row = tuple(sorted(b.size for b in rec.blocks if b.type == "R"))
    real_key = tuple(sorted(_record_real_groups(rec).values()))
    pair_key = tuple(sorted(_record_pair_groups(rec).values()))
    return (rec.m, rec.n, col, row, real_key, pair_key)


# ---------------------------------------------------------------------------
# canonical representatives
# ---------------------------------------------------------------------------


def _validate_parameters(rec: FamilyRecord, params: dict[str, Fraction]) -> None:
    for s in rec.symbols:
        if s not in params:
            raise ValueError(f"family {rec.name}: missing parameter {s}")
    for s1, s2 in itertools.combinations(rec.distinct, 2):
        if params[s1] == params[s2]:
            raise ValueError(
                f"family {rec.name}: parameters {s1} and {s2} must be distinct"
            )
    for s in rec.nonzero:
        if params[s] == 0:
            raise ValueError(f"family {rec.name}: parameter {s} must be nonzero")
    for (s1a, s1b), (s2a, s2b) in rec.distinct_pairs:
        if params[s1a] == params[s2a] and params[s1b] ** 2 == params[s2b] ** 2:
            raise ValueError(
                f"family {rec.name}: pairs ({s1a},{s1b}) and ({s2a},{s2b}) "
                "must denote different conjugate pairs"
            )


def canonical_representative(label: FamilyLabel) -> Pencil:
    """The block-diagonal canonical pencil of the family at the given
    parameter values (exact rationals required)."""
    rec = catalog()[label.name]
    params = {s: Fraction(v) for s, v in label.parameters.items()}
    _validate_parameters(rec, params)
    parts = []
    for b in rec.blocks:
        if b.type == "J":
            parts.append(blocks.jordan_pencil(b.size, params[b.params[0]]))
        elif b.type == "Q":
            parts.append(blocks.q_pencil(b.size, params[b.params[0]],
                                         params[b.params[1]]))
        elif b.type == "L":
            parts.append(blocks.l_block(b.size))
        elif b.type == "R":
            parts.append(blocks.r_block(b.size))
        else:  # pragma: no cover - catalog is validated data
            raise ValueError(f"unknown block type {b.type!r}")
    P = direct_sum(parts)
    assert (P.m, P.n) == (rec.m, rec.n)
    return P


def random_parameters(rec: FamilyRecord, rng) -> dict[str, Fraction]:
    """A random valid parameter binding, normalized so that classification of
    the resulting canonical representative reproduces it exactly: values of
    interchangeable symbols ascend, and Q parameters b are positive."""
    real_groups = _record_real_groups(rec)
    pair_groups = _record_pair_groups(rec)

    def rand() -> Fraction:
        return Fraction(rng.randint(-12, 12), rng.randint(1, 3))

    for _ in range(1000):
        params: dict[str, Fraction] = {}
        # real eigenvalue symbols, sorted within groups of equal power pattern
        by_pattern: dict[tuple, list[str]] = {}
        for s, pat in real_groups.items():
            by_pattern.setdefault(pat, []).append(s)
        for syms in by_pattern.values():
            vals = sorted(rand() for _ in syms)
            params.update(zip(syms, vals))
        # conjugate-pair symbols, sorted within groups by (a, b), b > 0
        pair_by_pattern: dict[tuple, list[tuple[str, str]]] = {}
        for sp, pat in pair_groups.items():
            pair_by_pattern.setdefault(pat, []).append(sp)
        for sym_pairs in pair_by_pattern.values():
            vals = sorted((rand(), abs(rand()) + 1) for _ in sym_pairs)
            for (sa, sb), (va, vb) in zip(sym_pairs, vals):
                params[sa], params[sb] = va, vb
        try:
            _validate_parameters(rec, params)
        except ValueError:
            continue
        return params
    raise RuntimeError(f"could not sample valid parameters for {rec.name}")


# ---------------------------------------------------------------------------
# divisor points
# ---------------------------------------------------------------------------


def _grouped_divisors(ks: KroneckerStructure):
    """Finite divisors grouped by eigenvalue: list of (descriptor, powers)."""
    order: list = []
    agg: dict = {}
    for desc, power in ks.finite_divisors:
        key = eigenvalue_key(desc)
        if key not in agg:
            agg[key] = (desc, [])
            order.append(key)
        agg[key][1].append(power)
    return [(agg[k][0], tuple(sorted(agg[k][1]))) for k in order]


def _fraction_sqrt(r: Fraction) -> Fraction | None:
    if r < 0:
        return None
    ns, ds = math.isqrt(r.numerator), math.isqrt(r.denominator)
    if ns * ns == r.numerator and ds * ds == r.denominator:
        return Fraction(ns, ds)
    return None


def _real_eigenvalue_value(desc: EigenvalueDescriptor):
    """The eigenvalue as an exact Fraction or a float approximation."""
    if desc.kind == "rational":
        return desc.value
    return desc.approx().real


def _pair_parameters(desc: EigenvalueDescriptor):
    """(a, b) with eigenvalue pair -a +- i*b, b > 0; exact when the minimal
    polynomial is quadratic with a rational square-root discriminant."""
    if desc.min_poly.degree == 2:
        q, p, _ = desc.min_poly.coeffs  # monic x^2 + p x + q
        a = p / 2
        b = _fraction_sqrt(q - a * a)
        if b is not None:
            return a, b
        return float(a), math.sqrt(float(q - a * a))
    z = desc.approx()
    return -z.real, z.imag


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


class Padding(NamedTuple):
    zero_rows: int
    zero_cols: int
    transposed: bool


def _structure_shape_key(ks: KroneckerStructure, m: int, n: int,
                         transposed: bool) -> tuple:
    col = tuple(sorted(k for k in ks.min_col_indices if k))
    row = tuple(sorted(l for l in ks.min_row_indices if l))
    if transposed:
        m, n, col, row = n, m, row, col
    grouped = _grouped_divisors(ks)
    real_key = tuple(sorted(p for d, p in grouped if d.kind != "complex_pair"))
    pair_key = tuple(sorted(p for d, p in grouped if d.kind == "complex_pair"))
    return (m, n, col, row, real_key, pair_key)


def _bind_parameters(rec: FamilyRecord, ks: KroneckerStructure) -> dict:
    """Assign eigenvalue data to family symbols.  Within a group of symbols
    with identical divisor patterns, values are assigned in ascending order.
    Values are exact Fractions when the eigenvalues are rational (and, for
    pairs, the discriminant is a rational square), otherwise floats."""
    grouped = _grouped_divisors(ks)
    params: dict = {}

    by_pattern: dict[tuple, list[str]] = {}
    for s, pat in _record_real_groups(rec).items():
        by_pattern.setdefault(pat, []).append(s)
    real_pts: dict[tuple, list] = {}
    for desc, powers in grouped:
        if desc.kind != "complex_pair":
            real_pts.setdefault(powers, []).append(-_real_eigenvalue_value(desc))
    for pat, syms in by_pattern.items():
        params.update(zip(syms, sorted(real_pts[pat])))

    pair_by_pattern: dict[tuple, list[tuple[str, str]]] = {}
    for sp, pat in _record_pair_groups(rec).items():
        pair_by_pattern.setdefault(pat, []).append(sp)
    pair_pts: dict[tuple, list] = {}
    for desc, powers in grouped:
        if desc.kind == "complex_pair":
            pair_pts.setdefault(powers, []).append(_pair_parameters(desc))
    for pat, sym_pairs in pair_by_pattern.items():
        for (sa, sb), (va, vb) in zip(sym_pairs, sorted(pair_pts[pat])):
            params[sa], params[sb] = va, vb
    return params


def classify(P: Pencil) -> tuple[FamilyLabel, Padding]:
    """Match a pencil to its catalog family.

    Zero minimal indices are stripped and reported as padding; the pencil is
    matched transposed when only the transposed shape fits.  Infinite
    divisors are first removed by an invertible substitution
    (A, B) -> (A, B + c*A), so the reported parameters then refer to the
    transformed pencil (an equivalent member of the same family)."""
    if P.m > 4 or P.n > 4:
        raise ValueError("classification covers pencils with m, n <= 4")
    ks = kronecker_structure(P, "real")
    zero_cols = sum(1 for k in ks.min_col_indices if k == 0)
    zero_rows = sum(1 for l in ks.min_row_indices if l == 0)
    if ks.infinite_divisor_degrees:
        c = 0
        while rank_exact(P.A * c + P.B) < ks.normal_rank:
            c += 1
        ks = kronecker_structure(P.apply_gl2(1, 0, c, 1), "real")
    m2, n2 = P.m - zero_rows, P.n - zero_cols
    if m2 == 0 or n2 == 0:
        raise ValueError("the zero pencil belongs to no catalog family")
    catalog()  # ensure the shape index is built
    for transposed in ((False, True) if m2 <= n2 else (True, False)):
        key = _structure_shape_key(ks, m2, n2, transposed)
        name = _SHAPE_INDEX.get(key)
        if name is not None:
            rec = _CATALOG[name]
            label = make_label(name, _bind_parameters(rec, ks))
            return label, Padding(zero_rows, zero_cols, transposed)
    raise LookupError(
        "no catalog family matches this Kronecker structure; the catalog is "
        "expected to be exhaustive for m, n <= 4, so this is a bug"
    )


# ---------------------------------------------------------------------------
# tensor invariants
# ---------------------------------------------------------------------------


def multilinear_rank(P: Pencil) -> tuple[int, int, int]:
    """Flattening ranks of the m x n x 2 tensor with slices A and B:
    (rank [A B], rank [A^T B^T], dim span{A, B})."""
    r1 = rank_exact(P.A.hstack(P.B))
    r2 = rank_exact(P.A.transpose().hstack(P.B.transpose()))
    vecs = MatrixQ([[x for row in P.A.entries for x in row],
                    [x for row in P.B.entries for x in row]],
                   cols=P.m * P.n)
    return (r1, r2, rank_exact(vecs))


def tensor_rank_lookup(label: FamilyLabel | str) -> int:
    """The catalog's tensor-rank value for the family (table data)."""
    name = label if isinstance(label, str) else label.name
    return catalog()[name].tensor_rank


# ---------------------------------------------------------------------------
# equivalence verification
# ---------------------------------------------------------------------------

_DPS = 60
_NULL_TOL = 1e-40
_DET_TOL = 1e-30


def _numeric_points(P: Pencil):
    """Labeled divisor points of P at high precision.

    Returns (col_indices, row_indices, real_points, pair_points); real points
    are (value | None, powers) with None standing for the point at infinity;
    pair points are (upper-half-plane value, powers)."""
    import mpmath as mp

    def to_mpf(fr: Fraction):
        return mp.mpf(fr.numerator) / fr.denominator

    ks = kronecker_structure(P, "real")
    real: list[tuple] = []
    pair: list[tuple] = []
    for desc, powers in _grouped_divisors(ks):
        if desc.kind == "rational":
            real.append((to_mpf(desc.value), powers))
        elif desc.kind == "real_algebraic":
            real.append((_certified_root(desc.min_poly, desc.isolating_interval,
                                         _DPS), powers))
        else:
            roots = mp.polyroots([to_mpf(c) for c in
                                  reversed(desc.min_poly.coeffs)])
            ups = sorted((z for z in roots if mp.im(z) > 0),
                         key=lambda z: (mp.re(z), mp.im(z)))
            pair.append((ups[desc.pair_index], powers))
    if ks.infinite_divisor_degrees:
        real.append((None, tuple(sorted(ks.infinite_divisor_degrees))))
    return (tuple(sorted(ks.min_col_indices)),
            tuple(sorted(ks.min_row_indices)), real, pair)


def _real_constraint_rows(p, q):
    """Linear constraints on (alpha, beta, gamma, delta) forcing the Moebius
    map x -> (alpha x + beta) / (gamma x + delta) to send p to q."""
    if p is None and q is None:
        return [[0.0, 0.0, 1.0, 0.0]]
    if p is None:
        return [[1.0, 0.0, -q, 0.0]]
    if q is None:
        return [[0.0, 0.0, p, 1.0]]
    return [[p, 1.0, -p * q, -q]]


def _pair_constraint_rows(z, w):
    """Real and imaginary parts of (alpha z + beta) - w (gamma z + delta) = 0."""
    import mpmath as mp

    zw = z * w
    return [[mp.re(z), 1.0, -mp.re(zw), -mp.re(w)],
            [mp.im(z), 0.0, -mp.im(zw), -mp.im(w)]]


def _moebius_exists(real_map, pair_map) -> bool:
    """Whether one real Moebius map realizes every listed correspondence."""
    import mpmath as mp

    rows = []
    for p, q in real_map:
        rows.extend(_real_constraint_rows(p, q))
    for z, w in pair_map:
        rows.extend(_pair_constraint_rows(z, w))
    normed = []
    for row in rows:
        scale = mp.sqrt(sum(mp.mpf(x) ** 2 for x in row))
        normed.append([mp.mpf(x) / scale for x in row])
    M = mp.matrix(normed)
    _, S, V = mp.svd_r(M, full_matrices=True, compute_uv=True)
    k = min(range(4), key=lambda i: S[i])
    if S[k] > _NULL_TOL:
        return False
    a, b, c, d = (V[k, j] for j in range(4))
    return abs(a * d - b * c) > _DET_TOL


def _group_by_powers(points):
    groups: dict[tuple, list] = {}
    for value, powers in points:
        groups.setdefault(powers, []).append(value)
    return groups


def _assignments(groups1: dict, groups2: dict):
    """All bijections between equal-power groups, as lists of (p, q)."""
    keys = sorted(groups1)
    for perms in itertools.product(
            *(itertools.permutations(groups2[k]) for k in keys)):
        mapping = []
        for k, perm in zip(keys, perms):
            mapping.extend(zip(groups1[k], perm))
        yield mapping


def verify_equivalence(P1: Pencil, P2: Pencil) -> bool:
    """Decide equivalence of two rational pencils under GL_m x GL_n x GL_2
    over the reals.

    Equivalent iff minimal index multisets agree and a real Moebius map
    carries the divisor point configuration of P1 onto that of P2 respecting
    point types (real line vs conjugate pair) and per-point power multisets.
    With at most three real constraints (each real point is one, each pair
    point two) any type- and power-respecting correspondence is realizable,
    since real Moebius maps act 3-transitively on the projective line,
    transitively on (real point, pair point) configurations and transitively
    on the upper half-plane; beyond that every correspondence is tried and
    checked by solving the induced linear system at high precision."""
    import mpmath as mp

    if (P1.m, P1.n) != (P2.m, P2.n):
        return False
    old_dps = mp.mp.dps
    mp.mp.dps = _DPS
    try:
        c1, r1, real1, pair1 = _numeric_points(P1)
        c2, r2, real2, pair2 = _numeric_points(P2)
        if c1 != c2 or r1 != r2:
            return False
        rg1, rg2 = _group_by_powers(real1), _group_by_powers(real2)
        pg1, pg2 = _group_by_powers(pair1), _group_by_powers(pair2)
        if ({k: len(v) for k, v in rg1.items()} != {k: len(v) for k, v in rg2.items()}
                or {k: len(v) for k, v in pg1.items()}
                != {k: len(v) for k, v in pg2.items()}):
            return False
        if len(real1) + 2 * len(pair1) <= 3:
            return True
        for conjugate in (False, True):
            pg2_oriented = pg2 if not conjugate else {
                k: [mp.conj(w) for w in v] for k, v in pg2.items()}
            for real_map in _assignments(rg1, rg2):
                for pair_map in _assignments(pg1, pg2_oriented):
                    if _moebius_exists(real_map, pair_map):
                        return True
        return False
    finally:
        mp.mp.dps = old_dps


__all__ = [
    "BlockSpec", "FamilyRecord", "FamilyLabel", "Padding",
    "catalog", "make_label", "canonical_representative", "random_parameters",
    "classify", "multilinear_rank", "tensor_rank_lookup", "verify_equivalence",
]
