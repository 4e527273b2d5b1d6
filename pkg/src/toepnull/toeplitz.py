"""Toeplitz matrices over GF(q): construction, rank, kernels.

A spec of order n records the first row ``a = (a_0, ..., a_n)`` and the
first column below the diagonal ``b = (b_1, ..., b_n)``; entry (i, j)
of the (n+1) x (n+1) matrix is ``a[j-i]`` on or above the diagonal and
``b[i-j]`` below it.  Extending a spec appends one digit to each of
``a`` and ``b``, which embeds the old matrix in the top-left corner of
the new one (and, by constant diagonals, in the bottom-right corner
too).  The nullity string of a spec lists the kernel dimension of every
embedded prefix, each computed by its own elimination.

Two elimination engines implement the same exact arithmetic:

* a generic Gaussian elimination modulo q on row lists, and
* a GF(2) fast path packing each row into one integer, least
  significant bit = column 0, eliminating with word-wide xors.

The packed layout is an internal contract shared with ``enumeration``,
which pushes millions of matrices through these functions.  Both
engines reduce kernels to the same canonical form: the unique reduced
echelon basis with leading entry 1 at the lowest possible index and
rows ordered by pivot.  Equal subspaces therefore compare equal as
plain tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

from .field import FieldElement, PrimeField, element_value

Vector = Tuple[int, ...]
Digit = Union[FieldElement, int]


# ---------------------------------------------------------------------------
# packed GF(2) engine


def gf2_pack_rows(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Rows of the spec'd matrix as integers, bit j = column j."""
    n = len(a) - 1
    rows = []
    for i in range(n + 1):
        bits = 0
        for j in range(n + 1):
            e = a[j - i] if j >= i else b[i - j - 1]
            if e:
                bits |= 1 << j
        rows.append(bits)
    return rows


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) by xor elimination, pivot = lowest set bit."""
    piv: dict = {}
    rank = 0
    for r in rows:
        while r:
            low = r & -r
            p = piv.get(low)
            if p is None:
                piv[low] = r
                rank += 1
                break
            r ^= p
    return rank


def gf2_rref(rows: Iterable[int]) -> Tuple[List[int], List[int]]:
    """Reduced echelon form of packed rows.

    Returns (rows, pivots): nonzero reduced rows ordered by pivot column
    and the matching pivot column indices.
    """
    piv: dict = {}
    for r in rows:
        while r:
            low = r & -r
            p = piv.get(low)
            if p is None:
                piv[low] = r
                break
            r ^= p
    # clear every pivot bit from the other rows, highest pivot first
    for low in sorted(piv, reverse=True):
        row = piv[low]
        for other_low in piv:
            if other_low < low and piv[other_low] & low:
                piv[other_low] ^= row
    lows = sorted(piv)
    return [piv[low] for low in lows], [low.bit_length() - 1 for low in lows]


def gf2_nullspace(rows: Iterable[int], width: int) -> List[int]:
    """Canonical packed kernel basis of a matrix with ``width`` columns."""
    reduced, pivots = gf2_rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(width):
        if free in pivot_set:
            continue
        v = 1 << free
        probe = 1 << free
        for i, p in enumerate(pivots):
            if reduced[i] & probe:
                v |= 1 << p
        basis.append(v)
    # the free-column basis is not echelon in general; normalize it
    canonical, _ = gf2_rref(basis)
    return canonical


def unpack_bits(bits: int, width: int) -> Vector:
    """Packed row back to an entry tuple."""
    return tuple((bits >> j) & 1 for j in range(width))


# ---------------------------------------------------------------------------
# generic engine, any prime modulus


def gfq_rows(a: Sequence[int], b: Sequence[int]) -> List[List[int]]:
    """Dense rows of the spec'd matrix."""
    n = len(a) - 1
    return [
        [a[j - i] if j >= i else b[i - j - 1] for j in range(n + 1)]
        for i in range(n + 1)
    ]


def gfq_rank(rows: List[List[int]], q: int) -> int:
    """Rank modulo q by forward elimination.  Consumes ``rows``."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        piv = None
        for i in range(rank, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        prow = rows[piv]
        rows[piv] = rows[rank]
        rows[rank] = prow
        pv = prow[c]
        if pv != 1:
            inv = pow(pv, q - 2, q)
            prow = [x * inv % q for x in prow]
            rows[rank] = prow
        for i in range(rank + 1, nrows):
            f = rows[i][c]
            if f:
                row = rows[i]
                rows[i] = [(x - f * y) % q for x, y in zip(row, prow)]
        rank += 1
    return rank


def gfq_rref(rows: List[List[int]], q: int) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form modulo q.

    Returns (rows, pivots): the nonzero reduced rows and their pivot
    columns.  Does not modify the input.
    """
    rows = [list(row) for row in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: List[int] = []
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        piv = None
        for i in range(rank, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[piv], rows[rank] = rows[rank], rows[piv]
        prow = rows[rank]
        pv = prow[c]
        if pv != 1:
            inv = pow(pv, q - 2, q)
            prow = [x * inv % q for x in prow]
            rows[rank] = prow
        for i in range(nrows):
            if i != rank:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    rows[i] = [(x - f * y) % q for x, y in zip(row, prow)]
        pivots.append(c)
        rank += 1
    return rows[:rank], pivots


def gfq_nullspace(rows: Sequence[Sequence[int]], q: int) -> List[Vector]:
    """Kernel basis from the reduced echelon form (one vector per free column)."""
    ncols = len(rows[0]) if rows else 0
    reduced, pivots = gfq_rref(list(rows), q)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for i, p in enumerate(pivots):
            v[p] = (-reduced[i][free]) % q
        basis.append(tuple(v))
    return basis


def canonical_vectors(vectors: Iterable[Sequence[int]], q: int) -> Tuple[Vector, ...]:
    """The unique reduced-echelon basis of span(vectors).

    Two collections span the same subspace exactly when their canonical
    forms are equal, so subspace comparison is tuple comparison.
    """
    stacked = [list(v) for v in vectors]
    if not stacked:
        return ()
    reduced, _ = gfq_rref(stacked, q)
    return tuple(tuple(row) for row in reduced)


# ---------------------------------------------------------------------------
# public data model


@dataclass(frozen=True)
class ToeplitzSpec:
    """Order-n recipe: first row ``a``, first column below the diagonal ``b``."""

    field: PrimeField
    a: Tuple[int, ...]
    b: Tuple[int, ...]

    def __post_init__(self) -> None:
        a = tuple(element_value(self.field, x) for x in self.a)
        b = tuple(element_value(self.field, x) for x in self.b)
        if len(a) < 1:
            raise ValueError("first row needs at least the diagonal entry")
        if len(b) != len(a) - 1:
            raise ValueError(
                f"column part must have one entry fewer than the row part, "
                f"got {len(a)} and {len(b)}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def order(self) -> int:
        return len(self.a) - 1

    @property
    def size(self) -> int:
        """Row (and column) count of the materialized matrix."""
        return len(self.a)


@dataclass(frozen=True)
class DenseMatrix:
    """Explicit rows of a materialized spec; entries are ints in [0, q)."""

    field: PrimeField
    rows: Tuple[Vector, ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def packed_rows(self) -> Tuple[int, ...]:
        """Bit-packed rows (bit j = column j).  Only meaningful over GF(2)."""
        if self.field.q != 2:
            raise ValueError("packed rows require modulus 2")
        return tuple(
            sum(bit << j for j, bit in enumerate(row)) for row in self.rows
        )


@dataclass(frozen=True)
class KernelBasis:
    """Canonical basis of a kernel: reduced echelon rows ordered by pivot."""

    field: PrimeField
    length: int
    vectors: Tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)


# ---------------------------------------------------------------------------
# operations


def materialize(spec: ToeplitzSpec) -> DenseMatrix:
    """The full (order+1) x (order+1) matrix of a spec."""
    return DenseMatrix(
        field=spec.field,
        rows=tuple(tuple(row) for row in gfq_rows(spec.a, spec.b)),
    )


def materialize_packed(spec: ToeplitzSpec) -> Tuple[int, ...]:
    """Bit-packed rows of a GF(2) spec (bit j = column j)."""
    if spec.field.q != 2:
        raise ValueError("packed rows require modulus 2")
    return tuple(gf2_pack_rows(spec.a, spec.b))


def rank_nullity(spec: ToeplitzSpec) -> Tuple[int, int]:
    """(rank, nullity) of the materialized matrix, by exact elimination."""
    q = spec.field.q
    if q == 2:
        rank = gf2_rank(gf2_pack_rows(spec.a, spec.b))
    else:
        rank = gfq_rank(gfq_rows(spec.a, spec.b), q)
    return rank, spec.size - rank


def kernel_basis(spec: ToeplitzSpec) -> KernelBasis:
    """Canonical kernel basis of the materialized matrix."""
    q = spec.field.q
    width = spec.size
    if q == 2:
        packed = gf2_nullspace(gf2_pack_rows(spec.a, spec.b), width)
        vectors = tuple(unpack_bits(v, width) for v in packed)
    else:
        vectors = canonical_vectors(gfq_nullspace(gfq_rows(spec.a, spec.b), q), q)
    return KernelBasis(field=spec.field, length=width, vectors=vectors)


def extend(spec: ToeplitzSpec, b_new: Digit, a_new: Digit) -> ToeplitzSpec:
    """One-step embedding: append ``a_new`` to the row, ``b_new`` to the column."""
    return ToeplitzSpec(
        field=spec.field,
        a=spec.a + (element_value(spec.field, a_new),),
        b=spec.b + (element_value(spec.field, b_new),),
    )


def truncate(spec: ToeplitzSpec) -> ToeplitzSpec:
    """Drop the last digit of each part, undoing one extension."""
    if spec.order == 0:
        raise ValueError("an order-0 spec has no shorter prefix")
    return ToeplitzSpec(field=spec.field, a=spec.a[:-1], b=spec.b[:-1])


def nullity_string(spec: ToeplitzSpec) -> Vector:
    """Nullity of every embedded prefix, order 0 through order n.

    Each prefix gets its own elimination; nothing is inferred from
    neighboring prefixes.
    """
    q = spec.field.q
    out = []
    for m in range(spec.order + 1):
        a, b = spec.a[: m + 1], spec.b[:m]
        if q == 2:
            rank = gf2_rank(gf2_pack_rows(a, b))
        else:
            rank = gfq_rank(gfq_rows(a, b), q)
        out.append(m + 1 - rank)
    return tuple(out)
