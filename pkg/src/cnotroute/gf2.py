"""GF(2) vector and square-matrix arithmetic on packed int bitsets.

A length-n vector over GF(2) is stored as a Python int whose bit ``i``
is the i-th entry, so adding two vectors is a single XOR.  A matrix is a
list of such row ints.  Row addition is the hot path of the routing
loops, which is why rows are machine words rather than element lists.
"""

from __future__ import annotations

from typing import List, Optional


class SingularMatrixError(ValueError):
    """Raised when an operation requires an invertible matrix."""


def vec_weight(v: int) -> int:
    """Number of 1-bits in a packed vector."""
    return v.bit_count()


def vec_support(v: int) -> tuple:
    """Indices of the 1-bits in ascending order."""
    out = []
    i = 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return tuple(out)


def is_unit(v: int) -> bool:
    """True if the vector is a standard basis vector."""
    return v != 0 and v & (v - 1) == 0


def unit_index(v: int) -> int:
    """Index of the single 1-bit; caller must ensure is_unit(v)."""
    return v.bit_length() - 1


class BitMatrix:
    """Square matrix over GF(2) with rows packed into ints."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Optional[List[int]] = None):
        self.n = n
        if rows is None:
            self.rows = [0] * n
        else:
            if len(rows) != n:
                raise ValueError(f"expected {n} rows, got {len(rows)}")
            self.rows = list(rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, [1 << i for i in range(n)])

    @classmethod
    def from_bits(cls, bits) -> "BitMatrix":
        """Build from a list of 0/1 row lists."""
        n = len(bits)
        rows = []
        for row in bits:
            if len(row) != n:
                raise ValueError("matrix must be square")
            acc = 0
            for j, b in enumerate(row):
                if b:
                    acc |= 1 << j
            rows.append(acc)
        return cls(n, rows)

    def to_bits(self) -> List[List[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.n, self.rows)

    def is_permutation(self) -> bool:
        """Exactly one 1 per row and per column."""
        seen = 0
        for r in self.rows:
            if not is_unit(r):
                return False
            if seen & r:
                return False
            seen |= r
        return seen == (1 << self.n) - 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.n, tuple(self.rows)))

    def __repr__(self) -> str:
        body = ",".join(
            "".join(str((r >> j) & 1) for j in range(self.n)) for r in self.rows
        )
        return f"BitMatrix({self.n}, [{body}])"


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product over GF(2)."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    brows = b.rows
    out = []
    for r in a.rows:
        acc = 0
        k = 0
        while r:
            if r & 1:
                acc ^= brows[k]
            r >>= 1
            k += 1
        out.append(acc)
    return BitMatrix(a.n, out)


def transpose(a: BitMatrix) -> BitMatrix:
    n = a.n
    out = [0] * n
    for i, r in enumerate(a.rows):
        bit = 1 << i
        j = 0
        while r:
            if r & 1:
                out[j] |= bit
            r >>= 1
            j += 1
    return BitMatrix(n, out)


def row_add(a: BitMatrix, target: int, source: int) -> None:
    """In place: row[target] ^= row[source].

    Equal indices are rejected; a CNOT cannot target its own control.
    """
    if target == source:
        raise ValueError(f"row_add target equals source ({target})")
    a.rows[target] ^= a.rows[source]


def invert(a: BitMatrix) -> Optional[BitMatrix]:
    """Inverse by Gauss-Jordan elimination, or None if singular."""
    n = a.n
    work = list(a.rows)
    aug = [1 << i for i in range(n)]
    for col in range(n):
        bit = 1 << col
        pivot = -1
        for r in range(col, n):
            if work[r] & bit:
                pivot = r
                break
        if pivot < 0:
            return None
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            aug[col], aug[pivot] = aug[pivot], aug[col]
        wc = work[col]
        ac = aug[col]
        for r in range(n):
            if r != col and work[r] & bit:
                work[r] ^= wc
                aug[r] ^= ac
    return BitMatrix(n, aug)


def solve_unit_combinations(r: BitMatrix, u: int):
    """All ways to reduce node u's row to a standard basis vector.

    Returns a list of pairs ``(e, nodes)`` in ascending order of the
    basis index e, where XORing the rows of ``nodes`` (which always
    include u) yields the basis vector with index e.  The candidates are
    read off the inverse: e is a candidate exactly when inv[e] has bit u
    set, and the node set is the support of row e of the inverse, which
    is unique because r is invertible.
    """
    if not 0 <= u < r.n:
        raise ValueError(f"node index {u} out of range")
    inv = invert(r)
    if inv is None:
        raise SingularMatrixError("matrix is singular; row graph not reversible")
    ubit = 1 << u
    out = []
    for e in range(r.n):
        if inv.rows[e] & ubit:
            out.append((e, frozenset(vec_support(inv.rows[e]))))
    return out
