"""King tableaux, Berele insertion and the two-column encoding of bit matrices.

Letters of the rank-``n`` symplectic alphabet ``1 < 1' < 2 < 2' < ... < n < n'``
(``i'`` denotes the barred letter) are encoded as integers: letter ``i``
unbarred is ``2i - 1``, barred is ``2i``.  Integer order then matches the
alphabet order, and the symplectic condition "entries <= i-bar stay in rows
1..i" becomes "every entry in row r (1-based) is >= 2r - 1".
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import DomainError, TableauError
from .params import EnsembleParams

Cell = tuple[int, int]


def letter(level: int, barred: bool = False) -> int:
    """Encode alphabet letter ``level`` (1-based), optionally barred."""
    if level < 1:
        raise DomainError(f"letter level must be >= 1, got {level}")
    return 2 * level if barred else 2 * level - 1


def letter_str(value: int) -> str:
    return f"{value // 2}'" if value % 2 == 0 else f"{(value + 1) // 2}"


def _check_king(rows: Sequence[Sequence[int]], rank: int) -> None:
    """Validate semistandardness plus the symplectic row condition."""
    prev_len = None
    for r, row in enumerate(rows):
        if not row:
            raise TableauError("empty row in tableau")
        if prev_len is not None and len(row) > prev_len:
            raise TableauError("row lengths must weakly decrease")
        prev_len = len(row)
        for c, v in enumerate(row):
            if not 1 <= v <= 2 * rank:
                raise TableauError(f"entry {v} outside alphabet of rank {rank}")
            if v < 2 * (r + 1) - 1:
                raise TableauError(
                    f"symplectic condition violated: {letter_str(v)} in row {r + 1}"
                )
            if c > 0 and row[c - 1] > v:
                raise TableauError("rows must weakly increase")
            if r > 0 and rows[r - 1][c] >= v:
                raise TableauError("columns must strictly increase")


@dataclass(frozen=True)
class KingTableau:
    """Immutable King tableau for the rank-``rank`` symplectic group."""

    rank: int
    rows: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        _check_king(rows, self.rank)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    def __str__(self) -> str:
        if not self.rows:
            return "(empty)"
        return "\n".join(" ".join(letter_str(v) for v in row) for row in self.rows)


def _insert(rows: list[list[int]], v: int) -> Optional[Cell]:
    """Row-insert ``v`` into a mutable tableau, Berele style.

    Returns None for a plain Schensted insertion (one box added).  When the
    insertion would push a barred letter below its limit row, the offending
    box is erased instead and the hole slides to the boundary; the vacated
    boundary cell (0-based) is returned and the tableau loses one box.
    """
    r = 0
    while True:
        if r == len(rows):
            rows.append([v])
            return None
        row = rows[r]
        if v < 2 * r + 1:
            raise TableauError(f"illegal arrival of {letter_str(v)} in row {r + 1}")
        idx = bisect_right(row, v)
        if idx == len(row):
            row.append(v)
            return None
        bumped = row[idx]
        if bumped == v + 1 and v % 2 == 1 and r == (v - 1) // 2:
            # v = i about to bump i-bar out of row i: cancel both.
            return _slide_hole(rows, r, idx)
        if bumped < 2 * (r + 1) + 1:
            raise TableauError(
                f"unexpected violation: {letter_str(bumped)} pushed below row {r + 1}"
            )
        row[idx] = v
        v = bumped
        r += 1


def _slide_hole(rows: list[list[int]], r: int, c: int) -> Cell:
    """Slide an empty box at (r, c) outward until it leaves the shape.

    Moves the smaller of the right/below neighbours into the hole (ties move
    the below entry, the only choice preserving column strictness) and returns
    the boundary cell that ends up removed.
    """
    while True:
        right = rows[r][c + 1] if c + 1 < len(rows[r]) else None
        below = (
            rows[r + 1][c] if r + 1 < len(rows) and c < len(rows[r + 1]) else None
        )
        if right is None and below is None:
            rows[r].pop()
            if not rows[r]:
                rows.pop()
            return (r, c)
        if below is not None and (right is None or below <= right):
            rows[r][c] = below
            r += 1
        else:
            rows[r][c] = right
            c += 1


def berele_insert(
    tableau: KingTableau, value: int
) -> tuple[KingTableau, Optional[Cell]]:
    """Insert one letter into a King tableau.

    Returns the new tableau together with the vacated boundary cell (0-based
    ``(row, col)``) if the insertion triggered a cancellation, else None.
    """
    if not 1 <= value <= 2 * tableau.rank:
        raise DomainError(
            f"letter {value} outside alphabet of rank {tableau.rank}"
        )
    rows = [list(r) for r in tableau.rows]
    vacated = _insert(rows, value)
    return KingTableau(tableau.rank, tuple(tuple(r) for r in rows)), vacated


def step_word(column_pair: Iterable[tuple[int, int]]) -> list[int]:
    """Insertion word for one column pair, rows read bottom-up.

    ``column_pair`` yields the bit pairs of rows 1..n; per row i the pair maps
    (0,0) -> i, (0,1) -> nothing, (1,0) -> i-bar then i, (1,1) -> i-bar.
    """
    word: list[int] = []
    pairs = list(column_pair)
    for i in range(len(pairs), 0, -1):
        b0, b1 = pairs[i - 1]
        if b0 == 0 and b1 == 0:
            word.append(2 * i - 1)
        elif b0 == 1 and b1 == 0:
            word.append(2 * i)
            word.append(2 * i - 1)
        elif b0 == 1 and b1 == 1:
            word.append(2 * i)
        elif not (b0 == 0 and b1 == 1):
            raise DomainError(f"matrix entries must be 0/1, got ({b0}, {b1})")
    return word


@dataclass
class _RecordingTableau:
    """P-tableau plus the complement record that becomes Q.

    The record lives in "intrinsic" coordinates anchored at the bottom-right
    corner of the growing n x s rectangle: intrinsic row 0 is the bottom
    rectangle row, intrinsic column j counts cells from the right edge.  Cells
    are written once and never move in these coordinates.
    """

    n: int
    rows: list[list[int]] = field(default_factory=list)
    record: list[list[Optional[int]]] = field(init=False)

    def __post_init__(self) -> None:
        self.record = [[] for _ in range(self.n)]

    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    def run_step(self, s: int, word: Sequence[int]) -> None:
        for v in word:
            vacated = _insert(self.rows, v)
            if vacated is not None:
                r_e, c_e = vacated
                qi = self.n - 1 - r_e
                qj = s - 1 - c_e  # intrinsic column, counted from the right edge
                self._record_cell(qi, qj, 2 * s)
        if self.rows and len(self.rows[0]) > s:
            raise TableauError("tableau escaped its n x s bounding rectangle")
        # Complement bookkeeping: top the record rows up to width s.
        for i in range(self.n):
            lam_i = len(self.rows[i]) if i < len(self.rows) else 0
            target = s - lam_i
            qrow = self.record[self.n - 1 - i]
            if len(qrow) > target:
                raise TableauError("erased cell re-entered the growing tableau")
            while len(qrow) < target:
                qrow.append(None)
            for j in range(target):
                if qrow[j] is None:
                    qrow[j] = 2 * s - 1

    def _record_cell(self, qi: int, qj: int, value: int) -> None:
        qrow = self.record[qi]
        while len(qrow) < qj:
            qrow.append(None)
        if qj < len(qrow):
            if qrow[qj] is not None:
                raise TableauError("complement cell assigned twice")
            qrow[qj] = value
        else:
            qrow.append(value)

    def finish(self, k: int) -> tuple[KingTableau, KingTableau]:
        p = KingTableau(self.n, tuple(tuple(r) for r in self.rows))
        width = len(self.record[0]) if self.record else 0
        qrows: list[tuple[int, ...]] = []
        for j in range(width):
            col = tuple(row[j] for row in self.record if j < len(row))
            if any(v is None for v in col):
                raise TableauError("complement record has unfilled cells")
            qrows.append(col)
        q = KingTableau(k, tuple(qrows))
        return p, q


def proctor_from_matrix(
    matrix: Sequence[Sequence[int]], params: EnsembleParams
) -> tuple[KingTableau, KingTableau]:
    """Map an n x 2k bit matrix to its pair of complementary King tableaux.

    Column pairs (2r, 2r+1), r = 0..k-1, are consumed left to right; each pair
    contributes the bottom-up insertion word of :func:`step_word`.  P records
    the insertions, Q records cancellations (barred r) and the residual
    complement cells (unbarred r) of the n x r rectangle at step r.
    """
    n, k = params.n, params.k
    if len(matrix) != n or any(len(row) != 2 * k for row in matrix):
        raise DomainError(f"matrix must be {n} x {2 * k}")
    state = _RecordingTableau(n)
    for s in range(1, k + 1):
        pairs = [(matrix[i][2 * s - 2], matrix[i][2 * s - 1]) for i in range(n)]
        state.run_step(s, step_word(pairs))
    p, q = state.finish(k)
    if p.rows and (len(p.rows) > n or len(p.rows[0]) > k):
        raise TableauError("P escaped the n x k box")
    return p, q


@dataclass(frozen=True)
class BijectionReport:
    """Outcome of the exhaustive bijectivity check."""

    params: EnsembleParams
    total: int
    shape_counts: dict[tuple[int, ...], int]

    @property
    def num_shapes(self) -> int:
        return len(self.shape_counts)


def validate_bijection(params: EnsembleParams) -> BijectionReport:
    """Exhaustively verify the two-column correspondence on all 2^(2nk) matrices.

    Checks that every matrix maps to a valid pair of King tableaux of
    complementary-transpose shapes, that all pairs are distinct, and that the
    shape multiplicities reproduce the product of the two Weyl dimensions.
    Raises :class:`TableauError` with the offending matrix attached otherwise.
    """
    from itertools import product

    from .measure import complement_transpose, sp_dimension

    n, k = params.n, params.k
    if 2 * n * k > 24:
        raise DomainError("exhaustive check limited to 2nk <= 24")
    counts: dict[tuple[int, ...], int] = {}
    seen: set = set()
    for bits in product((0, 1), repeat=2 * n * k):
        matrix = [bits[r * 2 * k : (r + 1) * 2 * k] for r in range(n)]
        try:
            p, q = proctor_from_matrix(matrix, params)
        except TableauError as exc:
            raise TableauError(f"matrix {matrix} broke the insertion: {exc}") from exc
        if q.shape != complement_transpose(p.shape, n, k):
            raise TableauError(f"matrix {matrix}: shapes not complementary")
        key = (p.rows, q.rows)
        if key in seen:
            raise TableauError(f"matrix {matrix}: duplicate (P, Q) pair")
        seen.add(key)
        counts[p.shape] = counts.get(p.shape, 0) + 1
    for lam, got in counts.items():
        want = sp_dimension(lam, n) * sp_dimension(complement_transpose(lam, n, k), k)
        if got != want:
            raise TableauError(
                f"shape {lam}: multiplicity {got} != dimension product {want}"
            )
    return BijectionReport(params, 2 ** (2 * n * k), counts)


def proctor_shape(matrix: Sequence[Sequence[int]], params: EnsembleParams) -> tuple[int, ...]:
    """Shape of P only; skips Q bookkeeping (reference path for the sampler)."""
    n, k = params.n, params.k
    if len(matrix) != n or any(len(row) != 2 * k for row in matrix):
        raise DomainError(f"matrix must be {n} x {2 * k}")
    rows: list[list[int]] = []
    for s in range(1, k + 1):
        pairs = [(matrix[i][2 * s - 2], matrix[i][2 * s - 1]) for i in range(n)]
        for v in step_word(pairs):
            _insert(rows, v)
    return tuple(len(r) for r in rows)
