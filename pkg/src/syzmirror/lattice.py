"""Exact linear algebra over a dual pair of lattices M and N.

Everything here works on Python integers and :class:`fractions.Fraction`,
so no intermediate ever overflows or rounds.  Vectors may be passed either as
plain integer sequences or as :class:`LatticeVector` / :class:`RationalVector`
instances; the tagged classes additionally let :func:`pair` refuse to pair two
vectors from the same side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError, InputError, InvariantError, PreconditionError

M_SIDE = "M"
N_SIDE = "N"
_SIDES = (M_SIDE, N_SIDE)

Matrix = list[list[int]]


def _check_side(side: str) -> None:
    if side not in _SIDES:
        raise InputError(f"side must be 'M' or 'N', got {side!r}")


@dataclass(frozen=True)
class LatticeVector:
    """An integer point of ``M`` or ``N``."""

    coords: tuple[int, ...]
    side: str = M_SIDE

    def __post_init__(self):
        _check_side(self.side)
        coords = tuple(self.coords)
        for c in coords:
            if isinstance(c, bool) or not isinstance(c, int):
                raise InputError(f"lattice coordinates must be integers, got {c!r}")
        object.__setattr__(self, "coords", coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other):
        return LatticeVector(add(self, other), self.side)

    def __sub__(self, other):
        return LatticeVector(sub(self, other), self.side)

    def __neg__(self):
        return LatticeVector(tuple(-c for c in self.coords), self.side)


@dataclass(frozen=True)
class RationalVector:
    """A rational point of ``M_Q`` or ``N_Q`` stored in lowest terms."""

    coords: tuple[Fraction, ...]
    side: str = M_SIDE

    def __post_init__(self):
        _check_side(self.side)
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def coords_of(x) -> tuple:
    """Return the coordinate tuple of a tagged vector or a plain sequence."""
    if isinstance(x, (LatticeVector, RationalVector)):
        return x.coords
    return tuple(x)


def _side_of(x):
    return getattr(x, "side", None)


def pair(m, n):
    """The natural pairing ``<m, n>`` between ``M`` and ``N``.

    Integer inputs give an ``int``; rational inputs give a ``Fraction``.
    """
    sm, sn = _side_of(m), _side_of(n)
    if sm is not None and sn is not None and sm == sn:
        raise InputError(f"cannot pair two vectors from the {sm} side")
    a, b = coords_of(m), coords_of(n)
    if len(a) != len(b):
        raise DimensionError(f"rank mismatch in pairing: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def dot(a: Sequence, b: Sequence):
    """Plain dot product without side checks."""
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def add(a, b) -> tuple:
    a, b = coords_of(a), coords_of(b)
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b) -> tuple:
    a, b = coords_of(a), coords_of(b)
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a) -> tuple:
    return tuple(c * x for x in coords_of(a))


def gcd_of(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def is_primitive(v) -> bool:
    return gcd_of(coords_of(v)) == 1


def primitive_vector(v) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    v = coords_of(v)
    g = gcd_of(v)
    if g == 0:
        raise PreconditionError("the zero vector has no primitive direction")
    return tuple(x // g for x in v)


def integer_direction(v) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = [Fraction(x) for x in coords_of(v)]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive_vector([int(x * den) for x in v])


def common_denominator(points: Sequence[Sequence]) -> tuple[int, list[tuple[int, ...]]]:
    """``(D, [D * p for p in points])`` with ``D`` the least common denominator."""
    D = 1
    for p in points:
        for x in p:
            d = Fraction(x).denominator
            D = D * d // gcd(D, d)
    return D, [tuple(int(Fraction(x) * D) for x in p) for p in points]


def barycenter(points: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Arithmetic mean of a non-empty list of points, as exact rationals."""
    if not points:
        raise InputError("barycenter of an empty point set")
    k = len(points)
    return tuple(Fraction(sum(col), k) for col in zip(*points))


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


def identity(k: int) -> Matrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    if A and len(A[0]) != len(B):
        raise DimensionError("matrix shapes do not match for multiplication")
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def determinant(A: Sequence[Sequence]):
    """Exact determinant (Bareiss elimination for integers, Gauss otherwise)."""
    k = len(A)
    if any(len(row) != k for row in A):
        raise DimensionError("determinant of a non-square matrix")
    if k == 0:
        return 1
    if all(isinstance(x, int) for row in A for x in row):
        M = [list(row) for row in A]
        sign, prev = 1, 1
        for i in range(k - 1):
            if M[i][i] == 0:
                swap = next((r for r in range(i + 1, k) if M[r][i] != 0), None)
                if swap is None:
                    return 0
                M[i], M[swap] = M[swap], M[i]
                sign = -sign
            for r in range(i + 1, k):
                for c in range(i + 1, k):
                    M[r][c] = (M[r][c] * M[i][i] - M[r][i] * M[i][c]) // prev
            prev = M[i][i]
        return sign * M[k - 1][k - 1]
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for i in range(k):
        piv = next((r for r in range(i, k) if M[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            det = -det
        det *= M[i][i]
        for r in range(i + 1, k):
            f = M[r][i] / M[i][i]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[i])]
    return det


def row_reduce(A: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the list of pivot columns."""
    M = [[Fraction(x) for x in row] for row in A]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def matrix_rank(A: Sequence[Sequence]) -> int:
    if not A:
        return 0
    return len(row_reduce(A)[1])


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of a non-empty point set."""
    if not points:
        return -1
    p0 = points[0]
    return matrix_rank([sub(p, p0) for p in points[1:]]) if len(points) > 1 else 0


def solve(A: Sequence[Sequence], b: Sequence):
    """Solve ``A x = b`` over Q; return one solution or ``None`` if inconsistent."""
    rows = len(A)
    ncols = len(A[0]) if rows else 0
    aug = [list(A[i]) + [b[i]] for i in range(rows)]
    R, pivots = row_reduce(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = R[i][ncols]
    return tuple(x)


def inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    k = len(A)
    aug = [list(A[i]) + [int(i == j) for j in range(k)] for i in range(k)]
    R, pivots = row_reduce(aug)
    if pivots[:k] != list(range(k)):
        raise PreconditionError("matrix is singular")
    return [row[k:] for row in R]


def integer_inverse(A: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix, as integers."""
    inv = inverse(A)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise PreconditionError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------


def hermite_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U A = H``.  ``H`` is in row
    echelon form, its pivots are positive, and entries above each pivot lie in
    ``[0, pivot)``.  Columns are processed left to right, which makes the
    result unique for a given ``A``.
    """
    H = [list(map(int, row)) for row in A]
    rows = len(H)
    cols = len(H[0]) if rows else 0
    U = identity(rows)
    p = 0
    for c in range(cols):
        if p >= rows:
            break
        found = False
        while True:
            nz = [i for i in range(p, rows) if H[i][c] != 0]
            if not nz:
                break
            found = True
            i_min = min(nz, key=lambda i: (abs(H[i][c]), i))
            if i_min != p:
                H[p], H[i_min] = H[i_min], H[p]
                U[p], U[i_min] = U[i_min], U[p]
            clean = True
            for i in range(p + 1, rows):
                if H[i][c]:
                    q = H[i][c] // H[p][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[p])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[p])]
                    if H[i][c]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if H[p][c] < 0:
            H[p] = [-a for a in H[p]]
            U[p] = [-a for a in U[p]]
        for i in range(p):
            q = H[i][c] // H[p][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[p])]
                U[i] = [a - q * b for a, b in zip(U[i], U[p])]
        p += 1
    return H, U


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with transforms: ``(D, U, V)`` with ``U A V = D``.

    ``D`` is diagonal with non-negative entries, each dividing the next.
    """
    D = [list(map(int, row)) for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return D, U, V
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    D[i] = [a - q * b for a, b in zip(D[i], D[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    for row in D:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is not None:
                D[t] = [a + b for a, b in zip(D[t], D[bad])]
                U[t] = [a + b for a, b in zip(U[t], U[bad])]
                continue
            break
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return D, U, V


def invariant_factors(A: Sequence[Sequence[int]]) -> list[int]:
    D, _, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i] != 0]


def kernel_basis(A: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Saturated integer basis of ``{x : A x = 0}``, in Hermite normal form."""
    if not A:
        if ncols is None:
            raise DimensionError("kernel of an empty matrix needs an explicit width")
        return identity(ncols)
    ncols = len(A[0])
    H, U = hermite_normal_form(transpose(A))
    kernel = [U[i] for i in range(ncols) if not any(H[i])]
    if not kernel:
        return []
    return [row for row in hermite_normal_form(kernel)[0] if any(row)]


def lattice_index(rows: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by ``rows`` inside its saturation.

    This is the product of the Smith invariant factors; it equals 1 exactly
    when the rows are part of a basis of the ambient lattice.
    """
    out = 1
    for d in invariant_factors(rows):
        out *= d
    return out


def unimodular_completion(n: Sequence[int]) -> Matrix:
    """Vectors ``b_1..b_{r-1}`` such that ``[n; b_1; ...]`` is unimodular.

    When ``n`` has an entry equal to ``+1`` or ``-1`` the completion is the
    set of standard basis vectors avoiding the first such position; otherwise
    it is read off the Hermite transform of the column ``n``.
    """
    n = list(coords_of(n))
    if gcd_of(n) != 1:
        raise PreconditionError(f"vector {tuple(n)} is not primitive")
    r = len(n)
    unit = next((i for i, x in enumerate(n) if abs(x) == 1), None)
    if unit is not None:
        return [[int(j == k) for j in range(r)] for k in range(r) if k != unit]
    H, U = hermite_normal_form([[x] for x in n])
    Uinv = integer_inverse(U)
    # U n = e_1, so n is the first column of U^{-1}; the others complete it.
    cols = transpose(Uinv)
    if list(cols[0]) != n:
        raise InvariantError("Hermite completion did not reproduce the vector")
    return [list(c) for c in cols[1:]]


# ---------------------------------------------------------------------------
# Sublattices and quotients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SublatticeBasis:
    """A basis of ``v^perp`` (kind ``sublattice``) or of ``L / Z v`` (kind ``quotient``).

    For quotients the rows are coset representatives; ``anchor`` is the
    vector ``v`` and ``side`` the lattice the rows live in.
    """

    ambient_rank: int
    basis_rows: tuple[tuple[int, ...], ...]
    kind: str
    anchor: tuple[int, ...]
    side: str = N_SIDE

    def __post_init__(self):
        if self.kind not in ("sublattice", "quotient"):
            raise InputError(f"unknown sublattice kind {self.kind!r}")
        if matrix_rank(self.basis_rows) != len(self.basis_rows):
            raise InvariantError("basis rows are linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.basis_rows)

    def _full(self) -> Matrix:
        return [list(self.anchor)] + [list(b) for b in self.basis_rows]

    def coordinates(self, x) -> tuple[int, ...]:
        """Integer coordinates of ``x`` (or of its class, for quotients)."""
        x = coords_of(x)
        if len(x) != self.ambient_rank:
            raise DimensionError("vector rank does not match the lattice")
        if self.kind == "quotient":
            c = matvec(integer_inverse(transpose(self._full())), x)
            return tuple(int(v) for v in c[1:])
        sol = solve(transpose(self.basis_rows), x)
        if sol is None or any(Fraction(v).denominator != 1 for v in sol):
            raise PreconditionError(f"{x} is not in the sublattice")
        return tuple(int(v) for v in sol)

    def lift(self, c: Sequence[int]) -> tuple[int, ...]:
        """The lattice vector with coordinates ``c`` (a coset representative for quotients)."""
        if len(c) != self.rank:
            raise DimensionError("coordinate vector has the wrong length")
        out = [0] * self.ambient_rank
        for ci, b in zip(c, self.basis_rows):
            for k in range(self.ambient_rank):
                out[k] += ci * b[k]
        return tuple(out)

    def is_unimodular_with_anchor(self) -> bool:
        return abs(determinant(self._full())) == 1


def _check_nonzero_primitive(v, what: str) -> tuple[int, ...]:
    v = coords_of(v)
    if not any(v):
        raise PreconditionError(f"{what} must be non-zero")
    if gcd_of(v) != 1:
        raise PreconditionError(f"{what} {tuple(v)} is not primitive")
    return tuple(int(x) for x in v)


def quotient_lattice(n, side: str | None = None) -> SublatticeBasis:
    """Coset-representative basis of ``L / Z n`` for a primitive ``n``."""
    side = side or _side_of(n) or N_SIDE
    nv = _check_nonzero_primitive(n, "quotient generator")
    rows = tuple(tuple(b) for b in unimodular_completion(nv))
    basis = SublatticeBasis(len(nv), rows, "quotient", nv, side)
    if not basis.is_unimodular_with_anchor():
        raise InvariantError("quotient basis does not complete the generator")
    return basis


def orthogonal_sublattice(m, side: str | None = None) -> SublatticeBasis:
    """Saturated basis of ``{x : <m, x> = 0}`` on the side opposite to ``m``."""
    m_side = _side_of(m)
    side = side or (N_SIDE if m_side in (None, M_SIDE) else M_SIDE)
    mv = _check_nonzero_primitive(m, "orthogonal anchor")
    rows = tuple(tuple(b) for b in kernel_basis([list(mv)]))
    if len(rows) != len(mv) - 1:
        raise InvariantError("kernel has the wrong rank")
    if lattice_index(rows) != 1:
        raise InvariantError("kernel basis is not saturated")
    return SublatticeBasis(len(mv), rows, "sublattice", mv, side)


def transfer_section(m, n, x) -> tuple[int, ...]:
    """The section ``x -> x + <m, x> n`` of ``L -> L / Z n`` landing in ``m^perp``.

    Requires ``<m, n> = -1``; the image always pairs to zero with ``m``.
    """
    if pair(m, n) != -1:
        raise PreconditionError(f"<m, n> = {pair(m, n)} but the section needs -1")
    k = pair(m, x)
    out = tuple(xi + k * ni for xi, ni in zip(coords_of(x), coords_of(n)))
    if pair(m, out) != 0:
        raise InvariantError("section image is not orthogonal to m")
    return out
