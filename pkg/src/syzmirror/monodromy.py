"""Monodromy of the torus fibration around the legs and vertices of Gamma.

The fiber over the open face ``alpha_n`` has lattice ``N / Z n`` and the fiber
near the vertex chart ``U_m`` has lattice ``m^perp`` in ``N``.  Crossing from
one to the other uses the section ``x -> x + <m, x> n`` and the projection.
Going once around the loop ``alpha_n, U_m, alpha_n', U_m'`` gives

    [x] -> [x] + <m' - m, x> [n']

on ``N / Z n``.  The dual fibration sees ``y -> y + <y, n'> (m - m')`` on
``n^perp`` in ``M``.  Operators act on column vectors of coordinates in the
canonical bases of :mod:`syzmirror.lattice`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, InvariantError, PreconditionError
from .lattice import (
    SublatticeBasis, coords_of, determinant, gcd_of, identity, integer_inverse, kernel_basis, matmul, matrix_rank,
    orthogonal_sublattice, pair, quotient_lattice, sub, transfer_section, transpose, unimodular_completion,
)

Matrix = tuple[tuple[int, ...], ...]

TYPE_I = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
TYPE_II_TRIPLE = (
    ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 0, -1), (0, 1, 0), (0, 0, 1)),
    ((1, -1, 1), (0, 1, 0), (0, 0, 1)),
)
TYPE_III_TRIPLE = (
    ((1, 0, 0), (1, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (-1, 0, 1)),
    ((1, 0, 0), (-1, 1, 0), (1, 0, 1)),
)


@dataclass(frozen=True)
class MonodromyOperator:
    """An integer matrix on a fiber lattice, with the loop ``(n, m, n', m')`` it came from."""

    matrix: Matrix
    lattice: SublatticeBasis
    loop: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    oracle_matrix: Matrix | None = None

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def is_unipotent(self) -> bool:
        k = self.dim
        N = [[self.matrix[i][j] - (i == j) for j in range(k)] for i in range(k)]
        return all(x == 0 for row in matmul(N, N) for x in row)

    def determinant(self) -> int:
        return determinant([list(r) for r in self.matrix])

    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.matrix],
            "lattice": {"kind": self.lattice.kind, "anchor": list(self.lattice.anchor),
                        "basis": [list(b) for b in self.lattice.basis_rows]},
            "loop": [list(v) for v in self.loop],
        }


def _loop_vectors(n, m, n2, m2):
    vecs = tuple(tuple(int(x) for x in coords_of(v)) for v in (n, m, n2, m2))
    if len({len(v) for v in vecs}) != 1:
        raise InputError("loop vectors have different ranks")
    return vecs


def _check_pairings(n, m, n2, m2) -> None:
    bad = []
    for a_name, a in (("m", m), ("m'", m2)):
        for b_name, b in (("n", n), ("n'", n2)):
            value = pair(a, b)
            if value != -1:
                bad.append(f"<{a_name}, {b_name}> = {value} for {a_name} = {tuple(a)}, {b_name} = {tuple(b)}")
    if bad:
        raise PreconditionError("loop pairings must all be -1: " + ", ".join(bad))


def _matrix_from_images(basis: SublatticeBasis, images) -> Matrix:
    cols = [basis.coordinates(x) for x in images]
    return tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(len(cols)))


def loop_monodromy(n, m, n2, m2) -> MonodromyOperator:
    """``[x] -> [x] + <m' - m, x> [n']`` on ``N / Z n``, cross-checked against the chart transfers."""
    n, m, n2, m2 = _loop_vectors(n, m, n2, m2)
    _check_pairings(n, m, n2, m2)
    basis = quotient_lattice(n)
    step = sub(m2, m)
    images = []
    oracle = []
    for b in basis.basis_rows:
        k = pair(step, b)
        images.append(tuple(x + k * y for x, y in zip(b, n2)))
        # alpha_n -> U_m -> alpha_n' -> U_m' -> alpha_n, using sections and projections
        in_u_m = transfer_section(m, n, b)
        in_u_m2 = transfer_section(m2, n2, in_u_m)
        oracle.append(in_u_m2)
    matrix = _matrix_from_images(basis, images)
    oracle_matrix = _matrix_from_images(basis, oracle)
    if matrix != oracle_matrix:
        raise InvariantError("closed formula disagrees with the composition of chart transfers")
    return MonodromyOperator(matrix, basis, (n, m, n2, m2), oracle_matrix)


def dual_loop_monodromy(n, m, n2, m2) -> MonodromyOperator:
    """``y -> y + <y, n'> (m - m')`` on ``n^perp``, the monodromy of the dual fibration."""
    n, m, n2, m2 = _loop_vectors(n, m, n2, m2)
    _check_pairings(n, m, n2, m2)
    basis = orthogonal_sublattice(n)
    step = sub(m, m2)
    images = []
    for b in basis.basis_rows:
        k = pair(b, n2)
        images.append(tuple(x + k * y for x, y in zip(b, step)))
    return MonodromyOperator(_matrix_from_images(basis, images), basis, (n, m, n2, m2))


def verify_duality(T: MonodromyOperator, D: MonodromyOperator) -> bool:
    """Whether ``<D y, T x> = <y, x>`` for all basis vectors of ``n^perp`` and ``N / Z n``."""
    if T.lattice.kind != "quotient" or D.lattice.kind != "sublattice":
        raise InputError("expected an operator on N / Z n and one on n^perp")
    if T.lattice.anchor != D.lattice.anchor:
        raise InputError("operators are anchored at different vectors")
    xs = T.lattice.basis_rows
    ys = D.lattice.basis_rows
    gram = [[pair(y, x) for x in xs] for y in ys]
    if abs(determinant(gram)) != 1:
        raise InvariantError("the pairing between n^perp and N / Z n is not perfect")
    Tx = [T.lattice.lift([T.matrix[i][j] for i in range(T.dim)]) for j in range(T.dim)]
    Dy = [D.lattice.lift([D.matrix[i][j] for i in range(D.dim)]) for j in range(D.dim)]
    return all(pair(Dy[i], Tx[j]) == gram[i][j] for i in range(len(ys)) for j in range(len(xs)))


def _as_matrix(T) -> list[list[int]]:
    return [list(r) for r in (T.matrix if isinstance(T, MonodromyOperator) else T)]


def classify_vertex(T1, T2, T3) -> str:
    """``"II"`` or ``"III"`` from the rank of the images of ``T_i - I``; ``"inconsistent"`` otherwise.

    The three operators must multiply to the identity.
    """
    mats = [_as_matrix(T) for T in (T1, T2, T3)]
    k = len(mats[0])
    if any(len(M) != k or any(len(r) != k for r in M) for M in mats):
        return "inconsistent"
    ops = [T for T in (T1, T2, T3) if isinstance(T, MonodromyOperator)]
    if ops and len({(T.lattice.kind, T.lattice.anchor, T.lattice.basis_rows) for T in ops}) > 1:
        return "inconsistent"
    if matmul(matmul(mats[0], mats[1]), mats[2]) != identity(k):
        return "inconsistent"
    columns = []
    for M in mats:
        for j in range(k):
            columns.append([M[i][j] - (i == j) for i in range(k)])
    rank = matrix_rank(columns)
    return {1: "II", 2: "III"}.get(rank, "inconsistent")


def type_one_basis(T: MonodromyOperator) -> Matrix:
    """Columns ``P`` with ``P^-1 T P`` equal to the type I matrix.

    ``T = I + u f`` with ``u = [n']`` and ``f = <m' - m, .>``.  The basis is
    ``u``, a vector ``p`` with ``f(p) = 1`` and a vector completing ``u`` to a
    basis of ``ker f``; it exists when ``f`` and ``u`` are primitive.
    """
    if T.dim != 3:
        raise PreconditionError("the type I normal form is for rank 3 fiber lattices")
    n, m, n2, m2 = T.loop
    basis = T.lattice
    f = [pair(sub(m2, m), b) for b in basis.basis_rows]
    u = list(basis.coordinates(n2))
    if not any(f):
        raise PreconditionError("the loop has trivial monodromy")
    if gcd_of(f) != 1:
        raise PreconditionError(f"the monodromy functional {tuple(f)} is not primitive")
    completion = unimodular_completion(f)
    p = [row[0] for row in integer_inverse([f] + [list(r) for r in completion])]
    if sum(a * b for a, b in zip(f, p)) != 1:
        raise PreconditionError("the monodromy functional is not primitive")
    kernel = kernel_basis([f])
    c = _coordinates_in(kernel, u)
    if c is None:
        raise PreconditionError("the monodromy vector does not lie in the kernel")
    d = unimodular_completion(c)[0]
    k = [sum(d[i] * kernel[i][j] for i in range(2)) for j in range(3)]
    P = [[u[i], p[i], k[i]] for i in range(3)]
    if abs(determinant(P)) != 1:
        raise PreconditionError("the monodromy vector is not primitive")
    normal = matmul(matmul(integer_inverse(P), _as_matrix(T)), P)
    if tuple(tuple(r) for r in normal) != TYPE_I:
        raise InvariantError("conjugated operator is not the type I matrix")
    return tuple(tuple(r) for r in P)


def _coordinates_in(rows: Sequence[Sequence[int]], x: Sequence[int]):
    from .lattice import solve
    sol = solve(transpose(rows), x)
    if sol is None or any(v.denominator != 1 for v in sol):
        return None
    return [int(v) for v in sol]


# -- operators attached to the singular locus ----------------------------------


def _locus_types():
    from . import locus as L
    return L


def leg_monodromy(locus, leg: tuple[int, int]) -> MonodromyOperator:
    """Monodromy around a leg of Gamma lying in one 2-face piece.

    ``m < m'`` are the two lattice points whose regions the leg separates and
    ``n < n'`` the lexicographically first adjacent lattice points of the
    dual edge of the 2-face.
    """
    L = _locus_types()
    leg = tuple(sorted(leg, key=lambda c: locus.complex.cells[c].dim))
    if leg not in locus._edge_set:
        raise InputError(f"{leg} is not an edge of the locus")
    kinds = {locus.kinds[c]: c for c in leg}
    if L.TRIVALENT not in kinds:
        raise PreconditionError("leg joins a junction to a mirror midpoint; it lies in no 2-face piece")
    cx = locus.complex
    tri = cx.cells[kinds[L.TRIVALENT]]
    other = cx.cells[leg[0] if leg[1] == kinds[L.TRIVALENT] else leg[1]]
    m, m2 = sorted(cx.A.cells[other.a].points)
    n, n2 = _dual_edge_pair(cx, tri.carrier)
    return loop_monodromy(n, m, n2, m2)


def _dual_edge_pair(cx, face_key):
    R = cx.R
    F = R.base.face_by_vertices(face_key)
    Fd = R.dual_face(F)
    if Fd.dim != 1:
        raise PreconditionError("the dual of the 2-face is not an edge")
    pts = sorted(R.dual.face_lattice_points(Fd))
    return min((pts[i], pts[i + 1]) for i in range(len(pts) - 1))


def vertex_monodromy(locus, cell: int) -> tuple[MonodromyOperator, MonodromyOperator, MonodromyOperator]:
    """The three leg operators at a vertex of Gamma, on one common fiber lattice.

    At a trivalent vertex over a triangle ``(m1, m2, m3)`` they are the loop
    operators ``(n, m_i, n', m_{i+1})`` on ``N / Z n``.  At a junction over a
    segment ``(m, m')`` and a triangle ``(n1, n2, n3)`` of the dual face the
    loops are based in ``U_m`` and act on ``m^perp`` in ``N`` by
    ``x -> x + <m', x> (n_i - n_{i+1})``.
    """
    L = _locus_types()
    cx = locus.complex
    kind = locus.kinds.get(cell)
    c = cx.cells[cell]
    if kind == L.TRIVALENT:
        tri = sorted(cx.A.cells[c.a].points)
        if len(tri) != 3:
            raise PreconditionError("vertex cell is not a triangle")
        n, n2 = _dual_edge_pair(cx, c.carrier)
        return tuple(loop_monodromy(n, tri[i], n2, tri[(i + 1) % 3]) for i in range(3))
    if kind == L.JUNCTION:
        tri = sorted(cx.B.cells[c.b].points)
        seg = sorted(cx.A.cells[c.a].points)
        if len(tri) != 3 or len(seg) != 2:
            raise PreconditionError("junction cell is not a segment over a triangle")
        m, m2 = seg
        return tuple(dual_loop_monodromy(m, tri[i], m2, tri[(i + 1) % 3]) for i in range(3))
    raise PreconditionError("cell is not a vertex of Gamma")


def dual_vertex_monodromy(locus, cell: int) -> tuple[MonodromyOperator, ...]:
    """Operators of the dual fibration at a trivalent vertex: the duals of :func:`vertex_monodromy`."""
    L = _locus_types()
    if locus.kinds.get(cell) != L.TRIVALENT:
        raise PreconditionError("dual vertex operators are formed at trivalent vertices")
    return tuple(dual_loop_monodromy(*T.loop) for T in vertex_monodromy(locus, cell))
