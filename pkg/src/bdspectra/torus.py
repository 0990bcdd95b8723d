"""Reduced K_2- and K_3-cohomology of split tori in terms of presentations.

A class in the reduced ``H^0(H, K_3)`` is written
``a_ijk e_i.e_j.e_k + e_i.e_j.{f_ij} + e_i.g_i``.  Coefficients are written
additively: ``f_ij`` lives in a group ``A1`` (standing in for ``k^x``) with
marked element ``m1 = {-1}`` and a pairing ``beta: A1 x A1 -> A2`` (the
symbol map into ``K_2``), and ``g_i`` lives in ``A2``.

The relation ``x.x = x.{-1}`` with ``x = sum c_i e_i`` gives three moves:

1. ``a_ijk += c_i c_j`` and ``f_ik += c_i m1`` (third index ``k`` fixed);
2. ``a_kij += c_i c_j`` and ``f_ki += c_i m1`` (first index ``k`` fixed);
3. ``f_ij += c_i c_j h`` and ``g_i += c_i beta(m1, h)`` for ``h`` in ``A1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Sequence

from .zchain import CoefficientGroup, CohomologyGroup, FieldModel, elementary_divisors


def _require_pairing(A1: CoefficientGroup) -> CoefficientGroup:
    if A1.marked is None or A1.pairing_target is None:
        raise ValueError("A1 needs a marked element {-1} and a pairing into A2")
    return A1.pairing_target


# ---------------------------------------------------------------------------
# K_3
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusK3Class:
    rank: int
    a: tuple          # a[i][j][k] integers
    f: tuple          # f[i][j] elements of A1
    g: tuple          # g[i] elements of A2

    def __post_init__(self):
        r = self.rank
        a = tuple(tuple(tuple(int(v) for v in row) for row in mat) for mat in self.a)
        if len(a) != r or any(len(m) != r or any(len(row) != r for row in m) for m in a):
            raise ValueError("a must be a rank x rank x rank tensor")
        f = tuple(tuple(tuple(x) for x in row) for row in self.f)
        if len(f) != r or any(len(row) != r for row in f):
            raise ValueError("f must be a rank x rank matrix")
        g = tuple(tuple(x) for x in self.g)
        if len(g) != r:
            raise ValueError("g must have one entry per basis vector")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)

    @classmethod
    def zero(cls, rank: int, A1: CoefficientGroup) -> "TorusK3Class":
        A2 = _require_pairing(A1)
        return cls(rank, _zeros3(rank), [[A1.zero()] * rank for _ in range(rank)], [A2.zero()] * rank)

    def reduced(self, A1: CoefficientGroup) -> "TorusK3Class":
        A2 = _require_pairing(A1)
        return TorusK3Class(self.rank, self.a,
                            [[A1.reduce(x) for x in row] for row in self.f],
                            [A2.reduce(x) for x in self.g])

    def __add__(self, other: "TorusK3Class") -> "TorusK3Class":
        r = self.rank
        a = [[[self.a[i][j][k] + other.a[i][j][k] for k in range(r)] for j in range(r)] for i in range(r)]
        f = [[tuple(x + y for x, y in zip(self.f[i][j], other.f[i][j])) for j in range(r)] for i in range(r)]
        g = [tuple(x + y for x, y in zip(self.g[i], other.g[i])) for i in range(r)]
        return TorusK3Class(r, a, f, g)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "a": _lists(self.a), "f": _lists(self.f), "g": _lists(self.g)}


def _zeros3(r):
    return [[[0] * r for _ in range(r)] for _ in range(r)]


def _lists(x):
    if isinstance(x, (tuple, list)):
        return [_lists(v) for v in x]
    return x


def _mutable(c: TorusK3Class):
    a = [[list(row) for row in m] for m in c.a]
    f = [list(row) for row in c.f]
    g = list(c.g)
    return a, f, g


def apply_move(c: TorusK3Class, A1: CoefficientGroup, kind: int, coeffs: Sequence[int],
               index: int | None = None, h: Sequence[int] | None = None) -> TorusK3Class:
    """Apply move 1, 2 (needs ``index``) or 3 (needs ``h``) with vector ``c``."""
    A2 = _require_pairing(A1)
    r = c.rank
    a, f, g = _mutable(c)
    m1 = A1.marked
    if kind in (1, 2):
        k = index
        if k is None or not 0 <= k < r:
            raise ValueError("moves 1 and 2 need an index")
        for i in range(r):
            for j in range(r):
                if kind == 1:
                    a[i][j][k] += coeffs[i] * coeffs[j]
                else:
                    a[k][i][j] += coeffs[i] * coeffs[j]
            if kind == 1:
                f[i][k] = A1.add(f[i][k], A1.scale(m1, coeffs[i]))
            else:
                f[k][i] = A1.add(f[k][i], A1.scale(m1, coeffs[i]))
    elif kind == 3:
        if h is None:
            raise ValueError("move 3 needs an element h of A1")
        bh = A1.pair(m1, h)
        for i in range(r):
            for j in range(r):
                f[i][j] = A1.add(f[i][j], A1.scale(h, coeffs[i] * coeffs[j]))
            g[i] = A2.add(g[i], A2.scale(bh, coeffs[i]))
    else:
        raise ValueError(f"unknown move {kind}")
    return TorusK3Class(r, a, f, g)


@dataclass(frozen=True)
class TorusK3Data:
    """``(A, q1, q2)``: ``A`` on triples ``i < j < k``, ``q1`` on ordered basis
    pairs (values in A1), ``q2`` on basis vectors (values in A2)."""

    rank: int
    A: tuple          # ((i, j, k, value), ...) with i < j < k, zeros omitted
    q1: tuple         # q1[i][j]
    q2: tuple         # q2[i]

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(sorted(tuple(t) for t in self.A if t[3])))
        object.__setattr__(self, "q1", tuple(tuple(tuple(x) for x in row) for row in self.q1))
        object.__setattr__(self, "q2", tuple(tuple(x) for x in self.q2))

    def A_value(self, i: int, j: int, k: int) -> int:
        if len({i, j, k}) < 3:
            return 0
        idx = (i, j, k)
        srt = tuple(sorted(idx))
        sign = _perm_sign(idx, srt)
        for t in self.A:
            if t[:3] == srt:
                return sign * t[3]
        return 0

    def to_dict(self) -> dict:
        return {"rank": self.rank, "A": _lists(self.A), "q1": _lists(self.q1), "q2": _lists(self.q2)}


def _perm_sign(seq, srt) -> int:
    perm = [srt.index(x) for x in seq]
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def antisymmetrize(a, r: int) -> tuple:
    out = []
    for i, j, k in combinations(range(r), 3):
        v = (a[i][j][k] - a[j][i][k] - a[i][k][j] + a[j][k][i] + a[k][i][j] - a[k][j][i])
        if v:
            out.append((i, j, k, v))
    return tuple(out)


def classify(c: TorusK3Class, A1: CoefficientGroup) -> TorusK3Data:
    """``(A, q1, q2)`` of a presentation.

    ``q2(e_i) = g_i + beta(m1, f_ii) + a_iii beta(m1, m1)``; the last term
    accounts for ``e.e.e = e.{-1}.{-1}`` and makes ``q2`` move-invariant
    even when ``{-1, -1}`` is nonzero.
    """
    A2 = _require_pairing(A1)
    r = c.rank
    a, f, g = c.a, c.f, c.g
    m1 = A1.marked
    bmm = A1.pair(m1, m1)
    q1 = []
    for i in range(r):
        row = []
        for j in range(r):
            s = a[i][i][j] + a[i][j][i] + a[j][i][i] + a[i][j][j] + a[j][i][j] + a[j][j][i]
            row.append(A1.add(A1.sub(f[i][j], f[j][i]), A1.scale(m1, s)))
        q1.append(row)
    q2 = [A2.add(A2.add(g[i], A1.pair(m1, f[i][i])), A2.scale(bmm, a[i][i][i])) for i in range(r)]
    return TorusK3Data(r, antisymmetrize(a, r), q1, q2)


def check_k3_data(d: TorusK3Data, A1: CoefficientGroup) -> None:
    A2 = _require_pairing(A1)
    r = d.rank
    if len(d.q1) != r or any(len(row) != r for row in d.q1) or len(d.q2) != r:
        raise ValueError("q1/q2 shapes do not match the rank")
    for t in d.A:
        i, j, k, _ = t
        if not (0 <= i < j < k < r):
            raise ValueError(f"A entry {t} is not on a sorted triple")
    for i in range(r):
        for j in range(r):
            if A1.reduce(d.q1[i][j]) != A1.neg(d.q1[j][i]):
                raise ValueError(f"q1 is not antisymmetric at ({i}, {j})")
        if A1.reduce(d.q1[i][i]) != A1.zero():
            raise ValueError("q1 must vanish on the diagonal")
        A2.reduce(d.q2[i])


def declassify(d: TorusK3Data, A1: CoefficientGroup) -> TorusK3Class:
    """A presentation with ``a`` on sorted triples, strictly lower ``f`` and ``g = q2``."""
    check_k3_data(d, A1)
    A2 = A1.pairing_target
    r = d.rank
    a = _zeros3(r)
    for i, j, k, v in d.A:
        a[i][j][k] = v
    f = [[A1.reduce(d.q1[i][j]) if i > j else A1.zero() for j in range(r)] for i in range(r)]
    g = [A2.reduce(x) for x in d.q2]
    return TorusK3Class(r, a, f, g)


def normal_form(c: TorusK3Class, A1: CoefficientGroup) -> TorusK3Class:
    """Reduce a presentation to canonical shape using only the three moves.

    First ``a`` is pushed onto strictly increasing index triples (diagonal
    and polarized versions of moves 1 and 2), then the symmetric part of
    ``f`` is cleared with move 3.
    """
    r = c.rank
    A2 = _require_pairing(A1)
    a, f, g = _mutable(c.reduced(A1))
    state = (a, f, g)

    def unit(p):
        return [1 if t == p else 0 for t in range(r)]

    def polar(kind, p, q, idx, times, h=None):
        # move(e_p + e_q) - move(e_p) - move(e_q), applied ``times`` times
        both = [1 if t in (p, q) else 0 for t in range(r)]
        for vec, sgn in ((both, times), (unit(p), -times), (unit(q), -times)):
            _scaled_move(state, A1, A2, kind, vec, idx, h, sgn)

    changed = True
    while changed:
        changed = False
        for i, j, k in product(range(r), repeat=3):
            v = a[i][j][k]
            if not v:
                continue
            if i == j:
                _scaled_move(state, A1, A2, 1, unit(i), k, None, -v)
            elif j == k:
                _scaled_move(state, A1, A2, 2, unit(j), i, None, -v)
            elif i > j:
                polar(1, j, i, k, -v)        # a_jik -= v, a_ijk = 0
            elif j > k:
                polar(2, k, j, i, -v)        # a_ikj -= v, a_ijk = 0
            else:
                continue
            changed = True
    for p, q in combinations(range(r), 2):
        h = f[p][q]
        if h != A1.zero():
            polar(3, p, q, None, -1, h)
    for p in range(r):
        h = f[p][p]
        if h != A1.zero():
            _scaled_move(state, A1, A2, 3, unit(p), None, h, -1)
    return TorusK3Class(r, a, f, g)


def _scaled_move(state, A1, A2, kind, vec, idx, h, times):
    """``times`` copies of a move (negative = inverse move), in place on ``(a, f, g)``.

    Same increments as :func:`apply_move`; moves 1/2 are quadratic in the
    coefficient vector, so the increment is scaled rather than the vector.
    """
    if times == 0:
        return
    a, f, g = state
    r = len(vec)
    if kind == 3:
        h = A1.scale(h, times)
        bh = A1.pair(A1.marked, h)
        for i in range(r):
            for j in range(r):
                if vec[i] * vec[j]:
                    f[i][j] = A1.add(f[i][j], A1.scale(h, vec[i] * vec[j]))
            if vec[i]:
                g[i] = A2.add(g[i], A2.scale(bh, vec[i]))
        return
    m1 = A1.marked
    for i in range(r):
        for j in range(r):
            inc = times * vec[i] * vec[j]
            if kind == 1:
                a[i][j][idx] += inc
            else:
                a[idx][i][j] += inc
        if vec[i]:
            if kind == 1:
                f[i][idx] = A1.add(f[i][idx], A1.scale(m1, times * vec[i]))
            else:
                f[idx][i] = A1.add(f[idx][i], A1.scale(m1, times * vec[i]))


# evaluation of the refinements at arbitrary cocharacters -------------------


def q1_value(d: TorusK3Data, A1: CoefficientGroup, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    """``q1(x, y)`` extended from basis values by the defect relations."""
    r = d.rank
    m1 = A1.marked
    out = A1.zero()
    for i in range(r):
        for j in range(r):
            if x[i] and y[j]:
                out = A1.add(out, A1.scale(d.q1[i][j], x[i] * y[j]))
    defect = 0
    for i in range(r):
        for j, l in combinations(range(r), 2):
            defect += x[i] * y[j] * y[l] * d.A_value(i, j, l)
    for i, j in combinations(range(r), 2):
        for l in range(r):
            defect += x[i] * x[j] * y[l] * d.A_value(i, j, l)
    return A1.add(out, A1.scale(m1, defect))


def q2_value(d: TorusK3Data, A1: CoefficientGroup, x: Sequence[int]) -> tuple[int, ...]:
    """``q2(x)`` from ``q2(u + v) = q2(u) + q2(v) + beta(m1, q1(u, v))``."""
    A2 = A1.pairing_target
    r = d.rank
    out = A2.zero()
    acc = [0] * r
    for j in range(r):
        if not x[j]:
            continue
        step = [x[j] if t == j else 0 for t in range(r)]
        out = A2.add(out, A2.scale(d.q2[j], x[j]))
        out = A2.add(out, A1.pair(A1.marked, q1_value(d, A1, acc, step)))
        acc[j] = x[j]
    return out


def presentation_q1(c: TorusK3Class, A1: CoefficientGroup, x, y) -> tuple[int, ...]:
    """``q1(x, y)`` computed directly from the linearly extended presentation."""
    r = c.rank
    m1 = A1.marked

    def a3(u, v, w):
        return sum(c.a[i][j][k] * u[i] * v[j] * w[k]
                   for i in range(r) for j in range(r) for k in range(r))

    def f2(u, v):
        out = A1.zero()
        for i in range(r):
            for j in range(r):
                out = A1.add(out, A1.scale(c.f[i][j], u[i] * v[j]))
        return out

    s = a3(x, x, y) + a3(x, y, x) + a3(y, x, x) + a3(x, y, y) + a3(y, x, y) + a3(y, y, x)
    return A1.add(A1.sub(f2(x, y), f2(y, x)), A1.scale(m1, s))


def presentation_q2(c: TorusK3Class, A1: CoefficientGroup, x) -> tuple[int, ...]:
    """Pull the class back along the cocharacter ``x``: ``g(x) + beta(m1, f(x, x))
    + a(x, x, x) beta(m1, m1)``."""
    A2 = A1.pairing_target
    r = c.rank
    m1 = A1.marked
    g = A2.zero()
    for i in range(r):
        g = A2.add(g, A2.scale(c.g[i], x[i]))
    fxx = A1.zero()
    for i in range(r):
        for j in range(r):
            fxx = A1.add(fxx, A1.scale(c.f[i][j], x[i] * x[j]))
    axxx = sum(c.a[i][j][k] * x[i] * x[j] * x[k] for i in range(r) for j in range(r) for k in range(r))
    return A2.add(A2.add(g, A1.pair(m1, fxx)), A2.scale(A1.pair(m1, m1), axxx))


# ---------------------------------------------------------------------------
# K_2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusK2Data:
    rank: int
    A: tuple      # antisymmetric integer matrix
    q: tuple      # q[i] in A1

    def to_dict(self) -> dict:
        return {"rank": self.rank, "A": _lists(self.A), "q": _lists(self.q)}


def classify_k2(rank: int, A1: CoefficientGroup, a: Sequence[Sequence[int]], f: Sequence[Sequence[int]]) -> TorusK2Data:
    """Class ``a_ij e_i.e_j + e_i.{f_i}``: ``A = a - a^T``, ``q(e_i) = f_i + a_ii m1``."""
    if A1.marked is None:
        raise ValueError("A1 needs a marked element {-1}")
    A = tuple(tuple(a[i][j] - a[j][i] for j in range(rank)) for i in range(rank))
    q = tuple(A1.add(f[i], A1.scale(A1.marked, a[i][i])) for i in range(rank))
    return TorusK2Data(rank, A, q)


def apply_move_k2(rank: int, A1: CoefficientGroup, a, f, coeffs: Sequence[int]):
    """``a_ij += c_i c_j``, ``f_i += c_i m1``."""
    a = [[a[i][j] + coeffs[i] * coeffs[j] for j in range(rank)] for i in range(rank)]
    f = [A1.add(f[i], A1.scale(A1.marked, coeffs[i])) for i in range(rank)]
    return a, f


def k2_q_value(d: TorusK2Data, A1: CoefficientGroup, x: Sequence[int]) -> tuple[int, ...]:
    """``q(x)`` from ``q(u + v) = q(u) + q(v) + A(u, v) m1``."""
    out = A1.zero()
    defect = 0
    for i in range(d.rank):
        out = A1.add(out, A1.scale(d.q[i], x[i]))
        for j in range(i + 1, d.rank):
            defect += x[i] * x[j] * d.A[i][j]
    return A1.add(out, A1.scale(A1.marked, defect))


# ---------------------------------------------------------------------------
# group structure of the presentations
# ---------------------------------------------------------------------------


def _presentation_matrix(r: int, A1: CoefficientGroup, weight: int) -> tuple[list[list[int]], int]:
    """Relations of the presentation group as rows over Z^N.

    Coordinates: the integer tensor ``a``, then ``f`` in A1 generator
    coordinates, then ``g`` in A2 coordinates (K_3 only).  Rows are the torsion
    relations of the coefficient groups followed by generators of the move
    subgroup: each move at ``c = e_p``, its polarization in ``(p, q)``, and the
    doubled quadratic part.
    """
    A2 = A1.pairing_target if weight == 3 else None
    n1 = A1.ngens
    if weight == 3:
        na = r ** 3
        nf = r * r * n1
        ng = r * A2.ngens
    else:
        na = r * r
        nf = r * n1
        ng = 0
    N = na + nf + ng

    def a_pos(*idx):
        pos = 0
        for t in idx:
            pos = pos * r + t
        return pos

    def f_pos(*idx, gen):
        base = 0
        for t in idx:
            base = base * r + t
        return na + base * n1 + gen

    def g_pos(i, gen):
        return na + nf + i * A2.ngens + gen

    rows = []

    def torsion_rows(gens, pos_fn):
        for k, t in enumerate(gens.torsion):
            row = [0] * N
            row[pos_fn(gens.free_rank + k)] = t
            rows.append(row)

    if weight == 3:
        for i in range(r):
            for j in range(r):
                torsion_rows(A1, lambda g, i=i, j=j: f_pos(i, j, gen=g))
            torsion_rows(A2, lambda g, i=i: g_pos(i, g))
    else:
        for i in range(r):
            torsion_rows(A1, lambda g, i=i: f_pos(i, gen=g))

    m1 = A1.marked
    units = [[1 if t == p else 0 for t in range(r)] for p in range(r)]

    def move_row(vec, kind, idx=None, h=None, quad_only=False, quad_scale=1):
        row = [0] * N
        if weight == 2:
            for i in range(r):
                for j in range(r):
                    row[a_pos(i, j)] += quad_scale * vec[i] * vec[j]
                if not quad_only:
                    for gen, v in enumerate(m1):
                        row[f_pos(i, gen=gen)] += vec[i] * v
            return row
        if kind in (1, 2):
            for i in range(r):
                for j in range(r):
                    t = (i, j, idx) if kind == 1 else (idx, i, j)
                    row[a_pos(*t)] += quad_scale * vec[i] * vec[j]
                if not quad_only:
                    fi = (i, idx) if kind == 1 else (idx, i)
                    for gen, v in enumerate(m1):
                        row[f_pos(*fi, gen=gen)] += vec[i] * v
        else:
            bh = A1.pair(m1, h)
            for i in range(r):
                for j in range(r):
                    for gen, v in enumerate(h):
                        row[f_pos(i, j, gen=gen)] += quad_scale * vec[i] * vec[j] * v
                if not quad_only:
                    for gen, v in enumerate(bh):
                        row[g_pos(i, gen)] += vec[i] * v
        return row

    def polar_row(p, q, **kw):
        both = [1 if t in (p, q) else 0 for t in range(r)]
        x = move_row(both, **kw)
        y = move_row(units[p], **kw)
        z = move_row(units[q], **kw)
        return [u - v - w for u, v, w in zip(x, y, z)]

    variants = []
    if weight == 2:
        variants.append({"kind": 0})
    else:
        for k in range(r):
            variants.append({"kind": 1, "idx": k})
            variants.append({"kind": 2, "idx": k})
        for gen in range(A1.ngens):
            variants.append({"kind": 3, "h": A1.generator(gen)})
    for kw in variants:
        for p in range(r):
            rows.append(move_row(units[p], **kw))
            rows.append(move_row(units[p], quad_only=True, quad_scale=2, **kw))
        for p, q in combinations(range(r), 2):
            rows.append(polar_row(p, q, **kw))
    return rows, N


def presentation_group(r: int, A1: CoefficientGroup, weight: int = 3) -> CohomologyGroup:
    """The reduced ``H^0`` of a rank-``r`` torus as an abstract group."""
    if r == 0:
        return CohomologyGroup()
    rows, N = _presentation_matrix(r, A1, weight)
    divs = elementary_divisors(rows, N)
    return CohomologyGroup(N - len(divs), tuple(d for d in divs if d > 1))


def data_order(r: int, A1: CoefficientGroup, weight: int = 3) -> int | None:
    """Number of valid classified data (None if infinite)."""
    if weight == 3:
        A2 = A1.pairing_target
        if comb(r, 3) or not A1.is_finite or not A2.is_finite:
            return None
        return A1.order ** comb(r, 2) * A2.order ** r
    if comb(r, 2) or not A1.is_finite:
        return None
    return A1.order ** r


def enumerate_k3_data(r: int, A1: CoefficientGroup) -> list[TorusK3Data]:
    """All valid data at rank <= 2 (where A vanishes)."""
    if r > 2:
        raise ValueError("finite enumeration needs rank <= 2")
    A2 = A1.pairing_target
    pairs = list(combinations(range(r), 2))
    out = []
    for vals in product(A1.elements(), repeat=len(pairs)):
        q1 = [[A1.zero()] * r for _ in range(r)]
        for (i, j), v in zip(pairs, vals):
            q1[j][i] = v
            q1[i][j] = A1.neg(v)
        for q2 in product(A2.elements(), repeat=r):
            out.append(TorusK3Data(r, (), q1, q2))
    return out


@dataclass(frozen=True)
class H0Report:
    sheaf: str
    group: CohomologyGroup | None
    description: str
    torus_part: CohomologyGroup | None

    def to_dict(self) -> dict:
        return {
            "sheaf": self.sheaf,
            "group": self.group.to_dict() if self.group is not None else None,
            "description": self.description,
            "torus_part": self.torus_part.to_dict() if self.torus_part is not None else None,
        }


def h0_report(r: int, sheaf: str, model: FieldModel | None) -> H0Report:
    """``H^0(G, K_n) = K_n(k) + reduced H^0(H_0, K_n)`` for a torus of rank r."""
    weight = int(sheaf[1])
    if model is None:
        if weight == 3:
            desc = "K3(k)"
            if r:
                desc += f" + {{A in wedge^3 X0 (rank {comb(r, 3)}), q1: Y0 x Y0 -> k^x, q2: Y0 -> K2(k)}}"
        else:
            desc = "K2(k)"
            if r:
                desc += f" + {{A in wedge^2 X0 (rank {comb(r, 2)}), q: Y0 -> k^x}}"
        return H0Report(sheaf, None, desc, None)
    part = presentation_group(r, model.units, weight)
    base = (model.k3 if weight == 3 else model.k2).as_group()
    return H0Report(sheaf, base + part, f"K{weight}({model.name}) + reduced H0 of T{r}", part)
