"""Exact cochain complexes over the integers.

Everything here works with plain Python ints (arbitrary precision) and
dense row-major matrices given as lists or tuples of rows.  A differential
``d_n : C^n -> C^{n+1}`` is stored with ``rank C^{n+1}`` rows and
``rank C^n`` columns, so it acts on column vectors.

The Smith normal form uses a fixed pivot rule (smallest nonzero magnitude,
ties broken by row then column) so every output is reproducible.
"""

from __future__ import annotations

import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from math import comb, gcd, prod
from pathlib import Path
from typing import Iterable, Sequence

Matrix = Sequence[Sequence[int]]


# ---------------------------------------------------------------------------
# small matrix helpers
# ---------------------------------------------------------------------------


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(nrows: int, ncols: int) -> list[list[int]]:
    return [[0] * ncols for _ in range(nrows)]


def matmul(a: Matrix, b: Matrix, ncols_b: int | None = None) -> list[list[int]]:
    """Product of integer matrices, skipping zero entries of ``a``."""
    if ncols_b is None:
        ncols_b = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * ncols_b
        for k, v in enumerate(row):
            if v:
                bk = b[k]
                for j in range(ncols_b):
                    w = bk[j]
                    if w:
                        acc[j] += v * w
        out.append(acc)
    return out


def transpose(a: Matrix, ncols: int | None = None) -> list[list[int]]:
    if ncols is None:
        ncols = len(a[0]) if a else 0
    return [[row[j] for row in a] for j in range(ncols)]


def determinant(a: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _nearest_quotient(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def smith_normal_form(
    m: Matrix, ncols: int | None = None
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(U, D, V)`` with ``U * m * V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries forming a divisibility chain.  ``ncols`` is only needed when
    ``m`` has no rows.
    """
    nrows = len(m)
    if ncols is None:
        ncols = len(m[0]) if nrows else 0
    return _snf_dense([list(r) for r in m], nrows, ncols, True)


def _snf_dense(A, nrows, ncols, transforms):
    # V is kept transposed (one list per column) so column operations are
    # whole-list operations; it is transposed back at the end.
    U = identity(nrows) if transforms else None
    VT = identity(ncols) if transforms else None

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            if transforms:
                U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            if transforms:
                VT[i], VT[j] = VT[j], VT[i]

    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            row = A[i]
            for j in range(t, ncols):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            # clear column t below the pivot by row operations
            while True:
                p = A[t][t]
                At = A[t]
                Ut = U[t] if transforms else None
                small = None
                for i in range(t + 1, nrows):
                    a = A[i][t]
                    if a:
                        q = _nearest_quotient(a, p)
                        A[i] = [x - q * y for x, y in zip(A[i], At)]
                        if transforms:
                            U[i] = [x - q * y for x, y in zip(U[i], Ut)]
                        r = A[i][t]
                        if r and (small is None or abs(r) < small[0]):
                            small = (abs(r), i)
                if small is None:
                    break
                swap_rows(t, small[1])
            # clear row t right of the pivot; column t is zero below the
            # pivot, so these column operations only touch row t and V
            p = A[t][t]
            At = A[t]
            VTt = VT[t] if transforms else None
            small = None
            for j in range(t + 1, ncols):
                a = At[j]
                if a:
                    q = _nearest_quotient(a, p)
                    At[j] = a - q * p
                    if transforms:
                        VT[j] = [x - q * y for x, y in zip(VT[j], VTt)]
                    if At[j] and (small is None or abs(At[j]) < small[0]):
                        small = (abs(At[j]), j)
            if small is not None:
                swap_cols(t, small[1])
                continue
            bad = None
            for i in range(t + 1, nrows):
                row = A[i]
                for j in range(t + 1, ncols):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
            if transforms:
                U[t] = [x + y for x, y in zip(U[t], U[bad])]
        t += 1
    for k in range(t):
        if A[k][k] < 0:
            A[k] = [-x for x in A[k]]
            if transforms:
                U[k] = [-x for x in U[k]]
    V = transpose(VT, ncols) if transforms else None
    return U, A, V


def is_smith_form(d: Matrix) -> bool:
    diag = []
    for i, row in enumerate(d):
        for j, v in enumerate(row):
            if i != j and v:
                return False
        if i < len(row):
            diag.append(row[i])
    if any(v < 0 for v in diag):
        return False
    seen_zero = False
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            seen_zero = True
        if seen_zero and b:
            return False
        if a and b % a:
            return False
    return True


def elementary_divisors(m: Matrix, ncols: int | None = None) -> list[int]:
    """Nonzero diagonal entries of the Smith form of ``m`` (ascending).

    Unit pivots are eliminated first on a sparse copy (Markowitz order);
    only the leftover block goes through the dense algorithm.
    """
    rows = []
    for r in m:
        d = {j: v for j, v in enumerate(r) if v}
        if d:
            rows.append(d)
    colmap: dict[int, set[int]] = defaultdict(set)
    for idx, r in enumerate(rows):
        for j in r:
            colmap[j].add(idx)
    alive = set(range(len(rows)))
    ones = 0
    while True:
        best = None
        for idx in sorted(alive):
            r = rows[idx]
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = (len(r) - 1) * (len(colmap[j]) - 1)
                    key = (cost, idx, j)
                    if best is None or key < best:
                        best = key
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pidx, c = best
        prow = rows[pidx]
        p = prow[c]
        for other in sorted(colmap[c] - {pidx}):
            orow = rows[other]
            f = orow[c] * p
            for j, v in prow.items():
                nv = orow.get(j, 0) - f * v
                if nv:
                    if j not in orow:
                        colmap[j].add(other)
                    orow[j] = nv
                elif j in orow:
                    del orow[j]
                    colmap[j].discard(other)
            if not orow:
                alive.discard(other)
        for j in prow:
            colmap[j].discard(pidx)
        alive.discard(pidx)
        ones += 1
    rest = sorted(alive)
    cols = sorted({j for idx in rest for j in rows[idx]})
    if not rest:
        return [1] * ones
    cpos = {j: k for k, j in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, idx in enumerate(rest):
        for j, v in rows[idx].items():
            dense[i][cpos[j]] = v
    _, D, _ = _snf_dense(dense, len(rest), len(cols), False)
    diag = [D[i][i] for i in range(min(len(rest), len(cols))) if D[i][i]]
    return [1] * ones + diag


def matrix_rank(m: Matrix, ncols: int | None = None) -> int:
    return len(elementary_divisors(m, ncols))


def hermite_rows(vectors: Iterable[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Pivots are positive, entries above a pivot are reduced into
    ``[0, pivot)``, zero rows dropped.  Canonical for the spanned lattice.
    """
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    n = len(rows[0])
    out: list[list[int]] = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for k in range(col, n):
                    r[k] -= q * piv[k]
            nz = [r for r in nz if r[col]]
        piv = nz[0]
        if piv[col] < 0:
            piv[:] = [-x for x in piv]
        rows = [r for r in rows if r is not piv and any(r)]
        out.append(piv)
        col += 1
    for i, r in enumerate(out):
        pc = next(k for k, v in enumerate(r) if v)
        for prev in out[:i]:
            q = prev[pc] // r[pc]
            if q:
                for k in range(pc, n):
                    prev[k] -= q * r[k]
    return out


def integer_kernel(m: Matrix, ncols: int) -> list[list[int]]:
    """Basis of ``{x in Z^ncols : m x = 0}`` in Hermite row form.

    The kernel of an integer matrix is saturated, so this is a basis of
    the full kernel lattice, not just a finite-index sublattice.
    """
    U, D, V = smith_normal_form(m, ncols)
    r = sum(1 for i in range(min(len(D), ncols)) if D[i][i])
    basis = [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]
    return hermite_rows(basis)


def solve_in_lattice(basis: Sequence[Sequence[int]], target: Sequence[int]) -> list[int] | None:
    """Integer coefficients ``c`` with ``sum c_k basis[k] == target``, or None."""
    if not basis:
        return [] if not any(target) else None
    n = len(target)
    # columns of M are basis vectors; solve M c = target via Smith form
    M = [[b[i] for b in basis] for i in range(n)]
    U, D, V = smith_normal_form(M, len(basis))
    ut = [sum(U[i][k] * target[k] for k in range(n)) for i in range(n)]
    y = [0] * len(basis)
    for i in range(n):
        d = D[i][i] if i < len(basis) else 0
        if d:
            if ut[i] % d:
                return None
            y[i] = ut[i] // d
        elif ut[i]:
            return None
    return [sum(V[j][k] * y[k] for k in range(len(basis))) for j in range(len(basis))]


# ---------------------------------------------------------------------------
# finitely generated abelian groups
# ---------------------------------------------------------------------------


def _invariant_factors(orders: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    free = 0
    finite = []
    for o in orders:
        o = abs(o)
        if o == 0:
            free += 1
        elif o > 1:
            finite.append(o)
    if not finite:
        return free, ()
    diag = [[o if i == j else 0 for j in range(len(finite))] for i, o in enumerate(finite)]
    return free, tuple(d for d in elementary_divisors(diag, len(finite)) if d > 1)


@dataclass(frozen=True)
class CohomologyGroup:
    """A finitely generated abelian group ``Z^free_rank + sum Z/t_i``.

    ``torsion`` holds the invariant factors ``t_1 | t_2 | ...`` (all >= 2).
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"invariant factor {t} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_cyclic(cls, orders: Iterable[int]) -> "CohomologyGroup":
        """Normalize a list of cyclic orders (0 meaning Z) to invariant factors."""
        free, tors = _invariant_factors(orders)
        return cls(free, tors)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        return None if self.free_rank else prod(self.torsion)

    def cyclic_orders(self) -> list[int]:
        return [0] * self.free_rank + list(self.torsion)

    def __add__(self, other: "CohomologyGroup") -> "CohomologyGroup":
        return CohomologyGroup.from_cyclic(self.cyclic_orders() + other.cyclic_orders())

    def __mul__(self, k: int) -> "CohomologyGroup":
        return CohomologyGroup.from_cyclic(self.cyclic_orders() * k)

    __rmul__ = __mul__

    def tensor(self, other: "CohomologyGroup") -> "CohomologyGroup":
        out = []
        for a in self.cyclic_orders():
            for b in other.cyclic_orders():
                out.append(gcd(a, b))
        return CohomologyGroup.from_cyclic(out)

    def tor(self, other: "CohomologyGroup") -> "CohomologyGroup":
        out = [gcd(a, b) for a in self.torsion for b in other.torsion]
        return CohomologyGroup.from_cyclic(out)

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, d: dict) -> "CohomologyGroup":
        return cls(d["free_rank"], tuple(d["torsion"]))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        for t in self.torsion:
            parts.append(f"Z/{t}")
        return " + ".join(parts) if parts else "0"


TRIVIAL = CohomologyGroup()


@dataclass(frozen=True)
class CoefficientGroup:
    """A finitely generated coefficient group with optional extra structure.

    Elements are integer tuples in generator coordinates: the first
    ``free_rank`` entries are unconstrained, the remaining ones are reduced
    modulo the matching entry of ``torsion``.  ``marked`` is a distinguished
    element of order dividing 2 (the symbol {-1}); ``pairing_table[a][b]``
    is the image of the generator pair ``(a, b)`` in ``pairing_target``.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    marked: tuple[int, ...] | None = None
    pairing_target: "CoefficientGroup | None" = None
    pairing_table: tuple | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"cyclic factor Z/{t} is not allowed")
        if self.marked is not None:
            m = self.reduce(self.marked)
            object.__setattr__(self, "marked", m)
            if self.scale(m, 2) != self.zero():
                raise ValueError("marked element must have order dividing 2")
        if self.pairing_table is not None:
            if self.pairing_target is None:
                raise ValueError("pairing table without target group")
            tgt = self.pairing_target
            table = tuple(
                tuple(tgt.reduce(self.pairing_table[a][b]) for b in range(self.ngens))
                for a in range(self.ngens)
            )
            object.__setattr__(self, "pairing_table", table)
            for a in range(self.ngens):
                for b in range(self.ngens):
                    for g in (a, b):
                        if g >= self.free_rank:
                            t = self.torsion[g - self.free_rank]
                            if tgt.scale(table[a][b], t) != tgt.zero():
                                raise ValueError("pairing is not well defined on torsion generators")

    @classmethod
    def cyclic(cls, n: int, **kw) -> "CoefficientGroup":
        """``Z/n`` (``n == 0`` gives ``Z``, ``n == 1`` the trivial group)."""
        if n == 0:
            return cls(1, (), **kw)
        if n == 1:
            return cls(0, (), **kw)
        return cls(0, (n,), **kw)

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        return prod(self.torsion) if self.is_finite else None

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.ngens:
            raise ValueError(f"element {tuple(x)} has wrong length for {self}")
        f = self.free_rank
        if not f:
            return tuple([v % t for v, t in zip(x, self.torsion)])
        return tuple(x[:f]) + tuple(v % t for v, t in zip(x[f:], self.torsion))

    def add(self, x, y) -> tuple[int, ...]:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x) -> tuple[int, ...]:
        return self.reduce([-a for a in x])

    def sub(self, x, y) -> tuple[int, ...]:
        return self.reduce([a - b for a, b in zip(x, y)])

    def scale(self, x, k: int) -> tuple[int, ...]:
        return self.reduce([k * a for a in x])

    def generator(self, k: int) -> tuple[int, ...]:
        return self.reduce([1 if i == k else 0 for i in range(self.ngens)])

    def elements(self) -> list[tuple[int, ...]]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        out = [()]
        for t in self.torsion:
            out = [e + (v,) for e in out for v in range(t)]
        return out

    def pair(self, x, y) -> tuple[int, ...]:
        if self.pairing_table is None:
            raise ValueError("no pairing on this coefficient group")
        tgt = self.pairing_target
        acc = [0] * tgt.ngens
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if yb:
                    for k, v in enumerate(self.pairing_table[a][b]):
                        acc[k] += xa * yb * v
        return tgt.reduce(acc)

    def as_group(self) -> CohomologyGroup:
        return CohomologyGroup.from_cyclic([0] * self.free_rank + list(self.torsion))

    def cyclic_orders(self) -> list[int]:
        return [0] * self.free_rank + list(self.torsion)

    def __str__(self) -> str:
        return self.name or str(self.as_group())


def _prime_power_base(q: int) -> int | None:
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return p if q == 1 else None
        p += 1
    return q


@dataclass(frozen=True)
class FieldModel:
    """Finitely generated stand-ins for ``k^x``, ``K_2(k)`` and ``K_3(k)``.

    ``units`` carries the marked element {-1} and the Steinberg pairing
    ``units x units -> k2``.
    """

    name: str
    units: CoefficientGroup
    k2: CoefficientGroup
    k3: CoefficientGroup

    @classmethod
    def finite_field(cls, q: int) -> "FieldModel":
        """Standard K-groups of F_q: Z/(q-1), 0, Z/(q^2-1); zero Steinberg map."""
        if _prime_power_base(q) is None:
            raise ValueError(f"q = {q} is not a prime power")
        k2 = CoefficientGroup(name="K2(F_%d)" % q)
        units_t = (q - 1,) if q > 2 else ()
        marked = ((q - 1) // 2,) if q % 2 == 1 else (0,) * len(units_t)
        table = tuple(tuple(() for _ in units_t) for _ in units_t)
        units = CoefficientGroup(
            0, units_t, marked=marked, pairing_target=k2, pairing_table=table,
            name="F_%d^x" % q,
        )
        k3 = CoefficientGroup(0, (q * q - 1,), name="K3(F_%d)" % q)
        return cls(f"F{q}", units, k2, k3)

    def k_group(self, m: int) -> CoefficientGroup:
        if m == 0:
            return CoefficientGroup(1, (), name="Z")
        return {1: self.units, 2: self.k2, 3: self.k3}[m]


def parse_field(text: str) -> FieldModel | None:
    """``"symbolic"`` -> None, ``"Fq:<q>"`` -> finite field model."""
    t = text.strip()
    if t.lower() == "symbolic":
        return None
    if t[:3].lower() == "fq:":
        try:
            q = int(t[3:])
        except ValueError:
            raise ValueError(f"bad field size in {text!r}") from None
        return FieldModel.finite_field(q)
    raise ValueError(f"unknown field model {text!r}; use 'symbolic' or 'Fq:<q>'")


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------


def _freeze(m: Matrix) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in m)


@dataclass(frozen=True)
class ZComplex:
    """Bounded cochain complex of free abelian groups.

    ``ranks[k]`` is the rank in degree ``start + k``; ``diffs[k]`` is the
    differential out of that degree.  ``d o d = 0`` is checked on
    construction.
    """

    start: int
    ranks: tuple[int, ...]
    diffs: tuple
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        if len(self.diffs) != max(len(ranks) - 1, 0):
            raise ValueError("need exactly one differential between consecutive degrees")
        diffs = tuple(_freeze(d) for d in self.diffs)
        object.__setattr__(self, "diffs", diffs)
        for k, d in enumerate(diffs):
            if len(d) != ranks[k + 1] or any(len(row) != ranks[k] for row in d):
                raise ValueError(
                    f"differential in degree {self.start + k} has wrong shape "
                    f"(expected {ranks[k + 1]}x{ranks[k]})"
                )
        for k in range(len(diffs) - 1):
            prod_ = matmul(diffs[k + 1], diffs[k], ranks[k])
            if any(any(row) for row in prod_):
                raise ValueError(f"d o d != 0 starting in degree {self.start + k}")
        if self.labels is not None:
            labels = tuple(tuple(str(x) for x in lab) for lab in self.labels)
            if len(labels) != len(ranks) or any(len(l) != r for l, r in zip(labels, ranks)):
                raise ValueError("labels do not match ranks")
            object.__setattr__(self, "labels", labels)

    @property
    def end(self) -> int:
        return self.start + len(self.ranks) - 1

    @property
    def degrees(self) -> range:
        return range(self.start, self.end + 1)

    def rank(self, n: int) -> int:
        k = n - self.start
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def differential(self, n: int) -> tuple:
        k = n - self.start
        if 0 <= k < len(self.diffs):
            return self.diffs[k]
        return tuple((0,) * self.rank(n) for _ in range(self.rank(n + 1)))

    def cohomology(self, n: int) -> CohomologyGroup:
        return cohomology(self, n)

    def cohomology_all(self) -> dict[int, CohomologyGroup]:
        divs = {n: elementary_divisors(self.differential(n), self.rank(n))
                for n in range(self.start - 1, self.end + 1)}
        return {n: _cohomology_from(self.rank(n), divs[n], divs[n - 1]) for n in self.degrees}

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.rank(n) for n in self.degrees)


def _cohomology_from(rank_n: int, div_out: list[int], div_in: list[int]) -> CohomologyGroup:
    free = rank_n - len(div_out) - len(div_in)
    return CohomologyGroup(free, tuple(d for d in div_in if d > 1))


def cohomology(c: ZComplex, n: int) -> CohomologyGroup:
    """``ker d_n / im d_{n-1}`` as free rank plus invariant factors."""
    out = elementary_divisors(c.differential(n), c.rank(n))
    inc = elementary_divisors(c.differential(n - 1), c.rank(n - 1))
    return _cohomology_from(c.rank(n), out, inc)


def single_group_complex(rank: int = 1, degree: int = 0) -> ZComplex:
    return ZComplex(degree, (rank,), ())


def mod_resolution(m: int) -> ZComplex:
    """Free resolution ``Z --m--> Z`` of ``Z/m`` in degrees -1, 0."""
    return ZComplex(-1, (1, 1), (((m,),),))


def tensor_product(c1: ZComplex, c2: ZComplex) -> ZComplex:
    """Total complex of ``c1 (x) c2`` with the Koszul sign ``(-1)^a`` on ``d2``.

    The basis in total degree ``n`` is ordered by the degree ``a`` of the
    first factor, then row-major in ``(i, j)``.
    """
    start = c1.start + c2.start
    end = c1.end + c2.end
    blocks: dict[int, list[tuple[int, int]]] = {}
    offsets: dict[int, dict[int, int]] = {}
    ranks = []
    labels = [] if (c1.labels is not None and c2.labels is not None) else None
    for n in range(start, end + 1):
        off = {}
        total = 0
        labs = []
        for a in c1.degrees:
            b = n - a
            if b in c2.degrees:
                off[a] = total
                total += c1.rank(a) * c2.rank(b)
                if labels is not None:
                    la = c1.labels[a - c1.start]
                    lb = c2.labels[b - c2.start]
                    labs.extend(f"{x}*{y}" for x in la for y in lb)
        offsets[n] = off
        ranks.append(total)
        if labels is not None:
            labels.append(labs)
    diffs = []
    for n in range(start, end):
        d = zeros(ranks[n + 1 - start], ranks[n - start])
        for a, base in offsets[n].items():
            b = n - a
            r1, r2 = c1.rank(a), c2.rank(b)
            # d1 (x) 1
            if a + 1 in offsets[n + 1]:
                tb = offsets[n + 1][a + 1]
                d1 = c1.differential(a)
                for i2 in range(c1.rank(a + 1)):
                    row = d1[i2]
                    for i1, v in enumerate(row):
                        if v:
                            for j in range(r2):
                                d[tb + i2 * r2 + j][base + i1 * r2 + j] += v
            # (-1)^a 1 (x) d2
            if a in offsets[n + 1]:
                tb = offsets[n + 1][a]
                d2 = c2.differential(b)
                sign = -1 if a % 2 else 1
                r2n = c2.rank(b + 1)
                for j2 in range(r2n):
                    row = d2[j2]
                    for j1, v in enumerate(row):
                        if v:
                            for i in range(r1):
                                d[tb + i * r2n + j2][base + i * r2 + j1] += sign * v
        diffs.append(d)
    return ZComplex(start, tuple(ranks), tuple(diffs), labels)


def tensor_with_coefficients(c: ZComplex, a: CoefficientGroup | CohomologyGroup) -> dict[int, CohomologyGroup]:
    """Cohomology of ``c (x) a`` in every degree of ``c``.

    Computed directly (one Smith form per cyclic factor of ``a``, using the
    total complex with a two-term resolution for ``Z/m``) and again through
    the universal coefficient formula; the two answers must agree.
    """
    orders = a.cyclic_orders()
    integral = c.cohomology_all()
    direct: dict[int, list[int]] = {n: [] for n in c.degrees}
    for o in orders:
        if o == 0:
            for n in c.degrees:
                direct[n].extend(integral[n].cyclic_orders())
        else:
            tot = tensor_product(c, mod_resolution(o)).cohomology_all()
            for n in c.degrees:
                direct[n].extend(tot[n].cyclic_orders())
    direct_groups = {n: CohomologyGroup.from_cyclic(v) for n, v in direct.items()}
    coeff = CohomologyGroup.from_cyclic(orders)
    for n in c.degrees:
        nxt = integral.get(n + 1, TRIVIAL)
        uct = integral[n].tensor(coeff) + nxt.tor(coeff)
        if uct != direct_groups[n]:
            raise AssertionError(
                f"coefficient change disagrees in degree {n}: direct {direct_groups[n]}, UCT {uct}"
            )
    return direct_groups


def _circle_face(t: int, i: int, n: int) -> int | None:
    """Face ``d_i`` of the nonbase simplex ``t`` of ``S^1_n``; None means basepoint."""
    t2 = t - 1 if i < t else t
    return None if t2 == 0 or t2 == n else t2


def reduced_circle_complex(length: int) -> ZComplex:
    """Reduced cochains of the simplicial circle in degrees ``0..length``.

    ``S^1_n`` has the basepoint plus the nonbase simplices ``t = 1..n`` (a
    monotone map ``[n] -> [1]`` sending exactly ``t`` points to 0).  Cochains
    vanishing at the basepoint form a complement to the constants, so degree
    ``p`` has rank ``p``.
    """
    if length < 2:
        raise ValueError("circle complex needs length >= 2")
    ranks = tuple(range(length + 1))
    diffs = []
    for n in range(length):
        d = zeros(n + 1, n)
        for s in range(1, n + 2):  # simplex of S^1_{n+1}
            for i in range(n + 2):
                f = _circle_face(s, i, n + 1)
                if f is not None:
                    d[s - 1][f - 1] += -1 if i % 2 else 1
        diffs.append(d)
    labels = tuple(tuple(f"t{t}" for t in range(1, p + 1)) for p in ranks)
    return ZComplex(0, ranks, tuple(diffs), labels)


def direct_sum(complexes: Sequence[ZComplex]) -> ZComplex:
    """Block direct sum of complexes over their common degree span."""
    if not complexes:
        raise ValueError("empty direct sum")
    start = min(c.start for c in complexes)
    end = max(c.end for c in complexes)
    ranks = [sum(c.rank(n) for c in complexes) for n in range(start, end + 1)]
    diffs = []
    for n in range(start, end):
        d = zeros(ranks[n + 1 - start], ranks[n - start])
        ro = co = 0
        for c in complexes:
            m = c.differential(n)
            for i, row in enumerate(m):
                for j, v in enumerate(row):
                    if v:
                        d[ro + i][co + j] = v
            ro += c.rank(n + 1)
            co += c.rank(n)
        diffs.append(d)
    return ZComplex(start, tuple(ranks), tuple(diffs))


# ---------------------------------------------------------------------------
# sparse text format
# ---------------------------------------------------------------------------


def format_zmatrix(m: Matrix, nrows: int, ncols: int) -> str:
    entries = [(i, j, v) for i, row in enumerate(m) for j, v in enumerate(row) if v]
    lines = [f"zmatrix {nrows} {ncols} {len(entries)}"]
    lines.extend(f"{i} {j} {v}" for i, j, v in entries)
    return "\n".join(lines) + "\n"


def parse_zmatrix(text: str) -> tuple[list[list[int]], int, int]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty zmatrix")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "zmatrix":
        raise ValueError(f"bad zmatrix header {lines[0]!r}")
    nrows, ncols, nnz = map(int, head[1:])
    if len(lines) - 1 != nnz:
        raise ValueError(f"header announces {nnz} entries, found {len(lines) - 1}")
    m = zeros(nrows, ncols)
    last = (-1, -1)
    for ln in lines[1:]:
        i, j, v = map(int, ln.split())
        if not (0 <= i < nrows and 0 <= j < ncols):
            raise ValueError(f"entry ({i}, {j}) out of range")
        if (i, j) <= last:
            raise ValueError("entries must be in ascending row-major order")
        last = (i, j)
        m[i][j] = v
    return m, nrows, ncols


def atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def export_complex(c: ZComplex, outdir: str | os.PathLike, meta: dict | None = None) -> Path:
    """Write one zmatrix file per differential plus ``manifest.json``."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for n in range(c.start, c.end):
        name = f"d{n}.zmatrix"
        atomic_write(out / name, format_zmatrix(c.differential(n), c.rank(n + 1), c.rank(n)))
        files.append({"degree": n, "file": name})
    manifest = dict(meta or {})
    manifest.update({
        "schema": 1,
        "start": c.start,
        "degrees": list(c.degrees),
        "ranks": list(c.ranks),
        "labels": [list(l) for l in c.labels] if c.labels is not None else None,
        "differentials": files,
    })
    path = out / "manifest.json"
    atomic_write(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def load_complex(outdir: str | os.PathLike) -> ZComplex:
    out = Path(outdir)
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    diffs = []
    for entry in sorted(manifest["differentials"], key=lambda e: e["degree"]):
        m, _, _ = parse_zmatrix((out / entry["file"]).read_text(encoding="utf-8"))
        diffs.append(m)
    return ZComplex(manifest["start"], tuple(manifest["ranks"]), tuple(diffs), manifest["labels"])


def exterior_rank(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
