"""W-invariant quadratic and cubic forms on cocharacter lattices.

Forms live on ``Y = Y_der + Y_0`` written in the basis
``alpha_1^vee .. alpha_n^vee, e_1 .. e_r`` (or on ``Y_der`` alone when
``restrict="derived"``).  Each lattice of invariants is computed twice:

* from finite conditions on basis vectors (the primary route), and
* from the polynomial identity ``F(s_k y) = F(y)`` (the oracle route).

Both are integer kernels, so the resulting bases are saturated lattices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Sequence

from .rootdata import GroupSpec
from .zchain import CohomologyGroup, hermite_rows, integer_kernel

DERIVED = "derived"
FULL = "full"


def _dim(spec: GroupSpec, restrict: str) -> int:
    if restrict == DERIVED:
        return spec.derived_rank
    if restrict == FULL:
        return spec.total_rank
    raise ValueError(f"restrict must be 'derived' or 'full', not {restrict!r}")


def basis_labels(spec: GroupSpec, restrict: str = FULL) -> list[str]:
    labels = [f"a{i}" for i in range(spec.derived_rank)]
    if restrict == FULL:
        labels += [f"e{c}" for c in range(spec.torus_rank)]
    return labels


def root_on_basis(spec: GroupSpec, k: int, b: int) -> int:
    """``alpha_k(b-th basis vector)``; zero on the central part."""
    return spec.cartan[b][k] if b < spec.derived_rank else 0


# ---------------------------------------------------------------------------
# polynomials (dicts from sorted index tuples to coefficients)
# ---------------------------------------------------------------------------


def reflection_forms(spec: GroupSpec, k: int, dim: int) -> list[dict[int, int]]:
    """Coordinates of ``s_k(y)`` as linear forms in ``y``."""
    forms = [{b: 1} for b in range(dim)]
    col = {j: -root_on_basis(spec, k, j) for j in range(dim) if root_on_basis(spec, k, j)}
    col[k] = col.get(k, 0) + 1
    forms[k] = {j: v for j, v in col.items() if v}
    return forms


def compose(poly: dict[tuple[int, ...], int], forms: Sequence[dict[int, int]]) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    for mono, c in poly.items():
        terms = {(): c}
        for var in mono:
            nxt: dict[tuple[int, ...], int] = {}
            for key, v in terms.items():
                for j, w in forms[var].items():
                    nk = tuple(sorted(key + (j,)))
                    nxt[nk] = nxt.get(nk, 0) + v * w
            terms = nxt
        for key, v in terms.items():
            out[key] = out.get(key, 0) + v
    return {k: v for k, v in out.items() if v}


def evaluate_polynomial(poly: dict[tuple[int, ...], int], y: Sequence[int]) -> int:
    total = 0
    for mono, c in poly.items():
        t = c
        for var in mono:
            t *= y[var]
        total += t
    return total


def _oracle_kernel(spec: GroupSpec, dim: int, degree: int) -> list[list[int]]:
    """Invariant polynomials of a given degree via ``F o s_k - F = 0``."""
    monos = list(combinations_with_replacement(range(dim), degree))
    rows: dict[tuple, list[int]] = {}
    for k in range(spec.derived_rank):
        forms = reflection_forms(spec, k, dim)
        for col, m in enumerate(monos):
            diff = compose({m: 1}, forms)
            diff[m] = diff.get(m, 0) - 1
            for key, v in diff.items():
                if v:
                    rows.setdefault((k, key), [0] * len(monos))[col] += v
    system = [rows[key] for key in sorted(rows)]
    return integer_kernel(system, len(monos))


# ---------------------------------------------------------------------------
# quadratic forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticFormW:
    """Upper-triangular bilinear form ``C``; the quadratic form is ``C(y, y)``."""

    C: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.C)

    def bilinear(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(x[i] * self.C[i][j] * y[j] for i in range(self.dim) for j in range(self.dim) if self.C[i][j])

    def __call__(self, y: Sequence[int]) -> int:
        return self.bilinear(y, y)

    def polynomial(self) -> dict[tuple[int, ...], int]:
        return {(i, j): self.C[i][j] for i in range(self.dim) for j in range(i, self.dim) if self.C[i][j]}

    def polar(self, x: Sequence[int], y: Sequence[int]) -> int:
        return self(tuple(a + b for a, b in zip(x, y))) - self(x) - self(y)

    def to_dict(self) -> dict:
        return {"C": [list(r) for r in self.C], "labels": list(self.labels)}

    @classmethod
    def from_dict(cls, d: dict) -> "QuadraticFormW":
        return cls(tuple(tuple(r) for r in d["C"]), tuple(d.get("labels", ())))


def _quad_unknowns(dim: int) -> list[tuple[int, int]]:
    return list(combinations_with_replacement(range(dim), 2))


def quadratic_system(spec: GroupSpec, dim: int) -> list[list[int]]:
    """``C(e_b, alpha_k^vee) + C(alpha_k^vee, s_k e_b) = 0`` for ``b != k``.

    With ``s_k e_b = e_b - alpha_k(e_b) alpha_k^vee`` this reads
    ``c(b,k) + c(k,b) - alpha_k(e_b) c(k,k) = 0`` for an upper-triangular ``c``.
    """
    unknowns = _quad_unknowns(dim)
    pos = {u: i for i, u in enumerate(unknowns)}
    rows = []
    for k in range(spec.derived_rank):
        for b in range(dim):
            if b == k:
                continue
            row = [0] * len(unknowns)
            row[pos[tuple(sorted((b, k)))]] += 1
            row[pos[(k, k)]] -= root_on_basis(spec, k, b)
            rows.append(row)
    return rows


def _quad_from_vector(v: Sequence[int], dim: int, labels) -> QuadraticFormW:
    C = [[0] * dim for _ in range(dim)]
    for (i, j), c in zip(_quad_unknowns(dim), v):
        C[i][j] = c
    return QuadraticFormW(tuple(tuple(r) for r in C), tuple(labels))


def quadratic_invariant_basis(spec: GroupSpec, restrict: str = DERIVED) -> list[QuadraticFormW]:
    dim = _dim(spec, restrict)
    n_unk = len(_quad_unknowns(dim))
    kernel = integer_kernel(quadratic_system(spec, dim), n_unk) if n_unk else []
    labels = basis_labels(spec, restrict)
    return [_quad_from_vector(v, dim, labels) for v in kernel]


def quadratic_oracle_basis(spec: GroupSpec, restrict: str = DERIVED) -> list[list[int]]:
    """Oracle lattice in the same coordinates as the primary route."""
    dim = _dim(spec, restrict)
    if dim == 0:
        return []
    return _oracle_kernel(spec, dim, 2)


def quadratic_coordinates(q: QuadraticFormW) -> list[int]:
    return [q.C[i][j] for i, j in _quad_unknowns(q.dim)]


def check_quadratic_form(spec: GroupSpec, q: QuadraticFormW) -> None:
    """Closedness on all (derived index, basis vector) pairs."""
    for k in range(spec.derived_rank):
        ek = [1 if t == k else 0 for t in range(q.dim)]
        for b in range(q.dim):
            eb = [1 if t == b else 0 for t in range(q.dim)]
            sb = list(eb)
            sb[k] -= root_on_basis(spec, k, b)
            if q.bilinear(eb, ek) + q.bilinear(ek, sb):
                raise AssertionError(f"closedness fails at (b={b}, k={k})")


# ---------------------------------------------------------------------------
# cubic forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubicFormW:
    """A cubic form given by ``C(e_i)``, ``B(e_i, e_j)`` (``i != j``) and
    ``T(e_i, e_j, e_k)`` (``i < j < k``).

    Here ``B(x, y)`` is the derivative of ``C`` at ``x`` in direction ``y``
    and ``T`` the full polarization, so ``C(x + y) = C(x) + C(y) + B(x, y)
    + B(y, x)``, ``B(x + y, z) = B(x, z) + B(y, z) + T(x, y, z)``,
    ``B(x, x) = 3 C(x)`` and ``T(x, x, y) = 2 B(x, y)``.
    """

    Cdiag: tuple[int, ...]
    B: tuple[tuple[int, ...], ...]
    T: tuple[tuple[int, int, int, int], ...] = ()
    labels: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.Cdiag)

    def t_value(self, i: int, j: int, k: int) -> int:
        """``T`` on arbitrary basis triples (repeats via the B/T relations)."""
        i, j, k = sorted((i, j, k))
        if i == j == k:
            return 6 * self.Cdiag[i]
        if i == j:
            return 2 * self.B[i][k]
        if j == k:
            return 2 * self.B[j][i]
        return self._tmap.get((i, j, k), 0)

    @property
    def _tmap(self) -> dict[tuple[int, int, int], int]:
        return {(i, j, k): v for i, j, k, v in self.T}

    def b_value(self, i: int, j: int) -> int:
        return 3 * self.Cdiag[i] if i == j else self.B[i][j]

    def polynomial(self) -> dict[tuple[int, ...], int]:
        poly = {}
        for i, c in enumerate(self.Cdiag):
            if c:
                poly[(i, i, i)] = c
        for i in range(self.dim):
            for j in range(self.dim):
                if i != j and self.B[i][j]:
                    poly[tuple(sorted((i, i, j)))] = self.B[i][j]
        for i, j, k, v in self.T:
            if v:
                poly[(i, j, k)] = v
        return poly

    def to_dict(self) -> dict:
        return {
            "Cdiag": list(self.Cdiag),
            "B": [list(r) for r in self.B],
            "T": [list(t) for t in self.T],
            "labels": list(self.labels),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CubicFormW":
        return cls(tuple(d["Cdiag"]), tuple(tuple(r) for r in d["B"]),
                   tuple(tuple(t) for t in d["T"]), tuple(d.get("labels", ())))


def _cubic_unknowns(dim: int) -> list[tuple[int, int, int]]:
    return list(combinations_with_replacement(range(dim), 3))


def cubic_system(spec: GroupSpec, dim: int) -> list[list[int]]:
    """Finite conditions for ``C(s_k y) = C(y)``, one block per simple ``k``:

    * ``C(alpha_k^vee) = 0``;
    * ``B(e_b, alpha_k^vee) = alpha_k(e_b) B(alpha_k^vee, e_b)`` for ``b != k``;
    * ``T(e_b, e_c, alpha_k^vee) = alpha_k(e_b) B(alpha_k^vee, e_c)
      + alpha_k(e_c) B(alpha_k^vee, e_b)`` for ``b < c``, both ``!= k``.

    Unknowns are monomial coefficients: ``C(e_i)`` is the ``y_i^3``
    coefficient, ``B(e_i, e_j)`` the ``y_i^2 y_j`` one and ``T`` on distinct
    triples the ``y_i y_j y_k`` one.
    """
    unknowns = _cubic_unknowns(dim)
    pos = {u: i for i, u in enumerate(unknowns)}

    def B(i, j):
        return pos[tuple(sorted((i, i, j)))]

    def T(i, j, k):
        return pos[tuple(sorted((i, j, k)))]

    rows = []
    for k in range(spec.derived_rank):
        row = [0] * len(unknowns)
        row[pos[(k, k, k)]] = 1
        rows.append(row)
        for b in range(dim):
            if b == k:
                continue
            row = [0] * len(unknowns)
            row[B(b, k)] += 1
            row[B(k, b)] -= root_on_basis(spec, k, b)
            rows.append(row)
        others = [b for b in range(dim) if b != k]
        for b, c in combinations(others, 2):
            row = [0] * len(unknowns)
            row[T(b, c, k)] += 1
            row[B(k, c)] -= root_on_basis(spec, k, b)
            row[B(k, b)] -= root_on_basis(spec, k, c)
            rows.append(row)
    return rows


def _cubic_from_vector(v: Sequence[int], dim: int, labels) -> CubicFormW:
    Cdiag = [0] * dim
    B = [[0] * dim for _ in range(dim)]
    T = []
    for (i, j, k), c in zip(_cubic_unknowns(dim), v):
        if i == j == k:
            Cdiag[i] = c
        elif i == j:
            B[i][k] = c
        elif j == k:
            B[j][i] = c
        else:
            T.append((i, j, k, c))
    return CubicFormW(tuple(Cdiag), tuple(tuple(r) for r in B), tuple(T), tuple(labels))


def cubic_coordinates(f: CubicFormW) -> list[int]:
    poly = f.polynomial()
    return [poly.get(u, 0) for u in _cubic_unknowns(f.dim)]


def cubic_invariant_basis(spec: GroupSpec, restrict: str = DERIVED) -> list[CubicFormW]:
    dim = _dim(spec, restrict)
    if dim == 0:
        return []
    kernel = integer_kernel(cubic_system(spec, dim), len(_cubic_unknowns(dim)))
    labels = basis_labels(spec, restrict)
    return [_cubic_from_vector(v, dim, labels) for v in kernel]


def cubic_oracle_basis(spec: GroupSpec, restrict: str = DERIVED) -> list[list[int]]:
    dim = _dim(spec, restrict)
    if dim == 0:
        return []
    return _oracle_kernel(spec, dim, 3)


def evaluate_cubic(f: CubicFormW, y: Sequence[int], order: Sequence[int] | None = None) -> int:
    """``C(y)`` by adding one basis direction at a time.

    ``C(u + m e_c) = C(u) + m^3 C(e_c) + m B(u, e_c) + m^2 B(e_c, u)`` where
    ``B(u, e_c)`` is expanded by ``B(x + y, z) = B(x, z) + B(y, z) + T(x, y, z)``
    and ``B(e_c, -)`` is linear.  ``order`` permutes the directions.
    """
    if len(y) != f.dim:
        raise ValueError(f"vector of length {len(y)} for a form on rank {f.dim}")
    if order is None:
        order = range(f.dim)
    total = 0
    done: list[int] = []
    for c in order:
        m = y[c]
        if not m:
            continue
        b_u_ec = 0
        for idx, b in enumerate(done):
            ub = y[b]
            b_u_ec += ub * ub * f.b_value(b, c)
            for d in done[idx + 1:]:
                b_u_ec += ub * y[d] * f.t_value(b, d, c)
        b_ec_u = sum(y[b] * f.b_value(c, b) for b in done)
        total += m ** 3 * f.Cdiag[c] + m * b_u_ec + m * m * b_ec_u
        done.append(c)
    return total


def cubic_b(f: CubicFormW, x: Sequence[int], y: Sequence[int]) -> int:
    """``B(x, y)`` for arbitrary vectors, from the basis data."""
    total = 0
    for i in range(f.dim):
        if not x[i]:
            continue
        for j in range(f.dim):
            if y[j]:
                total += x[i] * x[i] * y[j] * f.b_value(i, j)
    for i in range(f.dim):
        for k in range(i + 1, f.dim):
            if x[i] and x[k]:
                for j in range(f.dim):
                    if y[j]:
                        total += x[i] * x[k] * y[j] * f.t_value(i, k, j)
    return total


def check_cubic_form(spec: GroupSpec, f: CubicFormW) -> None:
    """Re-check the finite invariance conditions on one form."""
    dim = f.dim
    for k in range(spec.derived_rank):
        if f.Cdiag[k]:
            raise AssertionError(f"C(alpha_{k}^vee) = {f.Cdiag[k]}")
        for b in range(dim):
            if b != k and f.B[b][k] != root_on_basis(spec, k, b) * f.B[k][b]:
                raise AssertionError(f"B condition fails at (b={b}, k={k})")
        for b, c in combinations([t for t in range(dim) if t != k], 2):
            lhs = f.t_value(b, c, k)
            rhs = root_on_basis(spec, k, b) * f.B[k][c] + root_on_basis(spec, k, c) * f.B[k][b]
            if lhs != rhs:
                raise AssertionError(f"T condition fails at ({b}, {c}, {k})")


def same_lattice(u: Sequence[Sequence[int]], v: Sequence[Sequence[int]]) -> bool:
    return hermite_rows(u) == hermite_rows(v)


def count_type_a(spec: GroupSpec, min_rank: int = 2) -> int:
    return sum(1 for f in spec.factors if f.family == "A" and f.rank >= min_rank)


def expected_cubic_rank(spec: GroupSpec, restrict: str = DERIVED) -> int:
    base = count_type_a(spec)
    if restrict == DERIVED:
        return base
    r = spec.torus_rank
    return base + spec.num_factors * r + comb(r + 2, 3)


def expected_quadratic_rank(spec: GroupSpec, restrict: str = DERIVED) -> int:
    if restrict == DERIVED:
        return spec.num_factors
    r = spec.torus_rank
    return spec.num_factors + comb(r + 1, 2)


def quadlin_space(spec: GroupSpec) -> CohomologyGroup:
    """``Quad_W(Y_der) (x) X_0``: free of rank (#simple factors) * r."""
    return CohomologyGroup(spec.num_factors * spec.torus_rank)
