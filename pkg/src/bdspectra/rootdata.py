"""Root data for products of simply-connected simple groups and a split torus.

Conventions (see docs/conventions.md):

* simple roots are numbered from 0, following Bourbaki's order per family;
* ``a[i][j] = alpha_j(alpha_i^vee)``;
* characters are written in the basis ``omega_1..omega_n, eps_1..eps_r``
  (fundamental weights, then the torus), cocharacters in the basis
  ``alpha_1^vee..alpha_n^vee, e_1..e_r``; the pairing is the dot product.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from math import factorial
from typing import Sequence

FAMILIES = "ABCDEFG"

_ADMISSIBLE = {
    "A": ("n >= 1", lambda n: n >= 1),
    "B": ("n >= 2", lambda n: n >= 2),
    "C": ("n >= 2", lambda n: n >= 2),
    "D": ("n >= 4", lambda n: n >= 4),
    "E": ("n in {6, 7, 8}", lambda n: n in (6, 7, 8)),
    "F": ("n = 4", lambda n: n == 4),
    "G": ("n = 2", lambda n: n == 2),
}

_RANGE_TEXT = {"A": "rank ≥ 1", "B": "rank ≥ 2", "C": "rank ≥ 2", "D": "rank ≥ 4",
               "E": "rank 6, 7 or 8", "F": "rank 4", "G": "rank 2"}


class SpecError(ValueError):
    """Malformed or inadmissible group specification."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family.upper()
        if fam not in _ADMISSIBLE:
            raise SpecError(f"unknown family {self.family!r}")
        if not isinstance(self.rank, int) or not _ADMISSIBLE[fam][1](self.rank):
            raise SpecError(f"{fam} requires {_RANGE_TEXT[fam]}")
        if fam == "C" and self.rank == 2:
            fam = "B"
        object.__setattr__(self, "family", fam)

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    def cartan(self) -> list[list[int]]:
        return _cartan_simple(self.family, self.rank)

    @property
    def positive_roots(self) -> int:
        n = self.rank
        return {
            "A": n * (n + 1) // 2, "B": n * n, "C": n * n, "D": n * (n - 1),
            "E": {6: 36, 7: 63, 8: 120}.get(n, 0), "F": 24, "G": 6,
        }[self.family]

    @property
    def weyl_order(self) -> int:
        n = self.rank
        return {
            "A": factorial(n + 1),
            "B": 2 ** n * factorial(n),
            "C": 2 ** n * factorial(n),
            "D": 2 ** (n - 1) * factorial(n),
            "E": {6: 51840, 7: 2903040, 8: 696729600}.get(n, 0),
            "F": 1152,
            "G": 12,
        }[self.family]


def _cartan_simple(family: str, n: int) -> list[list[int]]:
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j):
        a[i][j] = a[j][i] = -1

    if family in "ABCD":
        for i in range(n - 1 if family != "D" else n - 2):
            bond(i, i + 1)
        if family == "B":
            a[n - 1][n - 2] = -2  # alpha_n short
        elif family == "C":
            a[n - 2][n - 1] = -2  # alpha_n long
        elif family == "D":
            bond(n - 3, n - 1)
    elif family == "E":
        bond(0, 2)
        bond(1, 3)
        for i in range(2, n - 1):
            bond(i, i + 1)
    elif family == "F":
        bond(0, 1)
        bond(2, 3)
        a[1][2] = -1
        a[2][1] = -2  # alpha_3 short
    elif family == "G":
        a[0][1] = -3  # alpha_1 short
        a[1][0] = -1
    return a


@dataclass(frozen=True)
class GroupSpec:
    """``(prod_i G_i) x T^r`` with every ``G_i`` simply connected."""

    factors: tuple[SimpleType, ...] = ()
    torus_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.torus_rank < 0:
            raise SpecError("torus rank must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        return parse_spec(text)

    @property
    def derived_rank(self) -> int:
        return sum(f.rank for f in self.factors)

    @property
    def total_rank(self) -> int:
        return self.derived_rank + self.torus_rank

    @property
    def derived(self) -> "GroupSpec":
        return GroupSpec(self.factors, 0)

    @property
    def num_factors(self) -> int:
        return len(self.factors)

    @property
    def is_semisimple(self) -> bool:
        return self.torus_rank == 0

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        n = self.derived_rank
        a = [[0] * n for _ in range(n)]
        off = 0
        for f in self.factors:
            for i, row in enumerate(f.cartan()):
                for j, v in enumerate(row):
                    a[off + i][off + j] = v
            off += f.rank
        return tuple(tuple(r) for r in a)

    def factor_of(self, i: int) -> int:
        off = 0
        for k, f in enumerate(self.factors):
            if i < off + f.rank:
                return k
            off += f.rank
        raise IndexError(i)

    @property
    def positive_roots(self) -> int:
        return sum(f.positive_roots for f in self.factors)

    @property
    def weyl_order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.weyl_order
        return out

    def orthogonal(self, i: int, j: int) -> bool:
        return self.cartan[i][j] == 0

    def __str__(self) -> str:
        parts = [str(f) for f in self.factors]
        if self.torus_rank:
            parts.append(f"T{self.torus_rank}")
        return "x".join(parts) if parts else "T0"


_FACTOR = re.compile(r"([A-Ga-gTt])(\d+)")


def parse_spec(text: str) -> GroupSpec:
    """Parse ``Factor ("x" Factor)*``, e.g. ``A2xB3xT2`` (case-insensitive).

    Torus factors add up; ``T0`` is accepted and contributes nothing.
    """
    if not isinstance(text, str) or not text:
        raise SpecError("empty group specification", 0)
    for pos, ch in enumerate(text):
        if ch.isspace():
            raise SpecError("whitespace is not allowed in a group specification", pos)
    factors = []
    torus = 0
    pos = 0
    while True:
        m = _FACTOR.match(text, pos)
        if m is None:
            if pos < len(text) and text[pos].isalpha():
                raise SpecError(f"unknown family {text[pos]!r}; expected one of A-G or T", pos)
            raise SpecError("expected a factor such as A2 or T1", pos)
        fam, rank = m.group(1).upper(), int(m.group(2))
        if fam == "T":
            torus += rank
        else:
            try:
                factors.append(SimpleType(fam, rank))
            except SpecError as e:
                raise SpecError(str(e), pos) from None
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] not in "xX":
            raise SpecError(f"expected 'x' between factors, found {text[pos]!r}", pos)
        pos += 1
        if pos == len(text):
            raise SpecError("dangling 'x' at end of specification", pos)
    return GroupSpec(tuple(factors), torus)


def cartan_matrix(spec: GroupSpec) -> list[list[int]]:
    """Block-diagonal Cartan matrix of the derived part."""
    return [list(r) for r in spec.cartan]


def check_cartan(a: Sequence[Sequence[int]]) -> None:
    n = len(a)
    for i in range(n):
        if a[i][i] != 2:
            raise AssertionError(f"diagonal entry a[{i}][{i}] = {a[i][i]}")
        for j in range(n):
            if i == j:
                continue
            if a[i][j] not in (0, -1, -2, -3):
                raise AssertionError(f"a[{i}][{j}] = {a[i][j]}")
            if (a[i][j] == 0) != (a[j][i] == 0):
                raise AssertionError(f"zero pattern not symmetric at ({i}, {j})")
            if a[i][j] * a[j][i] not in (0, 1, 2, 3):
                raise AssertionError(f"a[{i}][{j}]*a[{j}][{i}] out of range")


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

CHARACTER = "character"
COCHARACTER = "cocharacter"


@dataclass(frozen=True)
class LatticeVector:
    side: str
    coords: tuple[int, ...]

    def __post_init__(self):
        if self.side not in (CHARACTER, COCHARACTER):
            raise ValueError(f"unknown lattice side {self.side!r}")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        _same(self, other)
        return LatticeVector(self.side, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        _same(self, other)
        return LatticeVector(self.side, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, k: int) -> "LatticeVector":
        return LatticeVector(self.side, tuple(k * a for a in self.coords))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.side, tuple(-a for a in self.coords))


def _same(u, v):
    if u.side != v.side or len(u.coords) != len(v.coords):
        raise ValueError("lattice vectors live in different lattices")


def character(spec: GroupSpec, coords: Sequence[int]) -> LatticeVector:
    if len(coords) != spec.total_rank:
        raise ValueError(f"expected {spec.total_rank} coordinates, got {len(coords)}")
    return LatticeVector(CHARACTER, tuple(coords))


def cocharacter(spec: GroupSpec, coords: Sequence[int]) -> LatticeVector:
    if len(coords) != spec.total_rank:
        raise ValueError(f"expected {spec.total_rank} coordinates, got {len(coords)}")
    return LatticeVector(COCHARACTER, tuple(coords))


def unit(n: int, k: int) -> tuple[int, ...]:
    return tuple(1 if i == k else 0 for i in range(n))


def fundamental_weight(spec: GroupSpec, i: int) -> LatticeVector:
    return character(spec, unit(spec.total_rank, i))


def simple_coroot(spec: GroupSpec, i: int) -> LatticeVector:
    _check_root_index(spec, i)
    return cocharacter(spec, unit(spec.total_rank, i))


def simple_root(spec: GroupSpec, i: int) -> LatticeVector:
    """``alpha_i`` in the weight basis: column ``i`` of the Cartan matrix."""
    _check_root_index(spec, i)
    a = spec.cartan
    n = spec.derived_rank
    return character(spec, tuple(a[k][i] for k in range(n)) + (0,) * spec.torus_rank)


def pairing(x: LatticeVector, y: LatticeVector) -> int:
    if x.side != CHARACTER or y.side != COCHARACTER:
        raise ValueError("pairing takes (character, cocharacter)")
    if len(x.coords) != len(y.coords):
        raise ValueError("dimension mismatch in pairing")
    return sum(a * b for a, b in zip(x.coords, y.coords))


def _check_root_index(spec: GroupSpec, i: int) -> None:
    if not 0 <= i < spec.derived_rank:
        raise IndexError(f"simple root index {i} out of range 0..{spec.derived_rank - 1}")


def root_value(a: Sequence[Sequence[int]], i: int, y: Sequence[int]) -> int:
    """``alpha_i(y)`` for ``y`` in coroot coordinates (central part ignored)."""
    return sum(a[j][i] * y[j] for j in range(len(a)))


def reflect_cocharacter(a: Sequence[Sequence[int]], i: int, y: Sequence[int]) -> tuple[int, ...]:
    """``s_i(y) = y - alpha_i(y) alpha_i^vee``."""
    c = root_value(a, i, y)
    out = list(y)
    out[i] -= c
    return tuple(out)


def reflect_character(a: Sequence[Sequence[int]], i: int, x: Sequence[int]) -> tuple[int, ...]:
    """``s_i(x) = x - x(alpha_i^vee) alpha_i``."""
    c = x[i]
    out = list(x)
    for k in range(len(a)):
        out[k] -= c * a[k][i]
    return tuple(out)


def simple_reflection_action(spec: GroupSpec, i: int, v: LatticeVector) -> LatticeVector:
    _check_root_index(spec, i)
    if len(v.coords) != spec.total_rank:
        raise ValueError("vector does not belong to this group")
    a = spec.cartan
    if v.side == COCHARACTER:
        return LatticeVector(COCHARACTER, reflect_cocharacter(a, i, v.coords))
    return LatticeVector(CHARACTER, reflect_character(a, i, v.coords))


# ---------------------------------------------------------------------------
# subdiagrams
# ---------------------------------------------------------------------------

_PATTERNS = {
    "G2": _cartan_simple("G", 2),
    "B3": _cartan_simple("B", 3),
    "D4": _cartan_simple("D", 4),
}


def _matches(a, nodes, pattern) -> bool:
    k = len(nodes)
    for perm in permutations(nodes):
        if all(a[perm[i]][perm[j]] == pattern[i][j] for i in range(k) for j in range(k)):
            return True
    return False


def nbdg_subdiagrams(spec: GroupSpec) -> list[tuple[str, tuple[int, ...]]]:
    """Node subsets whose induced Cartan submatrix is a permuted G2, B3 or D4."""
    a = spec.cartan
    found = []
    off = 0
    for f in spec.factors:
        nodes = range(off, off + f.rank)
        for name, pat in _PATTERNS.items():
            k = len(pat)
            for sub in combinations(nodes, k):
                if _matches(a, sub, pat):
                    found.append((name, sub))
        off += f.rank
    return found


def count_nbdg(spec: GroupSpec) -> int:
    return len(nbdg_subdiagrams(spec))
