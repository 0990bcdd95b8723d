"""Weyl group elements and the index sets W^(0) .. W^(3).

``W^(p)`` is the set of elements of length ``l(w0) - p``.  Each such element
is ``w0 s_i s_j ...`` for a reduced word of length ``p``; reduced words of
length at most 3 differ only by commuting orthogonal reflections and by the
braid relation ``s_i s_j s_i = s_j s_i s_j`` across a single edge, so the
index sets are handled combinatorially and cross-checked against brute force
enumeration where ``|W|`` is small enough.
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .rootdata import GroupSpec, reflect_character

BRUTE_FORCE_LIMIT = 10 ** 5


def reflection_matrix(a: Sequence[Sequence[int]], i: int) -> tuple[tuple[int, ...], ...]:
    """Matrix of ``s_i`` on ``Y_der`` in the coroot basis (acting on columns)."""
    n = len(a)
    return tuple(
        tuple((1 if r == k else 0) - (a[k][i] if r == i else 0) for k in range(n))
        for r in range(n)
    )


def _mul(x, y):
    n = len(y[0]) if y else 0
    return tuple(
        tuple(sum(xr[k] * y[k][c] for k in range(len(y)) if xr[k]) for c in range(n))
        for xr in x
    )


def _identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element; equality is equality of matrices on ``Y_der``."""

    matrix: tuple[tuple[int, ...], ...]
    word: tuple[int, ...] = ()

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(_mul(self.matrix, other.matrix), self.word + other.word)

    def apply(self, y: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(r[k] * y[k] for k in range(len(y))) for r in self.matrix)

    @property
    def is_identity(self) -> bool:
        return self.matrix == _identity(len(self.matrix))


def identity_element(spec: GroupSpec) -> WeylElement:
    return WeylElement(_identity(spec.derived_rank))


def from_word(spec: GroupSpec, word: Sequence[int]) -> WeylElement:
    a = spec.cartan
    m = _identity(spec.derived_rank)
    for i in word:
        m = _mul(m, reflection_matrix(a, i))
    return WeylElement(m, tuple(word))


def _is_positive(v: Sequence[int]) -> bool:
    # every root is a nonnegative or nonpositive combination of simple ones
    return any(x > 0 for x in v)


def longest_element(spec: GroupSpec) -> WeylElement:
    """``w0`` by greedy ascent: append ``s_i`` while ``w(alpha_i^vee) > 0``."""
    if spec.derived_rank == 0:
        return identity_element(spec)
    a = spec.cartan
    n = spec.derived_rank
    refl = [reflection_matrix(a, i) for i in range(n)]
    m = _identity(n)
    word = []
    while True:
        for i in range(n):
            if _is_positive([m[r][i] for r in range(n)]):
                m = _mul(m, refl[i])
                word.append(i)
                break
        else:
            return WeylElement(m, tuple(word))


# ---------------------------------------------------------------------------
# index sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class WSetIndex:
    """A word ``(i, j, k)`` standing for ``w0 s_i s_j s_k``."""

    indices: tuple[int, ...]
    canonical: bool = True

    @property
    def level(self) -> int:
        return len(self.indices)

    def label(self) -> str:
        return "w0" + "".join(f"s{i}" for i in self.indices)


class WSetError(ValueError):
    pass


def _single_edge(a, i, j) -> bool:
    return a[i][j] == -1 and a[j][i] == -1


def is_admissible(spec: GroupSpec, idx: Sequence[int]) -> bool:
    """Whether ``s_idx`` is a reduced word (so ``w0 s_idx`` has length l(w0) - len)."""
    a = spec.cartan
    n = spec.derived_rank
    if any(not 0 <= i < n for i in idx):
        return False
    if len(idx) > 3:
        raise WSetError("index sets beyond level 3 are not implemented")
    if len(idx) >= 2 and any(x == y for x, y in zip(idx, idx[1:])):
        return False
    if len(idx) == 3:
        i, j, k = idx
        if i == k and a[i][j] == 0:
            return False
    return True


def _neighbours(a, t):
    out = []
    for pos in range(len(t) - 1):
        x, y = t[pos], t[pos + 1]
        if a[x][y] == 0:
            out.append(t[:pos] + (y, x) + t[pos + 2:])
    if len(t) == 3 and t[0] == t[2] and _single_edge(a, t[0], t[1]):
        out.append((t[1], t[0], t[1]))
    return out


def equivalence_class(spec: GroupSpec, idx: Sequence[int]) -> list[tuple[int, ...]]:
    """All words equivalent to ``idx`` under the identification rules, sorted."""
    idx = tuple(idx)
    if not is_admissible(spec, idx):
        raise WSetError(f"{idx} is not a reduced word of length {len(idx)} for {spec}")
    a = spec.cartan
    seen = {idx}
    todo = deque([idx])
    while todo:
        t = todo.popleft()
        for u in _neighbours(a, t):
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return sorted(seen)


def canonicalize_index(spec: GroupSpec, idx: Sequence[int] | WSetIndex) -> WSetIndex:
    if isinstance(idx, WSetIndex):
        idx = idx.indices
    return WSetIndex(equivalence_class(spec, idx)[0], True)


def _cache_path(spec: GroupSpec) -> Path | None:
    root = os.environ.get("BDSPECTRA_CACHE_DIR")
    if not root:
        return None
    return Path(root) / f"wsets-{spec.derived}.json"


def _compute_wsets(spec: GroupSpec) -> dict[int, list[tuple[int, ...]]]:
    n = spec.derived_rank
    out = {0: [()], 1: [(i,) for i in range(n)]}
    for p in (2, 3):
        reps = set()
        stack = [()]
        for _ in range(p):
            stack = [t + (i,) for t in stack for i in range(n)]
        for t in stack:
            if is_admissible(spec, t):
                reps.add(equivalence_class(spec, t)[0])
        out[p] = sorted(reps)
    return out


def _load_wsets(spec: GroupSpec) -> dict[int, list[tuple[int, ...]]]:
    path = _cache_path(spec)
    if path is not None and path.exists():
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
            return {int(p): [tuple(t) for t in ts] for p, ts in raw.items()}
        except (OSError, ValueError):
            pass
    data = _compute_wsets(spec)
    if path is not None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_name(path.name + f".{os.getpid()}.tmp")
            tmp.write_text(json.dumps({str(p): ts for p, ts in data.items()}), encoding="utf-8")
            os.replace(tmp, path)
        except OSError:
            pass
    return data


def enumerate_wset(spec: GroupSpec, p: int) -> list[WSetIndex]:
    """Canonical representatives of ``W^(p)``, sorted lexicographically."""
    if not 0 <= p <= 3:
        raise WSetError("only W^(0) .. W^(3) are available")
    if spec.derived_rank == 0:
        return [WSetIndex(())] if p == 0 else []
    return [WSetIndex(t) for t in _load_wsets(spec)[p]]


def wset_element(spec: GroupSpec, idx: Sequence[int] | WSetIndex, w0: WeylElement | None = None) -> WeylElement:
    if isinstance(idx, WSetIndex):
        idx = idx.indices
    if w0 is None:
        w0 = longest_element(spec)
    return w0 * from_word(spec, idx)


# ---------------------------------------------------------------------------
# brute force (cross-checks only)
# ---------------------------------------------------------------------------


def brute_force_lengths(spec: GroupSpec, limit: int = BRUTE_FORCE_LIMIT) -> dict[tuple[int, ...], int] | None:
    """Length of every element, keyed by its image of the regular weight rho.

    ``w -> w(rho)`` is injective because rho has trivial stabilizer, so the
    keys are a faithful encoding of W.  Returns None if ``|W| > limit``.
    """
    if spec.weyl_order > limit:
        return None
    a = spec.cartan
    n = spec.derived_rank
    rho = (1,) * n
    lengths = {rho: 0}
    frontier = [rho]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for x in frontier:
            for i in range(n):
                y = reflect_character(a, i, x)
                if y not in lengths:
                    lengths[y] = d
                    nxt.append(y)
        frontier = nxt
    return lengths


def brute_force_wset_count(spec: GroupSpec, p: int, limit: int = BRUTE_FORCE_LIMIT) -> int | None:
    lengths = brute_force_lengths(spec, limit)
    if lengths is None:
        return None
    top = max(lengths.values())
    return sum(1 for v in lengths.values() if v == top - p)
