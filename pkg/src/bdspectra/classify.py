"""Cohomology of the simplicial classifying space and extension reports.

The bar spectral sequence has ``E_1^{p,q} = H^q(G^p)``.  Row 0 is modeled
by the exterior algebra on characters of the torus; rows ``q >= 1`` are
additive, i.e. ``H^q(G) (x) C~(S^1)``, except for the quadratic-linear
part of ``H^1(G, K_3)`` whose row is the tensor square of the circle complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .bdcomplex import (
    K2,
    K3,
    DegreeEntry,
    KCohomologyReport,
    Piece,
    compute_E1,
    make_piece,
    sheaf_weight,
)
from .invariants import (
    FULL,
    cubic_invariant_basis,
    quadlin_space,
    quadratic_invariant_basis,
)
from .rootdata import GroupSpec, SimpleType
from .zchain import (
    TRIVIAL,
    CohomologyGroup,
    FieldModel,
    ZComplex,
    reduced_circle_complex,
    tensor_with_coefficients,
)

DEFAULT_TRUNCATION = 6


# ---------------------------------------------------------------------------
# rows
# ---------------------------------------------------------------------------


def _wedge_of_map(images: list[dict[int, int]], j: int, src_dim: int, tgt_dim: int) -> list[list[int]]:
    """Matrix of ``wedge^j L`` where ``L(e_s) = images[s]`` (sparse dicts)."""
    src = list(combinations(range(src_dim), j))
    tgt = list(combinations(range(tgt_dim), j))
    pos = {m: i for i, m in enumerate(tgt)}
    out = [[0] * len(src) for _ in tgt]
    for c, mono in enumerate(src):
        terms = {(): 1}
        for s in mono:
            nxt = {}
            for key, v in terms.items():
                for t, w in images[s].items():
                    if t in key:
                        continue
                    # insert t into the sorted key, tracking the sign
                    k = sum(1 for u in key if u > t)
                    nk = tuple(sorted(key + (t,)))
                    nxt[nk] = nxt.get(nk, 0) + (-1) ** k * v * w
            terms = {k: v for k, v in nxt.items() if v}
        for key, v in terms.items():
            out[pos[key]][c] += v
    return out


def _bar_coface(r: int, p: int, i: int) -> list[dict[int, int]]:
    """Pullback of characters along the face ``d_i : H^{p+1} -> H^p``.

    Characters of ``H^p`` are blocks ``(chi_1, .., chi_p)``.  The outer faces
    drop a factor, so ``d_0^*`` shifts blocks right and ``d_{p+1}^*`` keeps
    them in place; an inner face multiplies ``h_i h_{i+1}``, so block ``i``
    is duplicated.
    """
    images = []
    for blk in range(p):
        for c in range(r):
            if i == 0:
                targets = [blk + 1]
            elif i == p + 1:
                targets = [blk]
            elif blk + 1 < i:
                targets = [blk]
            elif blk + 1 == i:
                targets = [blk, blk + 1]
            else:
                targets = [blk + 1]
            images.append({t * r + c: 1 for t in targets})
    return images


def exterior_bar_row(rank_x0: int, j: int, truncation: int = DEFAULT_TRUNCATION) -> ZComplex:
    """Bar complex ``p -> wedge^j(X_0^p)`` with alternating coface differential."""
    if truncation < j + 1:
        raise ValueError("truncation must exceed the weight")
    ranks = tuple(comb(rank_x0 * p, j) for p in range(truncation + 1))
    diffs = []
    for p in range(truncation):
        total = [[0] * ranks[p] for _ in range(ranks[p + 1])]
        for i in range(p + 2):
            m = _wedge_of_map(_bar_coface(rank_x0, p, i), j, rank_x0 * p, rank_x0 * (p + 1))
            sign = -1 if i % 2 else 1
            for a, row in enumerate(m):
                for b, v in enumerate(row):
                    if v:
                        total[a][b] += sign * v
        diffs.append(total)
    return ZComplex(0, ranks, tuple(diffs))


@dataclass(frozen=True)
class BarRow:
    """``complex (x) coefficients``; cohomology computed per cyclic factor."""

    q: int
    complex: ZComplex
    coefficients: CohomologyGroup

    def cohomology(self) -> dict[int, CohomologyGroup]:
        return tensor_with_coefficients(self.complex, self.coefficients)

    def reliable_degrees(self) -> range:
        # the top degree of a truncated complex has no outgoing differential
        return range(self.complex.start, self.complex.end)


def additive_row(hq: CohomologyGroup, truncation: int = DEFAULT_TRUNCATION, q: int = 1) -> BarRow:
    """``H^q(G) (x) C~(S^1)``: cohomology ``H^q(G)`` placed in degree 1."""
    return BarRow(q, reduced_circle_complex(truncation), hq)


def _circle_face(t: int, i: int, n: int) -> int | None:
    t2 = t - 1 if i < t else t
    return None if t2 == 0 or t2 == n else t2


def diagonal_circle_square(truncation: int = DEFAULT_TRUNCATION) -> ZComplex:
    """Reduced cochains of ``S^1 ^ S^1`` from the diagonal simplicial structure.

    Degree ``p`` has basis the pairs ``(s, t)`` of nonbase ``p``-simplices; the
    coface ``d^i`` reads off the pair of faces and vanishes when either lands
    on the basepoint.
    """
    ranks = tuple(p * p for p in range(truncation + 1))
    diffs = []
    for n in range(truncation):
        d = [[0] * ranks[n] for _ in range(ranks[n + 1])]
        for s in range(1, n + 2):
            for t in range(1, n + 2):
                row = (s - 1) * (n + 1) + (t - 1)
                for i in range(n + 2):
                    fs = _circle_face(s, i, n + 1)
                    ft = _circle_face(t, i, n + 1)
                    if fs is not None and ft is not None:
                        d[row][(fs - 1) * n + (ft - 1)] += -1 if i % 2 else 1
        diffs.append(d)
    return ZComplex(0, ranks, tuple(diffs))


def quadlin_row(lattice: CohomologyGroup, truncation: int = DEFAULT_TRUNCATION) -> BarRow:
    return BarRow(1, diagonal_circle_square(truncation), lattice)


def _concentrated(row: BarRow, expected_degree: int, expected: CohomologyGroup) -> bool:
    coh = row.cohomology()
    for n in row.reliable_degrees():
        want = expected if n == expected_degree else TRIVIAL
        if coh[n] != want:
            return False
    return True


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionReport:
    spec: str
    sheaf: str
    kind: str
    field: str
    group: CohomologyGroup | None
    description: str
    lattice: CohomologyGroup
    generators: tuple
    provenance: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "sheaf": self.sheaf,
            "kind": self.kind,
            "field": self.field,
            "group": self.group.to_dict() if self.group is not None else None,
            "description": self.description,
            "lattice": self.lattice.to_dict(),
            "generators": list(self.generators),
            "provenance": list(self.provenance),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExtensionReport":
        return cls(
            d["spec"], d["sheaf"], d["kind"], d["field"],
            CohomologyGroup.from_dict(d["group"]) if d["group"] is not None else None,
            d["description"], CohomologyGroup.from_dict(d["lattice"]),
            tuple(d["generators"]), tuple(d["provenance"]),
        )


@dataclass(frozen=True)
class BGResult:
    report: KCohomologyReport
    extensions: tuple[ExtensionReport, ...]
    consistency: dict

    def extension(self, kind: str) -> ExtensionReport:
        for e in self.extensions:
            if e.kind == kind:
                return e
        raise KeyError(kind)


def _sym_piece(r: int, m: int, weight: int, model, truncation: int) -> Piece:
    row = exterior_bar_row(r, m, max(truncation, m + 2))
    coh = row.cohomology_all()
    lat = coh[m]
    for n in range(row.start, row.end):
        if n != m and not coh[n].is_trivial:
            raise AssertionError(f"exterior bar row j={m} has cohomology in degree {n}")
    return make_piece(f"Sym^{m} X0", lat, weight - m, model, f"row 0, weight {m}")


def assemble_bg(spec: GroupSpec, sheaf: str, model: FieldModel | None = None,
                truncation: int = DEFAULT_TRUNCATION, e1: dict | None = None) -> BGResult:
    """``H^n(B G, K_2)`` or ``H^n(B G, K_3)`` assuming E_2 degeneration."""
    weight = sheaf_weight(sheaf)
    r = spec.torus_rank
    if e1 is None:
        e1 = compute_E1(spec.derived, K3 if weight == 3 else K2) if spec.derived_rank else {}
    quad = e1.get((-2, 3), TRIVIAL)
    one = CohomologyGroup(1)

    def additive(lattice: CohomologyGroup) -> CohomologyGroup:
        row = additive_row(lattice, truncation)
        if not _concentrated(row, 1, lattice):
            raise AssertionError("additive row is not concentrated in degree 1")
        return lattice

    degrees: dict[int, list[Piece]] = {n: [] for n in range(weight + 2)}
    degrees[0].append(make_piece(f"K{weight}(k)", one, weight, model, "row 0, weight 0"))
    for m in range(1, weight + 1):
        if r:
            degrees[m].append(_sym_piece(r, m, weight, model, truncation))
    if weight == 2:
        degrees[2].append(make_piece("Quad_W(Y_der)", additive(quad), 0, model, "row 1: H^1(G, K2)"))
    else:
        degrees[2].append(make_piece("Quad_W(Y_der)", additive(quad), 1, model, "row 1: H^1(G, K3)"))
        ql = quadlin_space(spec)
        if not ql.is_trivial:
            row = quadlin_row(ql, truncation)
            if not _concentrated(row, 2, ql):
                raise AssertionError("quadratic-linear row is not concentrated in degree 2")
        degrees[3].append(make_piece("QuadLin(Y_der, Y0)", ql, 0, model, "row 1: quadratic-linear part"))
        degrees[3].append(make_piece("Cubic_W(Y_der)", additive(e1.get((-3, 5), TRIVIAL)), 0, model,
                                     "row 2: H^2(G, K3)"))
        degrees[4].append(make_piece("(Z/2)^nBDG", additive(e1.get((-3, 6), TRIVIAL)), 0, model,
                                     "row 3: H^3(G, K3)"))
    entries = tuple(DegreeEntry(n, tuple(ps)) for n, ps in sorted(degrees.items()))
    label = "symbolic" if model is None else model.name
    report = KCohomologyReport(str(spec), sheaf, "BG", label, entries)

    def lattice_of(n: int) -> CohomologyGroup:
        total = TRIVIAL
        for p in report.entry(n).pieces:
            total = total + p.lattice
        return total

    quad_forms = quadratic_invariant_basis(spec, FULL)
    consistency = {"quadratic": lattice_of(2).free_rank == len(quad_forms) and not lattice_of(2).torsion}
    cubic_forms = []
    if weight == 3:
        cubic_forms = cubic_invariant_basis(spec, FULL)
        consistency["cubic"] = lattice_of(3).free_rank == len(cubic_forms) and not lattice_of(3).torsion
    if not all(consistency.values()):
        raise AssertionError(f"BG assembly disagrees with direct invariants: {consistency}")

    exts = [
        ExtensionReport(
            str(spec), sheaf, "central", label, report.entry(2).group,
            report.entry(2).describe(), lattice_of(2),
            tuple(f.to_dict() for f in quad_forms),
            tuple(p.provenance for p in report.entry(2).pieces),
        ),
        ExtensionReport(
            str(spec), sheaf, "gerbal", label, report.entry(3).group,
            report.entry(3).describe(), lattice_of(3),
            tuple(f.to_dict() for f in cubic_forms),
            tuple(p.provenance for p in report.entry(3).pieces),
        ),
    ]
    return BGResult(report, tuple(exts), consistency)


def k2_bg(spec: GroupSpec, model: FieldModel | None = None, truncation: int = DEFAULT_TRUNCATION) -> KCohomologyReport:
    return assemble_bg(spec, K2, model, truncation).report


def product_spot_check(spec: GroupSpec) -> bool:
    """``H^1(G x G, K_2)`` has twice the rank of ``H^1(G, K_2)`` (additivity)."""
    if spec.derived_rank == 0:
        return True
    single = compute_E1(spec.derived, K2).get((-2, 3), TRIVIAL)
    doubled = GroupSpec(spec.factors + spec.factors, 0)
    double = compute_E1(doubled, K2).get((-2, 3), TRIVIAL)
    return double == single + single


def nbdg_spec(*types: str) -> GroupSpec:
    return GroupSpec(tuple(SimpleType(t[0], int(t[1:])) for t in types), 0)
