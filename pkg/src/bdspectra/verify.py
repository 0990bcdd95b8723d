"""Verification battery shared by the ``verify`` subcommand."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from math import comb
from typing import Callable

from . import weyl
from .bdcomplex import (
    K2,
    K3,
    assemble_cohomology,
    build_columns,
    check_cubic_map,
    compute_E1,
    crosscheck_reductive,
    k2_cokernel_trivial,
)
from .classify import (
    assemble_bg,
    diagonal_circle_square,
    exterior_bar_row,
    product_spot_check,
)
from .invariants import (
    DERIVED,
    FULL,
    count_type_a,
    cubic_invariant_basis,
    quadratic_invariant_basis,
)
from .rootdata import count_nbdg, parse_spec
from .torus import (
    TorusK3Class,
    classify,
    data_order,
    declassify,
    enumerate_k3_data,
    normal_form,
    presentation_group,
)
from .zchain import (
    CoefficientGroup,
    CohomologyGroup,
    FieldModel,
    determinant,
    is_smith_form,
    matmul,
    reduced_circle_complex,
    smith_normal_form,
    tensor_product,
)

TORSION_SPECS = ["G2", "B3", "B4", "D4", "D5", "F4", "E6", "E7", "E8"]
TRIVIAL_SPECS = ["A1", "A2", "A3", "A4", "A5", "B2", "C3", "C4"]
SEMISIMPLE_BATTERY = [
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "D4", "D5", "E6", "F4", "G2",
    "A1xA1", "A2xG2", "A2xB3", "B2xC3", "A1xA3",
]
REDUCTIVE_BATTERY = ["A1xT1", "A2xT1", "A2xT2", "B3xT1"]
QUICK_BATTERY = ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "A1xA1", "A2xG2"]


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _time(criterion: int, name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(criterion, name, ok, detail, time.perf_counter() - t)


def check_torsion(specs_t, specs_0) -> tuple[bool, str]:
    bad = []
    for s in specs_t + ["G2xB3xA2"]:
        g = parse_spec(s)
        want = CohomologyGroup(0, (2,) * count_nbdg(g))
        got = compute_E1(g, K3)[(-3, 6)]
        if got != want or (s in specs_t and want != CohomologyGroup(0, (2,))):
            bad.append(f"{s}: {got}")
    for s in specs_0:
        got = compute_E1(parse_spec(s), K3)[(-3, 6)]
        if not got.is_trivial:
            bad.append(f"{s}: {got}")
    return not bad, "; ".join(bad) or "all torsion groups as predicted"


def check_vanishing(battery) -> tuple[bool, str]:
    bad = []
    for s in battery:
        g = parse_spec(s)
        e1 = compute_E1(g, K3)
        for cell in [(-3, 4), (-1, 1), (-2, 2), (-3, 3)]:
            if not e1[cell].is_trivial:
                bad.append(f"{s} {cell}")
        if not k2_cokernel_trivial(g):
            bad.append(f"{s} K2 cokernel")
    return not bad, "; ".join(bad) or "all vanish"


def check_cubic(battery) -> tuple[bool, str]:
    bad = []
    for s in battery:
        g = parse_spec(s)
        rank = compute_E1(g, K3)[(-3, 5)]
        want = count_type_a(g)
        if rank != CohomologyGroup(want) or len(cubic_invariant_basis(g, DERIVED)) != want:
            bad.append(f"{s}: {rank}")
        if not check_cubic_map(g).ok:
            bad.append(f"{s}: phi->B not unimodular")
    return not bad, "; ".join(bad) or "ranks and phi->B map as predicted"


def check_quadratic(battery) -> tuple[bool, str]:
    bad = []
    models = [FieldModel.finite_field(q) for q in (2, 5, 9)]
    for s in battery:
        g = parse_spec(s)
        if compute_E1(g, K3)[(-2, 3)] != CohomologyGroup(g.num_factors):
            bad.append(f"{s}: rank")
        if len(quadratic_invariant_basis(g, DERIVED)) != g.num_factors:
            bad.append(f"{s}: kernel rank")
        for m in models:
            compute_E1(g, K2, m)  # raises if the two coefficient routes disagree
            rep = assemble_cohomology(g, K3, m)
            want = CohomologyGroup(g.num_factors).tensor(m.units.as_group())
            if rep.entry(1).group != want:
                bad.append(f"{s} over {m.name}")
    return not bad, "; ".join(bad) or "ranks and coefficient changes agree"


def check_reductive(battery) -> tuple[bool, str]:
    bad = []
    for s in battery:
        g = parse_spec(s)
        for sheaf in (K2, K3):
            for m in (None, FieldModel.finite_field(5)):
                for c in crosscheck_reductive(g, sheaf, m):
                    if not c.ok:
                        bad.append(f"{s} {sheaf} {c.cell} {c.coefficient}: {c.computed} vs {c.expected}")
    return not bad, "; ".join(bad[:5]) or "all cells agree"


def z2_model(order: int = 2) -> CoefficientGroup:
    A2 = CoefficientGroup.cyclic(2)
    return CoefficientGroup(0, (order,), marked=(order // 2,), pairing_target=A2,
                            pairing_table=(((1,),),))


def check_torus() -> tuple[bool, str]:
    from itertools import product

    bad = []
    for r, order in ((2, 2), (1, 4)):
        A1 = z2_model(order)
        A2 = A1.pairing_target
        data = enumerate_k3_data(r, A1)
        if len(data) != data_order(r, A1):
            bad.append(f"rank {r}: data count")
        if presentation_group(r, A1).order != len(data):
            bad.append(f"rank {r}: presentation order {presentation_group(r, A1)}")
        for d in data:
            if classify(declassify(d, A1), A1) != d:
                bad.append(f"rank {r}: round trip")
        images, reps = set(), set()
        a_range = range(order)
        for a_flat in product(a_range if r == 1 else (0, 1), repeat=r ** 3):
            a = [[[a_flat[(i * r + j) * r + k] for k in range(r)] for j in range(r)] for i in range(r)]
            for f_flat in product(A1.elements(), repeat=r * r):
                f = [list(f_flat[i * r:(i + 1) * r]) for i in range(r)]
                for g in product(A2.elements(), repeat=r):
                    c = TorusK3Class(r, a, f, g)
                    d = classify(c, A1)
                    nf = normal_form(c, A1)
                    if classify(nf, A1) != d:
                        bad.append(f"rank {r}: normal form leaves the orbit")
                    images.add(d)
                    reps.add(nf.reduced(A1))
        # distinct normal forms are the move orbits met by the box
        if len(reps) != len(data):
            bad.append(f"rank {r}: {len(reps)} orbits for {len(data)} data")
        if images != set(data):
            bad.append(f"rank {r}: image of classify is not the data set")
    return not bad, "; ".join(bad) or "orbit count, round trips and images agree"


def check_bg(battery) -> tuple[bool, str]:
    bad = []
    for r in range(4):
        for m in range(4):
            if r == 0 and m == 0:
                continue
            coh = exterior_bar_row(r, m, max(6, m + 2)).cohomology_all()
            for n in range(0, max(6, m + 2)):
                want = comb(r + m - 1, m) if n == m else 0
                if coh[n] != CohomologyGroup(want):
                    bad.append(f"wedge row r={r} m={m} degree {n}")
    circle = reduced_circle_complex(6).cohomology_all()
    if any(circle[n] != CohomologyGroup(1 if n == 1 else 0) for n in range(6)):
        bad.append("circle")
    sq = tensor_product(reduced_circle_complex(6), reduced_circle_complex(6)).cohomology_all()
    if any(sq[n] != CohomologyGroup(1 if n == 2 else 0) for n in range(6)):
        bad.append("circle tensor square")
    dg = diagonal_circle_square(6).cohomology_all()
    if any(dg[n] != CohomologyGroup(1 if n == 2 else 0) for n in range(6)):
        bad.append("diagonal circle square")
    for s in battery:
        g = parse_spec(s)
        res = assemble_bg(g, K3)
        if res.report.entry(4).group != CohomologyGroup(0, (2,) * count_nbdg(g)):
            bad.append(f"{s}: H4")
        if res.report.entry(3).group != CohomologyGroup(len(cubic_invariant_basis(g, FULL))):
            bad.append(f"{s}: H3")
        if g.is_semisimple and not res.report.entry(1).is_zero:
            bad.append(f"{s}: H1")
        if not product_spot_check(g):
            bad.append(f"{s}: G x G")
    return not bad, "; ".join(bad) or "rows, circle and assembled shapes agree"


def check_engine(n_random: int = 1000, seed: int = 20240601) -> tuple[bool, str]:
    rng = random.Random(seed)
    for _ in range(n_random):
        rows, cols = rng.randint(1, 40), rng.randint(1, 40)
        m = [[rng.randint(-50, 50) for _ in range(cols)] for _ in range(rows)]
        U, D, V = smith_normal_form(m)
        if matmul(matmul(U, m), V) != D or not is_smith_form(D):
            return False, f"SNF identity fails on a {rows}x{cols} matrix"
        if abs(determinant(U)) != 1 or abs(determinant(V)) != 1:
            return False, "transform not unimodular"
    for s in QUICK_BATTERY:
        for col in build_columns(parse_spec(s), K3).values():
            cx = col.complex
            chi = sum((-1) ** n * cx.rank(n) for n in cx.degrees)
            h = cx.cohomology_all()
            if chi != sum((-1) ** n * h[n].free_rank for n in cx.degrees):
                return False, f"Euler characteristic mismatch for {s}"
    return True, f"{n_random} random Smith forms and Euler characteristics verified"


def check_performance(spec: str = "E8", budget: float = 120.0) -> tuple[bool, str]:
    t = time.perf_counter()
    g = parse_spec(spec)
    for sheaf in (K2, K3):
        assemble_cohomology(g, sheaf)
        assemble_bg(g, sheaf)
    elapsed = time.perf_counter() - t
    return elapsed < budget, f"{spec} pipeline in {elapsed:.1f} s (budget {budget:.0f} s)"


def check_wsets(battery) -> tuple[bool, str]:
    bad = []
    for s in battery:
        g = parse_spec(s)
        for p in range(4):
            bf = weyl.brute_force_wset_count(g, p)
            if bf is not None and bf != len(weyl.enumerate_wset(g, p)):
                bad.append(f"{s} W^({p})")
        if len(weyl.longest_element(g).word) != g.positive_roots:
            bad.append(f"{s} w0")
    return not bad, "; ".join(bad) or "index sets agree with brute force"


def run_battery(name: str = "standard") -> list[CheckResult]:
    if name not in ("standard", "quick"):
        raise ValueError(f"unknown battery {name!r}; use 'standard' or 'quick'")
    quick = name == "quick"
    semi = QUICK_BATTERY if quick else SEMISIMPLE_BATTERY
    red = REDUCTIVE_BATTERY[:1] if quick else REDUCTIVE_BATTERY
    checks = [
        (1, "E1^(-3,6) torsion", lambda: check_torsion(
            ["G2", "B3", "D4"] if quick else TORSION_SPECS, ["A1", "C3"] if quick else TRIVIAL_SPECS)),
        (2, "vanishing cells and K2 surjectivity", lambda: check_vanishing(semi)),
        (3, "cubic forms", lambda: check_cubic(semi)),
        (4, "quadratic forms", lambda: check_quadratic(semi)),
        (5, "reductive cross-check", lambda: check_reductive(red)),
        (6, "torus classification", check_torus),
        (7, "classifying space", lambda: check_bg(semi + red)),
        (8, "engine properties", lambda: check_engine(100 if quick else 1000)),
        (9, "performance envelope", lambda: check_performance("A3" if quick else "E8")),
        (0, "Weyl index sets", lambda: check_wsets(semi)),
    ]
    return [_time(c, n, fn) for c, n, fn in checks]
