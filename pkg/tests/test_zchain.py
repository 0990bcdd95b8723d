import json
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdspectra.zchain import (
    CoefficientGroup,
    CohomologyGroup,
    FieldModel,
    ZComplex,
    cohomology,
    determinant,
    direct_sum,
    elementary_divisors,
    export_complex,
    format_zmatrix,
    hermite_rows,
    integer_kernel,
    is_smith_form,
    load_complex,
    matmul,
    matrix_rank,
    mod_resolution,
    parse_field,
    parse_zmatrix,
    reduced_circle_complex,
    single_group_complex,
    smith_normal_form,
    solve_in_lattice,
    tensor_product,
    tensor_with_coefficients,
)


def minor_divisors(m):
    """Invariant factors from gcds of k x k minors (independent of any elimination)."""
    rows, cols = len(m), len(m[0]) if m else 0
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in combinations(range(rows), k):
            for c in combinations(range(cols), k):
                g = gcd(g, determinant([[m[i][j] for j in c] for i in r]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def diag(d):
    return [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]


small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_snf_examples():
    assert diag(smith_normal_form([[2, 0], [0, 3]])[1]) == [1, 6]
    assert diag(smith_normal_form([[2, 4], [6, 8]])[1]) == [2, 4]
    _, d, _ = smith_normal_form([[0, 0], [0, 0]])
    assert d == [[0, 0], [0, 0]]


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_matches_minor_oracle(m):
    u, d, v = smith_normal_form(m)
    assert matmul(matmul(u, m), v) == d
    assert is_smith_form(d)
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
    assert [abs(x) for x in diag(d)] == minor_divisors(m)
    assert elementary_divisors(m, len(m[0])) == minor_divisors(m)
    assert matrix_rank(m) == len(minor_divisors(m))


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_kernel_and_hermite(m):
    ncols = len(m[0])
    ker = integer_kernel(m, ncols)
    for vec in ker:
        assert all(sum(a * b for a, b in zip(row, vec)) == 0 for row in m)
    assert len(ker) == ncols - matrix_rank(m)
    assert hermite_rows(hermite_rows(m)) == hermite_rows(m)
    # every row of m lies in the lattice spanned by its Hermite form
    h = hermite_rows(m)
    for row in m:
        if any(row):
            assert solve_in_lattice(h, row) is not None


def test_cohomology_examples():
    c = ZComplex(0, (1, 1), (((2,),),))
    assert cohomology(c, 1) == CohomologyGroup(0, (2,))
    assert cohomology(c, 0) == CohomologyGroup()
    circ = reduced_circle_complex(5)
    assert circ.cohomology(1) == CohomologyGroup(1)
    assert all(circ.cohomology(n).is_trivial for n in (0, 2, 3, 4))
    assert reduced_circle_complex(2).ranks == (0, 1, 2)


def test_d_squared_checked():
    with pytest.raises(ValueError):
        ZComplex(0, (1, 1, 1), (((1,),), ((1,),)))
    with pytest.raises(ValueError):
        ZComplex(0, (1, 2), (((1,),),))


def test_coefficient_change():
    c = ZComplex(0, (1, 1), (((2,),),))
    assert tensor_with_coefficients(c, CoefficientGroup.cyclic(2)) == {0: CohomologyGroup(0, (2,)), 1: CohomologyGroup(0, (2,))}
    zero = ZComplex(0, (1, 1), (((0,),),))
    assert tensor_with_coefficients(zero, CoefficientGroup.cyclic(3)) == {0: CohomologyGroup(0, (3,)), 1: CohomologyGroup(0, (3,))}
    circ = reduced_circle_complex(4)
    assert tensor_with_coefficients(circ, CohomologyGroup(1)) == circ.cohomology_all()


def test_tensor_products():
    circ = reduced_circle_complex(5)
    unit = single_group_complex()
    assert tensor_product(circ, unit).cohomology_all() == circ.cohomology_all()
    sq = tensor_product(circ, circ)
    assert sq.cohomology(2) == CohomologyGroup(1)
    assert all(sq.cohomology(n).is_trivial for n in range(0, 5) if n != 2)
    two = ZComplex(0, (1, 1), (((2,),),))
    assert tensor_product(circ, two).cohomology(2) == CohomologyGroup(0, (2,))


def test_mod_resolution_and_sum():
    r = mod_resolution(6)
    assert r.cohomology(0) == CohomologyGroup(0, (6,))
    s = direct_sum([r, single_group_complex(2)])
    assert s.cohomology(0) == CohomologyGroup(2, (6,))


def test_group_algebra():
    g = CohomologyGroup.from_cyclic([0, 2, 3, 4])
    assert g == CohomologyGroup(1, (2, 12))
    assert str(g) == "Z + Z/2 + Z/12"
    assert str(CohomologyGroup()) == "0"
    assert CohomologyGroup(0, (4,)).tensor(CohomologyGroup(0, (6,))) == CohomologyGroup(0, (2,))
    assert CohomologyGroup(0, (4,)).tor(CohomologyGroup(0, (6,))) == CohomologyGroup(0, (2,))
    assert CohomologyGroup.from_dict(g.to_dict()) == g
    with pytest.raises(ValueError):
        CohomologyGroup(0, (2, 3))


def test_field_models():
    f5 = FieldModel.finite_field(5)
    assert f5.units.as_group() == CohomologyGroup(0, (4,))
    assert f5.units.marked == (2,)
    assert f5.k2.as_group().is_trivial
    assert f5.k3.as_group() == CohomologyGroup(0, (24,))
    assert FieldModel.finite_field(4).units.marked == (0,)
    assert parse_field("symbolic") is None
    assert parse_field("Fq:9").units.as_group() == CohomologyGroup(0, (8,))
    for bad in ("Fq:6", "Fq:1", "Fq:x", "Q"):
        with pytest.raises(ValueError):
            parse_field(bad)


def test_zmatrix_round_trip(tmp_path):
    m = [[0, 2, 0], [-1, 0, 5]]
    assert parse_zmatrix(format_zmatrix(m, 2, 3)) == (m, 2, 3)
    c = tensor_product(reduced_circle_complex(3), mod_resolution(2))
    path = export_complex(c, tmp_path, {"note": "test"})
    assert json.loads(path.read_text())["schema"] == 1
    assert load_complex(tmp_path) == c
    with pytest.raises(ValueError):
        parse_zmatrix("zmatrix 1 1 2\n0 0 1\n")
