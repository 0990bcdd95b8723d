import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdspectra.invariants import (
    DERIVED,
    FULL,
    CubicFormW,
    QuadraticFormW,
    check_cubic_form,
    check_quadratic_form,
    cubic_b,
    cubic_coordinates,
    cubic_invariant_basis,
    cubic_oracle_basis,
    evaluate_cubic,
    evaluate_polynomial,
    expected_cubic_rank,
    expected_quadratic_rank,
    quadlin_space,
    quadratic_coordinates,
    quadratic_invariant_basis,
    quadratic_oracle_basis,
    same_lattice,
)
from bdspectra.rootdata import parse_spec, reflect_cocharacter
from bdspectra.zchain import CohomologyGroup

BATTERY = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "A1xA1", "A2xG2", "A2xA2",
           "A1xT1", "A2xT1", "A2xT2", "B3xT1", "G2xT2", "T1", "T2", "T3"]


def test_rank_examples():
    assert len(quadratic_invariant_basis(parse_spec("A1"), DERIVED)) == 1
    assert len(quadratic_invariant_basis(parse_spec("A2xG2"), DERIVED)) == 2
    assert len(quadratic_invariant_basis(parse_spec("T2"), FULL)) == 3
    assert len(cubic_invariant_basis(parse_spec("A2"), DERIVED)) == 1
    assert len(cubic_invariant_basis(parse_spec("A1"), DERIVED)) == 0
    assert len(cubic_invariant_basis(parse_spec("G2"), DERIVED)) == 0
    assert quadlin_space(parse_spec("A1xT1")) == CohomologyGroup(1)
    assert quadlin_space(parse_spec("A2xA2xT3")) == CohomologyGroup(6)
    assert quadlin_space(parse_spec("E6")).is_trivial


@pytest.mark.parametrize("name", BATTERY)
@pytest.mark.parametrize("restrict", [DERIVED, FULL])
def test_kernels_match_polynomial_oracle(name, restrict):
    spec = parse_spec(name)
    quad = quadratic_invariant_basis(spec, restrict)
    cub = cubic_invariant_basis(spec, restrict)
    assert same_lattice([quadratic_coordinates(q) for q in quad], quadratic_oracle_basis(spec, restrict))
    assert same_lattice([cubic_coordinates(f) for f in cub], cubic_oracle_basis(spec, restrict))
    assert len(quad) == expected_quadratic_rank(spec, restrict)
    assert len(cub) == expected_cubic_rank(spec, restrict)
    for q in quad:
        check_quadratic_form(spec, q)
    for f in cub:
        check_cubic_form(spec, f)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A2", "A3", "B3", "A2xT1", "G2xT1", "A2xA2"]), st.data())
def test_forms_invariant_by_evaluation(name, data):
    spec = parse_spec(name)
    n = spec.total_rank
    y = data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n))
    k = data.draw(st.integers(0, spec.derived_rank - 1))
    sy = reflect_cocharacter(spec.cartan, k, y[:spec.derived_rank]) + tuple(y[spec.derived_rank:])
    for q in quadratic_invariant_basis(spec, FULL):
        assert q(sy) == q(y)
    for f in cubic_invariant_basis(spec, FULL):
        assert evaluate_cubic(f, sy) == evaluate_cubic(f, y)
        assert evaluate_cubic(f, y) == evaluate_polynomial(f.polynomial(), y)
        assert evaluate_cubic(f, y, order=list(reversed(range(n)))) == evaluate_cubic(f, y)


def test_explicit_invariants():
    # A2 coroots in R^3 are e_i - e_{i+1}; e1 e2 e3 and |v|^2/2 are the basic invariants
    a2 = parse_spec("A2")

    def coords(y):
        return (y[0], y[1] - y[0], -y[1])

    (f,) = cubic_invariant_basis(a2, DERIVED)
    (q,) = quadratic_invariant_basis(a2, DERIVED)

    def e123(y):
        v = coords(y)
        return v[0] * v[1] * v[2]

    sign = evaluate_cubic(f, (2, -3)) // e123((2, -3))
    assert sign in (1, -1)
    for y in [(1, 0), (0, 1), (2, -3), (5, 7), (1, 4), (-2, 3)]:
        assert evaluate_cubic(f, y) == sign * e123(y)
        assert q(y) == sum(t * t for t in coords(y)) // 2
    assert evaluate_cubic(f, (1, 0)) == 0 and evaluate_cubic(f, (0, 0)) == 0


def test_b_and_t_relations():
    spec = parse_spec("A2xT2")
    for f in cubic_invariant_basis(spec, FULL):
        for x, y in [((1, 2, 0, -1), (0, 1, 3, 1)), ((2, 0, 1, 1), (1, 1, 1, 1))]:
            s = tuple(a + b for a, b in zip(x, y))
            assert evaluate_cubic(f, s) == evaluate_cubic(f, x) + evaluate_cubic(f, y) + cubic_b(f, x, y) + cubic_b(f, y, x)
            assert cubic_b(f, x, x) == 3 * evaluate_cubic(f, x)


def test_serialization_round_trip():
    spec = parse_spec("A2xT1")
    for q in quadratic_invariant_basis(spec, FULL):
        assert QuadraticFormW.from_dict(q.to_dict()) == q
    for f in cubic_invariant_basis(spec, FULL):
        assert CubicFormW.from_dict(f.to_dict()) == f


def test_checks_reject_non_invariant_forms():
    a2 = parse_spec("A2")
    with pytest.raises(AssertionError):
        check_quadratic_form(a2, QuadraticFormW(((1, 0), (0, 0))))
    with pytest.raises(AssertionError):
        check_cubic_form(a2, CubicFormW((0, 0), ((0, 1), (1, 0))))
