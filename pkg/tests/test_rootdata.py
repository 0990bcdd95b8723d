from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bdspectra.rootdata import (
    GroupSpec,
    SimpleType,
    SpecError,
    cartan_matrix,
    character,
    check_cartan,
    cocharacter,
    count_nbdg,
    fundamental_weight,
    nbdg_subdiagrams,
    pairing,
    parse_spec,
    simple_coroot,
    simple_reflection_action,
    simple_root,
)


def _e(n, *pairs):
    v = [F(0)] * n
    for k, c in pairs:
        v[k] += F(c)
    return v


def euclidean_simple_roots(fam, n):
    """Bourbaki simple roots in an orthonormal basis."""
    if fam == "A":
        return [_e(n + 1, (i, 1), (i + 1, -1)) for i in range(n)]
    if fam in "BCD":
        roots = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        last = {"B": _e(n, (n - 1, 1)), "C": _e(n, (n - 1, 2)), "D": _e(n, (n - 2, 1), (n - 1, 1))}
        return roots + [last[fam]]
    if fam == "G":
        return [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]
    if fam == "F":
        h = F(1, 2)
        return [_e(4, (1, 1), (2, -1)), _e(4, (2, 1), (3, -1)), _e(4, (3, 1)),
                _e(4, (0, h), (1, -h), (2, -h), (3, -h))]
    if fam == "E":
        h = F(1, 2)
        e8 = [_e(8, (0, h), (7, h), *[(k, -h) for k in range(1, 7)]), _e(8, (0, 1), (1, 1))]
        e8 += [_e(8, (k, 1), (k - 1, -1)) for k in range(1, 7)]
        return e8[:n]
    raise ValueError(fam)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def oracle_cartan(fam, n):
    r = euclidean_simple_roots(fam, n)
    return [[int(2 * dot(r[i], r[j]) / dot(r[i], r[i])) for j in range(n)] for i in range(n)]


def oracle_positive_roots(fam, n):
    r = euclidean_simple_roots(fam, n)
    roots = {tuple(x) for x in r}
    frontier = list(roots)
    while frontier:
        nxt = []
        for v in frontier:
            for s in r:
                c = 2 * dot(v, s) / dot(s, s)
                w = tuple(a - c * b for a, b in zip(v, s))
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(roots) // 2


TYPES = [("A", 1), ("A", 2), ("A", 5), ("B", 2), ("B", 3), ("B", 5), ("C", 3), ("C", 4), ("D", 4),
         ("D", 6), ("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]


@pytest.mark.parametrize("fam,n", TYPES)
def test_cartan_against_euclidean_roots(fam, n):
    spec = GroupSpec((SimpleType(fam, n),), 0)
    if (fam, n) != ("C", 2):
        assert cartan_matrix(spec) == oracle_cartan(fam, n)
    assert spec.positive_roots == oracle_positive_roots(fam, n)
    check_cartan(cartan_matrix(spec))


def test_cartan_examples():
    assert cartan_matrix(parse_spec("A2")) == [[2, -1], [-1, 2]]
    assert cartan_matrix(parse_spec("A1xA1")) == [[2, 0], [0, 2]]
    g = cartan_matrix(parse_spec("G2"))
    assert {g[0][1], g[1][0]} == {-1, -3}
    with pytest.raises(AssertionError):
        check_cartan([[2, -1], [0, 2]])


def test_parse_spec():
    s = parse_spec("A2xB3xT2")
    assert [str(f.family) + str(f.rank) for f in s.factors] == ["A2", "B3"]
    assert s.torus_rank == 2 and s.total_rank == 7
    assert str(parse_spec("c2")) == "B2"
    assert str(parse_spec("A1xT0")) == "A1"
    assert str(parse_spec("t3")) == "T3"
    assert str(parse_spec("G2xA1")) == "G2xA1"
    with pytest.raises(SpecError, match="D requires rank ≥ 4"):
        parse_spec("D3")
    with pytest.raises(SpecError, match="E"):
        parse_spec("E9")
    with pytest.raises(SpecError, match="whitespace"):
        parse_spec("A2 xB3")
    for bad, pos in [("A2 xB3", 2), ("A2x", 3), ("", 0), ("Q2", 0), ("A2B3", 2), ("A0", 0)]:
        with pytest.raises(SpecError) as err:
            parse_spec(bad)
        assert err.value.position == pos


def test_pairing_and_reflections():
    a2 = parse_spec("A2")
    assert pairing(fundamental_weight(a2, 0), simple_coroot(a2, 0)) == 1
    assert pairing(simple_root(a2, 0), simple_coroot(a2, 1)) == -1
    assert pairing(fundamental_weight(a2, 0), simple_coroot(a2, 1)) == 0
    a1 = parse_spec("A1")
    assert simple_reflection_action(a1, 0, simple_coroot(a1, 0)) == -simple_coroot(a1, 0)
    assert simple_reflection_action(a2, 1, simple_coroot(a2, 0)) == simple_coroot(a2, 0) + simple_coroot(a2, 1)
    t = parse_spec("A1xT1")
    e = cocharacter(t, (0, 1))
    assert simple_reflection_action(t, 0, e) == e
    with pytest.raises(ValueError):
        pairing(simple_coroot(a2, 0), simple_coroot(a2, 0))


@given(st.sampled_from(["A3", "B3", "G2", "A2xT1", "C3xA1"]), st.data())
def test_reflection_preserves_pairing(name, data):
    spec = parse_spec(name)
    n = spec.total_rank
    x = character(spec, data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n)))
    y = cocharacter(spec, data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n)))
    i = data.draw(st.integers(0, spec.derived_rank - 1))
    sx, sy = simple_reflection_action(spec, i, x), simple_reflection_action(spec, i, y)
    assert pairing(sx, sy) == pairing(x, y)
    assert simple_reflection_action(spec, i, sy) == y


@pytest.mark.parametrize("name,count", [
    ("G2", 1), ("A5", 0), ("C4", 0), ("F4", 1), ("E8", 1), ("B4", 1), ("B3", 1), ("D4", 1),
    ("D5", 1), ("E6", 1), ("E7", 1), ("C3", 0), ("B2", 0), ("G2xB3xA2", 2), ("G2xG2", 2),
])
def test_count_nbdg(name, count):
    assert count_nbdg(parse_spec(name)) == count


def test_nbdg_subdiagram_nodes():
    assert nbdg_subdiagrams(parse_spec("B4")) == [("B3", (1, 2, 3))]
    assert nbdg_subdiagrams(parse_spec("D5")) == [("D4", (1, 2, 3, 4))]
