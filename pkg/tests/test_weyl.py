import json
from itertools import product

import pytest

from bdspectra import weyl
from bdspectra.rootdata import parse_spec, reflect_character
from bdspectra.weyl import (
    WSetError,
    WSetIndex,
    brute_force_lengths,
    brute_force_wset_count,
    canonicalize_index,
    enumerate_wset,
    equivalence_class,
    from_word,
    is_admissible,
    longest_element,
)


def act_on_rho(spec, word):
    """``s_{i1} ... s_{ik}(rho)`` in the weight basis."""
    x = (1,) * spec.derived_rank
    for i in reversed(word):
        x = reflect_character(spec.cartan, i, x)
    return x


def test_longest_element():
    assert longest_element(parse_spec("A1")).word == (0,)
    assert len(longest_element(parse_spec("A2")).word) == 3
    g2 = parse_spec("G2")
    w0 = longest_element(g2)
    assert len(w0.word) == 6 == max(brute_force_lengths(g2).values())
    assert len(brute_force_lengths(g2)) == 12
    # w0 is an involution sending every coroot to minus a coroot
    assert (w0 * w0).is_identity
    assert w0.apply((1, 1)) == (-1, -1)


def test_wset_examples():
    assert [w.indices for w in enumerate_wset(parse_spec("A2"), 3)] == [(0, 1, 0)]
    assert [w.indices for w in enumerate_wset(parse_spec("A1xA1"), 2)] == [(0, 1)]
    assert [w.indices for w in enumerate_wset(parse_spec("B2"), 3)] == [(0, 1, 0), (1, 0, 1)]
    assert enumerate_wset(parse_spec("T2"), 0) == [WSetIndex(())]
    assert enumerate_wset(parse_spec("T2"), 1) == []
    assert WSetIndex((0, 1)).label() == "w0s0s1"
    with pytest.raises(WSetError):
        enumerate_wset(parse_spec("A2"), 4)


def test_canonicalize_examples():
    assert canonicalize_index(parse_spec("A2"), (1, 0, 1)).indices == (0, 1, 0)
    assert canonicalize_index(parse_spec("A3"), (2, 0, 1)).indices == (0, 2, 1)
    with pytest.raises(WSetError):
        canonicalize_index(parse_spec("A1xA1"), (0, 1, 0))
    with pytest.raises(WSetError):
        canonicalize_index(parse_spec("A2"), (0, 0))


SMALL = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "D4", "D5", "G2", "F4", "A2xA1", "A1xA1xA1", "B2xG2"]


@pytest.mark.parametrize("name", SMALL + ["E6"])
def test_wset_counts_match_brute_force(name):
    spec = parse_spec(name)
    for p in range(4):
        assert len(enumerate_wset(spec, p)) == brute_force_wset_count(spec, p)


@pytest.mark.parametrize("name", SMALL)
def test_identifications_are_group_equalities(name):
    """Two reduced words are identified exactly when they give the same element."""
    spec = parse_spec(name)
    lengths = brute_force_lengths(spec)
    n = spec.derived_rank
    for p in (2, 3):
        classes = {}
        for word in product(range(n), repeat=p):
            reduced = lengths[act_on_rho(spec, word)] == p
            assert is_admissible(spec, word) == reduced, word
            if reduced:
                classes.setdefault(act_on_rho(spec, word), set()).add(canonicalize_index(spec, word).indices)
                assert from_word(spec, word) == from_word(spec, canonicalize_index(spec, word).indices)
        assert all(len(c) == 1 for c in classes.values())
        assert sorted(c.pop() for c in classes.values()) == [w.indices for w in enumerate_wset(spec, p)]


def test_equivalence_class_contents():
    assert equivalence_class(parse_spec("A2"), (0, 1, 0)) == [(0, 1, 0), (1, 0, 1)]
    assert equivalence_class(parse_spec("B2"), (0, 1, 0)) == [(0, 1, 0)]
    assert equivalence_class(parse_spec("A1xA1xA1"), (0, 1, 2)) == sorted(
        [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)])


def test_large_groups_without_brute_force():
    e8 = parse_spec("E8")
    assert brute_force_lengths(e8) is None
    assert [len(enumerate_wset(e8, p)) for p in range(4)] == [1, 8, 35, 112]
    assert len(longest_element(e8).word) == 120


def test_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("BDSPECTRA_CACHE_DIR", str(tmp_path))
    spec = parse_spec("D4")
    first = [enumerate_wset(spec, p) for p in range(4)]
    path = tmp_path / "wsets-D4.json"
    assert path.exists()
    assert set(json.loads(path.read_text())) == {"0", "1", "2", "3"}
    assert [enumerate_wset(spec, p) for p in range(4)] == first
    path.write_text("not json")
    assert [enumerate_wset(spec, p) for p in range(4)] == first


def test_wset_element_length():
    spec = parse_spec("B3")
    lengths = brute_force_lengths(spec)
    top = max(lengths.values())
    w0 = longest_element(spec)
    for p in range(4):
        for idx in enumerate_wset(spec, p):
            word = w0.word + idx.indices
            assert lengths[act_on_rho(spec, word)] == top - p
            assert weyl.wset_element(spec, idx, w0) == from_word(spec, word)
