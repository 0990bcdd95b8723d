from math import comb

import pytest

from bdspectra.bdcomplex import K2, K3
from bdspectra.classify import (
    ExtensionReport,
    additive_row,
    assemble_bg,
    diagonal_circle_square,
    exterior_bar_row,
    k2_bg,
    nbdg_spec,
    product_spot_check,
    quadlin_row,
)
from bdspectra.invariants import FULL, cubic_invariant_basis, quadratic_invariant_basis
from bdspectra.rootdata import count_nbdg, parse_spec
from bdspectra.zchain import CohomologyGroup, FieldModel, reduced_circle_complex, tensor_product

Z = CohomologyGroup(1)


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_exterior_rows_give_symmetric_powers(r, m):
    coh = exterior_bar_row(r, m, m + 3).cohomology_all()
    # the top degree of a truncated complex is not reliable
    for n in range(m + 3):
        assert coh[n] == (CohomologyGroup(comb(r + m - 1, m)) if n == m else CohomologyGroup())


def test_exterior_row_examples():
    assert exterior_bar_row(2, 2, 5).cohomology(2) == CohomologyGroup(3)
    assert exterior_bar_row(1, 3, 5).cohomology(3) == Z
    point = exterior_bar_row(2, 0, 5).cohomology_all()
    assert point[0] == Z and all(point[n].is_trivial for n in range(1, 5))
    with pytest.raises(ValueError):
        exterior_bar_row(1, 3, 3)


def test_additive_rows():
    for hq, want in [(Z, Z), (CohomologyGroup(0, (2,)), CohomologyGroup(0, (2,))), (CohomologyGroup(), CohomologyGroup())]:
        row = additive_row(hq, 5)
        coh = row.cohomology()
        for n in row.reliable_degrees():
            assert coh[n] == (want if n == 1 else CohomologyGroup())


def test_circle_squares():
    diag = diagonal_circle_square(6).cohomology_all()
    prod = tensor_product(reduced_circle_complex(6), reduced_circle_complex(6)).cohomology_all()
    for n in range(6):
        want = Z if n == 2 else CohomologyGroup()
        assert diag[n] == want and prod[n] == want
    row = quadlin_row(CohomologyGroup(0, (3,)), 5).cohomology()
    assert row[2] == CohomologyGroup(0, (3,)) and row[1].is_trivial and row[3].is_trivial


def test_bg_examples():
    a1 = assemble_bg(parse_spec("A1"), K3, FieldModel.finite_field(5))
    assert a1.extension("central").group == CohomologyGroup(0, (4,))
    assert a1.extension("gerbal").group.is_trivial
    gg = assemble_bg(nbdg_spec("G2", "G2"), K3)
    assert gg.report.entry(4).group == CohomologyGroup(0, (2, 2))
    a2t1 = assemble_bg(parse_spec("A2xT1"), K3)
    gerbal = a2t1.extension("gerbal")
    # Sym^3 X0 (rank 1) + Quad_W(Y_der) (x) X0 (1 * 1) + Cubic_W(Y_der) (rank 1)
    assert gerbal.lattice == CohomologyGroup(3)
    assert len(gerbal.generators) == len(cubic_invariant_basis(parse_spec("A2xT1"), FULL)) == 3
    with pytest.raises(KeyError):
        a1.extension("other")


def test_k2_bg_examples():
    assert k2_bg(parse_spec("A1")).entry(2).group == Z
    assert k2_bg(parse_spec("T1"), FieldModel.finite_field(7)).entry(1).group == CohomologyGroup(0, (6,))
    assert k2_bg(parse_spec("A1xA1")).entry(2).group == CohomologyGroup(2)


@pytest.mark.parametrize("name", ["A1", "A3", "B3", "G2", "D4", "A2xA2", "A1xT1", "A2xT2", "B3xT1", "T2", "T3"])
def test_bg_shape(name):
    spec = parse_spec(name)
    k3 = assemble_bg(spec, K3)
    assert k3.report.entry(4).group == CohomologyGroup(0, (2,) * count_nbdg(spec))
    assert k3.extension("gerbal").lattice == CohomologyGroup(len(cubic_invariant_basis(spec, FULL)))
    assert k3.extension("central").lattice == CohomologyGroup(len(quadratic_invariant_basis(spec, FULL)))
    assert all(k3.consistency.values())
    k2 = assemble_bg(spec, K2)
    assert k2.extension("central").lattice == CohomologyGroup(len(quadratic_invariant_basis(spec, FULL)))
    assert product_spot_check(spec)


def test_extension_round_trip():
    for model in (None, FieldModel.finite_field(3)):
        for e in assemble_bg(parse_spec("A2xT1"), K3, model).extensions:
            assert ExtensionReport.from_dict(e.to_dict()) == e
