import pytest

from k3mirror.catalog import arnold_table, catalog_weight_systems
from k3mirror.errors import DomainError, ParameterError
from k3mirror.toric import (
    Simplex3,
    WeightSystem,
    analyze,
    condition_star,
    delta_of_weights,
    is_reflexive,
    pi_group_order,
    pi_group_structure,
    polar_dual,
    strange_duality_weights,
    vertices_in_weight_coordinates,
)


def test_quartic():
    ws = WeightSystem((1, 1, 1, 1))
    assert vertices_in_weight_coordinates(ws)[0] == [3, -1, -1, -1]
    D = delta_of_weights(ws)
    assert is_reflexive(D)
    assert pi_group_order(ws) == 16
    assert pi_group_structure(ws) == [4, 4]


@pytest.mark.parametrize("w, order, structure", [((1, 3, 8, 12), 2, [2]), ((1, 6, 14, 21), 1, [])])
def test_pi_groups(w, order, structure):
    ws = WeightSystem(w)
    assert pi_group_order(ws) == order
    assert pi_group_structure(ws) == structure


def test_all_catalog_systems_reflexive_and_involutive():
    systems = catalog_weight_systems()
    assert len(systems) == 12
    for ws in systems:
        D = delta_of_weights(ws)
        assert is_reflexive(D)
        assert polar_dual(polar_dual(D)) == D


def test_strange_duality_weights():
    assert strange_duality_weights((2, 3, 7), 42).w == (1, 21, 14, 6)
    with pytest.raises(DomainError):
        strange_duality_weights((2, 3, 7), 41)
    with pytest.raises(DomainError):
        strange_duality_weights((2, 3, 7), None)


def test_arnold_rows():
    rows = arnold_table()
    assert len(rows) == 14
    assert len({r.name for r in rows}) == 14


def test_weight_validation():
    with pytest.raises(ParameterError):
        WeightSystem((2, 2, 2, 2))
    with pytest.raises(DomainError):
        WeightSystem((1, 1, 1, 2))
    with pytest.raises(ParameterError):
        WeightSystem.parse("1,2,x,4")


def test_non_reflexive_dual_detected():
    S = Simplex3(((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)))
    assert is_reflexive(S)
    T = Simplex3(((2, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)))
    assert not polar_dual(T).is_lattice


def test_origin_must_be_interior():
    S = Simplex3(((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)))
    with pytest.raises(DomainError):
        polar_dual(S)


def test_analyze_shape():
    out = analyze(WeightSystem((1, 1, 1, 1)))
    assert out["reflexive"] and len(out["edge_table"]) == 6
    holds, table = condition_star(WeightSystem((1, 1, 1, 1)))
    assert holds is out["condition_star"]
