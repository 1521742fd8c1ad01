import pytest

from combnfold.core import Linear, is_feasible
from combnfold.encoders import BrickType, HugeNFoldInstance, encode_huge_nfold, solve_huge
from combnfold.encoders.huge import configurations, standard_instance
from combnfold.errors import CapExceeded, InstanceError
from combnfold.solver import POW2_REFINE, SolverConfig

from brute import huge_search
from checks import check_huge_unit, standard_point
from fixtures import huge_unit_fixtures


def toy(n=3, b0=2):
    return HugeNFoldInstance([[1]], [b0], [BrickType([0], [1], n, [Linear(1)])])


def test_toy_succinct_output():
    sol = solve_huge(toy())
    assert sol.cost == 2
    assert sorted(sol.entries) == [(0, (0,), 1), (0, (1,), 2)]


def test_capacity_infeasible():
    assert solve_huge(toy(b0=4)) is None


def test_configurations():
    assert configurations([1, 2]) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]


def test_lower_bounds_are_shifted():
    h = HugeNFoldInstance([[1, -1]], [4], [BrickType([1, 0], [2, 1], 4, [2, 1])])
    rel, _ = encode_huge_nfold(h)
    # b0 - n D l = 4 - 4 * 1
    assert rel.base.b0 == (0,)
    assert rel.base.t == 4
    sol = solve_huge(h)
    assert sol.cost == huge_search(h)
    x = standard_point(h, sol.expand(h))
    assert is_feasible(standard_instance(h), x)


def test_local_matrix_pins_configurations():
    h = HugeNFoldInstance([[1, 0]], [1], [BrickType([0, 0], [1, 1], 3, [1, 2], (1,))],
                          A=((1, 1),))
    rel, _ = encode_huge_nfold(h)
    assert rel.base.upper == (0, 3, 3, 0)
    assert solve_huge(h).cost == 1 + 2 * 2


def test_cap_and_validation():
    wide = HugeNFoldInstance([[1, 1]], [0], [BrickType([0, 0], [99, 99], 1)])
    with pytest.raises(CapExceeded):
        encode_huge_nfold(wide)
    with pytest.raises(InstanceError):
        HugeNFoldInstance([[1]], [0], [BrickType([0], [1], 0)])
    with pytest.raises(InstanceError):
        standard_instance(HugeNFoldInstance([[1]], [0], [BrickType([0], [1], 1, None, (0,))],
                                            A=((2,),)))


def test_large_multiplicity_matches_closed_form():
    n = 10**6
    h = HugeNFoldInstance([[1, 1]], [n], [BrickType([0, 0], [1, 1], n, [3, 1]),
                                          BrickType([0, 0], [1, 1], n, [1, 2])])
    sol = solve_huge(h, SolverConfig(alpha_strategy=POW2_REFINE))
    # n units are needed; the cheapest coordinates cost 1 each
    assert sol.cost == n
    assert sum(c for _, _, c in sol.entries) == 2 * n


@pytest.mark.parametrize("h", huge_unit_fixtures(count=8), ids=lambda _: "unit")
def test_unit_multiplicity_matches_standard(h):
    ok, detail = check_huge_unit(h)
    assert ok, detail
