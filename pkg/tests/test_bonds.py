import numpy as np
import pytest

from ratetree.bonds import bond_tree, state_prices
from ratetree.lattice import RateTree, ZbdtParams
from ratetree.market_data import market_zc_price
from ratetree.reference import EXAMPLE


def test_example_ten_year_bond(example_bdt):
    bonds = bond_tree(example_bdt, 10)
    assert bonds.root == pytest.approx(73.19, abs=0.01)
    assert bonds.price((1, 1)) == pytest.approx(79.93, abs=0.005)
    assert bonds.price((1, 2)) == pytest.approx(70.26, abs=0.005)


def test_one_year_bond_is_one_step_discount(example_bdt):
    assert bond_tree(example_bdt, 1).root == pytest.approx(100 / 1.026, rel=1e-15)
    assert bond_tree(example_bdt, 1).root == pytest.approx(97.47, abs=0.005)


def test_zero_zone_bond_price(example_zbdt):
    bonds = bond_tree(example_zbdt, 10)
    assert bonds.zirp(9) == pytest.approx(100 / 1.0025, rel=1e-15)
    assert bonds.zirp(9) == pytest.approx(99.75, abs=0.005)
    assert bonds.zirp(0) is None


def test_terminal_layer_is_face_value(example_zbdt):
    bonds = bond_tree(example_zbdt, 6)
    assert np.all(bonds.prices[6, :8] == 100.0)
    with pytest.raises(ValueError):
        bonds.price((7, 1))


@pytest.mark.parametrize("maturity", [0, 11])
def test_maturity_out_of_range(example_bdt, maturity):
    with pytest.raises(ValueError):
        bond_tree(example_bdt, maturity)


@pytest.mark.parametrize("name", ["bdt", "zbdt"])
def test_prices_bounded_and_ordered(example_trees, name):
    bonds = bond_tree(example_trees[name], 10)
    for i in range(10):
        col = bonds.column(i)
        assert np.all((col > 0) & (col <= 100))
        assert np.all(np.diff(col) <= 0)
        if bonds.zirp(i) is not None:
            assert bonds.zirp(i) >= col.max()


@pytest.mark.parametrize("name", ["bdt", "zbdt"])
@pytest.mark.parametrize("maturity", [1, 4, 10])
def test_martingale_identity(example_trees, name, backend, maturity):
    tree = example_trees[name]
    bonds = bond_tree(tree, maturity, backend=backend)
    pi = state_prices(tree, maturity, backend=backend)
    for i in range(maturity + 1):
        legal = ~np.isnan(bonds.prices[i])
        total = float(np.sum(pi[i][legal] * bonds.prices[i][legal]))
        assert total == pytest.approx(bonds.root, rel=4e-15)


def test_roots_match_market(example_bdt):
    for m in EXAMPLE.curve.maturities:
        assert bond_tree(example_bdt, m).root == pytest.approx(
            market_zc_price(EXAMPLE.curve, m), abs=1e-9 * 100)


def test_zero_jump_bonds_match_bdt(example_bdt, zero_jump_params):
    cols = [example_bdt.column(i) for i in range(example_bdt.horizon)]
    zbdt = RateTree.from_columns("zbdt", cols, zero_jump_params)
    a = bond_tree(example_bdt, 10).prices
    b = bond_tree(zbdt, 10).prices
    np.testing.assert_array_equal(a[:, 1:], b[:, 1:])


def test_state_prices_from_a_later_node(example_zbdt):
    pi = state_prices(example_zbdt, 3, start=(1, 1))
    assert np.all(pi[0] == 0)
    assert pi[1, 1] == 1.0
    # the unit value of all period-3 states is the 2-period bond seen from (1, 1)
    assert pi[3].sum() * 100 == pytest.approx(bond_tree(example_zbdt, 3).price((1, 1)),
                                              rel=1e-14)


def test_csv_rounds_to_two_decimals(example_zbdt):
    rows = bond_tree(example_zbdt, 10).to_csv().splitlines()
    assert rows[0].endswith(",zirp")
    assert rows[1].startswith("0,73.19,")
    assert rows[-1].split(",")[-1] == "100.00"


def test_state_prices_sum_to_discount_factors():
    tree = RateTree.from_columns("zbdt", [[0.03], [0.02, 0.04], [0.01, 0.02, 0.05]],
                                 ZbdtParams(0.1, 0.3, 0.001))
    pi = state_prices(tree)
    for m in range(1, 4):
        assert pi[m].sum() * 100 == pytest.approx(bond_tree(tree, m).root, rel=1e-15)
