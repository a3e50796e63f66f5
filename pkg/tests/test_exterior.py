from math import comb

import pytest

from cubedr.exterior import MultiIndex, basis, wedge_basis


def test_basis_enumeration():
    assert [m.indices for m in basis(3, 2)] == [(1, 2), (1, 3), (2, 3)]
    assert [m.indices for m in basis(4, 0)] == [()]
    assert basis(5, 7) == []


@pytest.mark.parametrize("n", range(0, 7))
def test_basis_dimension_symmetry(n):
    for p in range(n + 1):
        assert len(basis(n, p)) == len(basis(n, n - p)) == comb(n, p)


def test_wedge_signs():
    assert wedge_basis(MultiIndex(2, (1,)), MultiIndex(2, (2,))) == (1, MultiIndex(2, (1, 2)))
    assert wedge_basis(MultiIndex(2, (2,)), MultiIndex(2, (1,))) == (-1, MultiIndex(2, (1, 2)))
    assert wedge_basis(MultiIndex(3, (1, 3)), MultiIndex(3, (2,))) == (-1, MultiIndex(3, (1, 2, 3)))
    assert wedge_basis(MultiIndex(2, (1,)), MultiIndex(2, (1,)))[0] == 0


def test_wedge_rejects_mixed_dimensions():
    with pytest.raises(ValueError):
        wedge_basis(MultiIndex(1, (1,)), MultiIndex(2, (2,)))
