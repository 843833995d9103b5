from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import king_tableaux
from spyoung.errors import DomainError, ResourceLimitError
from spyoung.measure import (
    ParticleConfig,
    box_shapes,
    complement_transpose,
    config_for,
    enumerate_measure,
    measure_exact,
    measure_explicit,
    particle_coords,
    shape_from_coords,
    sp_dimension,
)
from spyoung.params import EnsembleParams


def test_sp_dimension_basic_values():
    assert sp_dimension((), 1) == 1
    assert sp_dimension((), 5) == 1
    assert sp_dimension((1,), 1) == 2
    assert sp_dimension((1, 1), 2) == 5


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_sp_dimension_counts_king_tableaux(rank):
    shapes = [s for s in box_shapes(rank, 3) if sum(s) <= 6]
    for lam in shapes:
        assert sp_dimension(lam, rank) == len(king_tableaux(lam, rank))


def test_sp_dimension_rejects_tall_shapes():
    with pytest.raises(DomainError):
        sp_dimension((1, 1), 1)


def test_particle_coords():
    assert particle_coords((1,), 1) == (2,)
    assert particle_coords((), 1) == (1,)
    assert particle_coords((2, 1), 3) == (5, 3, 1)
    assert shape_from_coords((5, 3, 1), 3) == (2, 1)
    with pytest.raises(DomainError):
        ParticleConfig((2, 2), 2)


def test_measure_exact_small_cases():
    p11 = EnsembleParams(1, 1)
    assert measure_exact((), p11) == Fraction(1, 2)
    assert measure_exact((1,), p11) == Fraction(1, 2)
    p12 = EnsembleParams(1, 2)
    assert measure_exact((1,), p12) == Fraction(1, 2)


def test_measure_explicit_equals_exact_everywhere():
    for n in range(1, 5):
        for k in range(1, 5):
            params = EnsembleParams(n, k)
            for lam in box_shapes(n, k):
                assert measure_explicit(config_for(lam, params), params) == measure_exact(
                    lam, params
                )


def test_enumeration_normalizes():
    table = enumerate_measure(EnsembleParams(1, 1))
    assert table == [((1,), Fraction(1, 2)), ((), Fraction(1, 2))] or sorted(
        table
    ) == sorted([((1,), Fraction(1, 2)), ((), Fraction(1, 2))])
    table33 = enumerate_measure(EnsembleParams(3, 3))
    assert len(table33) == 20
    assert sum(p for _, p in table33) == 1


def test_enumeration_guard():
    with pytest.raises(ResourceLimitError):
        enumerate_measure(EnsembleParams(500, 500))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_complement_transpose_involution(n, k, data):
    shapes = list(box_shapes(n, k))
    lam = data.draw(st.sampled_from(shapes))
    # complement-transpose with swapped box dimensions undoes itself
    assert complement_transpose(complement_transpose(lam, n, k), k, n) == lam


def test_measure_requires_fair_coin():
    from spyoung.errors import DegenerateParameterError

    params = EnsembleParams(1, 1, Fraction(1, 3))
    with pytest.raises(DegenerateParameterError):
        measure_exact((1,), params)
