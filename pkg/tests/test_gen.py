import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcwmodel.bicotree import bipartite_of, bicotree_problems, is_clean_bicotree, sob_decompose
from lcwmodel.cotree import is_clean_cotree
from lcwmodel.gen import InfeasibleBounds, gen_bicotree, gen_clean_bicotree, gen_clean_cotree, gen_tmodel
from lcwmodel.tmodel import validate

seeds = st.integers(0, 2**32)


@pytest.mark.parametrize("fn,args", [
    (gen_clean_cotree, (10, 5)),
    (gen_clean_bicotree, (12, 4)),
    (gen_bicotree, (12, 4)),
    (gen_tmodel, (3, 10, 4)),
])
def test_same_seed_same_instance(fn, args):
    for seed in range(20):
        assert fn(seed, *args) == fn(seed, *args)
    assert len({fn(s, *args) for s in range(20)}) > 1


@pytest.mark.parametrize("fn", [gen_clean_cotree, gen_clean_bicotree, gen_bicotree])
def test_bounds_below_one_refused(fn):
    with pytest.raises(InfeasibleBounds):
        fn(0, 0, 3)
    with pytest.raises(InfeasibleBounds):
        fn(0, 5, 0)


def test_tmodel_needs_colors():
    with pytest.raises(InfeasibleBounds):
        gen_tmodel(0, 0, 5, 3)


@given(seeds, st.integers(1, 10), st.integers(1, 5))
def test_cotrees_clean_and_bounded(seed, leaves, height):
    t = gen_clean_cotree(seed, leaves, height)
    assert is_clean_cotree(t)
    assert len(t.ground) <= leaves and t.height() <= height


@given(seeds, st.integers(1, 12), st.integers(1, 4))
def test_bicotrees_clean_and_accepted(seed, leaves, height):
    t = gen_clean_bicotree(seed, leaves, height)
    assert is_clean_bicotree(t)
    assert len(t.ground) <= leaves and t.height() <= height
    b = bipartite_of(t)
    assert bipartite_of(sob_decompose(b)) == b


@given(seeds, st.integers(1, 3))
def test_raw_generators_valid(seed, n):
    raw = gen_bicotree(seed, 12, 4)
    assert bicotree_problems(raw) == [] and raw.height() <= 4
    m = gen_tmodel(seed, n, 10, 4)
    assert validate(m) == [] and m.height() <= 4 and len(m.ground) <= 10


def test_rng_object_accepted():
    import random
    a = gen_clean_cotree(random.Random(5), 8, 4)
    assert a == gen_clean_cotree(5, 8, 4)
