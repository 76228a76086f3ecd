import pytest
from hypothesis import given, settings, strategies as st

from cosetspace.errors import PartitionFormatError
from cosetspace.generate import GenConfig, random_partition
from cosetspace.textformat import format_partition, load_partition, parse_partition

from helpers import DATA, p2, p3


def test_load_examples():
    assert load_partition(DATA / "p2.part") == p2()
    assert load_partition(DATA / "p3.part") == p3()


@pytest.mark.parametrize("text", [
    "",
    "rank 2\ncoset\n  rep 1\nend\n",
    "rank 2\ncoset\n  rep 1\n  gens a bb baB\n",
    "rank two\n",
    "rank 2\ncoset\n  rep q\n  gens a bb baB\nend\n",
    "rank 2\nrep 1\n",
])
def test_rejects_malformed(text):
    with pytest.raises(PartitionFormatError):
        parse_partition(text)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 3), st.integers(2, 3))
def test_round_trip(seed, depth, rank):
    P = random_partition(GenConfig(rank=rank, seed=seed, refinement_depth=depth))
    assert parse_partition(format_partition(P)) == P
