"""Pinned pseudo-random stream: determinism and sampling contracts.

The exact output sequence is part of the instance-file contract (same
seed must regenerate identical instances across releases), so a few raw
outputs are frozen here as regression anchors.
"""

from netpricing import Rng, derive_seed


def test_same_seed_same_stream():
    a = Rng(12345)
    b = Rng(12345)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]


def test_different_seeds_differ():
    a = Rng(1)
    b = Rng(2)
    assert [a.next_u64() for _ in range(4)] != [b.next_u64() for _ in range(4)]


def test_frozen_first_outputs():
    # Regression anchor: changing these breaks seed compatibility.
    r = Rng(0)
    assert [r.next_u64() for _ in range(3)] == [
        11091344671253066420,
        13793997310169335082,
        1900383378846508768,
    ]
    assert derive_seed(99, 1, 2) == 1759636554552349364


def test_random_unit_interval():
    r = Rng(7)
    xs = [r.random() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert 0.4 < sum(xs) / len(xs) < 0.6


def test_randbelow_bounds_and_coverage():
    r = Rng(11)
    seen = set()
    for _ in range(500):
        v = r.randbelow(7)
        assert 0 <= v < 7
        seen.add(v)
    assert seen == set(range(7))


def test_randbelow_one():
    r = Rng(3)
    assert all(r.randbelow(1) == 0 for _ in range(5))


def test_uniform_range():
    r = Rng(21)
    for _ in range(200):
        x = r.uniform(2.0, 5.0)
        assert 2.0 <= x < 5.0


def test_derive_seed_is_deterministic():
    assert derive_seed(99, 1, 2) == derive_seed(99, 1, 2)


def test_derive_seed_separates_paths():
    seeds = {
        derive_seed(99),
        derive_seed(99, 1),
        derive_seed(99, 2),
        derive_seed(99, 1, 2),
        derive_seed(99, 2, 1),
    }
    assert len(seeds) == 5
    assert all(0 <= s < 2**64 for s in seeds)


def test_derived_streams_are_unrelated():
    a = Rng(derive_seed(5, 1))
    b = Rng(derive_seed(5, 2))
    xs = [a.next_u64() for _ in range(8)]
    ys = [b.next_u64() for _ in range(8)]
    assert xs != ys
