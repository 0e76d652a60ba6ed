import pytest

from ibaka.rand import DeterministicRandom


def test_same_seed_same_stream():
    a = DeterministicRandom(42)
    b = DeterministicRandom(42)
    assert a.random_bytes(100) == b.random_bytes(100)
    assert a.scalar(19) == b.scalar(19)


def test_different_seeds_differ():
    assert DeterministicRandom(1).random_bytes(32) != DeterministicRandom(2).random_bytes(32)


def test_stream_is_stateful():
    rng = DeterministicRandom(7)
    assert rng.random_bytes(16) != rng.random_bytes(16)


def test_split_requests_match_bulk():
    bulk = DeterministicRandom(5).random_bytes(64)
    rng = DeterministicRandom(5)
    assert rng.random_bytes(32) + rng.random_bytes(32) == bulk


def test_scalar_range_and_coverage():
    rng = DeterministicRandom(3)
    seen = set()
    for _ in range(1000):
        k = rng.scalar(19)
        assert 1 <= k <= 18
        seen.add(k)
    assert seen == set(range(1, 19))


def test_scalar_large_modulus():
    q = 115792089237316195423570985008687907852837564279074904382605163141518161494337
    rng = DeterministicRandom(9)
    for _ in range(10):
        assert 1 <= rng.scalar(q) < q


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        DeterministicRandom(-1)


def test_tiny_modulus_rejected():
    with pytest.raises(ValueError):
        DeterministicRandom(1).scalar(2)
