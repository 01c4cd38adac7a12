import numpy as np

from nisqlab.rng import RandomSource


def test_same_seed_same_stream_bit_identical():
    a = RandomSource(42).generator.random(100)
    b = RandomSource(42).generator.random(100)
    assert np.array_equal(a, b)


def test_distinct_streams_differ():
    a = RandomSource(42, 0).generator.random(100)
    b = RandomSource(42, 1).generator.random(100)
    assert not np.array_equal(a, b)


def test_split_children_are_deterministic_and_distinct():
    kids1 = RandomSource(7).split(4)
    kids2 = RandomSource(7).split(4)
    streams = {k.stream for k in kids1}
    assert len(streams) == 4
    for k1, k2 in zip(kids1, kids2):
        assert k1.stream == k2.stream
        assert np.array_equal(k1.generator.random(10), k2.generator.random(10))


def test_split_does_not_consume_parent_draws():
    src = RandomSource(9)
    src.split(3)
    a = src.generator.random(5)
    b = RandomSource(9).generator.random(5)
    assert np.array_equal(a, b)


def test_golden_values_pin_the_stream():
    # Philox keyed through SeedSequence(3, spawn_key=(0,)); fixed by numpy's
    # stream-compatibility policy, so a change here means broken reproducibility.
    got = RandomSource(3).generator.random(3)
    expected = np.array(
        [0.46518192761052835, 0.8007337682561995, 0.24212456096403345]
    )
    assert np.allclose(got, expected, atol=0, rtol=0)
