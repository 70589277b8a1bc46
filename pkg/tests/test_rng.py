import pytest

from ricci_stiefel.rng import STREAM_VERSION, SplitMix64, mix64


class TestSplitMix64:
    def test_reference_vectors(self):
        r = SplitMix64(0)
        assert [r.next_u64() for _ in range(3)] == [
            0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
        r = SplitMix64(1234567)
        assert [r.next_u64() for _ in range(2)] == [6457827717110365317, 3203168211198807973]

    def test_stream_version(self):
        assert STREAM_VERSION == 1

    def test_uniform_range(self):
        r = SplitMix64(5)
        vals = [r.uniform() for _ in range(2000)]
        assert min(vals) >= 0.0 and max(vals) < 1.0
        assert abs(sum(vals) / len(vals) - 0.5) < 0.03

    def test_log_uniform_range(self):
        r = SplitMix64(9)
        vals = [r.log_uniform(1e-2, 1e2) for _ in range(500)]
        assert all(1e-2 <= v <= 1e2 for v in vals)

    def test_below(self):
        r = SplitMix64(3)
        vals = [r.below(3) for _ in range(3000)]
        assert set(vals) == {0, 1, 2}
        with pytest.raises(ValueError):
            r.below(0)

    def test_streams_independent_of_order(self):
        a = [SplitMix64.stream(42, k).next_u64() for k in range(5)]
        b = [SplitMix64.stream(42, k).next_u64() for k in reversed(range(5))][::-1]
        assert a == b
        assert len(set(a)) == 5

    def test_negative_seed_wraps(self):
        assert SplitMix64(-1).state == (1 << 64) - 1

    def test_mix_is_bijective_on_sample(self):
        assert len({mix64(k) for k in range(10_000)}) == 10_000
