import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uwoclink.fec import (
    STATUS_FAILURE,
    STATUS_OK,
    BchCodeSpec,
    ConcatCodecSpec,
    code_rate,
    deinterleave,
    interleave,
)


@pytest.fixture(scope="module")
def mini(gf16):
    """Tiny concat codec exercising the zero-padded tail path."""
    outer = BchCodeSpec(15, 5, 3, gf16)
    inner = BchCodeSpec(15, 7, 2, gf16)
    return ConcatCodecSpec(outer=outer, inner=inner, interleaver_depth=3,
                           outer_words_per_frame=1)


class TestInterleaver:
    @given(length=st.integers(1, 400), depth=st.integers(1, 16),
           seed=st.integers(0, 2**16))
    @settings(max_examples=200, deadline=None)
    def test_roundtrip_any_shape(self, length, depth, seed):
        rng = np.random.default_rng(seed)
        data = rng.integers(0, 2, length).astype(np.uint8)
        assert np.array_equal(deinterleave(interleave(data, depth), depth), data)

    def test_consecutive_outputs_stride_apart(self):
        # depth-8 interleave of 16320 bits: adjacent channel bits come from
        # positions 16320/8 = 2040 apart
        data = np.arange(16320)
        out = interleave(data, 8)
        deltas = np.diff(out[:8].astype(np.int64))
        assert (deltas == 2040).all()

    def test_depth_one_is_identity(self):
        data = np.arange(37)
        assert np.array_equal(interleave(data, 1), data)


class TestFraming:
    def test_default_frame_arithmetic(self, codec):
        assert codec.frame_payload_bits == 4 * 3824 == 15296
        assert codec.inner_words_per_frame == 8
        assert codec.tail_pad_bits == 0
        assert codec.frame_bits == 8 * 2040 == 16320

    def test_frame_length_matches_rate(self, codec):
        expected = codec.frame_payload_bits / codec.code_rate()
        assert codec.frame_bits == pytest.approx(expected, abs=1.0)

    def test_mini_codec_pads_tail(self, mini):
        assert mini.frame_payload_bits == 5
        # one 15-bit outer word chops into three 7-bit inner payloads
        assert mini.inner_words_per_frame == 3
        assert mini.tail_pad_bits == 6
        assert mini.frame_bits == 45


class TestCodeRate:
    def test_default_rate(self, codec):
        assert code_rate(codec) == pytest.approx(0.93725, abs=1e-4)
        assert code_rate(codec) == pytest.approx((1930 / 2040) * (3824 / 3860))

    def test_uncoded_rate(self):
        assert code_rate(None) == 1.0

    def test_redundancy_near_seven_percent(self, codec):
        redundancy = 1.0 / code_rate(codec) - 1.0
        assert redundancy == pytest.approx(0.0669, abs=1e-3)


class TestRoundtrip:
    def test_all_zero_payload(self, codec):
        frame = codec.encode(np.zeros(codec.frame_payload_bits, dtype=np.uint8))
        assert not frame.any()

    def test_wrong_payload_length(self, codec):
        with pytest.raises(ValueError):
            codec.encode(np.zeros(100, dtype=np.uint8))

    def test_clean_roundtrip_production_thousand(self, codec):
        rng = np.random.default_rng(10)
        for _ in range(1000):
            payload = rng.integers(0, 2, codec.frame_payload_bits).astype(np.uint8)
            out = codec.decode(codec.encode(payload))
            assert out.status == STATUS_OK
            assert out.corrected_count == 0
            assert np.array_equal(out.message_bits, payload)

    def test_clean_roundtrip_mini_thousand(self, mini):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            payload = rng.integers(0, 2, 5).astype(np.uint8)
            out = mini.decode(mini.encode(payload))
            assert out.status == STATUS_OK
            assert np.array_equal(out.message_bits, payload)


class TestErrorHandling:
    def test_scattered_low_rate_errors_vanish(self, codec):
        # i.i.d. flips at 1e-4: a couple per frame, far below inner t=10
        rng = np.random.default_rng(12)
        for _ in range(30):
            payload = rng.integers(0, 2, codec.frame_payload_bits).astype(np.uint8)
            frame = codec.encode(payload)
            flips = rng.random(codec.frame_bits) < 1e-4
            out = codec.decode(frame ^ flips.astype(np.uint8))
            assert out.status == STATUS_OK
            assert np.array_equal(out.message_bits, payload)

    def test_burst_of_40_is_corrected(self, codec):
        # a 40-bit channel burst spreads over the 8 inner words (<= 6 each)
        rng = np.random.default_rng(13)
        for _ in range(10):
            payload = rng.integers(0, 2, codec.frame_payload_bits).astype(np.uint8)
            frame = codec.encode(payload)
            start = int(rng.integers(0, codec.frame_bits - 40))
            rx = frame.copy()
            rx[start:start + 40] ^= 1
            out = codec.decode(rx)
            assert out.status == STATUS_OK
            assert out.corrected_count == 40
            assert np.array_equal(out.message_bits, payload)

    def test_burst_positions_traced_through_interleaver(self, codec):
        # each inner word must see at most ceil(40/8)+1 of the burst
        from uwoclink.fec.concat import interleave_indices
        perm = interleave_indices(codec.frame_bits, codec.interleaver_depth)
        for start in (0, 5000, 16000 - 40):
            hit_positions = perm[start:start + 40]
            words = hit_positions // codec.inner.n
            counts = np.bincount(words, minlength=8)
            assert counts.max() <= 6

    def test_overwhelming_errors_flag_failure(self, codec):
        rng = np.random.default_rng(14)
        payload = rng.integers(0, 2, codec.frame_payload_bits).astype(np.uint8)
        frame = codec.encode(payload)
        flips = rng.random(codec.frame_bits) < 0.02
        out = codec.decode(frame ^ flips.astype(np.uint8))
        assert out.status == STATUS_FAILURE

    def test_single_dead_inner_word_fails_frame(self, codec):
        # 40 errors concentrated in one inner word (post-deinterleave) defeat
        # inner t=10; the frame must be flagged, never silently passed
        from uwoclink.fec.concat import interleave_indices
        rng = np.random.default_rng(15)
        payload = rng.integers(0, 2, codec.frame_payload_bits).astype(np.uint8)
        frame = codec.encode(payload)
        perm = interleave_indices(codec.frame_bits, codec.interleaver_depth)
        inverse = np.empty_like(perm)
        inverse[perm] = np.arange(len(perm))
        word_positions = inverse[np.arange(40) + 2 * codec.inner.n]
        rx = frame.copy()
        rx[word_positions] ^= 1
        out = codec.decode(rx)
        assert out.status == STATUS_FAILURE
