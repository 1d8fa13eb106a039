import pytest

from oracles import parity
from rc4fault.counter import (
    CounterBuffer,
    CounterWindow,
    check_window,
    even_parity,
    msb_parity,
    odd_parity,
)

# counting number -> (MSB of two nibbles, Even, Odd) as printed in the published pattern table
TABLE = {
    0x00: (0, 0, 0),
    0x01: (0, 1, 0),
    0x02: (0, 0, 1),
    0x03: (0, 1, 1),
    0x04: (0, 1, 1),
    0x05: (0, 0, 1),
    0x06: (0, 1, 0),
    0x07: (0, 0, 0),
    0x08: (1, 0, 1),
    0x09: (1, 1, 1),
    0xFE: (1, 1, 0),
    0xFF: (0, 0, 0),
}
ODD_ANOMALIES = {0x04, 0x05, 0x06, 0x07}
MSB_ANOMALIES = {0xFE}


@pytest.mark.parametrize("v, p", [(0x00, 0), (0x01, 1), (0xFE, 1)])
def test_even_parity(v, p):
    assert even_parity(v) == p


@pytest.mark.parametrize("v, p", [(0x02, 1), (0x07, 1), (0xFF, 0)])
def test_odd_parity(v, p):
    assert odd_parity(v) == p


@pytest.mark.parametrize("v, p", [(0x00, 0), (0x08, 1), (0xFF, 0)])
def test_msb_parity(v, p):
    assert msb_parity(v) == p


def test_parities_match_bit_xor_oracle():
    for v in range(256):
        bits = [(v >> k) & 1 for k in range(8)]
        assert even_parity(v) == bits[0] ^ bits[2] ^ bits[4] ^ bits[6]
        assert odd_parity(v) == bits[1] ^ bits[3] ^ bits[5] ^ bits[7]
        assert msb_parity(v) == bits[3] ^ bits[7]


def test_published_pattern_rows():
    for v, (msb, even, odd) in TABLE.items():
        assert even_parity(v) == even
        assert (odd_parity(v) == odd) == (v not in ODD_ANOMALIES)
        assert (msb_parity(v) == msb) == (v not in MSB_ANOMALIES)


def test_aligned_windows_pass():
    for v in range(0, 256, 8):
        assert check_window(CounterWindow(tuple(range(v, v + 8)))).ok


def test_unaligned_window_fails():
    assert not check_window(list(range(4, 12))).ok


def test_window_examples():
    counts = list(range(8))
    bad = list(counts)
    bad[3] ^= 0x01
    assert not check_window(bad).ok
    masked = list(counts)
    masked[5] ^= 0x05
    assert check_window(masked).ok


def test_partial_window_abstains():
    v = check_window([0, 1, 2])
    assert v.ok and not v.ready


def _undetected(m):
    return parity(m & 0x55) == 0 and parity(m & 0xAA) == 0 and parity(m & 0x88) == 0


def test_single_value_detection_characterization():
    per_weight = [0] * 9
    for m in range(1, 256):
        for v in range(0, 256, 8):
            for slot in range(8):
                counts = list(range(v, v + 8))
                counts[slot] ^= m
                assert check_window(counts).ok == _undetected(m)
        if _undetected(m):
            per_weight[bin(m).count("1")] += 1
    assert sum(per_weight) == 31
    assert per_weight[1] == 0
    assert per_weight[1::2] == [0, 0, 0, 0]
    assert per_weight[4] == 14 and per_weight[8] == 1


def test_buffer_cycle():
    buf = CounterBuffer()
    for k in range(7):
        buf.sample(k)
        assert not buf.ready
    assert buf.holds(6) and not buf.holds(7)
    buf.sample(7)
    assert buf.ready
    assert buf.check().ok
    assert not buf.ready and not buf.holds(0)
    buf.sample(8)
    assert buf.filled == 1 and buf.slots[0] == 8


def test_buffer_corruption_detected():
    buf = CounterBuffer()
    for k in range(16, 24):
        buf.sample(k)
    assert buf.corrupt(2, 0x01) == (18, 19)
    assert not buf.check().ok
