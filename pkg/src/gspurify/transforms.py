"""Bit-sliced Walsh-Hadamard kernels for XOR convolutions on 2^n vectors.

The length-2^n coefficient vectors used throughout the package live on the
group (Z_2)^n. Convolving over a subset of bit positions (XOR on those bits,
coincidence on the rest) diagonalizes under a Walsh-Hadamard transform
applied to just those bits, which is what `wht_bits` computes: one butterfly
pass per selected bit, O(2^n) work each.
"""

from __future__ import annotations

import numpy as np


def bit_positions(mask: int) -> list[int]:
    """Set-bit positions of mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def wht_bits(vec: np.ndarray, n: int, mask: int, inverse: bool = False) -> np.ndarray:
    """Walsh-Hadamard transform over the bit positions selected by mask.

    Returns a new array; the input is not modified. The inverse divides by
    2^popcount(mask) so that wht_bits(wht_bits(v, n, m), n, m, inverse=True)
    round-trips exactly.
    """
    if vec.shape != (1 << n,):
        raise ValueError(f"vector length {vec.shape} does not match n={n}")
    out = np.array(vec, dtype=np.float64, copy=True)
    view = out.reshape((2,) * n) if n > 0 else out
    for b in bit_positions(mask):
        ax = n - 1 - b  # C-order reshape puts bit 0 on the last axis
        lo = view.take(0, axis=ax)
        hi = view.take(1, axis=ax)
        s = lo + hi
        d = lo - hi
        idx_lo = tuple(slice(None) if i != ax else 0 for i in range(n))
        idx_hi = tuple(slice(None) if i != ax else 1 for i in range(n))
        view[idx_lo] = s
        view[idx_hi] = d
    if inverse:
        out /= 1 << mask.bit_count()
    return out


def parity_lookup(n: int, mask: int) -> np.ndarray:
    """parity(i & mask) for i in 0..2^n-1, as a uint8 array of 0/1."""
    idx = np.arange(1 << n, dtype=np.uint64) & np.uint64(mask)
    return (np.bitwise_count(idx) & np.uint64(1)).astype(np.uint8)


def sign_lookup(n: int, mask: int) -> np.ndarray:
    """(-1)^parity(i & mask) for i in 0..2^n-1, as float64."""
    return 1.0 - 2.0 * parity_lookup(n, mask)


def xor_convolve(a: np.ndarray, b: np.ndarray, n: int, mask: int) -> np.ndarray:
    """XOR convolution of a and b over the bits in mask (coincidence elsewhere).

    out[g] = sum over (x, y) with x^y == g, x & ~mask == y & ~mask == g & ~mask
    of a[x] * b[y] ... restricted so the unselected bits of x and y both equal
    those of g.
    """
    fa = wht_bits(a, n, mask)
    fb = wht_bits(b, n, mask)
    return wht_bits(fa * fb, n, mask, inverse=True)


def spread_submasks(mask: int) -> np.ndarray:
    """All 2^popcount(mask) submasks of mask, ordered so that the XOR of the
    i-th and j-th entries is the (i^j)-th entry (binary-counter order)."""
    bits = bit_positions(mask)
    out = np.zeros(1 << len(bits), dtype=np.int64)
    for i, b in enumerate(bits):
        half = 1 << i
        out[half : 2 * half] = out[:half] + (1 << b)
    return out
