"""Cantor-pairing based coding of finite sequences of naturals.

The encoding is fixed and total:

    enc(<>)  = 0
    enc(s)   = 1 + pair(len(s) - 1, payload(s))
    payload(<a>)       = a
    payload(<a> ^ s')  = pair(a, payload(s'))

so every natural decodes to exactly one sequence.
"""

from __future__ import annotations

from math import isqrt
from typing import Sequence


def pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def encode_tuple(seq: Sequence[int]) -> int:
    if not seq:
        return 0
    if any(a < 0 for a in seq):
        raise ValueError(f"tuple entries must be naturals: {tuple(seq)!r}")
    payload = seq[-1]
    for a in reversed(seq[:-1]):
        payload = pair(a, payload)
    return 1 + pair(len(seq) - 1, payload)


def decode_tuple(n: int) -> tuple[int, ...]:
    if n < 0:
        raise ValueError(f"not a natural: {n}")
    if n == 0:
        return ()
    extra, payload = unpair(n - 1)
    out = []
    for _ in range(extra):
        a, payload = unpair(payload)
        out.append(a)
    out.append(payload)
    return tuple(out)


def arity(n: int) -> int:
    if n == 0:
        return 0
    return unpair(n - 1)[0] + 1


def proj(n: int, i: int) -> int:
    """The i-th component of the sequence coded by n."""
    seq = decode_tuple(n)
    if not 0 <= i < len(seq):
        raise IndexError(f"projection {i} out of range for tuple of arity {len(seq)}")
    return seq[i]
