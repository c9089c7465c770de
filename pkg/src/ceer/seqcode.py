"""Binary-string coding of nonzero-integer sequences.

A nonzero integer ``x`` is written as ``|x|`` zeros preceded by ``1`` when
``x < 0`` and by ``11`` when ``x > 0``; a sequence is the concatenation of
its items, read as a base-2 numeral (most significant digit first).

>>> encode_seq((1, -1))
26
>>> [decode_seq(26, i) for i in range(4)]
[2, 1, -1, 0]
"""

from __future__ import annotations

import re
from collections.abc import Sequence

_TOKEN = re.compile(r"(11|1)(0+)")


def item_bits(x: int) -> str:
    if x == 0:
        raise ValueError("sequence items must be nonzero")
    return ("11" if x > 0 else "1") + "0" * abs(x)


def seq_bits(s: Sequence[int]) -> str:
    if len(s) == 0:
        raise ValueError("sequence must be nonempty")
    return "".join(item_bits(x) for x in s)


def encode_seq(s: Sequence[int]) -> int:
    return int(seq_bits(s), 2)


def is_valid_code(z: int) -> bool:
    """First digit 1, last digit 0, and no ``111`` anywhere."""
    if z <= 0:
        return False
    bits = format(z, "b")
    return bits[0] == "1" and bits[-1] == "0" and "111" not in bits


def parse_code(z: int) -> tuple[int, ...] | None:
    """The sequence coded by ``z``, or None when ``z`` codes nothing."""
    if not is_valid_code(z):
        return None
    bits = format(z, "b")
    out = []
    pos = 0
    for m in _TOKEN.finditer(bits):
        if m.start() != pos:
            return None
        sign = 1 if m.group(1) == "11" else -1
        out.append(sign * len(m.group(2)))
        pos = m.end()
    if pos != len(bits):
        return None
    return tuple(out)


def decode_seq(z: int, i: int) -> int:
    """Length (``i == 0``) or ``i``-th item of the sequence coded by ``z``.

    Total: codes outside the range of the encoding, and positions past the
    end, give 0.
    """
    s = parse_code(z)
    if s is None:
        return 0
    if i == 0:
        return len(s)
    if 0 < i <= len(s):
        return s[i - 1]
    return 0


def beta(k: int) -> int:
    """Upper bound on the least code of any sequence of length and magnitudes <= k."""
    if k < 1:
        raise ValueError("beta is defined for k >= 1")
    return 2 ** (1 + k * (2 + k))


def show(z: int) -> str:
    return f"{z} (0b{z:b})"
