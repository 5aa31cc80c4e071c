"""Pure-Python scan kernels; same signatures as the compiled module.

Each kernel reads flat integer tables (`array('i')`) and writes into
byte masks (`bytearray`).  The compiled module in `_speedups.pyx` is the
drop-in fast path; this one is the fallback and the reference.
"""

from __future__ import annotations


def scan_object_atom(src, tgt, target: int, mask) -> None:
    """mask[s] = 1 for every row (s, t) with t == target."""
    for i in range(len(src)):
        if tgt[i] == target:
            mask[src[i]] = 1


def scan_data_atom(src, code, sat, mask) -> None:
    """mask[s] = 1 for every row (s, c) whose value code satisfies sat."""
    for i in range(len(src)):
        if sat[code[i]]:
            mask[src[i]] = 1


def scan_types(offsets, codes, class_match, mask) -> None:
    """mask[i] = 1 when individual i has a type whose code matches."""
    for i in range(len(offsets) - 1):
        for k in range(offsets[i], offsets[i + 1]):
            if class_match[codes[k]]:
                mask[i] = 1
                break


def path_step(src, tgt, sat, out) -> None:
    """out[s] = 1 for every row (s, t) with sat[t] set (one hop backward)."""
    for i in range(len(src)):
        if sat[tgt[i]]:
            out[src[i]] = 1


def mask_and(acc, other) -> None:
    for i in range(len(acc)):
        if not other[i]:
            acc[i] = 0


def mask_or(acc, other) -> None:
    for i in range(len(acc)):
        if other[i]:
            acc[i] = 1


def mask_not(acc) -> None:
    for i in range(len(acc)):
        acc[i] ^= 1
