"""Canonical rendering of identifiers.

Identifiers are strings in documents; derived structures (chains, pullback
pairs, décalage pairs) use nested tuples internally and render them as
``(a,b,...)`` when serialized or sorted.
"""
from __future__ import annotations

from functools import lru_cache


@lru_cache(maxsize=1 << 20)
def label(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(label(y) for y in x) + ")"
    return str(x)


def ordered(items):
    return tuple(sorted(items, key=label))
