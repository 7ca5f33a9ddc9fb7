"""Words over signed generator indices.

Generator ``i`` (1-based) is the letter ``i``; its inverse is ``-i``.  A word
is a tuple of nonzero ints.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

Word = tuple


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Iterable[int]) -> Word:
    return tuple(-x for x in reversed(tuple(w)))


def mul(*ws: Iterable[int]) -> Word:
    out: list[int] = []
    for w in ws:
        out.extend(w)
    return free_reduce(out)


def cyclic_reduce(w: Iterable[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def power(w: Word, e: int) -> Word:
    if e < 0:
        return free_reduce(inverse(w) * -e)
    return free_reduce(w * e)


def rotations(w: Word) -> list[Word]:
    return [w[p:] + w[:p] for p in range(len(w))] if w else [()]


def canonical_cyclic(w: Word) -> Word:
    """Least rotation of a cyclically reduced word; canonical up to conjugacy."""
    return min(rotations(w)) if w else ()


def substitute(w: Iterable[int], images: Mapping[int, Word]) -> Word:
    """Apply the homomorphism ``g -> images[g]``; letters without an image are kept."""
    out: list[int] = []
    for x in w:
        g = abs(x)
        img = images.get(g)
        if img is None:
            out.append(x)
        elif x > 0:
            out.extend(img)
        else:
            out.extend(inverse(img))
    return free_reduce(out)


def exponent_vector(w: Iterable[int], gens: list[int]) -> list[int]:
    pos = {g: t for t, g in enumerate(gens)}
    v = [0] * len(gens)
    for x in w:
        t = pos.get(abs(x))
        if t is not None:
            v[t] += 1 if x > 0 else -1
    return v


def format_word(w: Word, prefix: str = "g") -> str:
    """``g3^-1 g7 g12^2`` notation; the identity prints as ``1``."""
    if not w:
        return "1"
    parts = []
    t = 0
    while t < len(w):
        x = w[t]
        e = 1
        while t + e < len(w) and w[t + e] == x:
            e += 1
        exp = e if x > 0 else -e
        parts.append(f"{prefix}{abs(x)}" + ("" if exp == 1 else f"^{exp}"))
        t += e
    return " ".join(parts)


_TOKEN = re.compile(r"^([A-Za-z]+)(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str) -> Word:
    """Inverse of :func:`format_word`; also accepts ``*`` as a separator."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    out: list[int] = []
    for tok in text.replace("*", " ").split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse word token {tok!r}")
        g = int(m.group(2))
        if g < 1:
            raise ValueError(f"generator index must be positive in {tok!r}")
        e = int(m.group(3)) if m.group(3) is not None else 1
        out.extend([g if e > 0 else -g] * abs(e))
    return free_reduce(out)


def words_up_to(gens: list[int], length: int):
    """Freely reduced words over ``gens`` of length <= ``length``, shortlex order."""
    letters = []
    for g in gens:
        letters += [g, -g]
    frontier = [()]
    yield ()
    for _ in range(length):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                u = w + (x,)
                nxt.append(u)
                yield u
        frontier = nxt
