"""Permutations of {1..n} as immutable image tables.

Composition is left to right: ``(a * b)(x) == b(a(x))``.  Points are 1-based
in the public interface; the private helpers at the bottom work on 0-based
image tuples and are shared by the rest of the library.
"""

from __future__ import annotations

import re
from math import lcm

from .errors import DegreeMismatchError, GroupParseError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """A bijection of {1..n}, stored as the tuple of images."""

    __slots__ = ("_img",)

    def __init__(self, images):
        img = tuple(int(x) - 1 for x in images)
        n = len(img)
        seen = [False] * n
        for x in img:
            if not 0 <= x < n or seen[x]:
                raise GroupParseError("image table is not a bijection of 1..%d" % n)
            seen[x] = True
        self._img = img

    @classmethod
    def _from_raw(cls, raw: tuple) -> "Permutation":
        p = object.__new__(cls)
        p._img = raw
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._from_raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        """Parse disjoint cycle notation, e.g. ``(1,2)(3,4,5)``."""
        return cls._from_raw(parse_cycles_raw(text, degree))

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple:
        """Images of 1..n, 1-based."""
        return tuple(x + 1 for x in self._img)

    def apply(self, point: int) -> int:
        if not 1 <= point <= len(self._img):
            raise ValueError("point %d out of range" % point)
        return self._img[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self._img) != len(other._img):
            raise DegreeMismatchError("cannot compose degree %d with degree %d"
                                      % (len(self._img), len(other._img)))
        return Permutation._from_raw(compose_raw(self._img, other._img))

    def inverse(self) -> "Permutation":
        return Permutation._from_raw(inverse_raw(self._img))

    def __pow__(self, k: int) -> "Permutation":
        n = len(self._img)
        if k < 0:
            return self.inverse() ** (-k)
        result = tuple(range(n))
        base = self._img
        while k:
            if k & 1:
                result = compose_raw(result, base)
            base = compose_raw(base, base)
            k >>= 1
        return Permutation._from_raw(result)

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self._img))

    def support(self) -> tuple:
        """Moved points, 1-based ascending."""
        return tuple(i + 1 for i, x in enumerate(self._img) if x != i)

    def order(self) -> int:
        return lcm(*(len(c) for c in _raw_cycles(self._img))) if self.support() else 1

    def cycle_string(self) -> str:
        return cycle_str_raw(self._img)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self) -> int:
        return hash(self._img)

    def __repr__(self) -> str:
        return "Permutation(%r, degree=%d)" % (self.cycle_string(), self.degree)

    def __str__(self) -> str:
        return self.cycle_string()


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Left-to-right product: apply ``a`` first, then ``b``."""
    return a * b


def inverse(a: Permutation) -> Permutation:
    return a.inverse()


def conjugate(g: Permutation, s: Permutation) -> Permutation:
    """s * g * s^-1, the relabelling of g along s^-1."""
    return s * g * s.inverse()


def perm_from_cycles(text: str, degree: int) -> Permutation:
    return Permutation.from_cycles(text, degree)


# -- raw helpers (0-based image tuples) --------------------------------------

def compose_raw(a: tuple, b: tuple) -> tuple:
    return tuple(b[x] for x in a)


def inverse_raw(a: tuple) -> tuple:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def identity_raw(n: int) -> tuple:
    return tuple(range(n))


def parse_cycles_raw(text: str, degree: int) -> tuple:
    stripped = text.strip()
    if not stripped:
        raise GroupParseError("empty permutation text")
    if re.sub(_CYCLE_RE, "", stripped).strip():
        raise GroupParseError("unbalanced or stray characters in %r" % text)
    img = list(range(degree))
    seen = set()
    for body in _CYCLE_RE.findall(stripped):
        body = body.strip()
        if not body:
            continue
        try:
            pts = [int(tok) for tok in body.split(",")]
        except ValueError:
            raise GroupParseError("bad cycle %r" % body) from None
        for p in pts:
            if not 1 <= p <= degree:
                raise GroupParseError("point %d outside 1..%d" % (p, degree))
            if p in seen:
                raise GroupParseError("point %d repeated across cycles" % p)
            seen.add(p)
        if len(pts) < 2:
            continue
        for i, p in enumerate(pts):
            img[p - 1] = pts[(i + 1) % len(pts)] - 1
    return tuple(img)


def _raw_cycles(img: tuple):
    n = len(img)
    done = [False] * n
    for start in range(n):
        if done[start] or img[start] == start:
            done[start] = True
            continue
        cyc = [start]
        done[start] = True
        x = img[start]
        while x != start:
            cyc.append(x)
            done[x] = True
            x = img[x]
        yield cyc


def cycle_str_raw(img: tuple) -> str:
    parts = ["(%s)" % ",".join(str(p + 1) for p in cyc) for cyc in _raw_cycles(img)]
    return "".join(parts) if parts else "()"


def order_raw(img: tuple) -> int:
    lengths = [len(c) for c in _raw_cycles(img)]
    return lcm(*lengths) if lengths else 1
