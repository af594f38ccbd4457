"""
Signed permutations in window notation and their statistics.

An element of the hyperoctahedral group B_n is stored as the tuple
``(beta(1), ..., beta(n))``.  D_n is the subgroup with an even number of
negative entries.

>>> b = parse_window("[-3,-4,1,6,-5,-2]")
>>> sorted(b_stats(b).des_set_b), b_stats(b).maj
([0, 1, 4], 5)
>>> sorted(r_stats(b).des_set_r), r_stats(b).maj_r
([1, 2, 6], 9)
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterator

__all__ = [
    "SignedPermutation", "StatRecordB", "StatRecordR", "StatRecordD",
    "DClass", "WindowError", "parse_window", "format_window",
    "enumerate_group", "group_order", "inverse", "compose",
    "b_stats", "r_stats", "d_stats",
]


class WindowError(ValueError):
    """Raised for text or tuples that are not a valid window."""


class DClass(enum.Enum):
    PLUS = "Plus"
    MINUS = "Minus"
    ZERO = "Zero"


@dataclass(frozen=True, order=True)
class SignedPermutation:
    window: tuple[int, ...]

    def __post_init__(self):
        window = tuple(int(v) for v in self.window)
        n = len(window)
        if any(v == 0 for v in window):
            raise WindowError(f"zero entry in window {list(window)}")
        absv = [abs(v) for v in window]
        if any(v > n for v in absv):
            raise WindowError(f"absolute value out of range 1..{n} in {list(window)}")
        if len(set(absv)) != n:
            raise WindowError(f"repeated absolute value in {list(window)}")
        object.__setattr__(self, "window", window)

    @property
    def n(self) -> int:
        return len(self.window)

    @classmethod
    def identity(cls, n: int) -> SignedPermutation:
        return cls(tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        """Evaluate at ``i`` in [-n, n] \\ {0}, using beta(-i) = -beta(i)."""
        if i > 0:
            return self.window[i - 1]
        if i < 0:
            return -self.window[-i - 1]
        raise ValueError("signed permutations are not defined at 0")

    def __len__(self):
        return len(self.window)

    def __iter__(self):
        return iter(self.window)

    @property
    def neg(self) -> int:
        return sum(1 for v in self.window if v < 0)

    def is_even(self) -> bool:
        return self.neg % 2 == 0

    def __str__(self):
        return format_window(self)


_WINDOW_RE = re.compile(r"^\s*\[\s*(-?\d+(\s*,\s*-?\d+)*)?\s*\]\s*$")


def parse_window(text: str) -> SignedPermutation:
    """Parse ``[v1,v2,...,vn]`` into a signed permutation."""
    if not _WINDOW_RE.match(text):
        raise WindowError(f"malformed window text: {text!r}")
    body = text.strip()[1:-1].strip()
    values = tuple(int(v) for v in body.split(",")) if body else ()
    return SignedPermutation(values)


def format_window(beta: SignedPermutation) -> str:
    return "[" + ",".join(str(v) for v in beta.window) + "]"


def group_order(kind: str, n: int) -> int:
    size = 2 ** n
    for i in range(2, n + 1):
        size *= i
    if kind == "D":
        return size // 2 if n >= 1 else 1
    if kind == "S":
        return size // 2 ** n
    return size


def enumerate_group(kind: str, n: int) -> Iterator[SignedPermutation]:
    """
    Yield the elements of B_n, D_n or S_n in lexicographic order of windows.

    S_n is the subset of B_n without negative entries.
    """
    if n < 0:
        raise ValueError("rank must be nonnegative")
    if kind == "D" and n < 1:
        raise ValueError("D_n is enumerated for n >= 1")
    if kind not in ("B", "D", "S"):
        raise ValueError(f"unknown group kind {kind!r}")
    # a window is lexicographically determined by its values; sorting all
    # candidates is cheap next to computing statistics on them
    windows = []
    for perm in itertools.permutations(range(1, n + 1)):
        if kind == "S":
            windows.append(perm)
            continue
        for signs in itertools.product((1, -1), repeat=n):
            if kind == "D" and signs.count(-1) % 2:
                continue
            windows.append(tuple(s * v for s, v in zip(signs, perm)))
    windows.sort()
    for w in windows:
        yield SignedPermutation(w)


def compose(beta: SignedPermutation, gamma: SignedPermutation) -> SignedPermutation:
    """Return ``beta o gamma``, i.e. ``i -> beta(gamma(i))``."""
    if beta.n != gamma.n:
        raise ValueError("rank mismatch")
    return SignedPermutation(tuple(beta(v) for v in gamma.window))


def inverse(beta: SignedPermutation) -> SignedPermutation:
    inv = [0] * beta.n
    for i, v in enumerate(beta.window, start=1):
        inv[abs(v) - 1] = i if v > 0 else -i
    return SignedPermutation(tuple(inv))


@dataclass(frozen=True)
class StatRecordB:
    inv: int
    neg: int
    len_b: int
    des_set_b: frozenset
    des_b: int
    maj: int
    fmaj: int


@dataclass(frozen=True)
class StatRecordR:
    des_set_r: frozenset
    d_r: int
    maj_r: int


@dataclass(frozen=True)
class StatRecordD:
    des_set_d: frozenset
    des_d: int
    len_d: int
    d_class: DClass


def _inv(w: tuple[int, ...]) -> int:
    # pairs i < j with w[i] > w[j]
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def b_stats(beta: SignedPermutation) -> StatRecordB:
    w = beta.window
    inv = _inv(w)
    neg = sum(1 for v in w if v < 0)
    len_b = inv - sum(v for v in w if v < 0)
    ext = (0,) + w
    des = frozenset(i for i in range(len(w)) if ext[i] > ext[i + 1])
    maj = sum(des)
    return StatRecordB(inv=inv, neg=neg, len_b=len_b, des_set_b=des,
                       des_b=len(des), maj=maj, fmaj=2 * maj + neg)


def _r_key(v: int, n: int) -> int:
    # 1 < ... < n <_R -n < ... < -1
    return v if v > 0 else 2 * n + 1 + v


def r_stats(beta: SignedPermutation) -> StatRecordR:
    n = beta.n
    ext = beta.window + (n,)
    des = frozenset(i for i in range(1, n + 1)
                    if _r_key(ext[i - 1], n) > _r_key(ext[i], n))
    return StatRecordR(des_set_r=des, d_r=len(des), maj_r=sum(des))


def d_stats(gamma: SignedPermutation) -> StatRecordD:
    """Type D descents and length; needs n >= 2 since gamma(0) := -gamma(2)."""
    w = gamma.window
    n = len(w)
    if n < 2:
        raise ValueError(f"Des_D is undefined for n = {n} < 2")
    if not gamma.is_even():
        raise ValueError(f"{format_window(gamma)} is not in D_{n}")
    ext = (-w[1],) + w
    des = frozenset(i for i in range(n) if ext[i] > ext[i + 1])
    neg = gamma.neg
    len_d = _inv(w) - sum(v for v in w if v < 0) - neg
    if 0 not in des and w[0] < 0:
        cls = DClass.PLUS
    elif 0 in des and w[0] > 0:
        cls = DClass.MINUS
    else:
        cls = DClass.ZERO
    return StatRecordD(des_set_d=des, des_d=len(des), len_d=len_d, d_class=cls)
