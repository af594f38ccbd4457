"""
Encoding of integer sequences by (signed permutation, partition) pairs.

``psi(f) = (beta, lam)`` sorts the positions of ``f`` by absolute value,
signs them like the entries of ``f`` and breaks ties so that ``beta`` is
increasing on each block.  ``lam`` is the sorted absolute values with the
number of earlier B-descents subtracted.

>>> beta, lam = psi((-4, 4, 1, -3, 6, 3, -4))
>>> format_window(beta), format_sequence(lam.parts)
('[3,-4,6,-7,-1,2,5]', '(1,2,2,2,2,2,4)')
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import factorial
from typing import Iterator, Sequence

from .group import SignedPermutation, b_stats, d_stats, format_window, inverse  # noqa: F401 (doctest)

__all__ = [
    "Partition", "Composition", "SeqStats", "psi", "psi_inverse",
    "psi_d_variant", "seq_stats", "enumerate_sequences", "sequence_class_size",
    "parse_sequence", "format_sequence", "compositions", "is_partition",
]


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(v) for v in self.parts)
        if not is_partition(parts):
            raise ValueError(f"{parts} is not a non-decreasing nonnegative sequence")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def max(self) -> int:
        return self.parts[-1] if self.parts else 0

    def __len__(self):
        return len(self.parts)


@dataclass(frozen=True)
class Composition:
    """A weak composition ``(n_0, ..., n_k)``; ``n_j`` counts entries with |f_i| = j."""
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(v) for v in self.parts)
        if not parts or any(v < 0 for v in parts):
            raise ValueError(f"invalid composition {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts) - 1


@dataclass(frozen=True)
class SeqStats:
    max: int
    weight: int
    neg: int
    len_b: int


def is_partition(parts: Sequence[int]) -> bool:
    if parts and parts[0] < 0:
        return False
    return all(a <= b for a, b in zip(parts, parts[1:]))


def compositions(n: int, max_parts: int) -> Iterator[Composition]:
    """All weak compositions of ``n`` with 1..max_parts parts."""
    for length in range(1, max_parts + 1):
        for cuts in itertools.combinations_with_replacement(range(n + 1), length - 1):
            bounds = (0,) + cuts + (n,)
            yield Composition(tuple(b - a for a, b in zip(bounds, bounds[1:])))


_SEQ_RE = re.compile(r"^\s*\(\s*(-?\d+(\s*,\s*-?\d+)*)?\s*\)\s*$")


def parse_sequence(text: str) -> tuple[int, ...]:
    if not _SEQ_RE.match(text):
        raise ValueError(f"malformed sequence text: {text!r}")
    body = text.strip()[1:-1].strip()
    return tuple(int(v) for v in body.split(",")) if body else ()


def format_sequence(values: Sequence[int]) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


def _sort_positions(f: Sequence[int]) -> SignedPermutation:
    # zeros get a positive sign
    signed = [(abs(v), -i if v < 0 else i) for i, v in enumerate(f, start=1)]
    signed.sort()
    return SignedPermutation(tuple(s for _, s in signed))


def _descent_counts(des: frozenset, n: int) -> list[int]:
    # entry i-1 holds #{j in des : j <= i-1}
    counts, running = [], 0
    for i in range(1, n + 1):
        if i - 1 in des:
            running += 1
        counts.append(running)
    return counts


def psi(f: Sequence[int]) -> tuple[SignedPermutation, Partition]:
    f = tuple(int(v) for v in f)
    beta = _sort_positions(f)
    counts = _descent_counts(b_stats(beta).des_set_b, len(f))
    lam = tuple(abs(f[abs(b) - 1]) - c for b, c in zip(beta.window, counts))
    return beta, Partition(lam)


def psi_inverse(beta: SignedPermutation, lam: Partition | Sequence[int]) -> tuple[int, ...]:
    if not isinstance(lam, Partition):
        lam = Partition(tuple(lam))
    n = beta.n
    if len(lam) != n:
        raise ValueError(f"rank {n} does not match partition length {len(lam)}")
    counts = _descent_counts(b_stats(beta).des_set_b, n)
    mu = [l + c for l, c in zip(lam.parts, counts)]
    binv = inverse(beta).window
    return tuple(mu[abs(b) - 1] if b > 0 else -mu[abs(b) - 1] for b in binv)


def psi_d_variant(f: Sequence[int]) -> tuple[SignedPermutation, tuple[int, ...], bool]:
    """
    The encoding with type D descents in place of type B descents.

    Returns ``(beta, seq, valid)`` where ``valid`` tells whether ``seq`` is a
    partition.  On even sequences this is not always the case, e.g.
    ``(0, -3, -4)`` gives ``(-1, 1, 1)``.
    """
    f = tuple(int(v) for v in f)
    if len(f) < 2:
        raise ValueError("the type D encoding needs n >= 2")
    if sum(1 for v in f if v < 0) % 2:
        raise ValueError(f"{format_sequence(f)} has an odd number of negative entries")
    beta = _sort_positions(f)
    counts = _descent_counts(d_stats(beta).des_set_d, len(f))
    seq = tuple(abs(f[abs(b) - 1]) - c for b, c in zip(beta.window, counts))
    return beta, seq, is_partition(seq)


def seq_stats(f: Sequence[int]) -> SeqStats:
    f = tuple(int(v) for v in f)
    return SeqStats(
        max=max((abs(v) for v in f), default=0),
        weight=sum(abs(v) for v in f),
        neg=sum(1 for v in f if v < 0),
        len_b=b_stats(_sort_positions(f)).len_b,
    )


def sequence_class_size(shape: Composition) -> int:
    """|Z^n(shape)| = multinomial(n; n_0, ..., n_k) * 2^(n - n_0)."""
    size = factorial(shape.n)
    for m in shape.parts:
        size //= factorial(m)
    return size * 2 ** (shape.n - shape.parts[0])


def enumerate_sequences(shape: Composition, parity: str = "all") -> Iterator[tuple[int, ...]]:
    """
    Sequences with exactly ``shape.parts[j]`` entries of absolute value ``j``.

    ``parity="even"`` keeps those with an even number of negative entries.
    Output is in lexicographic order.
    """
    if parity not in ("all", "even"):
        raise ValueError(f"unknown parity {parity!r}")
    values = [j for j, m in enumerate(shape.parts) for _ in range(m)]
    out = []
    for arrangement in set(itertools.permutations(values)):
        nonzero = [i for i, v in enumerate(arrangement) if v]
        for signs in itertools.product((1, -1), repeat=len(nonzero)):
            if parity == "even" and signs.count(-1) % 2:
                continue
            f = list(arrangement)
            for i, s in zip(nonzero, signs):
                f[i] *= s
            out.append(tuple(f))
    out.sort()
    yield from out

