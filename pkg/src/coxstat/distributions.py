"""Joint distributions of statistics over B_n, D_n and S_n as exact polynomials."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .group import DClass, b_stats, d_stats, enumerate_group, r_stats
from .qseries import Caps, TruncatedSeries

__all__ = ["WeightSpec", "STATISTICS", "dist_poly", "statistic_values", "natural_caps"]

# statistic name -> variable it is attached to
STATISTICS = {
    "des_B": "t", "d_R": "t", "des_D": "t",
    "maj": "q", "maj_R": "q", "fmaj": "q", "co_maj": "q",
    "len_B": "p", "len_D": "p",
    "neg": "a",
}
_NEEDS_D = {"des_D"}


@dataclass(frozen=True)
class WeightSpec:
    """Which statistic each of t, q, p, a records; ``None`` sets the variable to 1.

    ``co_maj`` is ``n*des_B - maj - neg``.
    """
    t: str | None = None
    q: str | None = None
    p: str | None = None
    a: str | None = None

    def __post_init__(self):
        for var in ("t", "q", "p", "a"):
            stat = getattr(self, var)
            if stat is not None and STATISTICS.get(stat) != var:
                raise ValueError(f"statistic {stat!r} cannot be attached to {var}")

    @classmethod
    def from_names(cls, names) -> WeightSpec:
        kw = {}
        for name in names:
            if name not in STATISTICS:
                raise ValueError(f"unknown statistic {name!r}")
            var = STATISTICS[name]
            if var in kw:
                raise ValueError(f"two statistics for variable {var}")
            kw[var] = name
        return cls(**kw)

    def stats(self) -> tuple[str, ...]:
        return tuple(s for s in (self.t, self.q, self.p, self.a) if s is not None)


def statistic_values(beta, names) -> dict[str, int]:
    """Evaluate the named statistics on one group element."""
    n = beta.n
    b = b_stats(beta)
    out = {}
    for name in names:
        if name == "des_B":
            out[name] = b.des_b
        elif name == "maj":
            out[name] = b.maj
        elif name == "fmaj":
            out[name] = b.fmaj
        elif name == "co_maj":
            out[name] = n * b.des_b - b.maj - b.neg
        elif name == "len_B":
            out[name] = b.len_b
        elif name == "len_D":
            out[name] = b.len_b - b.neg
        elif name == "neg":
            out[name] = b.neg
        elif name == "d_R":
            out[name] = r_stats(beta).d_r
        elif name == "maj_R":
            out[name] = r_stats(beta).maj_r
        elif name == "des_D":
            out[name] = d_stats(beta).des_d
        else:
            raise ValueError(f"unknown statistic {name!r}")
    return out


def natural_caps(n: int, w: WeightSpec) -> Caps:
    """Caps that hold the distribution polynomial of rank ``n`` without loss."""
    def cap(stat):
        if stat is None:
            return 0
        return {
            "des_B": n, "d_R": n, "des_D": n,
            "maj": n * (n - 1) // 2, "maj_R": n * (n + 1) // 2, "fmaj": n * n,
            "co_maj": n * n, "len_B": n * n, "len_D": n * n, "neg": n,
        }[stat]
    return Caps(t=cap(w.t), q=cap(w.q), p=cap(w.p), a=cap(w.a))


def _check_defined(kind: str, n: int, w: WeightSpec):
    if kind not in ("B", "D", "S"):
        raise ValueError(f"unknown group kind {kind!r}")
    if kind == "D" and n < 1:
        raise ValueError("D_n is used for n >= 1")
    if any(s in _NEEDS_D for s in w.stats()):
        if kind != "D":
            raise ValueError("des_D is defined on D_n only")
        if n < 2:
            raise ValueError(f"des_D is undefined for n = {n} < 2")


def dist_poly(kind: str, n: int, w: WeightSpec, caps: Caps | None = None,
              t_offset=None) -> TruncatedSeries:
    """
    ``sum over the group of t^.. q^.. p^.. a^..`` per the weight spec.

    ``t_offset`` optionally maps an element to an integer added to its
    t-exponent (used for the D_n^+/D_n^- shifts); the shifted exponent must
    stay nonnegative.
    """
    _check_defined(kind, n, w)
    caps = caps or natural_caps(n, w)
    names = w.stats()
    counts = Counter()
    for beta in enumerate_group(kind, n):
        vals = statistic_values(beta, names)
        e = [vals.get(w.t, 0) if w.t else 0,
             vals.get(w.q, 0) if w.q else 0,
             vals.get(w.p, 0) if w.p else 0,
             vals.get(w.a, 0) if w.a else 0,
             0]
        if t_offset is not None:
            e[0] += t_offset(beta)
            if e[0] < 0:
                raise ValueError(f"negative t-exponent for {beta}")
        counts[tuple(e)] += 1
    return TruncatedSeries.from_terms(caps, counts)


def d_class_offset(gamma) -> int:
    """+1 on D_n^+, -1 on D_n^-, 0 on D_n^0."""
    cls = d_stats(gamma).d_class
    return {DClass.PLUS: 1, DClass.MINUS: -1, DClass.ZERO: 0}[cls]


__all__.append("d_class_offset")
