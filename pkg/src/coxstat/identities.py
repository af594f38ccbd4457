"""
Registry of generating-function identities, each checked two ways.

One side is built by enumerating B_n / D_n (or integer sequences), the
other with truncated series algebra; the two are compared coefficient by
coefficient as exact rationals.

>>> r = verify("cg26", n_max=2, n_min=2, t_cap=1)
>>> r.status
'pass'
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Iterator

from .distributions import WeightSpec, d_class_offset, dist_poly
from .encoding import compositions, enumerate_sequences, psi, seq_stats
from .group import b_stats, d_stats, enumerate_group, format_window, r_stats
from .qseries import (
    VARS, CapError, Caps, TruncatedSeries, bernoulli_number, bernoulli_poly,
    coeff, exp_classical, exp_p, format_rational, gr_product, hat_exp,
    inv_pochhammer, inv_q_factorial, pochhammer, q_bracket, q_multinomial,
    substitute,
)

__all__ = [
    "VerificationReport", "Identity", "REGISTRY", "verify", "infer_caps",
    "UnknownIdentity", "CONVENTIONS",
]

CONVENTIONS = {"bernoulli": "B1=-1/2", "inv": "i<j", "sgn0": "+"}


class UnknownIdentity(KeyError):
    pass


@dataclass
class VerificationReport:
    identity: str
    params: dict
    status: str  # pass | fail | diagnostic
    checked: int
    first_mismatch: dict | None
    wall_ms: float = 0.0
    details: dict | None = None
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "identity": self.identity,
            "params": self.params,
            "status": self.status,
            "checked": self.checked,
            "first_mismatch": self.first_mismatch,
            "conventions": self.conventions,
        }
        if self.details is not None:
            out["details"] = self.details
        if timing:
            out["wall_ms"] = round(self.wall_ms, 3)
        return out


class _Tally:
    """Accumulates compared coefficients and keeps the first mismatch."""

    def __init__(self):
        self.checked = 0
        self.mismatch = None

    def series(self, where: str, lhs: TruncatedSeries, rhs: TruncatedSeries):
        self.checked += lhs._c.size
        if self.mismatch is None:
            diff = lhs.first_difference(rhs)
            if diff is not None:
                e, l, r = diff
                self.mismatch = {"where": where, "exponents": dict(zip(VARS, e)),
                                 "lhs": format_rational(l), "rhs": format_rational(r)}

    def point(self, where: str, ok: bool, lhs, rhs):
        self.checked += 1
        if not ok and self.mismatch is None:
            self.mismatch = {"where": where, "exponents": None,
                             "lhs": str(lhs), "rhs": str(rhs)}


@dataclass(frozen=True)
class Identity:
    id: str
    title: str
    mode: str                      # "series", "pointwise" or "diagnostic"
    per_rank: bool                 # False: one run covers ranks 0..n_max via u
    min_n: int
    quick: dict
    full: dict
    caps_fn: Callable[[int, int], Caps]
    run: Callable[..., dict | None]


# helpers ----------------------------------------------------------------------

def _mono(caps: Caps, **e) -> TruncatedSeries:
    return TruncatedSeries.monomial(caps, **e)


def _at_u(x: TruncatedSeries, caps: Caps, n: int) -> TruncatedSeries:
    """Embed a u-free series at ``caps`` and multiply by u^n."""
    return x.recap(caps).shift(u=n)


def _inv_hat_factorial(n: int, caps: Caps) -> TruncatedSeries:
    return inv_pochhammer(_mono(caps, a=1, p=1) * -1, "p", n) * inv_q_factorial(n, caps)


W_FULL_B = WeightSpec(t="des_B", q="maj", p="len_B", a="neg")


# caps --------------------------------------------------------------------------

def _caps_generic(n: int, t_cap: int) -> Caps:
    return Caps(t=t_cap, q=n * (t_cap + n), p=n * n + t_cap * n, a=n, u=n)


def infer_caps(identity_id: str, n_max: int, t_cap: int | None = None) -> Caps:
    """
    Smallest caps at which the comparison for ``identity_id`` is lossless.

    For the four-variable identities: q-cap n(T+n), p-cap n^2 + nT,
    a-cap n and u-cap n, with T the t-cap.
    """
    ident = _lookup(identity_id)
    if t_cap is None:
        t_cap = ident.quick.get("t_cap", 0)
    return ident.caps_fn(n_max, t_cap)


# pointwise checks -----------------------------------------------------------------

def _run_prop31(ns, caps, t_cap, tally):
    for n in ns:
        for beta in enumerate_group("B", n):
            b, r = b_stats(beta), r_stats(beta)
            ok = r.d_r == b.des_b and r.maj_r == b.maj + b.neg
            tally.point(format_window(beta), ok, (r.d_r, r.maj_r), (b.des_b, b.maj + b.neg))


def _run_cor33(ns, caps, t_cap, tally):
    for n in ns:
        for beta in enumerate_group("B", n):
            b, r = b_stats(beta), r_stats(beta)
            tally.point(format_window(beta), b.fmaj == 2 * r.maj_r - b.neg,
                        b.fmaj, 2 * r.maj_r - b.neg)


# B_n series identities --------------------------------------------------------------

def _run_carlitz(ns, caps, t_cap, tally):
    t = _mono(caps, t=1)
    for n in ns:
        lhs = dist_poly("S", n, WeightSpec(t="des_B", q="maj"), caps) * inv_pochhammer(t, "q", n + 1)
        rhs = TruncatedSeries.zero(caps)
        for k in range(t_cap + 1):
            rhs = rhs + (q_bracket(k + 1, caps, "q") ** n).shift(t=k)
        tally.series(f"n={n}", lhs, rhs)


def _run_cg26(ns, caps, t_cap, tally):
    t = _mono(caps, t=1)
    a = _mono(caps, a=1)
    for n in ns:
        lhs = dist_poly("B", n, WeightSpec(t="des_B", q="maj", a="neg"), caps) \
            * inv_pochhammer(t, "q", n + 1)
        rhs = TruncatedSeries.zero(caps)
        for k in range(t_cap + 1):
            base = q_bracket(k + 1, caps, "q") + a * q_bracket(k, caps, "q")
            rhs = rhs + (base ** n).shift(t=k)
        tally.series(f"n={n}", lhs, rhs)


def _run_symmetry16(ns, caps, t_cap, tally):
    for n in ns:
        lhs = dist_poly("B", n, WeightSpec(t="des_B", q="maj", a="neg"), caps)
        rhs = dist_poly("B", n, WeightSpec(t="des_B", q="co_maj", a="neg"), caps)
        tally.series(f"n={n}", lhs, rhs)


def _cg_fmaj_sides(n_max: int, caps: Caps, t_cap: int):
    lhs = TruncatedSeries.zero(caps)
    c0 = caps.with_(u=0)
    for n in range(n_max + 1):
        poly = dist_poly("B", n, WeightSpec(t="des_B", q="fmaj"), c0)
        den = TruncatedSeries.one(c0)
        for i in range(n + 1):
            den = den * (1 - _mono(c0, t=1, q=2 * i)).invert()
        lhs = lhs + _at_u(poly * den * Fraction(1, factorial(n)), caps, n)
    rhs = TruncatedSeries.zero(caps)
    for k in range(t_cap + 1):
        rhs = rhs + exp_classical(q_bracket(2 * k + 1, caps, "q").shift(u=1)).shift(t=k)
    return lhs, rhs


def _run_cg_fmaj(ns, caps, t_cap, tally):
    lhs, rhs = _cg_fmaj_sides(max(ns), caps, t_cap)
    tally.series("all n", lhs, rhs)


def _main_b_p1_sides(n_max: int, caps: Caps, t_cap: int):
    """The four-variable identity at p = 1 (classical exponentials)."""
    inv_1pa = (1 + _mono(caps, a=1)).invert()
    c0 = caps.with_(u=0)
    lhs = TruncatedSeries.zero(caps)
    w = WeightSpec(t="des_B", q="maj", a="neg")
    for n in range(n_max + 1):
        term = dist_poly("B", n, w, c0) * inv_pochhammer(_mono(c0, t=1), "q", n + 1)
        term = _at_u(term, caps, n) * inv_1pa ** n * Fraction(1, factorial(n))
        lhs = lhs + term
    rhs = TruncatedSeries.zero(caps)
    u = _mono(caps, u=1)
    prod = TruncatedSeries.one(caps)
    for k in range(t_cap + 1):
        rhs = rhs + (prod * exp_classical(u.shift(q=k) * inv_1pa)).shift(t=k)
        prod = prod * exp_classical(u.shift(q=k))
    return lhs, rhs


def _run_cg_from_main(ns, caps, t_cap, tally):
    n_max = max(ns)
    # source: u <- (1+a)u first, which leaves polynomials of a-degree <= n
    src = Caps(t=t_cap, q=(caps.q + 1) // 2, a=n_max, u=n_max)
    lhs_p1, rhs_p1 = _main_b_p1_sides(n_max, src, t_cap)
    image = (1 + _mono(src, a=1)).shift(u=1)
    target = caps.with_(a=0, p=0)
    reduced = []
    for side in (lhs_p1, rhs_p1):
        side = substitute(side, {"u": image})
        reduced.append(substitute(side, {"q": {"q": 2}, "a": {"q": 1}}, target))
    lhs4, rhs4 = _cg_fmaj_sides(n_max, target, t_cap)
    tally.series("lhs", reduced[0], lhs4)
    tally.series("rhs", reduced[1], rhs4)


def _run_main_b(ns, caps, t_cap, tally):
    n_max = max(ns)
    c0 = caps.with_(u=0)
    lhs = TruncatedSeries.zero(caps)
    for n in range(n_max + 1):
        den = inv_pochhammer(_mono(c0, t=1), "q", n + 1) * _inv_hat_factorial(n, c0)
        lhs = lhs + _at_u(dist_poly("B", n, W_FULL_B, c0) * den, caps, n)
    rhs = _main_b_rhs(caps, t_cap)
    tally.series("all n", lhs, rhs)


def _main_b_rhs(caps: Caps, t_cap: int) -> TruncatedSeries:
    ct = caps.with_(t=0)
    u = _mono(ct, u=1)
    minus_ap = _mono(ct, a=1, p=1) * -1
    prod = TruncatedSeries.one(ct)
    rhs = TruncatedSeries.zero(caps)
    for k in range(t_cap + 1):
        term = prod * hat_exp(u.shift(q=k), minus_ap)
        rhs = rhs + term.recap(caps).shift(t=k)
        if k < t_cap:
            prod = prod * exp_p(u.shift(q=k))
    return rhs


def _run_tridist15(ns, caps, t_cap, tally):
    n_max = max(ns)
    c0 = caps.with_(u=0)
    one_minus_t = 1 - _mono(c0, t=1)
    lhs = TruncatedSeries.zero(caps)
    w = WeightSpec(t="des_B", p="len_B", a="neg")
    for n in range(n_max + 1):
        den = (one_minus_t ** (n + 1)).invert() * _inv_hat_factorial(n, c0)
        lhs = lhs + _at_u(dist_poly("B", n, w, c0) * den, caps, n)
    u = _mono(caps, u=1)
    e = exp_p(u)
    rhs = (1 - e.shift(t=1)).invert() * hat_exp(u, _mono(caps, a=1, p=1) * -1)
    tally.series("all n", lhs, rhs)


def _run_brenti_exp(ns, caps, t_cap, tally):
    n_max = max(ns)
    c0 = caps.with_(u=0)
    lhs = TruncatedSeries.zero(caps)
    for n in range(n_max + 1):
        poly = dist_poly("B", n, WeightSpec(t="des_B", a="neg"), c0)
        lhs = lhs + _at_u(poly * Fraction(1, factorial(n)), caps, n)
    one_minus_t = 1 - _mono(caps, t=1)
    u = _mono(caps, u=1)
    num = one_minus_t * exp_classical(u * one_minus_t)
    den = 1 - exp_classical(u * one_minus_t * (1 + _mono(caps, a=1))).shift(t=1)
    tally.series("all n", lhs, num * den.invert())


def _run_gessel_roselle_b(ns, caps, t_cap, tally):
    n_max = max(ns)
    c0 = caps.with_(u=0)
    lhs = TruncatedSeries.zero(caps)
    for n in range(n_max + 1):
        den = inv_pochhammer(_mono(c0, q=1), "q", n) * _inv_pochhammer_step(c0, 2, n)
        lhs = lhs + _at_u(dist_poly("B", n, WeightSpec(q="maj", p="len_B"), c0) * den, caps, n)
    tally.series("all n", lhs, gr_product(caps))


def _inv_pochhammer_step(caps: Caps, step: int, n: int) -> TruncatedSeries:
    """``1/(p^step; p^step)_n``, one factor at a time."""
    result = TruncatedSeries.one(caps)
    for i in range(1, n + 1):
        result = result * (1 - _mono(caps, p=step * i)).invert()
    return result


# lemmas on sequence classes ------------------------------------------------------

def _lemma_caps(n: int, t_cap: int) -> Caps:
    return Caps(p=n * n, a=n)


def _run_znn(ns, caps, t_cap, tally, max_parts=4):
    for n in ns:
        for shape in compositions(n, max_parts):
            brute = defaultdict(int)
            for f in enumerate_sequences(shape, "all"):
                st = seq_stats(f)
                brute[(0, 0, st.len_b, st.neg, 0)] += 1
            lhs = TruncatedSeries.from_terms(caps, brute)
            rhs = q_multinomial(shape.parts, caps, "p")
            for i in range(shape.parts[0], n):
                rhs = rhs * (1 + _mono(caps, a=1, p=i + 1))
            tally.series(f"shape={shape.parts}", lhs, rhs)


def _run_zne(ns, caps, t_cap, tally, max_parts=4):
    a = _mono(caps, a=1)
    for n in ns:
        for shape in compositions(n, max_parts):
            brute = defaultdict(int)
            for f in enumerate_sequences(shape, "even"):
                st = seq_stats(f)
                brute[(0, 0, st.len_b - st.neg, st.neg, 0)] += 1
            lhs = TruncatedSeries.from_terms(caps, brute)
            minus, plus = TruncatedSeries.one(caps), TruncatedSeries.one(caps)
            for i in range(shape.parts[0], n):
                minus = minus * (1 - a.shift(p=i))
                plus = plus * (1 + a.shift(p=i))
            rhs = q_multinomial(shape.parts, caps, "p") * (minus + plus) * Fraction(1, 2)
            tally.series(f"shape={shape.parts}", lhs, rhs)


def _run_lemma62(ns, caps, t_cap, tally):
    for n in ns:
        brute = defaultdict(lambda: defaultdict(int))
        for f in _box_sequences(n, t_cap):
            if sum(1 for v in f if v < 0) % 2:
                continue
            beta, _ = psi(f)
            st = seq_stats(f)
            brute[beta.window][(st.max, st.max * n - st.weight, 0, 0, 0)] += 1
        inv_den = inv_pochhammer(_mono(caps, t=1), "q", n)
        for gamma in enumerate_group("D", n):
            d = d_stats(gamma)
            te = d.des_d + d_class_offset(gamma)
            closed = _mono(caps, t=te, q=b_stats(gamma).maj) * inv_den
            lhs = TruncatedSeries.from_terms(caps, brute[gamma.window])
            tally.series(f"n={n} gamma={format_window(gamma)}", lhs, closed)


def _box_sequences(n: int, k: int) -> Iterator[tuple[int, ...]]:
    import itertools
    return itertools.product(range(-k, k + 1), repeat=n)


# D_n identities --------------------------------------------------------------------

W_FULL_D = WeightSpec(t="des_D", q="maj", p="len_D", a="neg")


def _main_d_rhs(n: int, caps: Caps, t_cap: int) -> TruncatedSeries:
    cu = caps.with_(t=0, u=n)
    u = _mono(cu, u=1)
    a = _mono(cu, a=1)
    plus_base, minus_base = pochhammer(a, "p", n), pochhammer(-a, "p", n)
    prod = TruncatedSeries.one(cu)
    rhs = TruncatedSeries.zero(caps)
    for k in range(t_cap + 1):
        arg = u.shift(q=k)
        inner = prod * (plus_base * hat_exp(arg, a) + minus_base * hat_exp(arg, -a))
        rhs = rhs + coeff(inner, "u", n).recap(caps).shift(t=k)
        if k < t_cap:
            prod = prod * exp_p(u.shift(q=k))
    return rhs * Fraction(1, 2)


def _run_main_d(ns, caps, t_cap, tally, printed=False):
    c = caps.with_(u=0)
    for n in ns:
        lhs = dist_poly("D", n, W_FULL_D, c, t_offset=d_class_offset)
        t = _mono(c, t=1)
        if printed:
            lhs = lhs * inv_pochhammer(t, "q", n)
        else:
            lhs = lhs * inv_pochhammer(t, "q", n + 1) * inv_q_factorial(n, c)
        tally.series(f"n={n}", lhs, _main_d_rhs(n, c, t_cap))


def _run_main_d_printed(ns, caps, t_cap, tally):
    _run_main_d(ns, caps, t_cap, tally, printed=True)


def _run_gessel_roselle_d(ns, caps, t_cap, tally, printed=False):
    n_max = max(ns)
    c0 = caps.with_(u=0)
    lhs = TruncatedSeries.one(caps)
    for n in range(1, n_max + 1):
        den = inv_pochhammer(_mono(c0, p=1) * -1, "p", n - 1)
        if printed:
            den = den * inv_pochhammer(_mono(c0, q=1), "q", n - 1)
        else:
            den = den * inv_pochhammer(_mono(c0, q=1), "q", n) * inv_q_factorial(n, c0)
        poly = dist_poly("D", n, WeightSpec(q="maj", p="len_D"), c0)
        lhs = lhs + _at_u(poly * den, caps, n)
    rhs = gr_product(caps, 1 - _mono(caps, p=1))
    tally.series("all n", lhs, rhs)


def _run_gessel_roselle_d_printed(ns, caps, t_cap, tally):
    _run_gessel_roselle_d(ns, caps, t_cap, tally, printed=True)


def _run_brenti_d(ns, caps, t_cap, tally):
    """Compare the D-Eulerian series with the printed Bernoulli closed form."""
    per_n = {}
    for n in ns:
        poly = dist_poly("D", n, WeightSpec(t="des_D"), caps)
        series = poly * ((1 - _mono(caps, t=1)) ** (n + 1)).invert()
        lhs = [series[(k, 0, 0, 0, 0)] for k in range(t_cap + 1)]
        bern = [bernoulli_poly(n, k + 1) - bernoulli_number(n) for k in range(t_cap + 1)]
        printed_c = n * 2 ** (n - 1)
        printed = [(2 * k + 1) ** n - printed_c * b for k, b in enumerate(bern)]
        closed = TruncatedSeries.from_terms(
            caps, {(k, 0, 0, 0, 0): v for k, v in enumerate(printed)})
        tally.series(f"n={n}", series, closed)
        # constant C with lhs_k = (2k+1)^n - C (B_n(k+1) - B_n), from k >= 1
        ratios = {Fraction((2 * k + 1) ** n - lhs[k]) / bern[k]
                  for k in range(1, t_cap + 1) if bern[k] != 0}
        constant = ratios.pop() if len(ratios) == 1 else None
        per_n[str(n)] = {
            "eulerian": [poly[(k, 0, 0, 0, 0)] for k in range(n + 1)],
            "lhs_coefficients": [str(v) for v in lhs],
            "printed_constant": printed_c,
            "printed_matches": printed == lhs,
            "reconciling_constant": None if constant is None else str(constant),
            "matches_2^(n-1)": constant == 2 ** (n - 1),
        }
    return {"per_n": per_n,
            "finding": "lhs_k = (2k+1)^n - 2^(n-1) (B_n(k+1) - B_n)"
            if all(v["matches_2^(n-1)"] for v in per_n.values())
            else "no single constant 2^(n-1) reconciles all ranks"}


# registry -----------------------------------------------------------------------------

def _c_pointwise(n, t):
    return Caps()


def _c_carlitz(n, t):
    return Caps(t=t, q=n * (t + n))


def _c_cg26(n, t):
    return Caps(t=t, q=n * (t + n), a=n)


def _c_sym(n, t):
    return Caps(t=n, q=n * n + n * (n - 1) // 2, a=n)


def _c_cg_fmaj(n, t):
    return Caps(t=t, q=n * (2 * t + n), u=n)


def _c_tridist(n, t):
    return Caps(t=t, p=n * n + t * n, a=n, u=n)


def _c_brenti_exp(n, t):
    return Caps(t=t, a=n, u=n)


def _c_gr(n, t):
    return Caps(q=2 * n + 2, p=2 * n + 2, u=n)


def _c_lemma62(n, t):
    return Caps(t=t, q=n * t)


def _c_brenti_d(n, t):
    return Caps(t=t)


def _c_main_d(n, t):
    return Caps(t=t, q=n * (t + n), p=n * n + t * n, a=n, u=0)


REGISTRY: dict[str, Identity] = {}


def _register(*idents: Identity):
    for ident in idents:
        REGISTRY[ident.id] = ident


_register(
    Identity("carlitz", "Carlitz q-Eulerian identity over S_n", "series", True, 0,
             {"n_max": 4, "t_cap": 5}, {"n_max": 5, "t_cap": 6}, _c_carlitz, _run_carlitz),
    Identity("prop31_pointwise", "d_R = des_B and maj_R = maj + neg on B_n", "pointwise", True, 0,
             {"n_max": 6}, {"n_max": 7}, _c_pointwise, _run_prop31),
    Identity("cor33_pointwise", "fmaj = 2 maj_R - neg on B_n", "pointwise", True, 0,
             {"n_max": 6}, {"n_max": 7}, _c_pointwise, _run_cor33),
    Identity("cg_fmaj", "Chow-Gessel (des_B, fmaj) exponential identity", "series", False, 0,
             {"n_max": 4, "t_cap": 5}, {"n_max": 5, "t_cap": 6}, _c_cg_fmaj, _run_cg_fmaj),
    Identity("cg_from_main", "Chow-Gessel identity as a specialization of the main B identity",
             "series", False, 0,
             {"n_max": 4, "t_cap": 4}, {"n_max": 4, "t_cap": 4}, _c_cg_fmaj, _run_cg_from_main),
    Identity("znn_lemma", "(len_B, neg) over sequences with a fixed value profile", "series", True, 0,
             {"n_max": 4}, {"n_max": 5}, _lemma_caps, _run_znn),
    Identity("main_B", "(des_B, maj, len_B, neg) generating function over B_n", "series", False, 0,
             {"n_max": 4, "t_cap": 4}, {"n_max": 4, "t_cap": 5}, _caps_generic, _run_main_b),
    Identity("cg26", "Chow-Gessel (des_B, maj, neg) identity", "series", True, 0,
             {"n_max": 4, "t_cap": 6}, {"n_max": 5, "t_cap": 8}, _c_cg26, _run_cg26),
    Identity("symmetry16", "(des_B, maj, neg) ~ (des_B, n des_B - maj - neg, neg)", "series", True, 0,
             {"n_max": 5}, {"n_max": 6}, _c_sym, _run_symmetry16),
    Identity("tridist15", "q = 1 specialization of the main B identity", "series", False, 0,
             {"n_max": 4, "t_cap": 4}, {"n_max": 5, "t_cap": 5}, _c_tridist, _run_tridist15),
    Identity("brenti_exp", "Brenti's exponential formula for (des_B, neg)", "series", False, 0,
             {"n_max": 4, "t_cap": 5}, {"n_max": 5, "t_cap": 6}, _c_brenti_exp, _run_brenti_exp),
    Identity("gessel_roselle_B", "B_n Gessel-Roselle identity for (maj, len_B)", "series", False, 0,
             {"n_max": 4}, {"n_max": 5}, _c_gr, _run_gessel_roselle_b),
    Identity("zne_lemma", "(len_D, neg) over even sequences with a fixed value profile",
             "series", True, 0,
             {"n_max": 4}, {"n_max": 5}, _lemma_caps, _run_zne),
    Identity("lemma62_truncated", "per-element sum over even sequences with pi(f) = gamma",
             "series", True, 2,
             {"n_max": 4, "t_cap": 3}, {"n_max": 4, "t_cap": 3}, _c_lemma62, _run_lemma62),
    Identity("main_D", "(des_D, maj, len_D, neg) identity over D_n", "series", True, 2,
             {"n_max": 4, "t_cap": 4}, {"n_max": 4, "t_cap": 4}, _c_main_d, _run_main_d),
    Identity("main_D_printed", "D_n identity with the printed (t;q)_n normalization",
             "diagnostic", True, 2,
             {"n_max": 4, "t_cap": 4}, {"n_max": 4, "t_cap": 4}, _c_main_d, _run_main_d_printed),
    Identity("gessel_roselle_D", "D_n Gessel-Roselle identity for (maj, len_D)", "series", False, 0,
             {"n_max": 4}, {"n_max": 5}, _c_gr, _run_gessel_roselle_d),
    Identity("gessel_roselle_D_printed",
             "D_n Gessel-Roselle identity with the printed denominators", "diagnostic", False, 0,
             {"n_max": 4}, {"n_max": 5}, _c_gr, _run_gessel_roselle_d_printed),
    Identity("brenti_D_diag", "Bernoulli closed form for D_n Eulerian polynomials",
             "diagnostic", True, 2,
             {"n_max": 5, "t_cap": 6}, {"n_max": 5, "t_cap": 6}, _c_brenti_d, _run_brenti_d),
)


def _lookup(identity_id: str) -> Identity:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise UnknownIdentity(identity_id) from None


def verify(identity_id: str, n_max: int | None = None, t_cap: int | None = None,
           caps: Caps | None = None, n_min: int | None = None,
           level: str = "quick") -> VerificationReport:
    """
    Check one registry identity.

    Per-rank identities are checked for each n in ``n_min..n_max``; the
    others are series in u and cover all ranks up to ``n_max`` at once.
    Explicit ``caps`` must cover :func:`infer_caps`.
    """
    ident = _lookup(identity_id)
    defaults = ident.quick if level == "quick" else ident.full
    if n_max is None:
        n_max = defaults["n_max"]
    if t_cap is None:
        t_cap = caps.t if caps is not None and "t_cap" in defaults else defaults.get("t_cap", 0)
    needed = ident.caps_fn(n_max, t_cap)
    if caps is None:
        caps = needed
    elif not caps.covers(needed):
        raise CapError(f"caps {caps} are below the inferred minimum {needed} for {identity_id}")
    if n_min is None or not ident.per_rank:
        n_min = ident.min_n
    if n_min < ident.min_n:
        raise ValueError(f"{identity_id} needs n >= {ident.min_n}")
    if n_max < n_min:
        raise ValueError("empty rank range")
    ns = range(n_min, n_max + 1)
    tally = _Tally()
    start = time.perf_counter()
    details = ident.run(ns, caps, t_cap, tally)
    wall = (time.perf_counter() - start) * 1000
    if ident.mode == "diagnostic":
        status = "diagnostic"
    else:
        status = "pass" if tally.mismatch is None else "fail"
    params = {"n": [n_min, n_max], "t_cap": t_cap, "caps": caps.to_dict()}
    return VerificationReport(identity_id, params, status, tally.checked,
                              tally.mismatch, wall, details)


def identity_ids() -> list[str]:
    return list(REGISTRY)


__all__.append("identity_ids")
