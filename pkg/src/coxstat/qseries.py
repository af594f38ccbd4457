"""
Truncated formal power series in the variables t, q, p, a, u.

Coefficients are exact (Python ``int`` or ``fractions.Fraction``).  Every
series carries per-variable caps and all arithmetic is done modulo the ideal
spanned by monomials exceeding some cap.  Storage is a dense numpy object
array indexed by the exponent vector ``(e_t, e_q, e_p, e_a, e_u)``; the
sparse term map is available through :meth:`TruncatedSeries.terms`.

>>> caps = Caps(t=3)
>>> t = TruncatedSeries.monomial(caps, t=1)
>>> (1 - t).invert().pretty()
'1 + t + t^2 + t^3'
"""

from __future__ import annotations

import functools
import json
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from math import comb, factorial
from numbers import Rational
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "VARS", "Caps", "CapError", "SeriesError", "TruncatedSeries",
    "substitute", "pochhammer", "q_bracket", "q_factorial", "hat_factorial",
    "q_multinomial", "inv_pochhammer", "inv_q_factorial", "exp_p", "hat_exp",
    "exp_classical", "coeff", "bernoulli_number", "bernoulli_poly",
    "gr_product", "format_rational", "parse_rational",
]

VARS = ("t", "q", "p", "a", "u")
_AXIS = {v: i for i, v in enumerate(VARS)}


class CapError(ValueError):
    """Operands with different caps, or a request beyond a cap."""


class SeriesError(ValueError):
    """An operation whose precondition on the series fails."""


@dataclass(frozen=True)
class Caps:
    t: int = 0
    q: int = 0
    p: int = 0
    a: int = 0
    u: int = 0

    def __post_init__(self):
        for v in VARS:
            if getattr(self, v) < 0:
                raise CapError(f"cap for {v} must be >= 0")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(getattr(self, v) + 1 for v in VARS)

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(getattr(self, v) for v in VARS)

    def with_(self, **kw) -> Caps:
        return replace(self, **kw)

    def to_dict(self) -> dict[str, int]:
        return asdict(self)

    def covers(self, other: Caps) -> bool:
        return all(a >= b for a, b in zip(self.as_tuple(), other.as_tuple()))


def format_rational(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Rational)) and not isinstance(x, bool)


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class TruncatedSeries:
    __slots__ = ("caps", "_c")
    __array_priority__ = 1000  # keep numpy scalars from broadcasting over us

    def __init__(self, caps: Caps, coeffs: np.ndarray | None = None):
        self.caps = caps
        if coeffs is None:
            coeffs = np.zeros(caps.shape, dtype=object)
        elif coeffs.shape != caps.shape:
            raise CapError(f"array shape {coeffs.shape} does not match caps {caps}")
        self._c = coeffs

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, caps: Caps) -> TruncatedSeries:
        return cls(caps)

    @classmethod
    def const(cls, caps: Caps, c=1) -> TruncatedSeries:
        s = cls(caps)
        s._c[0, 0, 0, 0, 0] = _norm(c)
        return s

    @classmethod
    def one(cls, caps: Caps) -> TruncatedSeries:
        return cls.const(caps, 1)

    @classmethod
    def monomial(cls, caps: Caps, coeff=1, **exps: int) -> TruncatedSeries:
        """``coeff * t^.. q^.. p^.. a^.. u^..``; zero if any exponent exceeds its cap."""
        s = cls(caps)
        e = _exp_tuple(exps)
        if all(0 <= x <= c for x, c in zip(e, caps.as_tuple())):
            s._c[e] = _norm(coeff)
        return s

    @classmethod
    def from_terms(cls, caps: Caps, terms: Mapping | Iterable) -> TruncatedSeries:
        """Build from ``{exponent_vector: coeff}``, dropping terms beyond the caps."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        s = cls(caps)
        top = caps.as_tuple()
        for e, c in items:
            e = tuple(e)
            if all(0 <= x <= m for x, m in zip(e, top)):
                s._c[e] += c
        return s

    def copy(self) -> TruncatedSeries:
        return TruncatedSeries(self.caps, self._c.copy())

    # inspection ------------------------------------------------------------

    def __getitem__(self, exps) -> int | Fraction:
        if isinstance(exps, Mapping):
            exps = _exp_tuple(exps)
        return _norm(self._c[tuple(exps)])

    def terms(self) -> dict[tuple[int, ...], int | Fraction]:
        """Nonzero coefficients keyed by exponent vector, in lexicographic order."""
        idx = np.nonzero(self._c)
        out = {tuple(int(i) for i in e): _norm(self._c[e]) for e in zip(*idx)}
        return dict(sorted(out.items()))

    def nnz(self) -> int:
        return len(np.nonzero(self._c)[0])

    def constant_term(self):
        return _norm(self._c[0, 0, 0, 0, 0])

    def is_zero(self) -> bool:
        return not self._c.any()

    def degree(self, var: str) -> int:
        """Highest retained exponent of ``var`` (-1 for the zero series)."""
        axis = _AXIS[var]
        other = tuple(i for i in range(5) if i != axis)
        used = np.nonzero(self._c.any(axis=other))[0]
        return int(used[-1]) if len(used) else -1

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.caps == other.caps and bool(np.all(self._c == other._c))
        if _is_scalar(other):
            return self == TruncatedSeries.const(self.caps, other)
        return NotImplemented

    __hash__ = None

    def first_difference(self, other: TruncatedSeries):
        """Lexicographically first exponent vector where the two series differ, or None."""
        _check_caps(self, other)
        diff = np.nonzero(self._c != other._c)
        if not len(diff[0]):
            return None
        first = min(tuple(int(i) for i in e) for e in zip(*diff))
        return first, _norm(self._c[first]), _norm(other._c[first])

    # arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            _check_caps(self, other)
            return other
        if _is_scalar(other):
            return TruncatedSeries.const(self.caps, other)
        raise TypeError(f"cannot combine series with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return TruncatedSeries(self.caps, self._c + other._c)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.caps, -self._c)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return TruncatedSeries(self.caps, self._c - other._c)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if _is_scalar(other):
            return TruncatedSeries(self.caps, self._c * _norm(other))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        _check_caps(self, other)
        return TruncatedSeries(self.caps, _convolve(self._c, other._c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * Fraction(other) ** -1
        if isinstance(other, TruncatedSeries):
            return self * other.invert()
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        result = TruncatedSeries.one(self.caps)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, **exps: int) -> TruncatedSeries:
        """Multiply by a monomial with nonnegative exponents."""
        e = _exp_tuple(exps)
        if any(x < 0 for x in e):
            raise SeriesError("negative exponents are not supported")
        out = np.zeros(self.caps.shape, dtype=object)
        dims = self.caps.shape
        if all(x < d for x, d in zip(e, dims)):
            dst = tuple(slice(x, None) for x in e)
            src = tuple(slice(0, d - x) for x, d in zip(e, dims))
            out[dst] = self._c[src]
        return TruncatedSeries(self.caps, out)

    def unshift(self, **exps: int) -> TruncatedSeries:
        """
        Divide by a monomial; every term must be divisible by it.

        The result is only known up to the original caps minus the
        exponents, so it is returned at the same caps with the top layer
        recomputed as zero; callers use it where that layer is irrelevant.
        """
        e = _exp_tuple(exps)
        for axis, x in enumerate(e):
            if x and np.any(np.take(self._c, range(min(x, self._c.shape[axis])), axis=axis)):
                raise SeriesError(f"series is not divisible by {VARS[axis]}^{x}")
        out = np.zeros(self.caps.shape, dtype=object)
        dims = self.caps.shape
        src = tuple(slice(x, None) for x in e)
        dst = tuple(slice(0, d - x) for x, d in zip(e, dims))
        out[dst] = self._c[src]
        return TruncatedSeries(self.caps, out)

    def invert(self) -> TruncatedSeries:
        """Multiplicative inverse; the constant term must be nonzero."""
        c0 = self.constant_term()
        if c0 == 0:
            raise SeriesError("cannot invert a series with zero constant term")
        c0inv = _norm(Fraction(1, 1) / c0)
        # variables absent from self stay absent from the inverse
        box = tuple(slice(0, 1) if h == 1 else slice(None) for h in _bbox(self._c))
        rest = self._c[box].copy()
        rest[0, 0, 0, 0, 0] = 0
        if not rest.any():
            return TruncatedSeries.const(self.caps, c0inv)
        # y <- (1 - rest*y)/c0 gains at least one degree per round in any
        # variable that divides every term of rest; stop at the fixed point
        y = np.zeros(rest.shape, dtype=object)
        y[0, 0, 0, 0, 0] = c0inv
        bound = sum(self.caps.as_tuple()) + 2
        for _ in range(bound):
            nxt = -_convolve(rest, y)
            nxt[0, 0, 0, 0, 0] += 1
            if c0inv != 1:
                nxt = nxt * c0inv
            if np.all(nxt == y):
                break
            y = nxt
        out = np.zeros(self.caps.shape, dtype=object)
        out[box] = y
        return TruncatedSeries(self.caps, out)

    # caps ------------------------------------------------------------------

    def truncate(self, caps: Caps) -> TruncatedSeries:
        """Drop terms beyond ``caps`` (which must not exceed the current caps)."""
        if not self.caps.covers(caps):
            raise CapError(f"cannot truncate {self.caps} up to {caps}")
        sl = tuple(slice(0, d) for d in caps.shape)
        return TruncatedSeries(caps, self._c[sl].copy())

    def recap(self, caps: Caps) -> TruncatedSeries:
        """Re-embed at other caps: truncate where smaller, zero-pad where larger."""
        out = np.zeros(caps.shape, dtype=object)
        sl = tuple(slice(0, min(a, b)) for a, b in zip(caps.shape, self.caps.shape))
        out[sl] = self._c[sl]
        return TruncatedSeries(caps, out)

    def map_coefficients(self, fn) -> TruncatedSeries:
        out = np.zeros(self.caps.shape, dtype=object)
        for e, c in self.terms().items():
            out[e] = _norm(fn(c))
        return TruncatedSeries(self.caps, out)

    # text / json -----------------------------------------------------------

    def to_text(self) -> str:
        """Canonical form: one ``coeff * t^e1 q^e2 p^e3 a^e4 u^e5`` per line."""
        lines = []
        for e, c in self.terms().items():
            mono = " ".join(f"{v}^{x}" for v, x in zip(VARS, e))
            lines.append(f"{format_rational(c)} * {mono}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "caps": self.caps.to_dict(),
            "terms": {",".join(map(str, e)): format_rational(c)
                      for e, c in self.terms().items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> TruncatedSeries:
        caps = Caps(**data["caps"])
        terms = {tuple(int(x) for x in k.split(",")): _norm(parse_rational(v))
                 for k, v in data["terms"].items()}
        return cls.from_terms(caps, terms)

    def pretty(self) -> str:
        """Human-readable sum such as ``1 + 2t + t^2``."""
        terms = self.terms()
        if not terms:
            return "0"
        parts = []
        for e, c in sorted(terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = "".join(v if x == 1 else f"{v}^{x}" for v, x in zip(VARS, e) if x)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            elif isinstance(mag, Fraction):
                body = f"({mag})*{mono}"
            else:
                body = f"{mag}{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"TruncatedSeries({self.pretty()!s}, caps={self.caps})"

    def json_dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _exp_tuple(exps: Mapping[str, int]) -> tuple[int, ...]:
    unknown = set(exps) - set(VARS)
    if unknown:
        raise KeyError(f"unknown variables {sorted(unknown)}")
    return tuple(int(exps.get(v, 0)) for v in VARS)


def _check_caps(x: TruncatedSeries, y: TruncatedSeries):
    if x.caps != y.caps:
        raise CapError(f"cap mismatch: {x.caps} vs {y.caps}")


def _bbox(arr: np.ndarray) -> tuple[int, ...]:
    """Per-axis one-past-highest index holding a nonzero entry."""
    nz = np.nonzero(arr)
    if not len(nz[0]):
        return (0,) * arr.ndim
    return tuple(int(ix.max()) + 1 for ix in nz)


def _convolve(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Truncated product of two coefficient arrays of equal shape."""
    nx, ny = np.count_nonzero(x), np.count_nonzero(y)
    small, big = (x, y) if nx <= ny else (y, x)
    out = np.zeros(x.shape, dtype=object)
    if not nx or not ny:
        return out
    dims = x.shape
    hi = _bbox(big)
    for e in zip(*np.nonzero(small)):
        lens = [min(d - ei, h) for d, ei, h in zip(dims, e, hi)]
        if min(lens) <= 0:
            continue
        dst = tuple(slice(ei, ei + n) for ei, n in zip(e, lens))
        src = tuple(slice(0, n) for n in lens)
        c = small[e]
        if c == 1:
            out[dst] += big[src]
        else:
            out[dst] += c * big[src]
    return out


# substitution ---------------------------------------------------------------

def substitute(x: TruncatedSeries, rules: Mapping, caps: Caps | None = None) -> TruncatedSeries:
    """
    Simultaneously replace variables and re-truncate to ``caps`` (default x.caps).

    Each rule maps a variable to a monomial ``{variable: exponent}``, to a
    pair ``(rational, {variable: exponent})``, or to a :class:`TruncatedSeries`
    at the output caps (a series image must be the only rule).  The caller
    makes sure no term dropped by the caps of ``x`` would land inside the
    output caps.

    >>> caps = Caps(q=6)
    >>> x = TruncatedSeries.from_terms(caps, {(0, 0, 0, 0, 0): 1, (0, 1, 0, 0, 0): 1, (0, 3, 0, 0, 0): 1})
    >>> substitute(x, {"q": {"q": 2}}).pretty()
    '1 + q^2 + q^6'
    """
    caps = caps or x.caps
    series_rules = {v: img for v, img in rules.items() if isinstance(img, TruncatedSeries)}
    if series_rules:
        if len(rules) != 1:
            raise SeriesError("a series image must be the only substitution rule")
        (var, image), = series_rules.items()
        return _substitute_series(x, var, image, caps)
    maps = {}
    for var, img in rules.items():
        scale, mono = img if isinstance(img, tuple) else (1, img)
        exps = _exp_tuple(mono)
        if any(e < 0 for e in exps):
            raise SeriesError(f"substitution {var} <- {mono} would create negative exponents")
        maps[_AXIS[var]] = (_norm(Fraction(scale)), exps)
    out = np.zeros(caps.shape, dtype=object)
    top = caps.as_tuple()
    for e, c in x.terms().items():
        new = list(e)
        for axis, (scale, exps) in maps.items():
            m = e[axis]
            new[axis] -= m
            if m:
                new = [a + m * b for a, b in zip(new, exps)]
                c = c * scale ** m
        if all(a <= b for a, b in zip(new, top)):
            out[tuple(new)] += c
    return TruncatedSeries(caps, out)


def _substitute_series(x, var, image, caps):
    if image.caps != caps:
        raise CapError("substitution image must live at the output caps")
    axis = _AXIS[var]
    lcaps = replace(x.caps, **{var: 0})
    out = TruncatedSeries.zero(caps)
    power = TruncatedSeries.one(caps)
    for m in range(x.caps.shape[axis]):
        layer = np.take(x._c, [m], axis=axis)
        if layer.any():
            out = out + TruncatedSeries(lcaps, layer).recap(caps) * power
        power = power * image
    return out


def coeff(x: TruncatedSeries, var: str, k: int) -> TruncatedSeries:
    """Coefficient of ``var^k`` as a series in the other variables (cap 0 for ``var``)."""
    axis = _AXIS[var]
    if not 0 <= k <= getattr(x.caps, var):
        raise CapError(f"{var}^{k} is beyond the cap {getattr(x.caps, var)}")
    caps = replace(x.caps, **{var: 0})
    return TruncatedSeries(caps, np.take(x._c, [k], axis=axis).copy())


# q-calculus -------------------------------------------------------------------

def _mono(caps: Caps, var: str, k: int, coeff=1) -> TruncatedSeries:
    return TruncatedSeries.monomial(caps, coeff, **{var: k})


def pochhammer(base: TruncatedSeries, var: str, n: int) -> TruncatedSeries:
    """``(base; var)_n = prod_{i<n} (1 - base * var^i)``."""
    if base.constant_term() != 0:
        raise SeriesError("Pochhammer base must have zero constant term")
    if n < 0:
        raise ValueError("n must be >= 0")
    result = TruncatedSeries.one(base.caps)
    for i in range(n):
        result = result * (1 - base.shift(**{var: i}))
    return result


def inv_pochhammer(base: TruncatedSeries, var: str, n: int) -> TruncatedSeries:
    """``1 / (base; var)_n``, inverted factor by factor."""
    if base.constant_term() != 0:
        raise SeriesError("Pochhammer base must have zero constant term")
    result = TruncatedSeries.one(base.caps)
    for i in range(n):
        result = result * (1 - base.shift(**{var: i})).invert()
    return result


def q_bracket(n: int, caps: Caps, var: str = "p") -> TruncatedSeries:
    """``[n]_var = 1 + var + ... + var^(n-1)``."""
    return TruncatedSeries.from_terms(
        caps, {_exp_tuple({var: i}): 1 for i in range(n)})


def q_factorial(n: int, caps: Caps, var: str = "p") -> TruncatedSeries:
    result = TruncatedSeries.one(caps)
    for i in range(2, n + 1):
        result = result * q_bracket(i, caps, var)
    return result


def inv_q_factorial(n: int, caps: Caps, var: str = "p") -> TruncatedSeries:
    result = TruncatedSeries.one(caps)
    for i in range(2, n + 1):
        result = result * q_bracket(i, caps, var).invert()
    return result


def hat_factorial(n: int, caps: Caps) -> TruncatedSeries:
    """``[n^]_{a,p}! = (-ap; p)_n [n]_p!``."""
    return pochhammer(_mono(caps, "a", 1).shift(p=1) * -1, "p", n) * q_factorial(n, caps, "p")


def q_multinomial(parts: Iterable[int], caps: Caps, var: str = "p") -> TruncatedSeries:
    """
    ``[n]! / ([n_0]! ... [n_k]!)`` as an exact polynomial in ``var``.

    Raises CapError when its degree exceeds the cap, instead of truncating.
    """
    parts = list(parts)
    n = sum(parts)
    degree = (n * n - sum(m * m for m in parts)) // 2
    if degree > getattr(caps, var):
        raise CapError(f"q-multinomial of degree {degree} exceeds {var}-cap {getattr(caps, var)}")
    result = q_factorial(n, caps, var)
    for m in parts:
        result = result * inv_q_factorial(m, caps, var)
    for c in result.terms().values():
        if not isinstance(c, int) or c < 0:
            raise SeriesError(f"q-multinomial produced non-integral coefficient {c}")
    return result


def _check_exp_argument(arg: TruncatedSeries):
    if np.any(arg._c[..., 0]):
        raise SeriesError("exponential argument needs a positive u-exponent in every term")


def exp_p(arg: TruncatedSeries) -> TruncatedSeries:
    """``e[arg]_p = sum_m arg^m / [m]_p!`` up to the u-cap."""
    _check_exp_argument(arg)
    caps = arg.caps
    result = TruncatedSeries.one(caps)
    power = TruncatedSeries.one(caps)
    inv_fact = TruncatedSeries.one(caps)
    for m in range(1, caps.u + 1):
        power = power * arg
        inv_fact = inv_fact * q_bracket(m, caps, "p").invert()
        result = result + power * inv_fact
    return result


def hat_exp(arg: TruncatedSeries, base: TruncatedSeries) -> TruncatedSeries:
    """
    ``sum_m arg^m / ((base; p)_m [m]_p!)``.

    ``base = -ap`` gives the usual hat exponential; ``base = a`` and
    ``base = -a`` give the variants with denominators ``(a;p)_m [m]_p!`` and
    ``(-a;p)_m [m]_p!``.
    """
    _check_exp_argument(arg)
    if base.constant_term() != 0:
        raise SeriesError("hat_exp base must have zero constant term")
    caps = arg.caps
    result = TruncatedSeries.one(caps)
    power = TruncatedSeries.one(caps)
    inv_den = TruncatedSeries.one(caps)
    for m in range(1, caps.u + 1):
        power = power * arg
        inv_den = inv_den * (1 - base.shift(p=m - 1)).invert() * q_bracket(m, caps, "p").invert()
        result = result + power * inv_den
    return result


def exp_classical(arg: TruncatedSeries) -> TruncatedSeries:
    """``exp(arg) = sum_m arg^m / m!`` up to the u-cap."""
    _check_exp_argument(arg)
    result = TruncatedSeries.one(arg.caps)
    power = TruncatedSeries.one(arg.caps)
    for m in range(1, arg.caps.u + 1):
        power = power * arg
        result = result + power * Fraction(1, factorial(m))
    return result


def gr_product(caps: Caps, u_prefactor: TruncatedSeries | None = None) -> TruncatedSeries:
    """
    ``prod_{i,j >= 0} 1 / (1 - c u p^i q^j)`` for a prefactor ``c`` free of t and u.

    Only factors with ``i <= p-cap`` and ``j <= q-cap`` differ from 1 modulo
    the caps.
    """
    c = TruncatedSeries.one(caps) if u_prefactor is None else u_prefactor
    if c.caps != caps:
        raise CapError("prefactor must live at the given caps")
    if c.degree("u") > 0 or c.degree("t") > 0:
        raise SeriesError("prefactor must not involve t or u")
    cu = c.shift(u=1)
    result = TruncatedSeries.one(caps)
    for i in range(caps.p + 1):
        for j in range(caps.q + 1):
            result = result * (1 - cu.shift(p=i, q=j)).invert()
    return result


# Bernoulli ----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{j<=n} C(n+1, j) B_j = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, j) * bernoulli_number(j) for j in range(n)) / (n + 1)


def bernoulli_poly(n: int, x) -> Fraction:
    """B_n(x) = sum_k C(n, k) B_k x^(n-k)."""
    x = Fraction(x)
    return sum(comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1))

