"""Exact scalar arithmetic shared by the whole package.

Values flow through two concrete shapes:

* ``fractions.Fraction`` for anything rational (the fast path: interval
  endpoints, measures, removed-mass partial sums); plain ints are accepted
  on input and normalised to ``Fraction``;
* sympy expressions for integer-base power forms such as ``2**(-4/3)``
  (irrational contraction ratios) and for logarithmic dimension values
  such as ``log(2)/log(3)``.

Arithmetic mixes freely -- a ``Fraction`` combined with a sympy expression
falls through to sympy's reflected operators -- so geometry code stays
representation-blind.  Comparisons and equality tests are exact (symbolic
differences are canonicalised over a prime-log basis before deciding);
decimal rendering carries an absolute error bound of ``10**-digits``.
"""

from __future__ import annotations

import functools
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import Union

import sympy as sp

Scalar = Union[Fraction, sp.Expr]

ZERO = Fraction(0)
ONE = Fraction(1)


def ensure_scalar(x) -> Scalar:
    """Normalise ``x`` to the package's scalar types.

    Accepts int, Fraction, decimal/rational strings, and sympy expressions.
    sympy rationals are folded back into ``Fraction`` so equality stays
    structural; floats are rejected to keep every quantity exact.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, sp.Expr):
        if x.is_Rational:
            return Fraction(int(x.p), int(x.q))
        return x
    if isinstance(x, float):
        raise TypeError("floats are inexact; pass Fraction, str, or sympy")
    raise TypeError(f"not a scalar: {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``p``, ``p/q``, or a finite decimal into an exact Fraction."""
    return Fraction(text.strip())


def is_rational(x: Scalar) -> bool:
    return isinstance(x, (int, Fraction))


def as_fraction(x: Scalar) -> Fraction:
    x = ensure_scalar(x)
    if isinstance(x, Fraction):
        return x
    raise ValueError(f"not rational: {x}")


def sym(x: Scalar) -> sp.Expr:
    """Lift a scalar to a sympy expression."""
    if isinstance(x, sp.Expr):
        return x
    if isinstance(x, Fraction):
        return sp.Rational(x.numerator, x.denominator)
    if isinstance(x, int):
        return sp.Integer(x)
    raise TypeError(f"not a scalar: {x!r}")


def make_pow(base: int, exponent: Scalar) -> Scalar:
    """Exact ``base**exponent`` for integer base and rational exponent.

    Returns a Fraction whenever the power is rational (integer exponent,
    or cancellations like ``4**(1/2)``), otherwise a canonical sympy Pow.
    """
    if base <= 0:
        raise ValueError("base must be a positive integer")
    e = ensure_scalar(exponent)
    v = sp.Pow(sp.Integer(base), sym(e))
    return ensure_scalar(v)


def as_pow_form(x: Scalar) -> tuple[int, Fraction] | None:
    """Recognise ``x`` as ``b**e`` with integer b >= 2 and rational e.

    sympy normalises e.g. ``2**(-4/3)`` to ``2**(2/3)/4``; this undoes that
    so emitters can print the compact ``pow(2,-4/3)`` form.  Returns None
    when ``x`` is not such a power.
    """
    x = ensure_scalar(x)
    if isinstance(x, Fraction):
        return None
    pows = [p for p in x.atoms(sp.Pow) if p.base.is_Integer and p.exp.is_Rational]
    if len(pows) != 1:
        return None
    base = int(pows[0].base)
    if base < 2:
        return None
    e = canon_value(sp.log(x) / sp.log(sp.Integer(base)))
    if isinstance(e, Fraction):
        if scalar_eq(make_pow(base, e), x):
            return base, e
    return None


@functools.lru_cache(maxsize=4096)
def _canon_expr(x: sp.Expr) -> sp.Expr:
    """Rewrite log/pow combinations over a prime-log basis and cancel."""
    y = sp.expand_log(x, force=True)

    def split(node):
        if isinstance(node, sp.log) and node.args[0].is_Rational and node.args[0] > 0:
            q = sp.Rational(node.args[0])
            terms = []
            for prime, mult in sp.factorrat(q).items():
                terms.append(mult * sp.log(prime))
            return sp.Add(*terms) if terms else sp.Integer(0)
        return node

    y = y.replace(lambda n: isinstance(n, sp.log), split)
    y = sp.cancel(sp.together(y))
    return y


def canon_value(x: Scalar) -> Scalar:
    """Canonical form: Fraction when rational, tidied sympy expression else."""
    x = ensure_scalar(x)
    if isinstance(x, Fraction):
        return x
    return ensure_scalar(_canon_expr(x))


def scalar_eq(a: Scalar, b: Scalar) -> bool:
    a, b = ensure_scalar(a), ensure_scalar(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    d = canon_value(sym(a) - sym(b))
    if isinstance(d, Fraction):
        return d == 0
    if d.is_zero:
        return True
    return bool(d.equals(0))


def scalar_cmp(a: Scalar, b: Scalar) -> int:
    """Exact three-way comparison; raises ArithmeticError if undecidable."""
    a, b = ensure_scalar(a), ensure_scalar(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a > b) - (a < b)
    raw = sym(a) - sym(b)
    # numeric screen: a 40-digit evaluation decides the sign whenever the
    # gap is clearly nonzero; ties fall through to the exact path
    v = raw.evalf(40)
    if v.is_comparable and abs(v) > sp.Float(10) ** (-25):
        return 1 if v > 0 else -1
    d = canon_value(raw)
    if isinstance(d, Fraction):
        return (d > 0) - (d < 0)
    if d.is_zero or d.equals(0):
        return 0
    for prec in (50, 120, 300):
        v = d.evalf(prec)
        if v.is_comparable and abs(v) > sp.Float(10) ** (10 - prec):
            return 1 if v > 0 else -1
    raise ArithmeticError(f"cannot order {a} vs {b}")


def scalar_lt(a: Scalar, b: Scalar) -> bool:
    return scalar_cmp(a, b) < 0


def scalar_le(a: Scalar, b: Scalar) -> bool:
    return scalar_cmp(a, b) <= 0


def scalar_min(values) -> Scalar:
    it = iter(values)
    best = ensure_scalar(next(it))
    for v in it:
        v = ensure_scalar(v)
        if scalar_cmp(v, best) < 0:
            best = v
    return best


def scalar_max(values) -> Scalar:
    it = iter(values)
    best = ensure_scalar(next(it))
    for v in it:
        v = ensure_scalar(v)
        if scalar_cmp(v, best) > 0:
            best = v
    return best


def scalar_floor(x: Scalar) -> int:
    x = ensure_scalar(x)
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    return int(sp.floor(x))


def scalar_ceil(x: Scalar) -> int:
    return -scalar_floor(-ensure_scalar(x))


def floor_ratio(a: Scalar, b: Scalar) -> int:
    """Exact floor(a / b) for b > 0."""
    a, b = ensure_scalar(a), ensure_scalar(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a.numerator * b.denominator) // (b.numerator * a.denominator)
    return scalar_floor(sym(a) / sym(b))


def to_float(x: Scalar) -> float:
    x = ensure_scalar(x)
    if isinstance(x, Fraction):
        return x.numerator / x.denominator
    return float(x.evalf(17))


def to_decimal(x: Scalar, digits: int = 50) -> str:
    """Fixed-point decimal rendering with absolute error <= 10**-digits."""
    x = ensure_scalar(x)
    v = sym(x).evalf(digits + 15)
    d = Decimal(str(v)).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    s = format(d, "f")
    return s


def fmt_exact(x: Scalar) -> str:
    """Canonical text form: ``n``, ``p/q``, ``pow(b,e)``, or sympy srepr-free str."""
    x = ensure_scalar(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    pf = as_pow_form(x)
    if pf is not None:
        base, e = pf
        return f"pow({base},{fmt_exact(e)})"
    return sp.sstr(x)
