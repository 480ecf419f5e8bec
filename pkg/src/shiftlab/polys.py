"""Dense univariate polynomials as coefficient lists, lowest degree first."""

from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest

import sympy

from . import scalars as sc

_T = sympy.Symbol("t")


def trim(coeffs):
    out = list(coeffs)
    while out and sc.is_exact(out[-1]) and out[-1] == 0:
        out.pop()
    return out


def add(p, q):
    return trim(a + b for a, b in zip_longest(p, q, fillvalue=Fraction(0)))


def scale(p, c):
    return trim(c * a for a in p)


def sub(p, q):
    return add(p, scale(q, -1))


def mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def evaluate(p, t):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def is_zero(p) -> bool:
    return all(sc.is_zero(c) for c in p)


def nonnegative_on(p, lo, hi):
    """Decide ``p(t) >= 0`` for all ``t`` in ``[lo, hi]``.

    Rational data is decided exactly by root counting on the odd-multiplicity
    part of ``p``.  Anything else falls back to numeric root finding within
    the global tolerance; ``None`` means the numeric search did not converge.
    """
    p = trim(p)
    if not p:
        return True
    if all(isinstance(c, Fraction) for c in p) and isinstance(lo, Fraction) and isinstance(hi, Fraction):
        return _nonneg_exact(p, lo, hi)
    return _nonneg_numeric(p, lo, hi)


def _nonneg_exact(p, lo, hi):
    poly = sympy.Poly([sc.to_sympy(c) for c in reversed(p)], _T, domain="QQ")
    if poly.degree() <= 0:
        return poly.LC() >= 0
    lead, factors = poly.sqf_list()
    odd = sympy.Poly(lead, _T, domain="QQ")
    for f, mult in factors:
        if mult % 2:
            odd = odd * f
    if odd.degree() <= 0:
        return odd.LC() >= 0
    lo_s, hi_s = sc.to_sympy(lo), sc.to_sympy(hi)
    inner = odd.count_roots(lo_s, hi_s)
    inner -= int(odd.eval(lo_s) == 0) + int(odd.eval(hi_s) == 0)
    if inner > 0:
        return False
    return odd.eval((lo_s + hi_s) / 2) > 0


def _nonneg_numeric(p, lo, hi):
    lo, hi = sc.to_mpf(lo), sc.to_mpf(hi)
    coeffs = [sc.to_mpf(c) for c in p]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    points = [lo, hi]
    if len(coeffs) > 1:
        try:
            roots = sc.MP.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=200)
        except sc.MP.NoConvergence:
            return None
        real = sorted(sc.MP.re(r) for r in roots if abs(sc.MP.im(r)) <= sc.get_tolerance())
        inside = [r for r in real if lo < r < hi]
        cuts = [lo] + inside + [hi]
        points += [(u + v) / 2 for u, v in zip(cuts, cuts[1:])]
    return all(sc.sign(evaluate(coeffs, x)) >= 0 for x in points)


def to_sympy(p):
    return sum((sc.to_sympy(c) * _T**i for i, c in enumerate(p)), sympy.Integer(0))
