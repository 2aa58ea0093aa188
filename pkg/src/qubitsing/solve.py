"""Points of a zero-dimensional ideal whose coordinates lie in Q(i, sqrt2).

Eliminates one variable at a time: the minimal polynomial of that variable
modulo the ideal is read off from normal forms, its roots in the field are
recognized from high-precision numerical roots by integer-relation search and
then verified exactly. Roots outside the field are simply not returned; callers
compare multiplicities against the quotient dimension to detect them.
"""

from __future__ import annotations

import math
from typing import Sequence

import mpmath
from gmpy2 import is_square, isqrt, mpq

from .ideal import Ideal, normal_form, standard_monomials
from .poly import GREVLEX, Polynomial, kernel_basis
from .scalar import ONE, ZERO, Scalar

__all__ = ["minimal_polynomial", "roots_in_field", "field_points", "upoly_gcd", "squarefree_part"]

UPoly = list  # coefficients, constant term first


def _trim(p: UPoly) -> UPoly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _monic(p: UPoly) -> UPoly:
    inv = ONE / p[-1]
    return [c * inv for c in p]


def _divmod(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 1)
    inv = ONE / b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        shift = len(a) - len(b)
        q[shift] = c
        for k, bk in enumerate(b):
            a[shift + k] = a[shift + k] - c * bk
        a = _trim(a)
    return _trim(q), a


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _divmod(a, b)[1]
    return _monic(a) if a else a


def _derivative(p: UPoly) -> UPoly:
    return _trim([c * k for k, c in enumerate(p)][1:])


def squarefree_part(p: UPoly) -> UPoly:
    p = _trim(p)
    if len(p) <= 2:
        return _monic(p)
    g = upoly_gcd(p, _derivative(p))
    return _monic(_divmod(p, g)[0]) if len(g) > 1 else _monic(p)


def _eval(p: UPoly, x: Scalar) -> Scalar:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def minimal_polynomial(ideal: Ideal, var: str) -> UPoly:
    """Monic generator of I ∩ k[var] (I zero-dimensional), via normal forms of var^k."""
    gb = ideal.groebner(GREVLEX)
    std = standard_monomials(ideal, GREVLEX)
    if std is None:
        raise ValueError("ideal is not zero-dimensional")
    index = {m: k for k, m in enumerate(std)}
    x = Polynomial.variable(var, ideal.vars, GREVLEX)
    power = normal_form(Polynomial.constant(ONE, ideal.vars, GREVLEX), gb)
    columns = []
    for _ in range(len(std) + 1):
        vec = [ZERO] * len(std)
        for e, c in power.terms.items():
            vec[index[e]] = c
        columns.append(vec)
        rows = [[col[r] for col in columns] for r in range(len(std))]
        kernel = kernel_basis(rows) if rows else [[ONE]]
        if kernel:
            return _monic(_trim(kernel[0]))
        power = normal_form(power * x, gb)
    raise ArithmeticError("no dependency found among powers")


# -- roots in the field -------------------------------------------------------

def _rational_sqrt_in_field(d: mpq) -> Scalar | None:
    """A square root of a rational number inside Q(i, sqrt2), when one exists."""
    if not d:
        return ZERO
    num, den = int(d.numerator), int(d.denominator)
    m = abs(num * den)
    for unit, make in ((1, lambda q: Scalar(q)), (2, lambda q: Scalar(0, 0, q))):
        if m % unit == 0 and is_square(m // unit):
            q = mpq(int(isqrt(m // unit)), den)
            root = make(q)
            return root if num > 0 else root * Scalar(0, 1)
    return None


def _to_mpc(s: Scalar):
    r2 = mpmath.sqrt(2)
    re = mpmath.mpf(s.r0.numerator) / s.r0.denominator + mpmath.mpf(s.r2.numerator) / s.r2.denominator * r2
    im = mpmath.mpf(s.r1.numerator) / s.r1.denominator + mpmath.mpf(s.r3.numerator) / s.r3.denominator * r2
    return mpmath.mpc(re, im)


def _recognize_real(x, tol) -> tuple[mpq, mpq] | None:
    if abs(x) < tol:
        return mpq(0), mpq(0)
    rel = mpmath.pslq([x, 1, mpmath.sqrt(2)], tol=tol, maxcoeff=10 ** 18, maxsteps=10 ** 5)
    if rel is None or rel[0] == 0:
        return None
    return mpq(-rel[1], rel[0]), mpq(-rel[2], rel[0])


def _recognize(z, tol) -> Scalar | None:
    re = _recognize_real(z.real, tol)
    im = _recognize_real(z.imag, tol)
    if re is None or im is None:
        return None
    return Scalar(re[0], im[0], re[1], im[1])


def roots_in_field(p: UPoly) -> list[Scalar]:
    """Distinct roots of ``p`` lying in Q(i, sqrt2)."""
    p = squarefree_part(p)
    deg = len(p) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [-p[0]]
    if deg == 2 and all(c.is_rational() for c in p):
        b, c = p[1], p[0]
        disc = b * b - 4 * c
        root = _rational_sqrt_in_field(disc.r0)
        if root is not None:
            return sorted({(-b + root) / 2, (-b - root) / 2}, key=str)
    found: list[Scalar] = []
    for dps in (60, 160):
        with mpmath.workdps(dps):
            coeffs = [_to_mpc(c) for c in reversed(p)]
            try:
                approx = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
            except mpmath.libmp.NoConvergence:
                continue
            tol = mpmath.mpf(10) ** (-(dps // 2))
            found = []
            for z in approx:
                r = _recognize(mpmath.mpc(z), tol)
                if r is not None and not _eval(p, r) and r not in found:
                    found.append(r)
        if len(found) == deg:
            break
    return sorted(found, key=str)


def field_points(ideal: Ideal) -> list[tuple[Scalar, ...]]:
    """All points of V(I) with coordinates in Q(i, sqrt2); I must be zero-dimensional."""
    if ideal.is_unit():
        return []
    vars = ideal.vars
    if not vars:
        return [()]
    var = vars[0]
    rest = vars[1:]
    out = []
    for r in roots_in_field(minimal_polynomial(ideal, var)):
        if not rest:
            out.append((r,))
            continue
        gens = [g.substitute({var: r}).drop_variables([var]) for g in ideal.groebner(GREVLEX)]
        gens = [g for g in gens if g] or [Polynomial(rest, {}, GREVLEX)]
        sub = Ideal(gens)
        if sub.is_zero():
            raise ValueError("ideal is not zero-dimensional")
        for tail in field_points(sub):
            out.append((r,) + tail)
    return out
