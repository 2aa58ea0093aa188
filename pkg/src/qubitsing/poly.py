"""Multivariate polynomials over Q(i, sqrt2) and the exact linear-algebra kernels.

Polynomials are immutable maps from dense exponent tuples to nonzero
:class:`~qubitsing.scalar.Scalar` coefficients, tied to a declared variable
tuple and a monomial order.
"""

from __future__ import annotations

import re
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .scalar import ONE, ZERO, Scalar, parse_scalar

__all__ = [
    "MonomialOrder", "LEX", "GREVLEX", "block_order",
    "Polynomial", "PolynomialRingError", "parse_poly",
    "SquareMatrix", "fraction_free_det", "matrix_rank", "kernel_basis",
    "resultant", "univariate_discriminant", "sylvester_matrix",
    "monomials_below",
]


class PolynomialRingError(ValueError):
    """Operands live in different polynomial rings."""


class MonomialOrder:
    """A total monomial order given by a sort key (larger key = larger monomial)."""

    def __init__(self, name: str, keyfunc):
        self.name = name
        self._keyfunc = keyfunc
        self._memo: dict = {}

    def key(self, exp: tuple):
        try:
            return self._memo[exp]
        except KeyError:
            k = self._memo[exp] = self._keyfunc(exp)
            if len(self._memo) > 200_000:
                self._memo.clear()
            return k

    __call__ = key

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"MonomialOrder({self.name!r})"


def _grevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


LEX = MonomialOrder("lex", lambda e: e)
GREVLEX = MonomialOrder("grevlex", _grevlex_key)


def block_order(split: int) -> MonomialOrder:
    """Elimination order: grevlex on the first ``split`` variables, ties by grevlex on the rest."""
    return MonomialOrder(
        f"block{split}", lambda e: (_grevlex_key(e[:split]), _grevlex_key(e[split:])))


def _madd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def monomials_below(nvars: int, degree: int) -> list[tuple]:
    """All exponent tuples in ``nvars`` variables of total degree < ``degree``."""
    out = []
    for d in range(degree):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


class Polynomial:
    __slots__ = ("vars", "terms", "order")

    def __init__(self, vars: Sequence[str], terms: dict | None = None,
                 order: MonomialOrder = GREVLEX, *, _trusted: bool = False):
        self.vars = tuple(vars)
        self.order = order
        if _trusted:
            self.terms = terms
            return
        n = len(self.vars)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n:
                raise PolynomialRingError(f"exponent {exp} does not match variables {self.vars}")
            c = Scalar.coerce(c)
            if c:
                clean[exp] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, value, vars: Sequence[str], order: MonomialOrder = GREVLEX) -> Polynomial:
        return cls(vars, {(0,) * len(vars): value}, order)

    @classmethod
    def variable(cls, name: str, vars: Sequence[str], order: MonomialOrder = GREVLEX) -> Polynomial:
        vars = tuple(vars)
        exp = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise PolynomialRingError(f"unknown variable {name!r}")
        return cls(vars, {exp: ONE}, order, _trusted=True)

    @classmethod
    def generators(cls, vars: Sequence[str], order: MonomialOrder = GREVLEX) -> list[Polynomial]:
        return [cls.variable(v, vars, order) for v in vars]

    def _new(self, terms: dict) -> Polynomial:
        return Polynomial(self.vars, terms, self.order, _trusted=True)

    def with_order(self, order: MonomialOrder) -> Polynomial:
        return Polynomial(self.vars, self.terms, order, _trusted=True)

    def embed(self, vars: Sequence[str], order: MonomialOrder | None = None) -> Polynomial:
        """Re-express in a variable tuple containing all variables actually used."""
        vars = tuple(vars)
        idx = []
        for i, v in enumerate(self.vars):
            if v in vars:
                idx.append(vars.index(v))
            else:
                idx.append(None)
        terms = {}
        for exp, c in self.terms.items():
            new = [0] * len(vars)
            for i, e in enumerate(exp):
                if e:
                    if idx[i] is None:
                        raise PolynomialRingError(f"variable {self.vars[i]!r} is used but not in {vars}")
                    new[idx[i]] = e
            terms[tuple(new)] = c
        return Polynomial(vars, terms, order or self.order, _trusted=True)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * len(self.vars), ZERO)

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self._index(var)
        return max(e[i] for e in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def support(self) -> list[tuple]:
        return self.sorted_monomials()

    def sorted_monomials(self) -> list[tuple]:
        return sorted(self.terms, key=self.order.key, reverse=True)

    def leading_monomial(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.order.key)

    def leading_coefficient(self) -> Scalar:
        return self.terms[self.leading_monomial()]

    def homogeneous_component(self, d: int) -> Polynomial:
        return self._new({e: c for e, c in self.terms.items() if sum(e) == d})

    def truncate(self, k: int) -> Polynomial:
        """Drop every term of total degree >= k."""
        return self._new({e: c for e, c in self.terms.items() if sum(e) < k})

    def used_variables(self) -> list[str]:
        return [v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms)]

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise PolynomialRingError(f"unknown variable {var!r} (ring has {self.vars})") from None

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise PolynomialRingError(f"variable sets differ: {self.vars} vs {other.vars}")
            return other
        return Polynomial.constant(Scalar.coerce(other), self.vars, self.order)

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = Scalar.coerce(other)
            if not c:
                return self._new({})
            return self._new({e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _madd(e1, e2)
                s = terms.get(e)
                terms[e] = c1 * c2 if s is None else s + c1 * c2
        return self._new({e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(ONE, self.vars, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return exact_div(self, other)
        c = Scalar.coerce(other)
        inv = ONE / c
        return self._new({e: v * inv for e, v in self.terms.items()})

    def mul_term(self, exp: tuple, coeff: Scalar) -> Polynomial:
        if not coeff:
            return self._new({})
        return self._new({_madd(e, exp): c * coeff for e, c in self.terms.items()})

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        return self / self.leading_coefficient()

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus and substitution ---------------------------------------
    def differentiate(self, var: str) -> Polynomial:
        i = self._index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                terms[ne] = c * e[i]
        return self._new(terms)

    def gradient(self) -> list[Polynomial]:
        return [self.differentiate(v) for v in self.vars]

    def hessian(self) -> list[list[Polynomial]]:
        grad = self.gradient()
        return [[g.differentiate(v) for v in self.vars] for g in grad]

    def evaluate(self, point: Sequence) -> Scalar:
        if len(point) != len(self.vars):
            raise PolynomialRingError(f"point has {len(point)} coordinates, ring has {len(self.vars)}")
        pt = [Scalar.coerce(p) for p in point]
        powers = [dict() for _ in pt]
        total = ZERO
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    pw = cache.get(k)
                    if pw is None:
                        pw = cache[k] = pt[i] ** k
                    term = term * pw
            total = total + term
        return total

    def substitute(self, values: dict) -> Polynomial:
        """Substitute Scalars or Polynomials (same ring) for some variables."""
        result = self._new({})
        idx = {self._index(v): val for v, val in values.items()}
        cache: dict = {}
        for e, c in self.terms.items():
            rest = list(e)
            factor = Polynomial.constant(c, self.vars, self.order)
            scalar = ONE
            for i, val in idx.items():
                k = e[i]
                rest[i] = 0
                if not k:
                    continue
                if isinstance(val, Polynomial):
                    key = (i, k)
                    if key not in cache:
                        cache[key] = val ** k
                    factor = factor * cache[key]
                else:
                    scalar = scalar * Scalar.coerce(val) ** k
            result = result + factor.mul_term(tuple(rest), scalar)
        return result

    def taylor_shift(self, point: Sequence) -> Polynomial:
        """Return q with q(x) = p(x + point)."""
        if len(point) != len(self.vars):
            raise PolynomialRingError(f"point has {len(point)} coordinates, ring has {len(self.vars)}")
        gens = Polynomial.generators(self.vars, self.order)
        subs = {v: g + Scalar.coerce(a) for v, g, a in zip(self.vars, gens, point)
                if not Scalar.coerce(a).is_zero()}
        if not subs:
            return self
        return self.substitute(subs)

    def restrict_linear(self, directions: Sequence[Sequence], new_vars: Sequence[str],
                        order: MonomialOrder | None = None) -> Polynomial:
        """Substitute x := sum_k new_var_k * direction_k."""
        new_vars = tuple(new_vars)
        if len(directions) != len(new_vars):
            raise PolynomialRingError("one new variable per direction is required")
        for d in directions:
            if len(d) != len(self.vars):
                raise PolynomialRingError(f"direction {d} has wrong length for {self.vars}")
        order = order or self.order
        gens = Polynomial.generators(new_vars, order)
        zero = Polynomial(new_vars, {}, order)
        images = []
        for i in range(len(self.vars)):
            img = zero
            for g, d in zip(gens, directions):
                c = Scalar.coerce(d[i])
                if c:
                    img = img + g * c
            images.append(img)
        result = zero
        for e, c in self.terms.items():
            term = Polynomial.constant(c, new_vars, order)
            for i, k in enumerate(e):
                if k:
                    term = term * images[i] ** k
            result = result + term
        return result

    def coefficients_in(self, var: str) -> list[Polynomial]:
        """Coefficients of ``var``^0, ``var``^1, ... as polynomials not involving ``var``."""
        i = self._index(var)
        d = self.degree(var)
        out = [dict() for _ in range(max(d, 0) + 1)]
        for e, c in self.terms.items():
            out[e[i]][e[:i] + (0,) + e[i + 1:]] = c
        return [self._new(t) for t in out]

    def drop_variables(self, names: Iterable[str]) -> Polynomial:
        names = set(names)
        keep = [v for v in self.vars if v not in names]
        return self.embed(keep)

    # -- text -------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e in self.sorted_monomials():
            c = self.terms[e]
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            neg = False
            if c.is_rational() and c.r0 < 0:
                neg, c = True, -c
            if not mono:
                body = str(c)
                if not c.is_rational() and len(pieces) > 0:
                    body = f"({body})"
            elif c.is_one():
                body = mono
            elif c.is_rational():
                body = f"{c}*{mono}"
            else:
                body = f"({c})*{mono}"
            pieces.append((neg, body))
        out = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, vars={self.vars})"


_TOKEN = re.compile(r"\s*(\d+(?:/\d+)?|[A-Za-z_][A-Za-z_0-9]*|\^|\*|\+|-|\(|\))")


def parse_poly(text: str, vars: Sequence[str], order: MonomialOrder = GREVLEX) -> Polynomial:
    """Parse sums of products of numbers, ``i``, ``s`` (sqrt2), variables and ``v^k``.

    Parenthesised groups are allowed and expanded. Variable names shadow the
    units ``i`` and ``s`` when they collide.
    """
    vars = tuple(vars)
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad polynomial text at position {pos}: {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        t = tokens[idx]
        idx += 1
        return t

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        acc = term() * sign
        while peek() in ("+", "-"):
            op = take()
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = factor()
        while peek() == "*":
            take()
            acc = acc * factor()
        return acc

    def factor():
        t = take()
        if t is None:
            raise ValueError(f"unexpected end of polynomial text: {text!r}")
        if t == "(":
            base = expr()
            if take() != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
        elif t[0].isdigit():
            base = Polynomial.constant(parse_scalar(t), vars, order)
        elif t in vars:
            base = Polynomial.variable(t, vars, order)
        elif t in ("i", "s"):
            base = Polynomial.constant(parse_scalar(t), vars, order)
        else:
            raise ValueError(f"unknown symbol {t!r} in {text!r}")
        if peek() == "^":
            take()
            base = base ** int(take())
        return base

    result = expr()
    if peek() is not None:
        raise ValueError(f"trailing input in polynomial text: {text!r}")
    return result


def exact_div(p: Polynomial, q: Polynomial) -> Polynomial:
    """Quotient p/q, which must be exact."""
    q = p._coerce(q)
    if not q.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    order = LEX
    lq = max(q.terms, key=order.key)
    cq = q.terms[lq]
    rem = dict(p.terms)
    quot = {}
    while rem:
        lr = max(rem, key=order.key)
        if any(a < b for a, b in zip(lr, lq)):
            raise ArithmeticError("polynomial division is not exact")
        shift = tuple(a - b for a, b in zip(lr, lq))
        c = rem[lr] / cq
        quot[shift] = c
        for e, v in q.terms.items():
            ne = _madd(e, shift)
            s = rem.get(ne, ZERO) - v * c
            if s:
                rem[ne] = s
            else:
                rem.pop(ne, None)
    return p._new(quot)


# -- matrices -----------------------------------------------------------------

class SquareMatrix:
    """An n x n matrix of Scalars or Polynomials."""

    def __init__(self, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        self.rows = [[x if isinstance(x, Polynomial) else Scalar.coerce(x) for x in r] for r in rows]
        self.n = n

    def det(self):
        return fraction_free_det(self.rows)

    def rank(self) -> int:
        return matrix_rank(self.rows)

    def kernel(self) -> list[list[Scalar]]:
        return kernel_basis(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]


def _is_zero(x) -> bool:
    return not x


def fraction_free_det(rows: Sequence[Sequence]):
    """Determinant by Bareiss elimination (entries: Scalars or Polynomials)."""
    m = [list(r) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    if n == 0:
        return ONE
    sign = 1
    prev = None
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            swap = next((r for r in range(k + 1, n) if not _is_zero(m[r][k])), None)
            if swap is None:
                return m[k][k] * 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else num / prev
            m[i][k] = m[i][k] * 0
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def _rref(rows: Sequence[Sequence[Scalar]]):
    m = [[Scalar.coerce(x) for x in r] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def matrix_rank(rows: Sequence[Sequence[Scalar]]) -> int:
    if not rows:
        return 0
    return len(_rref(rows)[1])


def kernel_basis(rows: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Basis of {v : M v = 0}, one vector per free column, in column order."""
    if not rows:
        return []
    ncols = len(rows[0])
    m, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(v)
    return basis


# -- resultants -----------------------------------------------------------------

def sylvester_matrix(p: list, q: list) -> list[list]:
    """Sylvester matrix from coefficient lists given highest degree first."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    zero = p[0] * 0
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(p) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(q) + [zero] * (size - n - 1 - i))
    return rows


def _distinguished(p: Polynomial, var: str | None) -> str:
    if var is not None:
        return var
    used = p.used_variables()
    if len(used) == 1:
        return used[0]
    if len(p.vars) == 1:
        return p.vars[0]
    raise ValueError("polynomial is not univariate; name the variable")


def _collapse(x, var: str, keep_poly: bool):
    if isinstance(x, Polynomial):
        x = x.drop_variables([var])
        if not keep_poly and x.is_constant():
            return x.constant_term()
    return x


def resultant(p: Polynomial, q: Polynomial, var: str | None = None):
    var = _distinguished(p, var)
    pc = p.coefficients_in(var)[::-1]
    qc = q._coerce(q).coefficients_in(var)[::-1]
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    res = fraction_free_det(sylvester_matrix(pc, qc))
    return _collapse(res, var, keep_poly=len(p.vars) > 1)


def univariate_discriminant(p: Polynomial, var: str | None = None):
    """disc(p) = (-1)^(d(d-1)/2) Res(p, p') / lc(p).

    Returns a Scalar when ``p`` has a single variable, otherwise a Polynomial
    in the remaining variables.
    """
    if p.is_zero():
        raise ValueError("discriminant of the zero polynomial")
    var = _distinguished(p, var)
    d = p.degree(var)
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    keep = len(p.vars) > 1
    coeffs = p.coefficients_in(var)
    lc = coeffs[-1]
    if d == 1:
        one = Polynomial.constant(ONE, p.vars, p.order)
        return _collapse(one, var, keep)
    pc = coeffs[::-1]
    dc = p.differentiate(var).coefficients_in(var)[::-1]
    res = fraction_free_det(sylvester_matrix(pc, dc))
    if lc.is_constant():
        disc = res / lc.constant_term()
    else:
        disc = exact_div(res, lc)
    if (d * (d - 1) // 2) % 2:
        disc = -disc
    return _collapse(disc, var, keep)
