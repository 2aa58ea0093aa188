"""Polynomial ideals: Groebner bases, elimination and dimension counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .poly import GREVLEX, MonomialOrder, Polynomial, block_order, monomials_below
from .scalar import ONE, ZERO, Scalar

__all__ = [
    "Ideal", "groebner_basis", "normal_form", "eliminate", "quotient_dimension",
    "standard_monomials", "truncated_local_dimension", "LocalDimension",
    "singular_locus_dimension", "origin_is_isolated", "is_groebner_basis", "INFINITE",
]

INFINITE = math.inf


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _monic(p: dict, key) -> dict:
    lm = max(p, key=key)
    c = p[lm]
    if c.is_one():
        return p
    inv = ONE / c
    return {e: v * inv for e, v in p.items()}


def _axpy(p: dict, c: Scalar, shift: tuple, g: dict) -> None:
    """In place: p -= c * x^shift * g."""
    for e, v in g.items():
        ne = _add(e, shift)
        s = p.get(ne)
        if s is None:
            p[ne] = -(v * c)
        else:
            s = s - v * c
            if s:
                p[ne] = s
            else:
                del p[ne]


def _reduce(p: dict, basis: list, key, full: bool = True) -> dict:
    """Remainder of p on division by monic ``basis`` entries (lm, terms)."""
    p = dict(p)
    rem = {}
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for glm, g in basis:
            if _divides(glm, lm):
                _axpy(p, c, _sub(lm, glm), g)
                break
        else:
            if not full:
                rem.update(p)
                return rem
            rem[lm] = c
            del p[lm]
    return rem


def _buchberger(polys: list[dict], key) -> list[dict]:
    # entries: [terms, lm, sugar]
    G: list = []
    pairs: list = []  # (i, j, lcm, sugar)

    def update(h_terms, h_sugar):
        h_lm = max(h_terms, key=key)
        hidx = len(G)
        cand = []
        for i, (_, glm, gs, alive) in enumerate(G):
            if not alive:
                continue
            l = _lcm(glm, h_lm)
            s = max(gs + sum(l) - sum(glm), h_sugar + sum(l) - sum(h_lm))
            cand.append((i, l, s, _coprime(glm, h_lm)))
        # Gebauer-Moeller criteria on the new pairs
        keep = []
        for a, (i, l, s, cop) in enumerate(cand):
            if cop:
                keep.append((i, l, s, cop))
                continue
            dominated = False
            for b, (i2, l2, s2, cop2) in enumerate(cand):
                if b == a:
                    continue
                if _divides(l2, l) and (l2 != l or b < a):
                    dominated = True
                    break
            if not dominated:
                keep.append((i, l, s, cop))
        new_pairs = [(i, hidx, l, s) for (i, l, s, cop) in keep if not cop]
        # chain criterion on the old pairs
        survivors = []
        for (i, j, l, s) in pairs:
            if (_divides(h_lm, l) and _lcm(G[i][1], h_lm) != l and _lcm(G[j][1], h_lm) != l):
                continue
            survivors.append((i, j, l, s))
        pairs[:] = survivors + new_pairs
        for g in G:
            if g[3] and _divides(h_lm, g[1]):
                g[3] = False
        G.append([h_terms, h_lm, h_sugar, True])

    active = lambda: [(g[1], g[0]) for g in G if g[3]]  # noqa: E731

    seen = []
    for p in polys:
        if not p:
            continue
        r = _reduce(p, active(), key)
        if r:
            update(_monic(r, key), max(sum(e) for e in p))
            seen.append(r)

    while pairs:
        best = min(range(len(pairs)), key=lambda t: (pairs[t][3], key(pairs[t][2])))
        i, j, l, s = pairs.pop(best)
        gi, gj = G[i], G[j]
        spoly = {}
        _axpy(spoly, Scalar(-1), _sub(l, gi[1]), gi[0])
        _axpy(spoly, ONE, _sub(l, gj[1]), gj[0])
        r = _reduce(spoly, active(), key)
        if r:
            update(_monic(r, key), s)

    # minimal, then reduced
    cands = [(g[1], g[0]) for g in G if g[3]]
    cands.sort(key=lambda t: key(t[0]))
    minimal = []
    for lm, terms in cands:
        if not any(_divides(m, lm) for m, _ in minimal):
            minimal.append((lm, terms))
    reduced = []
    for idx, (lm, terms) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = dict(terms)
        c = tail.pop(lm)
        r = _reduce(tail, others, key)
        r[lm] = c
        reduced.append(_monic(r, key))
    reduced.sort(key=lambda p: key(max(p, key=key)), reverse=True)
    return reduced


class Ideal:
    """Finitely generated ideal over a shared variable tuple.

    Reduced Groebner bases are cached per monomial order on first request.
    """

    def __init__(self, generators: Sequence[Polynomial]):
        gens = list(generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        vars = gens[0].vars
        if any(g.vars != vars for g in gens):
            raise ValueError("generators live in different rings")
        self.vars = vars
        self.generators = gens
        self._bases: dict[MonomialOrder, list[Polynomial]] = {}

    def groebner(self, order: MonomialOrder = GREVLEX) -> list[Polynomial]:
        if order not in self._bases:
            polys = [dict(g.terms) for g in self.generators]
            red = _buchberger(polys, order.key)
            self._bases[order] = [Polynomial(self.vars, p, order, _trusted=True) for p in red]
        return self._bases[order]

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.generators)

    def leading_monomials(self, order: MonomialOrder = GREVLEX) -> list[tuple]:
        return [g.leading_monomial() for g in self.groebner(order)]

    def contains(self, p: Polynomial, order: MonomialOrder = GREVLEX) -> bool:
        return normal_form(p, self.groebner(order)).is_zero()

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]}, vars={self.vars})"


def groebner_basis(ideal: Ideal, order: MonomialOrder = GREVLEX) -> Ideal:
    """Attach (and return the ideal carrying) its reduced Groebner basis for ``order``."""
    ideal.groebner(order)
    return ideal


def normal_form(p: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    if not basis:
        return p
    order = basis[0].order
    entries = [(g.leading_monomial(), g.monic().terms) for g in basis if g]
    return Polynomial(p.vars, _reduce(p.terms, entries, order.key), order, _trusted=True)


def is_groebner_basis(basis: Sequence[Polynomial]) -> bool:
    """Every S-polynomial of ``basis`` reduces to zero."""
    if not basis:
        return True
    key = basis[0].order.key
    entries = [(g.leading_monomial(), g.monic().terms) for g in basis]
    for (a, ga), (b, gb) in combinations(entries, 2):
        l = _lcm(a, b)
        s: dict = {}
        _axpy(s, Scalar(-1), _sub(l, a), ga)
        _axpy(s, ONE, _sub(l, b), gb)
        if _reduce(s, entries, key):
            return False
    return True


def eliminate(ideal: Ideal, drop: Sequence[str]) -> Ideal:
    """Generators of ideal ∩ k[remaining variables], via a block order."""
    drop = [v for v in ideal.vars if v in set(drop)]
    if not drop:
        return ideal
    keep = [v for v in ideal.vars if v not in drop]
    order = block_order(len(drop))
    moved = Ideal([g.embed(drop + keep, order) for g in ideal.generators])
    gb = moved.groebner(order)
    n = len(drop)
    out = [g for g in gb if all(not any(e[:n]) for e in g.terms)]
    if not out:
        out = [Polynomial(keep, {}, GREVLEX)]
    return Ideal([g.embed(keep, GREVLEX) for g in out])


def standard_monomials(ideal: Ideal, order: MonomialOrder = GREVLEX) -> list[tuple] | None:
    """Monomials outside the leading-term ideal, or None when infinitely many."""
    lms = ideal.leading_monomials(order)
    n = len(ideal.vars)
    if any(not any(m) for m in lms):
        return []
    bounds = []
    for v in range(n):
        pure = [m[v] for m in lms if m[v] and sum(m) == m[v]]
        if not pure:
            return None
        bounds.append(min(pure))
    out = []

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for e in range(bounds[len(prefix)]):
            cand = prefix + [e]
            partial = tuple(cand) + (0,) * (n - len(cand))
            if any(_divides(m, partial) for m in lms):
                break
            rec(cand)

    rec([])
    return out


def quotient_dimension(ideal: Ideal, order: MonomialOrder = GREVLEX):
    """dim k[x]/I, or INFINITE."""
    std = standard_monomials(ideal, order)
    return INFINITE if std is None else len(std)


@dataclass(frozen=True)
class LocalDimension:
    dims: tuple[int, ...]       # dims[k-1] = dim k[x]/(I + m^k)
    stabilized: bool
    value: int | None           # the local multiplicity when stabilized

    @property
    def verdict(self) -> str:
        return f"stabilized at {self.value}" if self.stabilized else "exceeded cutoff"


def _truncated_quotient_dim(polys: list[dict], nvars: int, k: int) -> int:
    monos = monomials_below(nvars, k)
    pivot_key = {m: (sum(m), m) for m in monos}
    pivots: dict = {}
    gens = []
    for p in polys:
        low = {e: c for e, c in p.items() if sum(e) < k}
        if low:
            gens.append((min(sum(e) for e in low), low))
    for d in range(k):
        for order_g, g in gens:
            if order_g + d >= k:
                continue
            for m in monos:
                if sum(m) != d:
                    continue
                v = {}
                for e, c in g.items():
                    ne = _add(e, m)
                    if sum(ne) < k:
                        v[ne] = c
                while v:
                    lm = min(v, key=pivot_key.__getitem__)
                    row = pivots.get(lm)
                    if row is None:
                        inv = ONE / v[lm]
                        pivots[lm] = {e: c * inv for e, c in v.items()}
                        break
                    c = v[lm]
                    for e, a in row.items():
                        s = v.get(e)
                        if s is None:
                            v[e] = -(a * c)
                        else:
                            s = s - a * c
                            if s:
                                v[e] = s
                            else:
                                del v[e]
    return len(monos) - len(pivots)


def truncated_local_dimension(ideal: Ideal, cutoff: int = 12,
                              stop_early: bool = True) -> LocalDimension:
    """dim k[x]/(I + m^k) for k = 1..cutoff, m the maximal ideal at the origin.

    Two equal consecutive values pin the local multiplicity (Nakayama). With
    ``stop_early`` the sweep ends right there.
    """
    polys = [g.terms for g in ideal.generators]
    n = len(ideal.vars)
    dims: list[int] = []
    for k in range(1, cutoff + 1):
        dims.append(_truncated_quotient_dim(polys, n, k))
        if len(dims) >= 2 and dims[-1] == dims[-2] and stop_early:
            return LocalDimension(tuple(dims), True, dims[-1])
    for a, b in zip(dims, dims[1:]):
        if a == b:
            return LocalDimension(tuple(dims), True, a)
    return LocalDimension(tuple(dims), False, None)


def singular_locus_dimension(ideal: Ideal) -> int:
    """Krull dimension of V(I) from the leading-term ideal; -1 for the unit ideal."""
    lms = ideal.leading_monomials(GREVLEX)
    n = len(ideal.vars)
    if ideal.is_zero():
        return n
    if any(not any(m) for m in lms):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lms]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def origin_is_isolated(ideal: Ideal) -> bool:
    """Whether the origin is an isolated point of V(I) (or not on V(I) at all).

    Checks, for each coordinate x_i, whether the origin lies in the closure of
    V(I) minus {x_i = 0}, i.e. on V(I : x_i^inf); that saturation comes from
    eliminating t in I + <1 - t x_i>.
    """
    vars = ideal.vars
    t = "_sat_t"
    while t in vars:
        t += "_"
    ext = (t,) + tuple(vars)
    zero_pt = (ZERO,) * len(vars)
    if any(g.evaluate(zero_pt) for g in ideal.generators):
        return True
    for v in vars:
        gens = [g.embed(ext) for g in ideal.generators]
        tv = Polynomial.variable(t, ext) * Polynomial.variable(v, ext)
        gens.append(Polynomial.constant(ONE, ext) - tv)
        sat = eliminate(Ideal(gens), [t])
        if all(not g.evaluate(zero_pt) for g in sat.generators):
            return False
    return True
