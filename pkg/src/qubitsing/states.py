"""Four-qubit states, hyperplane sections of the Segre variety, charts and SLOCC action."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .poly import GREVLEX, Polynomial, kernel_basis
from .scalar import ONE, ZERO, Scalar, parse_scalar

__all__ = [
    "FourQubitState", "ZeroStateError", "SectionForm", "Chart", "GroupElement",
    "segre_restrict", "chart_dehomogenize", "apply_group", "transform_hyperplane",
    "sample_tangent_hyperplane", "sample_tangent_pair", "separable_state",
    "canonical_point", "point_label", "read_state", "write_state", "random_rational",
    "HOMOGENEOUS_VARS", "CHART_VARS",
]

BITS = ["".join(b) for b in product("01", repeat=4)]
HOMOGENEOUS_VARS = ("w0", "w1", "x0", "x1", "y0", "y1", "z0", "z1")
CHART_VARS = ("w", "x", "y", "z")


class ZeroStateError(ValueError):
    """All sixteen amplitudes vanish."""


class FourQubitState:
    """Sixteen exact amplitudes a_ijkl stored at index 8i+4j+2k+l.

    The same object serves as a hyperplane <Psi| = sum h_ijkl <ijkl|.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes: Sequence):
        amps = tuple(Scalar.coerce(a) for a in amplitudes)
        if len(amps) != 16:
            raise ValueError("a four-qubit state has 16 amplitudes")
        if all(a.is_zero() for a in amps):
            raise ZeroStateError("the zero vector is not a projective state")
        self.amplitudes = amps

    @classmethod
    def from_dict(cls, mapping: Mapping[str, object]) -> FourQubitState:
        amps = [ZERO] * 16
        for key, value in mapping.items():
            if len(key) != 4 or set(key) - {"0", "1"}:
                raise ValueError(f"bad basis label {key!r}")
            amps[int(key, 2)] = parse_scalar(value) if isinstance(value, str) else Scalar.coerce(value)
        return cls(amps)

    @classmethod
    def basis(cls, *labels: str) -> FourQubitState:
        """Sum of basis vectors, e.g. ``basis("0011", "1100")``."""
        return cls.from_dict({lab: 1 for lab in labels})

    def __getitem__(self, key) -> Scalar:
        if isinstance(key, str):
            return self.amplitudes[int(key, 2)]
        if isinstance(key, tuple):
            i, j, k, l = key
            return self.amplitudes[8 * i + 4 * j + 2 * k + l]
        return self.amplitudes[key]

    def to_dict(self) -> dict[str, str]:
        return {b: str(a) for b, a in zip(BITS, self.amplitudes) if a}

    def __add__(self, other: FourQubitState) -> FourQubitState:
        return FourQubitState([a + b for a, b in zip(self.amplitudes, other.amplitudes)])

    def scale(self, c) -> FourQubitState:
        c = Scalar.coerce(c)
        return FourQubitState([a * c for a in self.amplitudes])

    def __eq__(self, other) -> bool:
        return isinstance(other, FourQubitState) and self.amplitudes == other.amplitudes

    def __hash__(self):
        return hash(self.amplitudes)

    def projectively_equal(self, other: FourQubitState) -> bool:
        k = next(i for i, a in enumerate(self.amplitudes) if a)
        if not other.amplitudes[k]:
            return False
        ratio = other.amplitudes[k] / self.amplitudes[k]
        return all(b == a * ratio for a, b in zip(self.amplitudes, other.amplitudes))

    def __str__(self) -> str:
        terms = [f"({a})|{b}>" for b, a in zip(BITS, self.amplitudes) if a]
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"FourQubitState({self.to_dict()})"


def read_state(path: str | Path) -> FourQubitState:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError("state file must hold a JSON object")
    return FourQubitState.from_dict(data)


def write_state(state: FourQubitState, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state.to_dict(), sort_keys=True) + "\n")


# -- sections ---------------------------------------------------------------------

@dataclass(frozen=True)
class SectionForm:
    """The multilinear form sum h_ijkl w_i x_j y_k z_l on P1 x P1 x P1 x P1."""

    poly: Polynomial

    def evaluate(self, point: Sequence[Sequence]) -> Scalar:
        flat = [c for pair in point for c in pair]
        return self.poly.evaluate(flat)


def segre_restrict(hyperplane: FourQubitState) -> SectionForm:
    terms = {}
    for idx, h in enumerate(hyperplane.amplitudes):
        if not h:
            continue
        bits = [(idx >> s) & 1 for s in (3, 2, 1, 0)]
        exp = []
        for b in bits:
            exp.extend((1, 0) if b == 0 else (0, 1))
        terms[tuple(exp)] = h
    if not terms:
        raise ZeroStateError("cannot restrict the zero hyperplane")
    return SectionForm(Polynomial(HOMOGENEOUS_VARS, terms, GREVLEX))


@dataclass(frozen=True, order=True)
class Chart:
    """Per qubit, the homogeneous coordinate set to 1 (0 or 1)."""

    fixed: tuple[int, int, int, int]

    @classmethod
    def all(cls) -> list[Chart]:
        return [cls(tuple(c)) for c in product((0, 1), repeat=4)]

    @classmethod
    def from_index(cls, k: int) -> Chart:
        if not 0 <= k < 16:
            raise ValueError("chart index must be in 0..15")
        return cls(tuple((k >> s) & 1 for s in (3, 2, 1, 0)))

    @property
    def index(self) -> int:
        a, b, c, d = self.fixed
        return 8 * a + 4 * b + 2 * c + d

    @property
    def variables(self) -> tuple[str, ...]:
        return CHART_VARS

    def describe(self) -> str:
        return "=".join(f"{q}{c}" for q, c in zip("wxyz", self.fixed)) + "=1"

    def contains(self, point) -> bool:
        return all(pair[c] for pair, c in zip(point, self.fixed))

    def affine(self, point) -> tuple[Scalar, ...]:
        """Chart coordinates of a projective point visible in this chart."""
        out = []
        for pair, c in zip(point, self.fixed):
            out.append(pair[1 - c] / pair[c])
        return tuple(out)

    def projective(self, affine: Sequence) -> tuple:
        pts = []
        for value, c in zip(affine, self.fixed):
            pair = [ZERO, ZERO]
            pair[c] = ONE
            pair[1 - c] = Scalar.coerce(value)
            pts.append(tuple(pair))
        return canonical_point(pts)


def canonical_point(point: Iterable[Sequence]) -> tuple:
    out = []
    for u0, u1 in point:
        u0, u1 = Scalar.coerce(u0), Scalar.coerce(u1)
        if u0:
            out.append((ONE, u1 / u0))
        elif u1:
            out.append((ZERO, ONE))
        else:
            raise ValueError("a point of P1 needs a nonzero coordinate")
    return tuple(out)


def point_label(point) -> str:
    """``|0111>`` for coordinate points, otherwise ``[u0:u1]`` per factor."""
    bits = []
    for u0, u1 in point:
        if u0.is_one() and u1.is_zero():
            bits.append("0")
        elif u0.is_zero():
            bits.append("1")
        else:
            return " x ".join(f"[{a}:{b}]" for a, b in point)
    return "|" + "".join(bits) + ">"


def chart_dehomogenize(form: SectionForm, chart: Chart) -> Polynomial:
    terms = {}
    for exp, c in form.poly.terms.items():
        new = tuple(exp[2 * q + 1 - chart.fixed[q]] for q in range(4))
        terms[new] = terms.get(new, ZERO) + c
    return Polynomial(CHART_VARS, terms, GREVLEX)


# -- SLOCC action ---------------------------------------------------------------

class GroupElement:
    """Four 2x2 matrices of determinant one."""

    def __init__(self, factors: Sequence[Sequence[Sequence]]):
        mats = []
        for m in factors:
            m = [[Scalar.coerce(x) for x in row] for row in m]
            if len(m) != 2 or any(len(r) != 2 for r in m):
                raise ValueError("each factor must be 2x2")
            if m[0][0] * m[1][1] - m[0][1] * m[1][0] != ONE:
                raise ValueError("each factor must have determinant 1")
            mats.append(m)
        if len(mats) != 4:
            raise ValueError("a SLOCC element has four factors")
        self.factors = mats

    @classmethod
    def identity(cls) -> GroupElement:
        return cls([[[1, 0], [0, 1]]] * 4)

    @classmethod
    def random(cls, rng: random.Random, height: int = 5) -> GroupElement:
        mats = []
        for _ in range(4):
            while True:
                a = random_rational(rng, height)
                b = random_rational(rng, height)
                c = random_rational(rng, height)
                if a:
                    d = (ONE + b * c) / a
                    mats.append([[a, b], [c, d]])
                    break
        return cls(mats)

    def inverse_transpose(self) -> GroupElement:
        out = []
        for (a, b), (c, d) in self.factors:
            out.append([[d, -c], [-b, a]])
        return GroupElement(out)


def apply_group(g: GroupElement, state: FourQubitState) -> FourQubitState:
    amps = list(state.amplitudes)
    for q, m in enumerate(g.factors):
        shift = 3 - q
        new = [ZERO] * 16
        for idx in range(16):
            bit = (idx >> shift) & 1
            base = idx & ~(1 << shift)
            for src in (0, 1):
                coeff = m[bit][src]
                if coeff:
                    a = amps[base | (src << shift)]
                    if a:
                        new[idx] = new[idx] + coeff * a
        amps = new
    return FourQubitState(amps)


def transform_hyperplane(g: GroupElement, hyperplane: FourQubitState) -> FourQubitState:
    """Dual action: <g^-T H | g Psi> = <H | Psi>."""
    return apply_group(g.inverse_transpose(), hyperplane)


def separable_state(vectors: Sequence[Sequence]) -> FourQubitState:
    amps = []
    for i, j, k, l in product((0, 1), repeat=4):
        v = vectors
        amps.append(Scalar.coerce(v[0][i]) * Scalar.coerce(v[1][j])
                    * Scalar.coerce(v[2][k]) * Scalar.coerce(v[3][l]))
    return FourQubitState(amps)


# -- tangent hyperplanes ------------------------------------------------------------

def random_rational(rng: random.Random, height: int = 9, max_den: int = 4) -> Scalar:
    num = rng.randint(-height, height)
    den = rng.randint(1, max_den)
    return Scalar(Fraction(num, den))


def _nonzero_vector(rng: random.Random, height: int) -> list[Scalar]:
    while True:
        v = [random_rational(rng, height), random_rational(rng, height)]
        if v[0] or v[1]:
            return v


def sample_tangent_pair(seed, height: int = 6) -> tuple[FourQubitState, tuple]:
    """A random hyperplane through the tangent space of X at a random separable point.

    Returns the hyperplane and the tangency point (canonical projective form).
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    while True:
        vecs = [_nonzero_vector(rng, height) for _ in range(4)]
        x = separable_state(vecs)
        rows = [list(x.amplitudes)]
        for q in range(4):
            a, b = vecs[q]
            perp = [-b, a]
            tv = list(vecs)
            tv[q] = perp
            rows.append(list(separable_state(tv).amplitudes))
        kernel = kernel_basis(rows)
        coeffs = [Scalar(rng.randint(-5, 5)) for _ in kernel]
        h = [ZERO] * 16
        for c, k in zip(coeffs, kernel):
            if c:
                h = [a + c * b for a, b in zip(h, k)]
        if any(h):
            return FourQubitState(h), canonical_point(vecs)


def sample_tangent_hyperplane(seed, height: int = 6) -> FourQubitState:
    return sample_tangent_pair(seed, height)[0]
