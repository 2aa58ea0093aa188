"""Miniversal deformations of A_n and D_n, their discriminants, and the sampling verifiers.

The D_n deformation is
    F = x^(n-1) + x y^2 + l1 x^(n-2) + ... + l(n-2) x + l(n-1) + ln y,
and for x != 0 the critical equation dF/dy = 0 gives y = -ln / (2x), turning
x * F into the auxiliary polynomial t^n + l1 t^(n-1) + ... + l(n-1) t - (ln/2)^2.
The discriminant locus of D_n is the discriminant of that auxiliary polynomial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .ideal import Ideal, eliminate
from .invariants import (CalibrationReport, default_calibration, is_nullcone, levay_and_delta4,
                         phi, RouteDisagreement)
from .poly import GREVLEX, Polynomial, univariate_discriminant
from .scalar import ONE, ZERO, Scalar
from .states import FourQubitState, random_rational, sample_tangent_hyperplane

__all__ = [
    "MiniversalDeformation", "miniversal", "discriminant_sigma", "lemma_polynomial",
    "lambda_vars", "sample_sigma_dn", "sigma_point_from_critical", "sample_lemma_locus",
    "critical_eliminant", "eliminant_matches_discriminant",
    "LemmaReport", "verify_lemma31", "Prop32Report", "verify_prop32",
]


def lambda_vars(n: int) -> tuple[str, ...]:
    return tuple(f"l{k}" for k in range(1, n + 1))


@dataclass(frozen=True)
class MiniversalDeformation:
    kind: str
    n: int
    poly: Polynomial
    germ_vars: tuple[str, ...]
    basis: tuple[Polynomial, ...]

    @property
    def params(self) -> tuple[str, ...]:
        return lambda_vars(self.n)


def _check(kind: str, n: int) -> None:
    if kind not in ("A", "D"):
        raise ValueError(f"unsupported singularity type {kind!r}")
    if not isinstance(n, int) or n < (1 if kind == "A" else 4):
        raise ValueError(f"{kind}{n} is not defined")


@lru_cache(maxsize=None)
def miniversal(kind: str, n: int) -> MiniversalDeformation:
    _check(kind, n)
    lam = lambda_vars(n)
    if kind == "A":
        vars = ("x",) + lam
        x = Polynomial.variable("x", vars)
        poly = x ** (n + 1)
        for k, name in enumerate(lam, start=1):
            poly = poly + Polynomial.variable(name, vars) * x ** (n - k)
        basis = tuple(Polynomial.variable("x", ("x",)) ** k for k in range(n))
        return MiniversalDeformation("A", n, poly, ("x",), basis)
    vars = ("x", "y") + lam
    x, y = Polynomial.variable("x", vars), Polynomial.variable("y", vars)
    poly = x ** (n - 1) + x * y * y
    for k in range(1, n):
        poly = poly + Polynomial.variable(lam[k - 1], vars) * x ** (n - 1 - k)
    poly = poly + Polynomial.variable(lam[n - 1], vars) * y
    gx, gy = Polynomial.generators(("x", "y"))
    basis = tuple(gx ** k for k in range(n - 1)) + (gy,)
    return MiniversalDeformation("D", n, poly, ("x", "y"), basis)


@lru_cache(maxsize=None)
def lemma_polynomial(n: int) -> Polynomial:
    """t^n + l1 t^(n-1) + ... + l(n-1) t - (ln/2)^2."""
    _check("D", n)
    lam = lambda_vars(n)
    vars = ("t",) + lam
    t = Polynomial.variable("t", vars)
    poly = t ** n
    for k in range(1, n):
        poly = poly + Polynomial.variable(lam[k - 1], vars) * t ** (n - k)
    ln = Polynomial.variable(lam[-1], vars)
    return poly - ln * ln / 4


@lru_cache(maxsize=None)
def discriminant_sigma(kind: str, n: int) -> Polynomial:
    _check(kind, n)
    if kind == "A":
        disc = univariate_discriminant(miniversal("A", n).poly, "x")
    else:
        disc = univariate_discriminant(lemma_polynomial(n), "t")
    return disc.embed(lambda_vars(n), GREVLEX)


@lru_cache(maxsize=None)
def critical_eliminant(n: int) -> Ideal:
    """<F, F_x, F_y> intersected with k[l1..ln]."""
    F = miniversal("D", n).poly
    return eliminate(Ideal([F, F.differentiate("x"), F.differentiate("y")]), ("x", "y"))


def eliminant_matches_discriminant(n: int) -> bool:
    """Whether the elimination ideal is principal and generated by a multiple of the discriminant."""
    gens = critical_eliminant(n).generators
    if len(gens) != 1:
        return False
    g, d = gens[0], discriminant_sigma("D", n)
    return g * d.leading_coefficient() == d * g.leading_coefficient()


def _rat(rng: random.Random, height: int = 12, nonzero: bool = False) -> Scalar:
    while True:
        v = random_rational(rng, height, 5)
        if v or not nonzero:
            return v


def _critical_values(n: int, lam, x0, y0) -> tuple[Scalar, Scalar, Scalar]:
    F = miniversal("D", n).poly
    point = (x0, y0) + tuple(lam)
    return (F.evaluate(point), F.differentiate("x").evaluate(point),
            F.differentiate("y").evaluate(point))


def sample_sigma_dn(n: int, seed) -> tuple[Scalar, ...]:
    """A rational point of the D_n discriminant built from a critical point (x0, y0).

    l_n = -2 x0 y0 from F_y = 0, then l_(n-2) from F_x = 0, then l_(n-1) from F = 0.
    """
    _check("D", n)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    x0, y0 = _rat(rng), _rat(rng)
    lam = [_rat(rng) for _ in range(n - 3)]
    return sigma_point_from_critical(n, x0, y0, lam)


def sigma_point_from_critical(n: int, x0, y0, head) -> tuple[Scalar, ...]:
    x0, y0 = Scalar.coerce(x0), Scalar.coerce(y0)
    lam = [Scalar.coerce(v) for v in head]
    if len(lam) != n - 3:
        raise ValueError(f"D{n} needs {n - 3} free parameters")
    ln = -2 * x0 * y0
    fx = (n - 1) * x0 ** (n - 2) + y0 * y0
    for k, v in enumerate(lam, start=1):
        fx = fx + (n - 1 - k) * v * x0 ** (n - 2 - k)
    l_n2 = -fx
    lam.append(l_n2)
    f = x0 ** (n - 1) + x0 * y0 * y0 + ln * y0
    for k, v in enumerate(lam, start=1):
        f = f + v * x0 ** (n - 1 - k)
    lam.append(-f)
    lam.append(ln)
    return tuple(lam)


@dataclass(frozen=True)
class LemmaSample:
    branch: str
    lam: tuple[Scalar, ...]
    witness: tuple[Scalar, Scalar]


def sample_lemma_locus(n: int, seed, branch: str = "generic") -> LemmaSample:
    """A rational point where the auxiliary polynomial has a double root t0, with a
    critical point of F over it.

    Branches: ``generic`` (t0 != 0, ln != 0), ``ln=0`` (t0 != 0) and ``t0=0``
    (then l(n-1) = ln = 0 and l(n-2) = -y0^2 for a free y0).
    """
    _check("D", n)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    head = [_rat(rng) for _ in range(n - 3)]
    if branch == "t0=0":
        y0 = _rat(rng)
        lam = tuple(head) + (-(y0 * y0), ZERO, ZERO)
        return LemmaSample(branch, lam, (ZERO, y0))
    t0 = _rat(rng, nonzero=True)
    ln = ZERO if branch == "ln=0" else _rat(rng, nonzero=True)
    # P(t0) = a*l(n-2) + b*l(n-1) + c = 0,  P'(t0) = a'*l(n-2) + b'*l(n-1) + c' = 0
    c = t0 ** n - ln * ln / 4
    cp = n * t0 ** (n - 1)
    for k, v in enumerate(head, start=1):
        c = c + v * t0 ** (n - k)
        cp = cp + (n - k) * v * t0 ** (n - k - 1)
    a, b = t0 * t0, t0
    ap, bp = 2 * t0, ONE
    det = a * bp - b * ap
    l_n2 = (-c * bp + b * cp) / det
    l_n1 = (-a * cp + ap * c) / det
    lam = tuple(head) + (l_n2, l_n1, ln)
    return LemmaSample(branch, lam, (t0, -ln / (2 * t0)))


@dataclass
class LemmaReport:
    n: int
    forward: int = 0
    backward: int = 0
    branches: dict[str, int] = field(default_factory=dict)
    eliminant_checked: int = 0
    eliminant_generators: list[str] = field(default_factory=list)
    eliminant_is_discriminant: bool | None = None
    adversarial_ok: bool = False
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.adversarial_ok

    def to_json(self) -> dict:
        return {"n": self.n, "ok": self.ok, "forward": self.forward, "backward": self.backward,
                "branches": self.branches, "eliminant_checked": self.eliminant_checked,
                "eliminant_generators": self.eliminant_generators,
                "eliminant_is_discriminant": self.eliminant_is_discriminant,
                "adversarial_ok": self.adversarial_ok, "failures": self.failures}


def _fmt(lam) -> str:
    return "(" + ", ".join(str(v) for v in lam) + ")"


def verify_lemma31(n: int, samples: int, seed: int = 0, eliminant_points: int = 0) -> LemmaReport:
    """Two-sided sampled check that the D_n discriminant is the auxiliary discriminant.

    Forward: points built from critical points of F make the auxiliary
    discriminant vanish. Backward: points with a double root of the auxiliary
    polynomial (all three branches) carry an exact critical point of F on F = 0.
    With ``eliminant_points`` > 0 the elimination ideal of <F, F_x, F_y> must
    vanish on that many points of each side as well.
    """
    report = LemmaReport(n)
    disc = discriminant_sigma("D", n)
    rng = random.Random(f"lemma31:{n}:{seed}")
    branches = ("generic", "ln=0", "t0=0")
    elim = critical_eliminant(n).generators if eliminant_points else []
    report.eliminant_generators = [str(g) for g in elim]
    if eliminant_points:
        report.eliminant_is_discriminant = eliminant_matches_discriminant(n)

    def elim_vanishes(lam) -> bool:
        return all(not g.evaluate(lam) for g in elim)

    total = max(samples, eliminant_points)
    for k in range(total):
        lam = sample_sigma_dn(n, rng)
        if disc.evaluate(lam):
            report.failures.append(f"forward {_fmt(lam)}: auxiliary discriminant nonzero")
        if k < eliminant_points:
            report.eliminant_checked += 1
            if not elim_vanishes(lam):
                report.failures.append(f"forward {_fmt(lam)}: eliminant nonzero")
        report.forward += 1

        sample = sample_lemma_locus(n, rng, branches[k % 3])
        report.branches[sample.branch] = report.branches.get(sample.branch, 0) + 1
        if disc.evaluate(sample.lam):
            report.failures.append(f"backward {_fmt(sample.lam)}: not on the auxiliary locus")
        if any(_critical_values(n, sample.lam, *sample.witness)):
            report.failures.append(f"backward {_fmt(sample.lam)}: witness is not critical")
        if k < eliminant_points and not elim_vanishes(sample.lam):
            report.failures.append(f"backward {_fmt(sample.lam)}: eliminant nonzero")
        report.backward += 1

    adversarial = tuple(Scalar(Fraction(p, 7)) for p in (3, -5, 11, 2, 13, -17)[:n])
    report.adversarial_ok = bool(disc.evaluate(adversarial)) and (
        not elim or any(g.evaluate(adversarial) for g in elim))
    if not report.adversarial_ok:
        report.failures.append(f"adversarial {_fmt(adversarial)} unexpectedly on the locus")
    return report


@dataclass
class Prop32Report:
    samples: int = 0
    nullcone_hits: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "samples": self.samples, "nullcone_hits": self.nullcone_hits,
                "failures": self.failures}


def check_prop32_state(h: FourQubitState, calibration: CalibrationReport, label: str,
                       report: Prop32Report) -> None:
    disc = discriminant_sigma("D", 4)
    try:
        inv = levay_and_delta4(h, calibration)
    except RouteDisagreement as exc:
        report.failures.append(f"{label}: {exc}")
        return
    if inv.delta4:
        report.failures.append(f"{label}: hyperdeterminant {inv.delta4} != 0")
    lam = phi(h, calibration)
    if disc.evaluate(lam):
        report.failures.append(f"{label}: phi = {_fmt(lam)} is off the D4 discriminant")
    if is_nullcone(h):
        report.nullcone_hits += 1
        if any(lam):
            report.failures.append(f"{label}: nullcone state maps to {_fmt(lam)}")
    report.samples += 1


def verify_prop32(samples: int, seed: int = 0,
                  calibration: CalibrationReport | None = None) -> Prop32Report:
    """Tangent hyperplanes have vanishing hyperdeterminant and map into the D4 discriminant."""
    cal = calibration or default_calibration()
    report = Prop32Report()
    for s in range(samples):
        check_prop32_state(sample_tangent_hyperplane(seed * 100_003 + s), cal, f"seed {s}", report)
    for label, h in (("nullcone <0000|+<1011|+<1101|+<1110|", FourQubitState.basis("0000", "1011", "1101", "1110")),
                     ("<1111|", FourQubitState.basis("1111"))):
        check_prop32_state(h, cal, label, report)
    return report
