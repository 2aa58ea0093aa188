"""SLOCC invariants of four qubits: B, L, M, D, the Levay combinations and the hyperdeterminant.

Sign and scale conventions for L, M, D and for the last component of the
quotient map are not fixed by construction; :func:`calibrate` searches the
finite convention space against the G_abcd quartic identity and the
vanishing of the hyperdeterminant on tangent hyperplanes.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from pathlib import Path

from .poly import Polynomial, fraction_free_det, univariate_discriminant
from .scalar import ONE, ZERO, Scalar, parse_scalar
from .states import FourQubitState, random_rational, sample_tangent_hyperplane

__all__ = [
    "invariant_B", "invariant_D", "flattening_dets", "contraction_det", "CalibrationReport",
    "CalibrationError", "RouteDisagreement", "calibrate", "default_calibration",
    "InvariantVector", "levay_and_delta4", "phi", "is_nullcone", "quartic_coefficients",
    "quartic_discriminant",
    "gabcd_state", "blmd", "load_calibration", "save_calibration",
]

FLATTENINGS = ("12|34", "13|24", "14|23")
PAIRS = tuple(combinations(range(4), 2))
KAPPAS = ("1", "-1", "2", "-2", "1/2", "-1/2")
C4_CANDIDATES = ("1/2*i", "-1/2*i", "2*i", "-2*i", "2", "-2", "1/2", "-1/2")


class CalibrationError(RuntimeError):
    """No convention satisfies the calibration identities."""


class RouteDisagreement(ArithmeticError):
    """The two hyperdeterminant formulas disagree."""


def _amp(state: FourQubitState, idx) -> Scalar:
    i, j, k, l = idx
    return state.amplitudes[8 * i + 4 * j + 2 * k + l]


def invariant_B(state: FourQubitState) -> Scalar:
    total = ZERO
    for idx in product((0, 1), repeat=4):
        a = _amp(state, idx)
        if not a:
            continue
        b = _amp(state, tuple(1 - x for x in idx))
        if b:
            term = a * b
            total = total - term if sum(idx) % 2 else total + term
    return total / 2


def _flattening(state: FourQubitState, rows_qubits, cols_qubits):
    m = [[ZERO] * 4 for _ in range(4)]
    for idx in product((0, 1), repeat=4):
        r = 2 * idx[rows_qubits[0]] + idx[rows_qubits[1]]
        c = 2 * idx[cols_qubits[0]] + idx[cols_qubits[1]]
        m[r][c] = _amp(state, idx)
    return m


def flattening_dets(state: FourQubitState) -> tuple[Scalar, Scalar, Scalar]:
    """Determinants of the 12|34, 13|24 and 14|23 reshapings."""
    return (
        fraction_free_det(_flattening(state, (0, 1), (2, 3))),
        fraction_free_det(_flattening(state, (0, 2), (1, 3))),
        fraction_free_det(_flattening(state, (0, 3), (1, 2))),
    )


def contraction_det(state: FourQubitState, pair: tuple[int, int] = (0, 2)) -> Scalar:
    """det of the 3x3 coefficient matrix of det N(u, v), N_jl = sum a_ijkl u_i v_k.

    ``pair`` names the two contracted qubits (0-based); the other two index N.
    """
    p, q = pair
    rest = [r for r in range(4) if r not in pair]
    coeff = [[ZERO] * 3 for _ in range(3)]

    def entry(j, l, i, k):
        idx = [0] * 4
        idx[p], idx[q], idx[rest[0]], idx[rest[1]] = i, k, j, l
        return _amp(state, idx)

    for i, k, i2, k2 in product((0, 1), repeat=4):
        t = entry(0, 0, i, k) * entry(1, 1, i2, k2) - entry(0, 1, i, k) * entry(1, 0, i2, k2)
        if t:
            coeff[i + i2][k + k2] = coeff[i + i2][k + k2] + t
    return fraction_free_det(coeff)


# -- calibration ------------------------------------------------------------------

@dataclass(frozen=True)
class Convention:
    l_flattening: int
    l_sign: int
    m_flattening: int
    m_sign: int
    d_pair: tuple[int, int]
    kappa: str

    def describe(self) -> dict:
        sign = lambda s: "" if s > 0 else "-"  # noqa: E731
        return {
            "L": f"{sign(self.l_sign)}det{FLATTENINGS[self.l_flattening]}",
            "M": f"{sign(self.m_sign)}det{FLATTENINGS[self.m_flattening]}",
            "D": f"{self.kappa}*contraction{tuple(x + 1 for x in self.d_pair)}",
        }


@dataclass
class CalibrationReport:
    convention: Convention
    c4: str
    survivors: list[dict] = field(default_factory=list)
    c4_survivors: list[str] = field(default_factory=list)
    gabcd_samples: list[list[str]] = field(default_factory=list)
    generic_samples: int = 0
    tangent_seeds: list[int] = field(default_factory=list)

    @property
    def c4_scalar(self) -> Scalar:
        return parse_scalar(self.c4)

    @property
    def kappa_scalar(self) -> Scalar:
        return parse_scalar(self.convention.kappa)

    def fingerprint(self) -> str:
        blob = json.dumps({**self.convention.describe(), "c4": self.c4}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def to_json(self) -> dict:
        conv = asdict(self.convention)
        conv["d_pair"] = list(conv["d_pair"])
        return {
            "fingerprint": self.fingerprint(),
            "convention": conv,
            "readable": {**self.convention.describe(), "c4": self.c4},
            "c4": self.c4,
            "survivors": self.survivors,
            "c4_survivors": self.c4_survivors,
            "evidence": {
                "gabcd_samples": self.gabcd_samples,
                "generic_samples": self.generic_samples,
                "tangent_seeds": self.tangent_seeds,
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> CalibrationReport:
        conv = dict(data["convention"])
        conv["d_pair"] = tuple(conv["d_pair"])
        ev = data.get("evidence", {})
        return cls(Convention(**conv), data["c4"], data.get("survivors", []),
                   data.get("c4_survivors", []), ev.get("gabcd_samples", []),
                   ev.get("generic_samples", 0), ev.get("tangent_seeds", []))


def gabcd_state(a, b, c, d) -> FourQubitState:
    a, b, c, d = (Scalar.coerce(x) for x in (a, b, c, d))
    al, be, ga, de = (a + d) / 2, (a - d) / 2, (b + c) / 2, (b - c) / 2
    return FourQubitState.from_dict({
        "0000": al, "1111": al, "0011": be, "1100": be,
        "0101": ga, "1010": ga, "0110": de, "1001": de,
    })


def _blmd_raw(state, conv: Convention, cache=None):
    dets = flattening_dets(state) if cache is None else cache[0]
    B = invariant_B(state) if cache is None else cache[1]
    L = dets[conv.l_flattening] * conv.l_sign
    M = dets[conv.m_flattening] * conv.m_sign
    D = contraction_det(state, conv.d_pair) * parse_scalar(conv.kappa)
    return B, L, M, D


def _levay(B, L, M, D):
    return B / 2, (B * B + 2 * L - 4 * M) / 6, D + B * L / 2, L


def quartic_coefficients(B, L, M, D) -> list[Scalar]:
    """Coefficients (constant first) of t^4 - 4 I1 t^3 + 6 I2 t^2 - 4 I3 t + I4^2."""
    I1, I2, I3, I4 = _levay(B, L, M, D)
    return [I4 * I4, -4 * I3, 6 * I2, -4 * I1, ONE]


def quartic_discriminant(coeffs_low_first) -> Scalar:
    p = Polynomial(("t",), {(k,): c for k, c in enumerate(coeffs_low_first)})
    return univariate_discriminant(p, "t")


def _sym_squares(vals) -> list[Scalar]:
    sq = [v * v for v in vals]
    e = [ONE, ZERO, ZERO, ZERO, ZERO]
    for s in sq:
        for k in range(4, 0, -1):
            e[k] = e[k] + e[k - 1] * s
    return e


def _st(B, L, M, D):
    P = B * B - 4 * (L + M)
    E = B * D + 2 * L * M
    S = (P * P - 24 * E) / 12
    T = (P * P * P - 36 * P * E + 216 * D * D) / 216
    return S, T


def calibrate(seed: int = 0, gabcd_draws: int = 6, generic_draws: int = 10,
              tangent_draws: int = 4) -> CalibrationReport:
    rng = random.Random(seed)
    g_samples = []
    while len(g_samples) < gabcd_draws:
        vals = [random_rational(rng, 30, 5) for _ in range(4)]
        if all(vals):
            g_samples.append(vals)
    g_data = []
    for vals in g_samples:
        st = gabcd_state(*vals)
        g_data.append((st, flattening_dets(st), invariant_B(st), _sym_squares(vals),
                       {pr: contraction_det(st, pr) for pr in PAIRS}))
    tangents = [sample_tangent_hyperplane(1000 + s) for s in range(tangent_draws)]
    t_data = [(h, flattening_dets(h), invariant_B(h), {pr: contraction_det(h, pr) for pr in PAIRS})
              for h in tangents]

    survivors = []
    for lf, ls, mf, ms in product(range(3), (-1, 1), range(3), (-1, 1)):
        if lf == mf:
            continue
        for pair, kappa in product(PAIRS, KAPPAS):
            conv = Convention(lf, ls, mf, ms, pair, kappa)
            k = parse_scalar(kappa)
            ok = True
            for st, dets, B, e, cdet in g_data:
                L, M, D = dets[lf] * ls, dets[mf] * ms, cdet[pair] * k
                q = quartic_coefficients(B, L, M, D)
                if q != [e[4], -e[3], e[2], -e[1], ONE]:
                    ok = False
                    break
            if not ok:
                continue
            for h, dets, B, cdet in t_data:
                L, M, D = dets[lf] * ls, dets[mf] * ms, cdet[pair] * k
                if quartic_discriminant(quartic_coefficients(B, L, M, D)):
                    ok = False
                    break
            if ok:
                survivors.append(conv)
    if not survivors:
        raise CalibrationError("no convention reproduces the G_abcd quartic identity")
    conv = survivors[0]

    # identity (ii): S,T route against the quartic route on generic states
    for _ in range(generic_draws):
        st = FourQubitState([random_rational(rng, 9, 3) for _ in range(16)])
        B, L, M, D = _blmd_raw(st, conv)
        S, T = _st(B, L, M, D)
        if S ** 3 - 27 * T * T != quartic_discriminant(quartic_coefficients(B, L, M, D)) / 256:
            raise CalibrationError("S,T route and quartic route disagree on a generic state")

    # c4: the deformation quartic t^4 + l1 t^3 + l2 t^2 + l3 t - (l4/2)^2 must be the same quartic
    c4_ok = []
    for c4 in C4_CANDIDATES:
        c = parse_scalar(c4)
        good = True
        for st, *_ in g_data + [(h,) for h in tangents]:
            B, L, M, D = _blmd_raw(st, conv)
            I4 = L
            lam4 = c * I4
            if -(lam4 / 2) * (lam4 / 2) != I4 * I4:
                good = False
                break
        if good:
            c4_ok.append(c4)
    if not c4_ok:
        raise CalibrationError("no constant matches the quartic's constant term")

    return CalibrationReport(
        convention=conv,
        c4=c4_ok[0],
        survivors=[s.describe() for s in survivors],
        c4_survivors=c4_ok,
        gabcd_samples=[[str(v) for v in vals] for vals in g_samples],
        generic_samples=generic_draws,
        tangent_seeds=[1000 + s for s in range(tangent_draws)],
    )


@lru_cache(maxsize=1)
def default_calibration() -> CalibrationReport:
    return calibrate()


def save_calibration(report: CalibrationReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")


def load_calibration(path: str | Path) -> CalibrationReport:
    return CalibrationReport.from_json(json.loads(Path(path).read_text()))


# -- evaluation -----------------------------------------------------------------

@dataclass(frozen=True)
class InvariantVector:
    B: Scalar
    L: Scalar
    M: Scalar
    D: Scalar
    I1: Scalar
    I2: Scalar
    I3: Scalar
    I4: Scalar
    S: Scalar
    T: Scalar
    delta4: Scalar

    def to_json(self) -> dict[str, str]:
        return {k: str(v) for k, v in asdict(self).items()}


def invariant_D(state: FourQubitState, calibration: CalibrationReport | None = None) -> Scalar:
    cal = calibration or default_calibration()
    conv = cal.convention
    return contraction_det(state, conv.d_pair) * parse_scalar(conv.kappa)


def blmd(state: FourQubitState, calibration: CalibrationReport | None = None):
    cal = calibration or default_calibration()
    return _blmd_raw(state, cal.convention)


def levay_and_delta4(state: FourQubitState,
                     calibration: CalibrationReport | None = None) -> InvariantVector:
    """All invariants; the hyperdeterminant via S,T, checked against the quartic route.

    delta4 = S^3 - 27 T^2, which equals disc(t^4 - 4 I1 t^3 + 6 I2 t^2 - 4 I3 t + I4^2) / 256.
    """
    B, L, M, D = blmd(state, calibration)
    I1, I2, I3, I4 = _levay(B, L, M, D)
    S, T = _st(B, L, M, D)
    delta = S ** 3 - 27 * T * T
    quartic_route = quartic_discriminant(quartic_coefficients(B, L, M, D)) / 256
    if delta != quartic_route:
        raise RouteDisagreement(f"S,T route {delta} != quartic route {quartic_route}")
    return InvariantVector(B, L, M, D, I1, I2, I3, I4, S, T, delta)


def phi(state: FourQubitState, calibration: CalibrationReport | None = None) -> tuple[Scalar, ...]:
    cal = calibration or default_calibration()
    B, L, M, D = blmd(state, cal)
    I1, I2, I3, I4 = _levay(B, L, M, D)
    return (-4 * I1, 6 * I2, -4 * I3, cal.c4_scalar * I4)


def is_nullcone(state: FourQubitState) -> bool:
    B, L, M, D = blmd(state)
    return not (B or L or M or D)
