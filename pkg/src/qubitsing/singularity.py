"""Singular points of hyperplane sections and their ADE labels.

A germ is labelled from three pieces of data: the Milnor number (local
dimension of the gradient ideal), the corank of the Hessian, and for corank 2
the cubic part restricted to the Hessian kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .ideal import (INFINITE, Ideal, origin_is_isolated, quotient_dimension,
                    singular_locus_dimension, truncated_local_dimension)
from .poly import GREVLEX, Polynomial, fraction_free_det, kernel_basis, matrix_rank
from .scalar import ZERO, Scalar
from .solve import field_points
from .states import (Chart, FourQubitState, SectionForm, canonical_point,
                     chart_dehomogenize, point_label, segre_restrict)

__all__ = [
    "SectionGerm", "GermReport", "SingularityReport", "ChartCertificate", "MilnorResult",
    "InvalidGermError", "milnor_number", "hessian_corank", "degenerate_cubic",
    "classify_germ", "verdict_from_fields", "singular_locus", "classify_section",
    "DEFAULT_CUTOFF",
]

DEFAULT_CUTOFF = 12
CUBIC_VARS = ("u", "v")


class InvalidGermError(ValueError):
    """The base point is not a singular point of the zero set."""


class SectionGerm:
    """A polynomial with a singular point of its zero set; stores the germ moved to the origin."""

    def __init__(self, poly: Polynomial, point: Sequence | None = None):
        point = tuple(Scalar.coerce(c) for c in (point or (ZERO,) * len(poly.vars)))
        if len(point) != len(poly.vars):
            raise InvalidGermError("base point has the wrong number of coordinates")
        if poly.evaluate(point):
            raise InvalidGermError("the polynomial does not vanish at the base point")
        if any(g.evaluate(point) for g in poly.gradient()):
            raise InvalidGermError("the gradient does not vanish at the base point")
        self.poly = poly
        self.point = point
        self.shifted = poly.taylor_shift(point)

    @property
    def vars(self) -> tuple[str, ...]:
        return self.poly.vars

    def gradient_ideal(self) -> Ideal:
        grads = [g for g in self.shifted.gradient() if g]
        return Ideal(grads or [Polynomial(self.vars, {}, GREVLEX)])


@dataclass(frozen=True)
class MilnorResult:
    value: int | None
    dims: tuple[int, ...]
    isolated: bool | None      # None when neither stabilized nor refuted

    @property
    def status(self) -> str:
        if self.value is not None:
            return "finite"
        return "nonisolated" if self.isolated is False else "unresolved"


def milnor_number(germ: SectionGerm, cutoff: int = DEFAULT_CUTOFF) -> MilnorResult:
    """mu = dim O/(grad f) at the base point.

    If the truncated dimensions do not settle below the cutoff, the critical
    locus is tested for a positive-dimensional component through the point.
    """
    ideal = germ.gradient_ideal()
    local = truncated_local_dimension(ideal, cutoff)
    if local.stabilized:
        return MilnorResult(local.value, local.dims, True)
    isolated = origin_is_isolated(ideal)
    return MilnorResult(None, local.dims, False if not isolated else None)


def _hessian_matrix(germ: SectionGerm) -> list[list[Scalar]]:
    zero = (ZERO,) * len(germ.vars)
    return [[h.evaluate(zero) for h in row] for row in germ.shifted.hessian()]


def hessian_corank(germ: SectionGerm) -> tuple[int, list[list[Scalar]]]:
    h = _hessian_matrix(germ)
    kernel = kernel_basis(h)
    return len(kernel), kernel


@dataclass(frozen=True)
class CubicTest:
    cubic: Polynomial
    is_zero: bool
    is_perfect_cube: bool


def degenerate_cubic(germ: SectionGerm, kernel: Sequence[Sequence[Scalar]]) -> CubicTest:
    """Cubic part of the germ on the 2-dimensional Hessian kernel, with the cube test.

    A nonzero binary cubic is a cube iff its Hessian covariant c_uu c_vv - c_uv^2 vanishes.
    """
    if len(kernel) != 2:
        raise ValueError("the cubic test needs a corank-2 germ")
    cubic = germ.shifted.homogeneous_component(3).restrict_linear(kernel, CUBIC_VARS, GREVLEX)
    if not cubic:
        return CubicTest(cubic, True, False)
    cuu = cubic.differentiate("u").differentiate("u")
    cvv = cubic.differentiate("v").differentiate("v")
    cuv = cubic.differentiate("u").differentiate("v")
    return CubicTest(cubic, False, not (cuu * cvv - cuv * cuv))


@dataclass
class GermReport:
    verdict: str
    milnor: int | None
    milnor_dims: tuple[int, ...]
    corank: int | None = None
    kernel: list = field(default_factory=list)
    hessian_det: Scalar | None = None
    cubic: Polynomial | None = None
    cubic_is_zero: bool | None = None
    cubic_is_cube: bool | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "milnor": self.milnor if self.milnor is not None else f">= {len(self.milnor_dims)}",
            "milnor_dims": list(self.milnor_dims),
            "corank": self.corank,
            "hessian_det": None if self.hessian_det is None else str(self.hessian_det),
            "cubic": None if self.cubic is None else str(self.cubic),
            "cubic_is_zero": self.cubic_is_zero,
            "cubic_is_cube": self.cubic_is_cube,
        }


def verdict_from_fields(milnor: int | None, status: str, corank: int | None,
                        cubic_is_zero: bool | None, cubic_is_cube: bool | None) -> str:
    """The ADE decision tree on precomputed data."""
    if status == "nonisolated":
        return "NonIsolated"
    if status == "unresolved":
        return "Unresolved"
    if corank == 0:
        if milnor != 1:
            raise ArithmeticError(f"Morse point with Milnor number {milnor}")
        return "A1"
    if corank == 1:
        return f"A{milnor}"
    if corank == 2:
        if cubic_is_zero:
            return "NotSimple"
        if not cubic_is_cube:
            return f"D{milnor}"
        return f"E{milnor}" if milnor < 9 else "NotSimple"
    return "NotSimple"


def classify_germ(germ: SectionGerm, cutoff: int = DEFAULT_CUTOFF) -> GermReport:
    mil = milnor_number(germ, cutoff)
    if mil.status != "finite":
        verdict = verdict_from_fields(None, mil.status, None, None, None)
        return GermReport(verdict, None, mil.dims)
    corank, kernel = hessian_corank(germ)
    report = GermReport("", mil.value, mil.dims, corank, kernel)
    if corank == 0:
        report.hessian_det = fraction_free_det(_hessian_matrix(germ))
    if corank == 2:
        test = degenerate_cubic(germ, kernel)
        report.cubic, report.cubic_is_zero, report.cubic_is_cube = (
            test.cubic, test.is_zero, test.is_perfect_cube)
    report.verdict = verdict_from_fields(mil.value, "finite", corank,
                                         report.cubic_is_zero, report.cubic_is_cube)
    return report


# -- sections -----------------------------------------------------------------

@dataclass
class ChartCertificate:
    """Per chart: total length of the singular scheme vs. multiplicities at found points."""

    chart: Chart
    dimension: int
    scheme_length: float | int
    multiplicities: list[int] = field(default_factory=list)

    @property
    def residual(self) -> int | float:
        return self.scheme_length - sum(self.multiplicities)

    @property
    def ok(self) -> bool:
        return self.dimension <= 0 and self.residual == 0

    def to_json(self) -> dict:
        return {
            "chart": self.chart.describe(),
            "dimension": self.dimension,
            "scheme_length": "inf" if self.scheme_length == INFINITE else self.scheme_length,
            "multiplicities": self.multiplicities,
        }


@dataclass
class SingularPoint:
    point: tuple
    chart: Chart
    affine: tuple
    report: GermReport

    @property
    def label(self) -> str:
        return point_label(self.point)

    def to_json(self) -> dict:
        return {"point": self.label, "chart": self.chart.describe(),
                "affine": [str(c) for c in self.affine], **self.report.to_json()}


@dataclass
class SingularityReport:
    verdict: str
    points: list[SingularPoint]
    certificates: list[ChartCertificate]
    nonisolated_charts: list[tuple[Chart, int]] = field(default_factory=list)
    unresolved: list[str] = field(default_factory=list)

    @property
    def types(self) -> list[str]:
        return sorted({p.report.verdict for p in self.points})

    @property
    def unique(self) -> bool:
        return len(self.points) == 1 and not self.unresolved

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "points": [p.to_json() for p in self.points],
            "certificates": [c.to_json() for c in self.certificates],
            "nonisolated_charts": [{"chart": c.describe(), "dimension": d}
                                   for c, d in self.nonisolated_charts],
            "unresolved": self.unresolved,
        }


def _singular_ideal(f: Polynomial) -> Ideal:
    return Ideal([f] + [g for g in f.gradient() if g])


def singular_locus(form: SectionForm, charts: Sequence[Chart] | None = None):
    """Per chart: the polynomial, its singular ideal and the ideal's dimension."""
    out = []
    for chart in charts or Chart.all():
        f = chart_dehomogenize(form, chart)
        ideal = _singular_ideal(f)
        out.append((chart, f, ideal, singular_locus_dimension(ideal)))
    return out


def classify_section(hyperplane: FourQubitState | SectionForm, cutoff: int = DEFAULT_CUTOFF,
                     charts: Sequence[Chart] | None = None) -> SingularityReport:
    form = hyperplane if isinstance(hyperplane, SectionForm) else segre_restrict(hyperplane)
    locus = singular_locus(form, charts)
    nonisolated = [(c, d) for c, _, _, d in locus if d >= 1]
    if nonisolated:
        certs = [ChartCertificate(c, d, INFINITE if d >= 1 else quotient_dimension(i))
                 for c, _, i, d in locus]
        return SingularityReport("NonIsolated", [], certs, nonisolated)

    points: dict[tuple, SingularPoint] = {}
    certs = []
    unresolved = []
    for chart, f, ideal, dim in locus:
        cert = ChartCertificate(chart, dim, quotient_dimension(ideal) if dim == 0 else 0)
        certs.append(cert)
        if dim < 0:
            continue
        for aff in field_points(ideal):
            shifted = Ideal([g.taylor_shift(aff) for g in ideal.generators])
            local = truncated_local_dimension(shifted, cutoff)
            cert.multiplicities.append(local.value if local.stabilized else 0)
            proj = chart.projective(aff)
            if proj not in points:
                germ = SectionGerm(f, aff)
                points[proj] = SingularPoint(proj, chart, aff, classify_germ(germ, cutoff))
        if cert.residual:
            unresolved.append(f"{chart.describe()}: unresolved degree {cert.residual}")

    ordered = [points[k] for k in sorted(points, key=lambda p: point_label(p))]
    if unresolved:
        verdict = "Unresolved"
    elif not ordered:
        verdict = "Smooth"
    else:
        kinds = sorted({p.report.verdict for p in ordered})
        verdict = kinds[0] if len(kinds) == 1 else "Mixed(" + ",".join(kinds) + ")"
    return SingularityReport(verdict, ordered, certs, [], unresolved)
