"""End-to-end statification: stratify the presentation kernel, refine to a
smooth fan, pull the module back to every chart, and certify staticity.
"""

import hashlib
import json
from dataclasses import dataclass

from .errors import NonSmoothChartError, SupportMismatchError, UnsupportedSupportError
from .groebner import groebner_stratification
from .linalg import inverse_unimodular
from .polyhedral import Fan, orthant, refines, stratification_to_smooth_fan
from .staticity import ModulePresentation, SmoothChart, log_tor_dim_at_most


def _matmul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def substitution_matrix(target_chart, source_chart):
    """Exponent matrix E with target variable j mapping to prod_i z_i^E[i][j].

    Induced by the dual-lattice inclusion: E = V_source * V_target^{-1}
    where V holds the chart's variable rays as rows. Entries are
    nonnegative whenever the source cone sits inside the target cone.
    """
    vt = [list(r) for r in target_chart.variable_rays]
    vs = [list(r) for r in source_chart.variable_rays]
    e = _matmul(vs, [list(c) for c in zip(*inverse_unimodular(vt))])
    for row in e:
        for x in row:
            if x < 0:
                raise ValueError("source chart is not contained in the target chart")
    return [tuple(r) for r in e]


class ToricModification:
    """A fan refinement of a chart cone with per-chart monomial substitutions."""

    __slots__ = ("target_chart", "fan", "charts")

    def __init__(self, target_chart, fan):
        if fan.support.key() != target_chart.cone.key():
            raise SupportMismatchError("modification fan must live on the chart cone")
        self.target_chart = target_chart
        self.fan = fan
        charts = []
        for cone in fan.max_cones:
            if not cone.is_smooth():
                raise NonSmoothChartError("modification charts must be smooth")
            chart = SmoothChart(cone)
            charts.append((cone, chart, substitution_matrix(target_chart, chart)))
        self.charts = tuple(charts)

    @classmethod
    def identity(cls, chart):
        return cls(chart, Fan(chart.cone, [chart.cone]))

    def is_identity(self):
        return len(self.charts) == 1 and self.charts[0][0].key() == self.target_chart.cone.key()

    def chart_for(self, cone):
        for c, chart, e in self.charts:
            if c.key() == cone.key():
                return chart, e
        raise ValueError("cone is not a maximal cone of the modification")


def pullback_presentation(presentation, modification, cone):
    """Substitute chart monomials into the presentation matrix."""
    chart, e = modification.chart_for(cone)
    rows = []
    for row in presentation.rows:
        rows.append([p.substitute_monomials(e, chart.nvars) for p in row])
    return ModulePresentation(chart, rows)


@dataclass(frozen=True)
class ChartReport:
    cone: object
    presentation: object
    static: bool
    reports: tuple


@dataclass(frozen=True)
class TheoremCheck:
    """Both sides of the staticity criterion, computed independently."""

    fan_refines_stratification: bool
    charts: tuple  # (cone, static) pairs
    all_static: bool

    @property
    def agrees(self):
        return self.fan_refines_stratification == self.all_static


class StatificationCertificate:
    """Replayable record of a statification run."""

    __slots__ = (
        "presentation",
        "kernel",
        "stratification",
        "fan",
        "charts",
        "audit",
    )

    def __init__(self, presentation, kernel, stratification, fan, charts, audit=None):
        self.presentation = presentation
        self.kernel = kernel
        self.stratification = stratification
        self.fan = fan
        self.charts = tuple(charts)
        self.audit = audit

    @property
    def all_static(self):
        return all(c.static for c in self.charts)

    def replay(self):
        """Re-run every embedded check; returns a dict of verdict bits."""
        out = {}
        out["kernel_matches"] = self.presentation.kernel() == self.kernel
        strat2 = groebner_stratification(self.kernel, self.stratification.support)
        out["stratification_matches"] = strat2.stratification.key() == self.stratification.stratification.key()
        out["fan_refines"] = refines(self.fan, self.stratification.stratification)
        chart_bits = []
        for rep in self.charts:
            holds, _ = log_tor_dim_at_most(rep.presentation, 1)
            chart_bits.append(holds == rep.static)
        out["charts_match"] = all(chart_bits)
        return out


def _require_orthant_chart(presentation):
    chart = presentation.chart
    if chart.cone.key() != orthant(chart.nvars).key():
        raise UnsupportedSupportError("statification expects a presentation on the orthant chart")
    return chart


def compute_statification(presentation, audit=False, fail_fast=False):
    """Statify a module on the orthant chart.

    Stratifies the syzygy kernel, refines to a smooth fan, pulls the module
    back to every maximal cone, and certifies each pullback static. The
    returned certificate replays all checks from stored data.
    """
    chart = _require_orthant_chart(presentation)
    kernel = presentation.kernel()
    strat = groebner_stratification(kernel, chart.cone)
    fan = stratification_to_smooth_fan(strat.stratification)
    modification = ToricModification(chart, fan)
    charts = []
    for cone, _chart, _e in modification.charts:
        pulled = pullback_presentation(presentation, modification, cone)
        holds, reports = log_tor_dim_at_most(pulled, 1)
        charts.append(ChartReport(cone=cone, presentation=pulled, static=holds, reports=tuple(reports)))
        if fail_fast and not holds:
            break
    audit_data = None
    if audit and presentation.ncols >= 1:
        doubled = ModulePresentation(
            chart,
            [list(row) + [row[-1]] for row in presentation.rows],
        )
        kernel2 = doubled.kernel()
        strat2 = groebner_stratification(kernel2, chart.cone)
        audit_data = {
            "second_kernel": kernel2,
            "fan_refines_second": refines(fan, strat2.stratification),
        }
    return StatificationCertificate(presentation, kernel, strat, fan, charts, audit_data)


def verify_theorem_instance(presentation, fan):
    """Independently evaluate both sides of the staticity criterion.

    Side one: does the fan refine the kernel stratification. Side two: is
    the pullback static on every maximal cone. The two computations share
    no intermediate results.
    """
    chart = _require_orthant_chart(presentation)
    if fan.support.key() != chart.cone.key():
        raise SupportMismatchError("fan support must equal the chart cone")
    kernel = presentation.kernel()
    strat = groebner_stratification(kernel, chart.cone)
    side_refines = refines(fan, strat.stratification)

    modification = ToricModification(chart, fan)
    verdicts = []
    for cone, _chart, _e in modification.charts:
        pulled = pullback_presentation(presentation, modification, cone)
        holds, _ = log_tor_dim_at_most(pulled, 1)
        verdicts.append((cone, holds))
    return TheoremCheck(
        fan_refines_stratification=side_refines,
        charts=tuple(verdicts),
        all_static=all(v for _, v in verdicts),
    )


def input_digest(obj):
    """Stable digest of a JSON-serializable object for certificate audits."""
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()
