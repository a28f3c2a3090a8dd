"""Staticity and log Tor dimension of modules on smooth affine toric charts.

A chart is a full-dimensional smooth pointed cone; its coordinate ring is the
polynomial ring on the dual basis and every coordinate is a boundary
variable. Tor against the quotient by a face's complementary variables is
Koszul homology, decided exactly by lifting to free presentations and testing
kernel generators for membership in the image.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import NonSmoothChartError
from .groebner import (
    ModuleVector,
    Poly,
    Submodule,
    base_key,
    leading_term,
    normal_form,
    buchberger,
    syzygy_generators,
    syzygies,
)
from .polyhedral import Cone


_VAR_LETTERS = ("x", "y", "z", "w")


def default_var_names(n):
    if n <= len(_VAR_LETTERS):
        return tuple(_VAR_LETTERS[:n])
    return tuple(f"x{i + 1}" for i in range(n))


class SmoothChart:
    """Affine chart of a full-dimensional smooth pointed cone.

    Chart variable j is the monomial dual to ``variable_rays[j]``; rays are
    ordered descending-lexicographically so the standard orthant gets the
    identity assignment. All chart variables are boundary variables.
    """

    __slots__ = ("cone", "nvars", "variable_rays", "var_names")

    def __init__(self, cone):
        if not isinstance(cone, Cone):
            raise TypeError("chart expects a Cone")
        if not cone.is_pointed() or cone.dim != cone.ambient_dim or not cone.is_smooth():
            raise NonSmoothChartError(
                "chart cone must be smooth, pointed, and full dimensional; "
                "resolve with stratification_to_smooth_fan first"
            )
        self.cone = cone
        self.nvars = cone.ambient_dim
        self.variable_rays = tuple(sorted(cone.rays, reverse=True))
        self.var_names = default_var_names(self.nvars)

    @property
    def boundary_variables(self):
        return tuple(range(self.nvars))

    def key(self):
        return self.cone.key()

    def __eq__(self, other):
        return isinstance(other, SmoothChart) and self.key() == other.key()

    def __repr__(self):
        return f"SmoothChart(rays={list(map(list, self.variable_rays))})"


def orthant_chart(n):
    from .polyhedral import orthant

    return SmoothChart(orthant(n))


class ModulePresentation:
    """Coherent module on a chart, presented as the cokernel of a matrix."""

    __slots__ = ("chart", "rows", "nrows", "ncols")

    def __init__(self, chart, rows):
        self.chart = chart
        checked = []
        width = None
        for row in rows:
            r = []
            for p in row:
                if not isinstance(p, Poly):
                    p = Poly(chart.nvars, p)
                if p.nvars != chart.nvars:
                    raise ValueError("entry variable count differs from the chart")
                if not p.is_polynomial():
                    raise ValueError("presentation entries must be polynomial")
                r.append(p)
            if width is None:
                width = len(r)
            elif len(r) != width:
                raise ValueError("ragged presentation matrix")
            checked.append(tuple(r))
        if not checked:
            raise ValueError("presentation needs at least one row")
        self.rows = tuple(checked)
        self.nrows = len(self.rows)
        self.ncols = width

    def columns(self):
        """Column vectors of the matrix as rank-nrows dict vectors."""
        cols = []
        for j in range(self.ncols):
            col = {}
            for i in range(self.nrows):
                for e, c in self.rows[i][j].terms:
                    col[(e, i)] = col.get((e, i), Fraction(0)) + c
            cols.append({t: c for t, c in col.items() if c})
        return cols

    def kernel(self):
        """Syzygies of the presentation matrix (a Submodule of rank ncols)."""
        return syzygies([list(r) for r in self.rows], self.chart.nvars)

    def key(self):
        return (self.chart.key(), tuple(tuple(p.key() for p in r) for r in self.rows))

    def __eq__(self, other):
        return isinstance(other, ModulePresentation) and self.key() == other.key()

    def __repr__(self):
        return f"ModulePresentation({self.nrows}x{self.ncols} on {self.chart!r})"


@dataclass(frozen=True)
class TorReport:
    """Vanishing record for one face of the chart monoid.

    ``face`` lists the variables spanning the face; the Koszul sequence is
    its complement. ``witness`` is a nonzero homology class generator
    (wedge labels plus a vector over the free cover) when vanishes is False.
    """

    face: tuple
    degree: int
    vanishes: bool
    witness: object = None


def _wedge_basis(seq, p):
    return list(combinations(range(len(seq)), p))


def _koszul_column(seq, wedges_p, wedges_prev, n, l, wedge_index, inner):
    """Image of basis vector (wedge, inner) under the Koszul differential."""
    col = {}
    w = wedges_p[wedge_index]
    prev_index = {wb: i for i, wb in enumerate(wedges_prev)}
    for q in range(len(w)):
        rest = w[:q] + w[q + 1:]
        sign = Fraction(-1) ** q
        var = seq[w[q]]
        exp = tuple(1 if t == var else 0 for t in range(n))
        comp = prev_index[rest] * l + inner
        col[(exp, comp)] = sign
    return col


def _broadcast(cols, l, wedge_count):
    """One copy of the presentation columns per wedge slot."""
    out = []
    for w in range(wedge_count):
        for col in cols:
            out.append({(e, w * l + c): v for (e, c), v in col.items()})
    return out


def koszul_tor(presentation, seq, degree):
    """Koszul homology of the variable sequence `seq` with module coefficients.

    Reports whether H_degree vanishes; equivalently Tor in that degree
    against the quotient by the face complementary to `seq`.
    """
    chart = presentation.chart
    n = chart.nvars
    seq = tuple(sorted(set(int(v) for v in seq)))
    for v in seq:
        if not 0 <= v < n:
            raise ValueError("sequence variable out of range")
    face = tuple(v for v in range(n) if v not in seq)
    if degree < 0:
        raise ValueError("homological degree must be nonnegative")
    s = len(seq)
    l = presentation.nrows
    acols = presentation.columns()
    if degree > s:
        return TorReport(face=face, degree=degree, vanishes=True)

    wedges_i = _wedge_basis(seq, degree)
    wedges_prev = _wedge_basis(seq, degree - 1) if degree >= 1 else []
    wedges_next = _wedge_basis(seq, degree + 1)

    rank_i = l * len(wedges_i)
    rank_prev = l * len(wedges_prev)

    if degree == 0:
        cycles = [{(tuple(0 for _ in range(n)), c): Fraction(1)} for c in range(rank_i)]
    else:
        d_cols = [
            _koszul_column(seq, wedges_i, wedges_prev, n, l, wi, inner)
            for wi in range(len(wedges_i))
            for inner in range(l)
        ]
        relations_prev = _broadcast(acols, l, len(wedges_prev))
        syz = syzygy_generators(d_cols + relations_prev, rank_prev, n)
        cycles = []
        for sv in syz:
            v = {(e, c): co for (e, c), co in sv.items() if c < rank_i}
            if v:
                cycles.append(v)

    boundary_cols = [
        _koszul_column(seq, wedges_next, wedges_i, n, l, wi, inner)
        for wi in range(len(wedges_next))
        for inner in range(l)
    ]
    boundaries = boundary_cols + _broadcast(acols, l, len(wedges_i))
    bbasis = buchberger(boundaries, base_key)
    bpairs = [(g, leading_term(g, base_key)) for g in bbasis]

    for z in cycles:
        if normal_form(dict(z), bpairs, base_key):
            witness = {
                "wedge_basis": [tuple(seq[i] for i in w) for w in wedges_i],
                "vector": ModuleVector(n, rank_i, z),
            }
            return TorReport(face=face, degree=degree, vanishes=False, witness=witness)
    return TorReport(face=face, degree=degree, vanishes=True)


def log_tor_dim_at_most(presentation, d):
    """Chart criterion: Tor in degree d+1 must vanish against every face.

    Returns (holds, reports) where reports has one entry per face subset,
    in canonical face order.
    """
    if d < 0:
        raise ValueError("log Tor dimension bound must be nonnegative")
    n = presentation.chart.nvars
    variables = list(range(n))
    faces = []
    for size in range(n + 1):
        faces.extend(combinations(variables, size))
    faces.sort(key=lambda f: (len(f), f))
    reports = []
    holds = True
    for face in faces:
        seq = tuple(v for v in variables if v not in face)
        rep = koszul_tor(presentation, seq, d + 1)
        reports.append(rep)
        if not rep.vanishes:
            holds = False
    return holds, reports


def is_static(presentation):
    return log_tor_dim_at_most(presentation, 1)[0]


def is_log_flat(presentation):
    return log_tor_dim_at_most(presentation, 0)[0]


def is_regular_sequence_on(kernel, seq):
    """Whether the variable sequence is regular on the quotient by `kernel`.

    `kernel` is a Submodule of R^m (for a presentation, its syzygy module);
    the quotient R^m/kernel is the image module of the presentation. At each
    stage the test is the colon identity (K' : x) = K' with K' the kernel
    enlarged by the previously consumed variables.
    """
    m = kernel.rank
    n = kernel.torus_rank
    if m == 0:
        return True
    gens = [g.as_dict() for g in kernel.generators]
    consumed = []
    for v in seq:
        v = int(v)
        if not 0 <= v < n:
            raise ValueError("sequence variable out of range")
        stage = list(gens)
        for u in consumed:
            exp = tuple(1 if t == u else 0 for t in range(n))
            for i in range(m):
                stage.append({(exp, i): Fraction(1)})
        current = Submodule(n, m, [ModuleVector(n, m, g) for g in stage])
        x = Poly(n, {tuple(1 if t == v else 0 for t in range(n)): 1})
        colon = current.colon(x)
        if colon.reduced_groebner_basis().key() != current.reduced_groebner_basis().key():
            return False
        consumed.append(v)
    return True
