"""Exact rational polyhedral cones, fans, and piecewise-linear stratifications.

All cones are given by primitive integer rays and live in a fixed ambient
lattice Z^n. Dual (inequality) descriptions are computed with the double
description method over exact integers; no floating point is used anywhere.
"""

from fractions import Fraction
from itertools import combinations

from .errors import (
    NotPointedError,
    RayOutsideSupportError,
    SupportMismatchError,
    UnsupportedSupportError,
)
from .linalg import (
    det,
    dot,
    in_cone_combination,
    is_zero,
    lex_positive,
    primitive,
    rank,
    smith_invariant_factors,
    vneg,
    vscale,
    vsub,
)


def _dedupe(vectors):
    seen = []
    for v in vectors:
        if v not in seen:
            seen.append(v)
    return seen


def _minimal_generators(rays, lineality=()):
    """Drop generators that are conic combinations of the remaining ones."""
    rays = _dedupe([primitive(r) for r in rays if not is_zero(r)])
    changed = True
    while changed:
        changed = False
        for i, r in enumerate(rays):
            others = rays[:i] + rays[i + 1:]
            if in_cone_combination(r, others, lineality):
                rays.pop(i)
                changed = True
                break
    return rays


def double_description(ambient_dim, normals):
    """Generators of the cone {x : <a, x> >= 0 for a in normals}.

    Returns (lineality_basis, extreme_rays), both tuples of primitive
    integer vectors. The extreme rays are minimal modulo the lineality
    space; rays are kept minimal after every constraint so the
    combinatorial adjacency filter stays sound.
    """
    lin = [tuple(1 if j == i else 0 for j in range(ambient_dim)) for i in range(ambient_dim)]
    rays = []  # list of (vector, zero-set frozenset over processed constraint indices)

    def minimize_pairs(pairs, lineality):
        seen = {}
        for r, z in pairs:
            seen[r] = seen[r] | z if r in seen else z
        minimal = _minimal_generators(list(seen), lineality)
        return [(r, seen[r]) for r in minimal]

    for idx, a in enumerate(normals):
        if is_zero(a):
            continue
        lvals = [dot(a, l) for l in lin]
        if any(v != 0 for v in lvals):
            i0 = next(i for i, v in enumerate(lvals) if v != 0)
            l0 = lin[i0]
            v0 = lvals[i0]
            if v0 < 0:
                l0, v0 = vneg(l0), -v0
            new_lin = []
            for i, l in enumerate(lin):
                if i == i0:
                    continue
                new_lin.append(primitive(vsub(vscale(v0, l), vscale(dot(a, l), l0))))
            new_rays = []
            for r, z in rays:
                rv = dot(a, r)
                new_rays.append((primitive(vsub(vscale(v0, r), vscale(rv, l0))), z | {idx}))
            new_rays.append((primitive(l0), frozenset(range(idx))))
            lin = [l for l in new_lin if not is_zero(l)]
            rays = minimize_pairs(new_rays, lin)
        else:
            pos, zero, neg = [], [], []
            for r, z in rays:
                rv = dot(a, r)
                if rv > 0:
                    pos.append((r, z, rv))
                elif rv < 0:
                    neg.append((r, z, rv))
                else:
                    zero.append((r, z | {idx}))
            kept = [(r, z) for r, z, _ in pos] + zero
            for (rp, zp, vp) in pos:
                for (rm, zm, vm) in neg:
                    common = zp & zm
                    adjacent = True
                    for r3 in rays:
                        if r3[0] != rp and r3[0] != rm and common <= r3[1]:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    new = primitive(vsub(vscale(vp, rm), vscale(vm, rp)))
                    if is_zero(new):
                        continue
                    kept.append((new, (zp & zm) | {idx}))
            rays = minimize_pairs(kept, lin)
    lin_rows = sorted(primitive(l) for l in lin if not is_zero(l))
    out_rays = sorted(r for r, _ in rays)
    return tuple(lin_rows), tuple(out_rays)


class Cone:
    """Rational polyhedral cone spanned by finitely many primitive rays.

    Stores the canonical extreme-ray description; inequality and span data
    are derived on first use and cached. Instances are immutable.
    """

    __slots__ = ("ambient_dim", "rays", "_dual", "_faces")

    def __init__(self, ambient_dim, rays=()):
        self.ambient_dim = int(ambient_dim)
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be positive")
        cleaned = []
        for r in rays:
            r = tuple(int(x) for x in r)
            if len(r) != self.ambient_dim:
                raise ValueError("ray has wrong dimension")
            if not is_zero(r):
                cleaned.append(primitive(r))
        minimal = _minimal_generators(cleaned)
        self.rays = tuple(sorted(minimal))
        self._dual = None
        self._faces = None

    # -- derived descriptions -------------------------------------------------

    def _dual_description(self):
        if self._dual is None:
            self._dual = double_description(self.ambient_dim, self.rays)
        return self._dual

    @property
    def span_normals(self):
        """Integral equations cutting out the linear span of the cone."""
        return self._dual_description()[0]

    @property
    def facet_normals(self):
        """Facet inequalities, one representative per facet (mod span)."""
        return self._dual_description()[1]

    @property
    def dim(self):
        return self.ambient_dim - len(self.span_normals)

    def is_pointed(self):
        gens = list(self.span_normals) + list(self.facet_normals)
        if not gens:
            return self.ambient_dim == 0
        return rank(gens) == self.ambient_dim

    # -- predicates ------------------------------------------------------------

    def contains(self, x):
        x = tuple(x)
        return all(dot(s, x) == 0 for s in self.span_normals) and all(
            dot(f, x) >= 0 for f in self.facet_normals
        )

    def relint_contains(self, x):
        x = tuple(x)
        return all(dot(s, x) == 0 for s in self.span_normals) and all(
            dot(f, x) > 0 for f in self.facet_normals
        )

    def contains_cone(self, other):
        return all(self.contains(r) for r in other.rays)

    def interior_point(self):
        """A deterministic lattice point in the relative interior."""
        p = [0] * self.ambient_dim
        for r in self.rays:
            for i, x in enumerate(r):
                p[i] += x
        return tuple(p)

    def is_smooth(self):
        """Whether the rays extend to a basis of the ambient lattice."""
        if not self.is_pointed():
            raise NotPointedError("smoothness is only defined for pointed cones")
        if not self.rays:
            return True
        if len(self.rays) != self.dim:
            return False
        factors = smith_invariant_factors([list(r) for r in self.rays])
        return all(f == 1 for f in factors)

    # -- constructions ----------------------------------------------------------

    def faces(self):
        """All faces, including {0} and the cone itself, in canonical order.

        Every face of a pointed cone is the intersection of the facets
        containing it, so faces are enumerated over facet subsets.
        """
        if not self.is_pointed():
            raise NotPointedError("face enumeration requires a pointed cone")
        if self._faces is None:
            out = {}
            normals = self.facet_normals
            for size in range(len(normals) + 1):
                for subset in combinations(normals, size):
                    face_rays = [r for r in self.rays if all(dot(a, r) == 0 for a in subset)]
                    f = Cone(self.ambient_dim, face_rays)
                    out[f.rays] = f
            self._faces = tuple(out[k] for k in sorted(out))
        return self._faces

    def intersection(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        normals = list(self.facet_normals) + list(other.facet_normals)
        for s in list(self.span_normals) + list(other.span_normals):
            normals.append(s)
            normals.append(vneg(s))
        lin, rays = double_description(self.ambient_dim, normals)
        if lin:
            raise NotPointedError("intersection of pointed cones must be pointed")
        return Cone(self.ambient_dim, rays)

    # -- plumbing ----------------------------------------------------------------

    def key(self):
        return (self.ambient_dim, self.rays)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Cone(dim={self.ambient_dim}, rays={list(map(list, self.rays))})"


def orthant(n):
    """The nonnegative orthant cone in Z^n."""
    return Cone(n, [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)])


def _cross_section_volume(cone):
    """Exact volume of the slice {sum(x) = 1} of a full-dimensional cone.

    Used for coverage checks of fans/stratifications over orthant-embedded
    supports (all rays have positive coordinate sum there). Computed by
    recursive stellar triangulation into simplicial cones.
    """
    n = cone.ambient_dim
    if cone.dim < n:
        return Fraction(0)

    def simplex_volume(rays):
        pts = []
        for r in rays:
            s = sum(r)
            if s <= 0:
                raise UnsupportedSupportError("volume needs rays with positive coordinate sum")
            pts.append(tuple(Fraction(x, s) for x in r))
        m = [list(vsub(p, pts[0])) for p in pts[1:]]
        m.append([Fraction(1)] * n)  # replace the lost dimension by the slice normal
        d = det(m)
        fact = 1
        for i in range(2, n):
            fact *= i
        return abs(d) / fact

    def triangulate(c):
        if len(c.rays) == c.dim:
            return [c.rays]
        r0 = c.rays[0]
        pieces = []
        for f in c.faces():
            if f.dim == c.dim - 1 and not f.contains(r0):
                sub = Cone(c.ambient_dim, f.rays + (r0,))
                pieces.extend(triangulate(sub))
        return pieces

    total = Fraction(0)
    for rays in triangulate(cone):
        total += simplex_volume(rays)
    return total


class Fan:
    """A finite fan: cones closed under faces with pairwise face intersections."""

    __slots__ = ("ambient_dim", "support", "cones", "_max")

    def __init__(self, support, cones, _closed=False):
        self.support = support
        self.ambient_dim = support.ambient_dim
        if _closed:
            self.cones = tuple(cones)
        else:
            closed = {}
            for c in cones:
                if c.ambient_dim != self.ambient_dim:
                    raise ValueError("cone dimension mismatch")
                for f in c.faces():
                    closed[f.rays] = f
            if not closed:
                closed[()] = Cone(self.ambient_dim, [])
            self.cones = tuple(closed[k] for k in sorted(closed))
        for c in self.cones:
            if not self.support.contains_cone(c):
                raise ValueError("fan cone outside the declared support")
        self._max = None

    @property
    def max_cones(self):
        if self._max is None:
            out = []
            for c in self.cones:
                strictly_inside = False
                for o in self.cones:
                    if o.key() != c.key() and o.contains_cone(c):
                        strictly_inside = True
                        break
                if not strictly_inside:
                    out.append(c)
            self._max = tuple(out)
        return self._max

    @property
    def ray_set(self):
        out = set()
        for c in self.cones:
            out.update(c.rays)
        return out

    def key(self):
        return (self.support.key(), tuple(c.key() for c in self.cones))

    def __eq__(self, other):
        return isinstance(other, Fan) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Fan(support={self.support!r}, n_cones={len(self.cones)})"

    def is_smooth(self):
        return all(c.is_smooth() for c in self.max_cones)

    def as_stratification(self):
        """One cell per cone, tagged by the cone itself."""
        cells = [(c, c.key()) for c in self.cones]
        return PLStratification(self.support, cells, _validated=True)

    def validate(self):
        """Re-check all fan invariants exactly; raises ValueError on failure."""
        keys = {c.key() for c in self.cones}
        for c in self.cones:
            for f in c.faces():
                if f.key() not in keys:
                    raise ValueError("fan is not closed under faces")
        for a, b in combinations(self.cones, 2):
            w = a.intersection(b)
            if w.key() not in keys:
                raise ValueError("intersection of fan cones is not in the fan")
            if w.key() not in {f.key() for f in a.faces()} or w.key() not in {f.key() for f in b.faces()}:
                raise ValueError("intersection of fan cones is not a common face")
        full = [c for c in self.cones if c.dim == self.support.dim]
        if self.support.dim == self.ambient_dim:
            vol = sum((_cross_section_volume(c) for c in full), Fraction(0))
            if vol != _cross_section_volume(self.support):
                raise ValueError("fan does not cover its support")
        return True


def fan_from_max_cones(support, max_cones):
    return Fan(support, max_cones)


def star_subdivision(fan, point):
    """Star subdivision of a fan at a primitive lattice point of its support.

    If the point already spans a ray of the fan the fan is returned
    unchanged.
    """
    r = primitive(tuple(int(x) for x in point))
    if is_zero(r):
        raise ValueError("cannot subdivide at the origin")
    if not fan.support.contains(r):
        raise RayOutsideSupportError(f"{r} is outside the fan support")
    if r in fan.ray_set:
        return fan
    new_max = []
    for c in fan.max_cones:
        if not c.contains(r):
            new_max.append(c)
            continue
        for f in c.faces():
            if not f.contains(r):
                new_max.append(Cone(fan.ambient_dim, f.rays + (r,)))
    return Fan(fan.support, new_max)


def _stellar_at_ray(fan, r):
    """Internal stellar subdivision at an existing ray.

    Unlike the public star_subdivision this does subdivide non-simplicial
    cones containing r; used by the smoothing loop to triangulate.
    """
    new_max = []
    for c in fan.max_cones:
        if not c.contains(r):
            new_max.append(c)
            continue
        pieces = []
        for f in c.faces():
            if not f.contains(r):
                pieces.append(Cone(fan.ambient_dim, f.rays + (r,)))
        new_max.extend(pieces)
    return Fan(fan.support, new_max)


class PLStratification:
    """A support cone partitioned into relative interiors of tagged cones.

    cells is a tuple of (Cone, tag) pairs. The relative interiors of the
    cell cones partition the support; a stratum is the union of all cells
    sharing a tag.
    """

    __slots__ = ("ambient_dim", "support", "cells")

    def __init__(self, support, cells, _validated=False):
        self.support = support
        self.ambient_dim = support.ambient_dim
        cells = [(c, t) for c, t in cells]
        if not _validated:
            cells = self._complete_and_check(cells)
        self.cells = tuple(sorted(cells, key=lambda ct: ct[0].key()))

    def _complete_and_check(self, cells):
        for c, _ in cells:
            if c.ambient_dim != self.ambient_dim:
                raise ValueError("cell dimension mismatch")
            if not self.support.contains_cone(c):
                raise ValueError("cell outside the support")
        covered = {c.key() for c, _ in cells}
        missing = []
        for c, _ in list(cells):
            for f in c.faces():
                if f.key() in covered:
                    continue
                p = f.interior_point()
                hit = [cc for cc, _ in cells if cc.relint_contains(p)]
                if hit:
                    if not hit[0].contains_cone(f):
                        raise ValueError("cell boundaries cross; supply an explicit partition")
                    continue
                if f.key() not in {m.key() for m in missing}:
                    missing.append(f)
        if missing:
            tag_keys = {_tag_key(t) for _, t in cells}
            if len(tag_keys) == 1:
                the_tag = cells[0][1]
                cells = cells + [(f, the_tag) for f in missing]
            else:
                raise ValueError(
                    "stratification does not cover the support and tags are "
                    "not uniform; supply the missing cells explicitly"
                )
        # pairwise relint disjointness: relints meet iff the interior point
        # of the intersection lies in both relints
        for (c1, _), (c2, _) in combinations(cells, 2):
            if c1.key() == c2.key():
                raise ValueError("duplicate cell cone")
            p = c1.intersection(c2).interior_point()
            if c1.relint_contains(p) and c2.relint_contains(p):
                raise ValueError("cell interiors overlap")
        # full-dimensional coverage is exact iff slice volumes agree
        if self.support.dim == self.ambient_dim:
            full = [c for c, _ in cells if c.dim == self.ambient_dim]
            vol = sum((_cross_section_volume(c) for c in full), Fraction(0))
            if vol != _cross_section_volume(self.support):
                raise ValueError("cells do not cover the support")
        return cells

    def cell_containing(self, point):
        """The unique cell whose relative interior contains the point."""
        for c, t in self.cells:
            if c.relint_contains(point):
                return c, t
        return None

    def strata(self):
        """Cells grouped by tag, in order of first appearance."""
        out = []
        index = {}
        for c, t in self.cells:
            k = _tag_key(t)
            if k not in index:
                index[k] = len(out)
                out.append((t, [c]))
            else:
                out[index[k]][1].append(c)
        return out

    def tags(self):
        return [t for t, _ in self.strata()]

    def key(self):
        return (self.support.key(), tuple((c.key(), _tag_key(t)) for c, t in self.cells))

    def __eq__(self, other):
        return isinstance(other, PLStratification) and self.key() == other.key()

    def __repr__(self):
        return f"PLStratification(n_cells={len(self.cells)}, n_strata={len(self.strata())})"


def _tag_key(tag):
    if hasattr(tag, "key"):
        return tag.key()
    return tag


def refines(fan, stratification):
    """Whether every stratum is a union of relative interiors of fan cones.

    Equivalent test: the relative interior of each fan cone stays inside a
    single cell, witnessed by the cone's interior sample point.
    """
    if fan.ambient_dim != stratification.ambient_dim:
        raise SupportMismatchError("ambient dimension mismatch")
    if fan.support.key() != stratification.support.key():
        raise SupportMismatchError("fan and stratification have different supports")
    for c in fan.cones:
        hit = stratification.cell_containing(c.interior_point())
        if hit is None:
            return False
        cell_cone, _ = hit
        if not cell_cone.contains_cone(c):
            return False
    return True


def fan_refines(fine, coarse):
    """Fan-to-fan refinement via the one-cell-per-cone stratification."""
    return refines(fine, coarse.as_stratification())


def common_refinement(a, b):
    """The fan of pairwise intersections of two fans with equal support."""
    if a.ambient_dim != b.ambient_dim or a.support.key() != b.support.key():
        raise SupportMismatchError("fans must share ambient dimension and support")
    pieces = []
    for s in a.max_cones:
        for t in b.max_cones:
            pieces.append(s.intersection(t))
    return Fan(a.support, pieces)


def hilbert_basis(cone):
    """Hilbert basis of a pointed cone contained in the nonnegative orthant.

    Enumerates lattice points of the generator zonotope and keeps the
    irreducible ones. Orthant containment bounds candidates coordinatewise.
    """
    if not cone.is_pointed():
        raise NotPointedError("Hilbert basis requires a pointed cone")
    if any(any(x < 0 for x in r) for r in cone.rays):
        raise UnsupportedSupportError("Hilbert basis computed only inside the orthant")
    if not cone.rays:
        return ()
    n = cone.ambient_dim
    box = [sum(r[i] for r in cone.rays) for i in range(n)]

    points = []

    def walk(i, current):
        if i == n:
            p = tuple(current)
            if not is_zero(p) and cone.contains(p):
                points.append(p)
            return
        for v in range(box[i] + 1):
            current.append(v)
            walk(i + 1, current)
            current.pop()

    walk(0, [])
    point_set = set(points)
    basis = []
    for p in sorted(points, key=lambda q: (sum(q), q)):
        reducible = False
        for q in point_set:
            if q == p:
                continue
            diff = vsub(p, q)
            if all(x >= 0 for x in diff) and (is_zero(diff) or diff in point_set or cone.contains(diff)):
                if not is_zero(diff):
                    reducible = True
                    break
        if not reducible:
            basis.append(p)
    return tuple(sorted(basis))


def _arrangement_fan(support, hyperplane_normals):
    """Fan obtained by slicing the support with the given hyperplanes."""
    pieces = [support]
    for h in hyperplane_normals:
        new_pieces = []
        for c in pieces:
            vals = [dot(h, r) for r in c.rays]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                parts = [c]
            else:
                parts = []
                for sign in (1, -1):
                    normals = [vscale(sign, h)] + list(c.facet_normals)
                    for s in c.span_normals:
                        normals.append(s)
                        normals.append(vneg(s))
                    lin, rays = double_description(c.ambient_dim, normals)
                    half = Cone(c.ambient_dim, rays)
                    if half.dim == c.dim:
                        parts.append(half)
            new_pieces.extend(parts)
        pieces = new_pieces
    return Fan(support, pieces)


def stratification_to_smooth_fan(stratification):
    """A smooth fan on the support refining the stratification.

    First tries the intersection closure of the cell closures; if those do
    not already form a refining fan, falls back to the full hyperplane
    arrangement spanned by the cells' facets. Non-smooth cones are then
    resolved by star subdivisions at Hilbert basis elements of smallest
    coordinate sum (ties lexicographic); non-simplicial cones whose Hilbert
    basis adds no ray are triangulated stellarly.
    """
    support = stratification.support
    fan = None
    closures = {c.key(): c for c, _ in stratification.cells}
    frontier = list(closures.values())
    while frontier:
        nxt = []
        for a, b in combinations(list(closures.values()), 2):
            w = a.intersection(b)
            if w.key() not in closures:
                closures[w.key()] = w
                nxt.append(w)
        frontier = nxt
    try:
        candidate = Fan(support, list(closures.values()))
        candidate.validate()
        if refines(candidate, stratification):
            fan = candidate
    except (ValueError, NotPointedError):
        fan = None
    if fan is None:
        normals = set()
        for c, _ in stratification.cells:
            for h in c.facet_normals:
                normals.add(lex_positive(h))
            for h in c.span_normals:
                normals.add(lex_positive(h))
        fan = _arrangement_fan(support, sorted(normals))
        if not refines(fan, stratification):
            raise ValueError("arrangement fan fails to refine the stratification")

    while True:
        bad = None
        for c in fan.max_cones:
            if not c.is_smooth():
                bad = c
                break
        if bad is None:
            return fan
        existing = fan.ray_set
        new_points = [h for h in hilbert_basis(bad) if h not in existing]
        if new_points:
            pick = min(new_points, key=lambda p: (sum(p), p))
            fan = star_subdivision(fan, pick)
            continue
        # non-simplicial cone generated by its own Hilbert basis: triangulate
        done = False
        for r in bad.rays:
            candidate = _stellar_at_ray(fan, r)
            if candidate.key() != fan.key():
                fan = candidate
                done = True
                break
        if not done:
            raise ValueError("unable to subdivide non-smooth cone")
