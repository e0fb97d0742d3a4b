"""State-sum engine: admissible-coloring enumeration, coloring classes,
exact weights, class sums, normalized invariants, and identity checks.

A coloring assigns a color in {0..r-2} to every quotient edge.  Its weight is

    prod_edges w^2(color) * prod_faces delta^2(face triple)
      * prod_tets i^(-S) * bracket6j(tet colors)

which equals the product of squared edge weights and tetrahedron symbols:
closedness pairs the two theta factors each face receives from its two
tetrahedron sides into one delta_sq, so no square roots are ever taken.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycloField, FieldElement, NotInSubfield, QPolynomial, field_new
from .quantum import QAlgebra, admissible, tet_sign_exponent
from .triangulation import Triangulation, counts_for_coloring


class QSpec:
    """An evaluation point for the state sum: the pair (r, u).

    u plays the role of q; the standard evaluation takes u = zeta^2 and the
    mirror evaluation u = -zeta^2.  u^2 must have multiplicative order
    exactly r.  primitive is True when u itself has order 2r (only then is
    every class sum guaranteed to lie in Q(q))."""

    def __init__(self, field: CycloField, u: FieldElement, label: str):
        self.field = field
        self.r = field.r
        self.u = u
        self.label = label
        order = _mult_order(u, 4 * field.r)
        if _mult_order(u * u, 4 * field.r) != field.r:
            raise ValueError("u^2 must have multiplicative order exactly r")
        self.primitive = order == 2 * field.r
        self.algebra = QAlgebra(field, u)

    @classmethod
    def standard(cls, field: CycloField) -> "QSpec":
        return cls(field, field.q_std, "q")

    @classmethod
    def mirror(cls, field: CycloField) -> "QSpec":
        return cls(field, -field.q_std, "-q")

    def __repr__(self):
        return f"QSpec(r={self.r}, u={self.label})"


def _mult_order(x: FieldElement, bound: int) -> int:
    p = x
    for k in range(1, bound + 1):
        if p == 1:
            return k
        p = p * x
    raise ValueError("element is not a root of unity of the expected order")


@dataclass
class ClassSums:
    """Exact sums of coloring weights over the three admissibility classes.

    sumE ranges over all colorings with even v-t+f, which includes every
    all-even coloring, so sum0's colorings are a subset of sumE's; the counts
    follow the same convention (n_even is included in n_e)."""
    r: int
    label: str
    sum0: FieldElement
    sum1: FieldElement
    sumE: FieldElement
    n0: int
    n1: int
    nE: int

    @property
    def total_count(self):
        return self.n1 + self.nE


class _Plan:
    """Precomputed enumeration order and completion schedule for one
    triangulation: edges sorted by descending face-incidence (tie-break by
    index), and for each depth the faces and tetrahedra whose last edge is
    colored there."""

    def __init__(self, tri: Triangulation):
        b = tri.n_edges
        incidence = [0] * b
        for triple in tri.face_edges:
            for e in triple:
                incidence[e] += 1
        self.order = sorted(range(b), key=lambda e: (-incidence[e], e))
        pos = [0] * b
        for depth, e in enumerate(self.order):
            pos[e] = depth
        self.faces_at = [[] for _ in range(b)]
        for fid, triple in enumerate(tri.face_edges):
            self.faces_at[max(pos[e] for e in triple)].append(fid)
        self.tets_at = [[] for _ in range(b)]
        for t in range(tri.n_tets):
            self.tets_at[max(pos[e] for e in tri.tet_edges[t])].append(t)


def enumerate_colorings(tri: Triangulation, r: int, visitor) -> None:
    """Visit every admissible coloring exactly once, in a deterministic order.

    Backtracks over edges in the plan order; after each tentative assignment
    every fully colored face is checked for admissibility and the branch is
    pruned on failure.  visitor receives the coloring as a tuple indexed by
    quotient-edge id."""
    plan = _Plan(tri)
    b = tri.n_edges
    colors = [0] * b
    face_edges = tri.face_edges

    def rec(depth):
        if depth == b:
            visitor(tuple(colors))
            return
        e = plan.order[depth]
        checks = plan.faces_at[depth]
        for c in range(r - 1):
            colors[e] = c
            ok = True
            for fid in checks:
                e1, e2, e3 = face_edges[fid]
                if not admissible(r, colors[e1], colors[e2], colors[e3]):
                    ok = False
                    break
            if ok:
                rec(depth + 1)

    rec(0)


def classify(tri: Triangulation, coloring) -> str:
    """Class of an admissible coloring: 'adm0' when all colors are even,
    else 'admE' when v - t + f is even, else 'adm1'."""
    if all(c % 2 == 0 for c in coloring):
        return "adm0"
    v, t, f = counts_for_coloring(tri, coloring)
    return "admE" if (v - t + f) % 2 == 0 else "adm1"


def weight(tri: Triangulation, coloring, qspec: QSpec) -> FieldElement:
    """Exact weight of one admissible coloring."""
    alg = qspec.algebra
    w = alg.field.one
    for e in range(tri.n_edges):
        w = w * alg.weight_sq(coloring[e])
    for triple in tri.face_edges:
        w = w * alg.delta_sq(*(coloring[e] for e in triple))
    for t in range(tri.n_tets):
        cs = tuple(coloring[e] for e in tri.tet_edges[t])
        w = w * alg.i_pow(-tet_sign_exponent(cs)) * alg.bracket6j(cs)
    return w


def _walk(tri, plan, r, algebras, first_colors):
    """Enumerate admissible colorings with incremental exact partial products,
    accumulating per-class sums for every algebra at once."""
    b = tri.n_edges
    face_edges = tri.face_edges
    tet_edges = tri.tet_edges
    edge_face_mask = tri.edge_face_mask
    edge_tet_mask = tri.edge_tet_mask
    n_alg = len(algebras)
    acc0 = [alg.field.zero for alg in algebras]
    acc1 = [alg.field.zero for alg in algebras]
    accE = [alg.field.zero for alg in algebras]
    counts = [0, 0, 0]
    colors = [0] * b

    def rec(depth, parts, odd_cnt, oface, otet):
        if depth == b:
            if odd_cnt == 0:
                cls = 0
            else:
                v = bin(otet).count("1")
                t = bin(oface).count("1")
                cls = 2 if (v - t + odd_cnt) % 2 == 0 else 1
            counts[cls] += 1
            if cls == 0:
                for i in range(n_alg):
                    acc0[i] = acc0[i] + parts[i]
                    accE[i] = accE[i] + parts[i]
            elif cls == 2:
                for i in range(n_alg):
                    accE[i] = accE[i] + parts[i]
            else:
                for i in range(n_alg):
                    acc1[i] = acc1[i] + parts[i]
            return
        e = plan.order[depth]
        checks = plan.faces_at[depth]
        tets = plan.tets_at[depth]
        palette = first_colors if depth == 0 else range(r - 1)
        for c in palette:
            colors[e] = c
            ok = True
            for fid in checks:
                e1, e2, e3 = face_edges[fid]
                if not admissible(r, colors[e1], colors[e2], colors[e3]):
                    ok = False
                    break
            if not ok:
                continue
            new_parts = []
            for alg, p in zip(algebras, parts):
                f = alg.weight_sq(c)
                for fid in checks:
                    e1, e2, e3 = face_edges[fid]
                    f = f * alg.delta_sq(colors[e1], colors[e2], colors[e3])
                for t in tets:
                    cs = tuple(colors[x] for x in tet_edges[t])
                    f = f * alg.i_pow(-tet_sign_exponent(cs)) * alg.bracket6j(cs)
                new_parts.append(p * f)
            if c % 2:
                rec(depth + 1, new_parts, odd_cnt + 1,
                    oface | edge_face_mask[e], otet | edge_tet_mask[e])
            else:
                rec(depth + 1, new_parts, odd_cnt, oface, otet)

    rec(0, [alg.field.one for alg in algebras], 0, 0, 0)
    return acc0, acc1, accE, counts


def class_sums_multi(tri: Triangulation, qspecs, workers: int = 1) -> list[ClassSums]:
    """Class sums at several evaluation points from a single enumeration.

    When workers > 1 the search splits on the first edge's colors; the exact
    partial sums are combined in fixed color order, so the result never
    depends on scheduling."""
    plan = _Plan(tri)
    r = qspecs[0].r
    algebras = [qs.algebra for qs in qspecs]
    palette = list(range(r - 1))
    if workers <= 1 or tri.n_edges == 0 or len(palette) == 1:
        results = [_walk(tri, plan, r, algebras, palette)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_walk, tri, plan, r, algebras, [c])
                       for c in palette]
            results = [f.result() for f in futures]
    out = []
    for i in range(len(qspecs)):
        s0 = algebras[i].field.zero
        s1 = algebras[i].field.zero
        sE = algebras[i].field.zero
        for acc0, acc1, accE, _counts in results:
            s0 = s0 + acc0[i]
            s1 = s1 + acc1[i]
            sE = sE + accE[i]
        out.append((s0, s1, sE))
    n0 = sum(res[3][0] for res in results)
    n1 = sum(res[3][1] for res in results)
    nE = sum(res[3][0] + res[3][2] for res in results)
    return [ClassSums(qs.r, qs.label, s0, s1, sE, n0, n1, nE)
            for qs, (s0, s1, sE) in zip(qspecs, out)]


def class_sums(tri: Triangulation, qspec: QSpec, workers: int = 1) -> ClassSums:
    return class_sums_multi(tri, [qspec], workers)[0]


@dataclass
class Quantity:
    """One invariant: its exact field element, its canonical q-polynomial
    (None when the value does not lie in Q(q)), and a numeric value."""
    element: FieldElement
    poly: QPolynomial | None
    value: complex

    @property
    def in_q_subfield(self):
        return self.poly is not None


@dataclass
class InvariantReport:
    """Everything computed for one (triangulation, evaluation point)."""
    manifold: str | None
    r: int
    label: str
    tvstar0: Quantity
    tvstar1: Quantity
    tvstarE: Quantity
    tvstar: Quantity
    tv0: Quantity
    tv1: Quantity
    tv2: Quantity
    tv: Quantity
    counts: dict
    cells: tuple
    elapsed: float = 0.0

    QUANTITIES = ("tv0", "tv1", "tv2", "tv", "tvstar0", "tvstar1", "tvstarE", "tvstar")

    def quantity(self, name: str) -> Quantity:
        return getattr(self, name)

    def reality_checks(self) -> dict:
        """True per quantity iff the exact value is fixed by conjugation."""
        return {name: self.quantity(name).element.conj() == self.quantity(name).element
                for name in self.QUANTITIES}


def _quantity(field: CycloField, x: FieldElement) -> Quantity:
    try:
        poly = field.to_q_polynomial(x)
        value = poly.evaluate()
    except NotInSubfield:
        poly = None
        value = x.approx()
    return Quantity(x, poly, value)


def normalize(sums: ClassSums, tri: Triangulation, qspec: QSpec,
              manifold: str | None = None, elapsed: float = 0.0) -> InvariantReport:
    """Assemble the normalized invariants from the raw class sums.

    With a = number of quotient vertices:
        tvstar0 = omega0^(-2a) * sum0       tv0 = omega0^2 * tvstar0
        tvstar1 = omega^(-2a) * sum1        tv1 = omega^2 * tvstar1
        tvstarE = omega^(-2a) * sumE        tv2 = omega^2 * tvstarE - tv0
    and tv = tv0 + tv1 + tv2, tvstar = tv / omega^2.  omega^(-2) is computed
    as |q - q^(-1)|^2 / (2r); only even powers of omega ever appear.
    """
    alg = qspec.algebra
    a = tri.n_vertices
    tvstar0 = sums.sum0 * alg.inv_omega0_sq ** a
    tvstar1 = sums.sum1 * alg.inv_omega_sq ** a
    tvstarE = sums.sumE * alg.inv_omega_sq ** a
    tv0 = tvstar0 * alg.omega0_sq
    tv1 = tvstar1 * alg.omega_sq
    tv2 = tvstarE * alg.omega_sq - tv0
    tv = tv0 + tv1 + tv2
    tvstar = tv * alg.inv_omega_sq
    field = qspec.field
    return InvariantReport(
        manifold=manifold, r=qspec.r, label=qspec.label,
        tvstar0=_quantity(field, tvstar0),
        tvstar1=_quantity(field, tvstar1),
        tvstarE=_quantity(field, tvstarE),
        tvstar=_quantity(field, tvstar),
        tv0=_quantity(field, tv0),
        tv1=_quantity(field, tv1),
        tv2=_quantity(field, tv2),
        tv=_quantity(field, tv),
        counts={"adm0": sums.n0, "adm1": sums.n1, "admE": sums.nE},
        cells=tri.cell_counts,
        elapsed=elapsed)


def compute_report(tri: Triangulation, qspec: QSpec, workers: int = 1,
                   manifold: str | None = None) -> InvariantReport:
    start = time.perf_counter()
    sums = class_sums(tri, qspec, workers)
    return normalize(sums, tri, qspec, manifold, time.perf_counter() - start)


def compute_report_pair(tri: Triangulation, r: int, workers: int = 1,
                        manifold: str | None = None):
    """Reports at u = zeta^2 and u = -zeta^2 from one shared enumeration."""
    field = field_new(r)
    specs = [QSpec.standard(field), QSpec.mirror(field)]
    start = time.perf_counter()
    sums = class_sums_multi(tri, specs, workers)
    elapsed = time.perf_counter() - start
    return tuple(normalize(s, tri, qs, manifold, elapsed)
                 for s, qs in zip(sums, specs))


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class IdentityReport:
    manifold: str | None
    r: int
    checks: list
    standard: InvariantReport
    mirror: InvariantReport

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]


def verify_identities(tri: Triangulation, r: int, workers: int = 1,
                      manifold: str | None = None) -> IdentityReport:
    """Exact identity suite relating the two evaluations.

    Checks, in the field and with zero tolerance:
      * tv == tv0 + tv1 + tv2 and tvstar == tvstarE + tvstar1
      * tv_N(q) == (-1)^N tv_N(-q) for N = 0, 1, 2
      * tv0 + tv2 == (tv(q) + tv(-q)) / 2 and tv1 == (tv(q) - tv(-q)) / 2
      * the coloring classes partition the admissible set
      * at the standard point every invariant lies in Q(q) and is fixed by
        conjugation
    """
    std, mir = compute_report_pair(tri, r, workers, manifold)
    checks = []

    def add(name, lhs, rhs):
        ok = lhs == rhs
        detail = "" if ok else f"lhs={lhs!r} rhs={rhs!r}"
        checks.append(IdentityCheck(name, ok, detail))

    e = lambda rep, name: rep.quantity(name).element
    add("sum_decomposition",
        e(std, "tv"), e(std, "tv0") + e(std, "tv1") + e(std, "tv2"))
    add("sum_decomposition_star",
        e(std, "tvstar"), e(std, "tvstarE") + e(std, "tvstar1"))
    for n, name in enumerate(("tv0", "tv1", "tv2")):
        rhs = e(mir, name)
        if n % 2:
            rhs = -rhs
        add(f"mirror_parity_{name}", e(std, name), rhs)
    half = Fraction(1, 2)
    add("even_part",
        e(std, "tv0") + e(std, "tv2"),
        (e(std, "tv") + e(mir, "tv")) * half)
    add("odd_part",
        e(std, "tv1"),
        (e(std, "tv") - e(mir, "tv")) * half)
    counts = std.counts
    checks.append(IdentityCheck(
        "class_partition",
        counts["adm0"] <= counts["admE"] and counts["adm1"] >= 0,
        str(counts)))
    rational = all(std.quantity(nm).in_q_subfield for nm in std.QUANTITIES)
    checks.append(IdentityCheck("rationality_at_q", rational))
    real = all(std.reality_checks().values())
    checks.append(IdentityCheck("reality_at_q", real))
    return IdentityReport(manifold, r, checks, std, mir)
