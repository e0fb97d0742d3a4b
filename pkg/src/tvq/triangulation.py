"""Closed generalized triangulations: face-gluing specifications, quotient
cell structure, 3-manifold validation, integer homology, and the builtin
manifold catalog.

A triangulation is a set of abstract tetrahedra with faces glued in pairs.
Face f of a tetrahedron is the face opposite vertex f; a gluing carries a
permutation of {0,1,2,3} mapping source vertex labels to target labels.
Self-identifications of cells are allowed (generalized triangulations), so
one- and two-tetrahedron lens spaces are first-class citizens.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class TriangulationError(Exception):
    pass


class ParseError(TriangulationError):
    pass


class InvolutionError(TriangulationError):
    pass


class NotClosed(TriangulationError):
    pass


class BadEdge(TriangulationError):
    pass


class NotManifold(TriangulationError):
    pass


class NotInCatalog(TriangulationError):
    pass


# Per-tetrahedron edge slots in state-sum order (i, j, k, l, m, n):
# (i, j, k) spans the face opposite vertex 3 and slots 0..2 are opposite
# slots 3..5, i.e. (i,l), (j,m), (k,n) are the pairs of opposite edges.
EDGE_SLOTS = ((0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3))

# Edge slots lying on face f (the face opposite vertex f).
FACE_SLOTS = {
    0: (2, 3, 4),   # vertices {1,2,3}
    1: (1, 3, 5),   # vertices {0,2,3}
    2: (0, 4, 5),   # vertices {0,1,3}
    3: (0, 1, 2),   # vertices {0,1,2}
}


def _face_vertices(f):
    return tuple(v for v in range(4) if v != f)


class GluingSpec:
    """A face-pairing description: tetrahedron count plus gluing records.

    gluings maps (tet, face) -> (other tet, perm) where perm is a 4-tuple
    sending source vertex labels to target labels.  Records come in
    involutive pairs; ``validate`` enforces that and rejects a face glued to
    itself by the identity.
    """

    def __init__(self, n_tets: int, gluings: dict | None = None):
        if n_tets < 1:
            raise ValueError("need at least one tetrahedron")
        self.n_tets = n_tets
        self.gluings = dict(gluings or {})

    def add_gluing(self, t, f, t2, perm):
        """Record a gluing together with its inverse partner record."""
        perm = tuple(perm)
        f2 = perm[f]
        inv = tuple(perm.index(v) for v in range(4))
        for key, val in (((t, f), (t2, perm)), ((t2, f2), (t, inv))):
            old = self.gluings.get(key)
            if old is not None and old != val:
                raise InvolutionError(f"conflicting gluings for face {key}")
            self.gluings[key] = val

    def validate(self):
        for (t, f), (t2, perm) in sorted(self.gluings.items()):
            if not (0 <= t < self.n_tets and 0 <= f < 4):
                raise ParseError(f"face ({t},{f}) out of range")
            if not (0 <= t2 < self.n_tets):
                raise ParseError(f"target tetrahedron {t2} out of range")
            if sorted(perm) != [0, 1, 2, 3]:
                raise ParseError(f"bad permutation {perm} on face ({t},{f})")
            if t2 == t and perm[f] == f and perm == (0, 1, 2, 3):
                raise InvolutionError(
                    f"face ({t},{f}) glued to itself by the identity")
            partner = self.gluings.get((t2, perm[f]))
            inv = tuple(perm.index(v) for v in range(4))
            if partner is None:
                raise InvolutionError(
                    f"gluing of face ({t},{f}) has no partner record")
            if partner != (t, inv):
                raise InvolutionError(
                    f"gluing of face ({t},{f}) disagrees with its partner")
        return self

    def disjoint_union(self, other: "GluingSpec") -> "GluingSpec":
        shift = self.n_tets
        glu = dict(self.gluings)
        for (t, f), (t2, perm) in other.gluings.items():
            glu[(t + shift, f)] = (t2 + shift, perm)
        return GluingSpec(self.n_tets + other.n_tets, glu)

    def relabeled(self, tet_map, vertex_perms) -> "GluingSpec":
        """Rename tetrahedra by tet_map and each tet's vertices by its
        permutation in vertex_perms; the manifold is unchanged."""
        glu = {}
        for (t, f), (t2, perm) in self.gluings.items():
            p, p2 = vertex_perms[t], vertex_perms[t2]
            # new labels: x -> p[x]; the gluing becomes p2 . perm . p^(-1)
            newperm = [0] * 4
            for v in range(4):
                newperm[p[v]] = p2[perm[v]]
            glu[(tet_map[t], p[f])] = (tet_map[t2], tuple(newperm))
        return GluingSpec(self.n_tets, glu)

    def to_text(self) -> str:
        lines = [f"tetrahedra {self.n_tets}"]
        for (t, f) in sorted(self.gluings):
            t2, perm = self.gluings[(t, f)]
            lines.append(f"glue {t} {f} {t2} {''.join(map(str, perm))}")
        return "\n".join(lines) + "\n"


def parse(text: str) -> GluingSpec:
    """Parse the line-oriented gluing format.

    ``tetrahedra N`` header, then ``glue A f B p0p1p2p3`` records; ``#``
    starts a comment, blank lines are ignored.  The partner record for every
    gluing must be present and inverse-consistent.
    """
    spec = None
    records = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if spec is None:
            if fields[0] != "tetrahedra" or len(fields) != 2:
                raise ParseError(f"line {lineno}: expected 'tetrahedra N' header")
            try:
                n = int(fields[1])
            except ValueError:
                raise ParseError(f"line {lineno}: bad tetrahedron count") from None
            if n < 1:
                raise ParseError(f"line {lineno}: tetrahedron count must be >= 1")
            spec = GluingSpec(n)
            continue
        if fields[0] != "glue" or len(fields) != 5:
            raise ParseError(f"line {lineno}: expected 'glue A f B p0p1p2p3'")
        try:
            t, f, t2 = int(fields[1]), int(fields[2]), int(fields[3])
        except ValueError:
            raise ParseError(f"line {lineno}: indices must be decimal integers") from None
        ptext = fields[4]
        if len(ptext) != 4 or not ptext.isdigit():
            raise ParseError(f"line {lineno}: permutation must be 4 digits")
        perm = tuple(int(c) for c in ptext)
        if sorted(perm) != [0, 1, 2, 3]:
            raise ParseError(f"line {lineno}: {ptext} is not a permutation of 0123")
        if not (0 <= t < spec.n_tets and 0 <= t2 < spec.n_tets):
            raise ParseError(f"line {lineno}: tetrahedron index out of range")
        if not 0 <= f < 4:
            raise ParseError(f"line {lineno}: face index out of range")
        if (t, f) in records:
            raise ParseError(f"line {lineno}: duplicate gluing for face ({t},{f})")
        records[(t, f)] = (t2, perm, lineno)
    if spec is None:
        raise ParseError("missing 'tetrahedra N' header")
    for (t, f), (t2, perm, lineno) in records.items():
        spec.gluings[(t, f)] = (t2, perm)
    try:
        spec.validate()
    except (ParseError, InvolutionError) as exc:
        raise type(exc)(str(exc)) from None
    return spec


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class Triangulation:
    """Validated quotient cell structure of a closed triangulated 3-manifold.

    Immutable after ``build``; exposes the incidence tables the state sum
    needs: per-tetrahedron quotient-edge ids in (i,j,k,l,m,n) slot order,
    per-face edge triples, and edge-to-face / edge-to-tet bitmasks.
    """

    def __init__(self, spec, n_vertices, n_edges, n_faces,
                 vertex_class, edge_lookup, edge_reps, face_class, face_reps,
                 tet_edges, face_edges, edge_face_mask, edge_tet_mask):
        self.spec = spec
        self.n_tets = spec.n_tets
        self.n_vertices = n_vertices
        self.n_edges = n_edges
        self.n_faces = n_faces
        self.vertex_class = vertex_class
        self.edge_lookup = edge_lookup
        self.edge_reps = edge_reps
        self.face_class = face_class
        self.face_reps = face_reps
        self.tet_edges = tet_edges
        self.face_edges = face_edges
        self.edge_face_mask = edge_face_mask
        self.edge_tet_mask = edge_tet_mask

    @property
    def cell_counts(self):
        return (self.n_vertices, self.n_edges, self.n_faces, self.n_tets)

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces - self.n_tets


def build(spec: GluingSpec) -> Triangulation:
    """Derive and validate the quotient cell structure of a gluing spec.

    Raises NotClosed for an unpaired face, BadEdge when an edge is identified
    to itself with reversed orientation, and NotManifold when the Euler
    characteristic is nonzero or some vertex link is not a 2-sphere.
    """
    spec.validate()
    n = spec.n_tets
    g = spec.gluings

    for t in range(n):
        for f in range(4):
            if (t, f) not in g:
                raise NotClosed(f"face {f} of tetrahedron {t} is unglued")

    # --- directed edges ----------------------------------------------------
    def enode(t, a, b):
        return (t * 4 + a) * 4 + b

    euf = _UnionFind(n * 16)
    for (t, f), (t2, perm) in g.items():
        for a in range(4):
            if a == f:
                continue
            for b in range(4):
                if b == f or b == a:
                    continue
                euf.union(enode(t, a, b), enode(t2, perm[a], perm[b]))

    for t in range(n):
        for a in range(4):
            for b in range(a + 1, 4):
                if euf.find(enode(t, a, b)) == euf.find(enode(t, b, a)):
                    raise BadEdge(
                        f"edge {a}{b} of tetrahedron {t} is glued to itself reversed")

    edge_lookup = {}   # (t, a, b) -> (edge id, +-1 relative to the class rep)
    edge_reps = []     # directed representative (t, a, b) per edge id
    root_to_id = {}
    for t in range(n):
        for a in range(4):
            for b in range(a + 1, 4):
                rf = euf.find(enode(t, a, b))
                rr = euf.find(enode(t, b, a))
                key = (rf, rr) if rf < rr else (rr, rf)
                eid = root_to_id.get(key)
                if eid is None:
                    eid = len(edge_reps)
                    root_to_id[key] = (eid, rf)
                    edge_reps.append((t, a, b))
                    edge_lookup[(t, a, b)] = (eid, 1)
                    edge_lookup[(t, b, a)] = (eid, -1)
                else:
                    eid, pos_root = eid
                    s = 1 if rf == pos_root else -1
                    edge_lookup[(t, a, b)] = (eid, s)
                    edge_lookup[(t, b, a)] = (eid, -s)
    n_edges = len(edge_reps)

    # --- vertices ------------------------------------------------------------
    vuf = _UnionFind(n * 4)
    for (t, f), (t2, perm) in g.items():
        for v in range(4):
            if v != f:
                vuf.union(t * 4 + v, t2 * 4 + perm[v])
    vroots = sorted({vuf.find(i) for i in range(n * 4)})
    vindex = {root: i for i, root in enumerate(vroots)}
    vertex_class = {(t, v): vindex[vuf.find(t * 4 + v)]
                    for t in range(n) for v in range(4)}
    n_vertices = len(vroots)

    # --- faces ---------------------------------------------------------------
    face_class = {}
    face_reps = []
    for t in range(n):
        for f in range(4):
            if (t, f) in face_class:
                continue
            t2, perm = g[(t, f)]
            fid = len(face_reps)
            face_reps.append((t, f))
            face_class[(t, f)] = fid
            face_class[(t2, perm[f])] = fid
    n_faces = len(face_reps)

    if n_vertices - n_edges + n_faces - n != 0:
        raise NotManifold("Euler characteristic of the complex is nonzero")

    # --- vertex links ----------------------------------------------------------
    # The link of (t, v) is a triangle whose sides lie on the faces of t at v
    # and whose corners lie on the edges of t at v; face gluings assemble the
    # triangles into closed surfaces, one per quotient vertex.
    def snode(t, v, f):
        return (t * 4 + v) * 4 + f

    suf = _UnionFind(n * 16)   # sides (t, v, f), v != f
    cuf = _UnionFind(n * 16)   # corners (t, v, w), w != v
    for (t, f), (t2, perm) in g.items():
        for v in range(4):
            if v == f:
                continue
            suf.union(snode(t, v, f), snode(t2, perm[v], perm[f]))
            for w in range(4):
                if w != f and w != v:
                    cuf.union(snode(t, v, w), snode(t2, perm[v], perm[w]))

    link_faces = {}
    link_sides = {}
    link_corners = {}
    for t in range(n):
        for v in range(4):
            c = vertex_class[(t, v)]
            link_faces[c] = link_faces.get(c, 0) + 1
            for f in range(4):
                if f != v:
                    link_sides.setdefault(c, set()).add(suf.find(snode(t, v, f)))
                    link_corners.setdefault(c, set()).add(cuf.find(snode(t, v, f)))
    for c in range(n_vertices):
        chi = (len(link_corners[c]) - len(link_sides[c]) + link_faces[c])
        if chi != 2:
            raise NotManifold(
                f"link of vertex class {c} has Euler characteristic {chi}, not 2")

    # --- incidence tables -------------------------------------------------------
    tet_edges = tuple(
        tuple(edge_lookup[(t, a, b)][0] for (a, b) in EDGE_SLOTS)
        for t in range(n))
    face_edges = []
    for (t, f) in face_reps:
        vs = _face_vertices(f)
        pairs = ((vs[0], vs[1]), (vs[0], vs[2]), (vs[1], vs[2]))
        face_edges.append(tuple(edge_lookup[(t, a, b)][0] for (a, b) in pairs))
    face_edges = tuple(face_edges)

    edge_face_mask = [0] * n_edges
    for fid, triple in enumerate(face_edges):
        for e in set(triple):
            edge_face_mask[e] |= 1 << fid
    edge_tet_mask = [0] * n_edges
    for t in range(n):
        for e in set(tet_edges[t]):
            edge_tet_mask[e] |= 1 << t

    return Triangulation(spec, n_vertices, n_edges, n_faces,
                         vertex_class, edge_lookup, tuple(edge_reps),
                         face_class, tuple(face_reps),
                         tet_edges, face_edges,
                         tuple(edge_face_mask), tuple(edge_tet_mask))


def counts_for_coloring(tri: Triangulation, coloring) -> tuple[int, int, int]:
    """(v, t, f): tetrahedra containing an odd edge, faces containing an odd
    edge, and odd edges, all counted over quotient cells."""
    fmask = 0
    tmask = 0
    f_count = 0
    for e, c in enumerate(coloring):
        if c % 2:
            f_count += 1
            fmask |= tri.edge_face_mask[e]
            tmask |= tri.edge_tet_mask[e]
    return (bin(tmask).count("1"), bin(fmask).count("1"), f_count)


# --------------------------------------------------------------------------
# Integer homology of the quotient complex
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class H1Group:
    """H_1 as rank plus torsion coefficients (invariant factors > 1)."""
    rank: int
    torsion: tuple[int, ...]

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion


def smith_invariant_factors(mat) -> list[int]:
    """Nonzero invariant factors of an integer matrix (d1 | d2 | ...)."""
    mat = [row[:] for row in mat]
    m = len(mat)
    n = len(mat[0]) if m else 0
    diag = []
    top = 0
    while True:
        best = None
        for i in range(top, m):
            for j in range(top, n):
                v = mat[i][j]
                if v and (best is None or abs(v) < abs(best[2])):
                    best = (i, j, v)
        if best is None:
            break
        bi, bj, _ = best
        mat[top], mat[bi] = mat[bi], mat[top]
        for row in mat:
            row[top], row[bj] = row[bj], row[top]
        while True:
            pivot = mat[top][top]
            dirty = False
            for i in range(top + 1, m):
                q = mat[i][top] // pivot
                if q:
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[top])]
                if mat[i][top]:
                    mat[top], mat[i] = mat[i], mat[top]
                    dirty = True
                    break
            if dirty:
                continue
            for j in range(top + 1, n):
                q = mat[top][j] // pivot
                if q:
                    for row in mat:
                        row[j] -= q * row[top]
                if mat[top][j]:
                    for row in mat:
                        row[top], row[j] = row[j], row[top]
                    dirty = True
                    break
            if not dirty:
                break
        # entries below/right of the pivot row and column are now clear;
        # fold in any submatrix entry not divisible by the pivot
        pivot = mat[top][top]
        offender = None
        for i in range(top + 1, m):
            for j in range(top + 1, n):
                if mat[i][j] % pivot:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            mat[top] = [a + b for a, b in zip(mat[top], mat[offender])]
            continue
        diag.append(abs(pivot))
        top += 1
        if top >= m or top >= n:
            break
    return diag


def homology_h1(tri: Triangulation) -> H1Group:
    """First integer homology of the quotient complex via Smith normal form."""
    b1 = [[0] * tri.n_edges for _ in range(tri.n_vertices)]
    for eid, (t, a, b) in enumerate(tri.edge_reps):
        b1[tri.vertex_class[(t, b)]][eid] += 1
        b1[tri.vertex_class[(t, a)]][eid] -= 1
    b2 = [[0] * tri.n_faces for _ in range(tri.n_edges)]
    for fid, (t, f) in enumerate(tri.face_reps):
        v0, v1, v2 = _face_vertices(f)
        for (x, y, s) in ((v1, v2, 1), (v0, v2, -1), (v0, v1, 1)):
            eid, sign = tri.edge_lookup[(t, x, y)]
            b2[eid][fid] += s * sign
    rank1 = len(smith_invariant_factors(b1)) if tri.n_vertices else 0
    factors2 = smith_invariant_factors(b2) if tri.n_edges else []
    rank = tri.n_edges - rank1 - len(factors2)
    torsion = tuple(sorted(f for f in factors2 if f > 1))
    return H1Group(rank, torsion)


# --------------------------------------------------------------------------
# Builtin manifolds
# --------------------------------------------------------------------------

def doubled_tetrahedron_sphere_spec() -> GluingSpec:
    """S^3 as two tetrahedra glued face-to-face by the identity everywhere."""
    spec = GluingSpec(2)
    for f in range(4):
        spec.add_gluing(0, f, 1, (0, 1, 2, 3))
    return spec


def pentachoron_sphere_spec() -> GluingSpec:
    """S^3 as the boundary of the 4-simplex: five tetrahedra, pairwise glued.

    Facet T_a omits global vertex a; local labels are positions in the sorted
    global vertex list.  Facets T_a and T_u share the triangle omitting both.
    """
    verts = [tuple(v for v in range(5) if v != a) for a in range(5)]
    spec = GluingSpec(5)
    for a in range(5):
        for u in verts[a]:
            if (a, verts[a].index(u)) in spec.gluings:
                continue
            f = verts[a].index(u)           # face of T_a opposite global u
            f2 = verts[u].index(a)          # face of T_u opposite global a
            perm = [0] * 4
            for loc, gv in enumerate(verts[a]):
                perm[loc] = f2 if gv == u else verts[u].index(gv)
            spec.add_gluing(a, f, u, tuple(perm))
    return spec


def lens_space_spec(p: int, q: int) -> GluingSpec:
    """L(p, q) as the quotient of a solid bipyramid over a p-gon.

    Tetrahedron i has local vertices 0 = north pole, 1 = south pole,
    2 = equator vertex i, 3 = equator vertex i+1.  Internal faces run around
    the polar axis; the upper boundary face of sector i is glued to the lower
    boundary face of sector i+q, which twists the hemispheres by 2*pi*q/p.
    Every fixture produced here is validated downstream (Euler characteristic,
    vertex links, H_1 = Z/p), never trusted as constructed.
    """
    if p < 1 or not 0 < q or gcd(p, q) != 1:
        raise ValueError(f"need p >= 1 and q coprime to p, got ({p},{q})")
    spec = GluingSpec(p)
    for i in range(p):
        spec.add_gluing(i, 2, (i + 1) % p, (0, 1, 3, 2))
    for i in range(p):
        spec.add_gluing(i, 1, (i + q) % p, (1, 0, 2, 3))
    return spec


# Builtin fixtures in the external text format, found by exhaustive search
# over small face pairings.  Every entry is machine-validated (closedness,
# Euler characteristic, spherical links, first homology) and cross-checked
# by the test suite against the independent quotient models from
# lens_space_spec over the full working range of r; none is trusted as
# typed.  Names identify the manifold up to homeomorphism (the invariants
# computed here do not see orientation).

_L31_TEXT = """\
tetrahedra 2
glue 0 0 0 1023
glue 0 1 0 1023
glue 0 2 1 2301
glue 0 3 1 2301
glue 1 0 0 2301
glue 1 1 0 2301
glue 1 2 1 1230
glue 1 3 1 3012
"""

_L41_TEXT = """\
tetrahedra 1
glue 0 0 0 1230
glue 0 1 0 3012
glue 0 2 0 1230
glue 0 3 0 3012
"""

_L51_TEXT = """\
tetrahedra 2
glue 0 0 0 1230
glue 0 1 0 3012
glue 0 2 1 1203
glue 0 3 1 3021
glue 1 0 0 2013
glue 1 1 0 1320
glue 1 2 1 2031
glue 1 3 1 1302
"""

_L52_TEXT = """\
tetrahedra 1
glue 0 0 0 1230
glue 0 1 0 3012
glue 0 2 0 2031
glue 0 3 0 1302
"""

_L61_TEXT = """\
tetrahedra 3
glue 0 0 0 1230
glue 0 1 0 3012
glue 0 2 1 1203
glue 0 3 1 3021
glue 1 0 0 2013
glue 1 1 0 1320
glue 1 2 2 1203
glue 1 3 2 0312
glue 2 0 1 2013
glue 2 1 2 1302
glue 2 2 1 0231
glue 2 3 2 2031
"""

_L72_TEXT = """\
tetrahedra 2
glue 0 0 0 1230
glue 0 1 0 3012
glue 0 2 1 1203
glue 0 3 1 3021
glue 1 0 0 2013
glue 1 1 0 1320
glue 1 2 1 1230
glue 1 3 1 3012
"""

_L83_TEXT = """\
tetrahedra 2
glue 0 0 0 1230
glue 0 1 0 3012
glue 0 2 1 2103
glue 0 3 1 0321
glue 1 0 0 2103
glue 1 1 0 0321
glue 1 2 1 1230
glue 1 3 1 3012
"""

_CATALOG = {
    "S3": (doubled_tetrahedron_sphere_spec, H1Group(0, ())),
    "RP3": (lambda: lens_space_spec(2, 1), H1Group(0, (2,))),
    "L(3,1)": (lambda: parse(_L31_TEXT), H1Group(0, (3,))),
    "L(4,1)": (lambda: parse(_L41_TEXT), H1Group(0, (4,))),
    "L(5,1)": (lambda: parse(_L51_TEXT), H1Group(0, (5,))),
    "L(5,2)": (lambda: parse(_L52_TEXT), H1Group(0, (5,))),
    "L(6,1)": (lambda: parse(_L61_TEXT), H1Group(0, (6,))),
    "L(7,2)": (lambda: parse(_L72_TEXT), H1Group(0, (7,))),
    "L(8,3)": (lambda: parse(_L83_TEXT), H1Group(0, (8,))),
}


def catalog() -> list[str]:
    """Names of the builtin manifolds, alphabetically."""
    return sorted(_CATALOG)


def _normalize_name(name: str) -> str:
    key = "".join(c for c in name.upper() if c.isalnum())
    for canonical in _CATALOG:
        if "".join(c for c in canonical.upper() if c.isalnum()) == key:
            return canonical
    raise NotInCatalog(f"no builtin manifold named {name!r}")


def catalog_spec(name: str) -> GluingSpec:
    """Look up a builtin gluing spec by name (aliases like 'L31' accepted)."""
    return _CATALOG[_normalize_name(name)][0]()


def catalog_homology(name: str) -> H1Group:
    """The documented first homology of a builtin manifold."""
    return _CATALOG[_normalize_name(name)][1]
