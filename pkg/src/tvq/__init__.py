"""Exact Turaev-Viro invariants and their summands for closed 3-manifolds.

The invariant of a triangulated closed 3-manifold is computed as an exact
state sum over admissible edge colorings, with all arithmetic in a cyclotomic
field; results are reported as canonical polynomials in q with rational
coefficients plus numeric evaluations at q = exp(i*pi/r).
"""

from .cyclotomic import (CycloField, FieldElement, NotInSubfield, QPolynomial,
                         ZeroInversionError, conj_auto, cyclotomic_polynomial,
                         eval_numeric, field_new, totient)
from .quantum import (DenominatorVanished, QAlgebra, admissible,
                      admissible_triples, ball_removal_identities,
                      tet_sign_exponent)
from .triangulation import (BadEdge, GluingSpec, H1Group, InvolutionError,
                            NotClosed, NotInCatalog, NotManifold, ParseError,
                            Triangulation, TriangulationError, build, catalog,
                            catalog_homology, catalog_spec, counts_for_coloring,
                            doubled_tetrahedron_sphere_spec, homology_h1,
                            lens_space_spec, parse, pentachoron_sphere_spec)
from .statesum import (ClassSums, IdentityReport, InvariantReport, QSpec,
                       Quantity, class_sums, class_sums_multi, classify,
                       compute_report, compute_report_pair, enumerate_colorings,
                       normalize, verify_identities, weight)

__version__ = "0.1.0"
