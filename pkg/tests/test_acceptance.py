"""Acceptance suite: every criterion runs at its stated tolerance and prints
one pass/fail line.  Run with ``pytest tests/test_acceptance.py -v -s``.

Reference data: the published tables of invariant values for the nine builtin
manifolds at r = 3..7, transcribed as exact polynomial coefficients plus the
printed 3-decimal values.  Two published entries are known to be internally
inconsistent (the printed polynomial is not a real number at the evaluation
point while the printed decimal is); those are tagged DISCREPANT and handled
by criterion 3.
"""

import cmath
import time
from itertools import product
from math import pi

import pytest

from tvq.cyclotomic import QPolynomial, field_new
from tvq.quantum import QAlgebra, admissible, ball_removal_identities
from tvq.statesum import (QSpec, class_sums, class_sums_multi, classify,
                          compute_report, weight)
from tvq.triangulation import (build, catalog, catalog_homology, catalog_spec,
                               homology_h1, pentachoron_sphere_spec)

from test_statesum import brute_force_colorings, literal_weight

DISCREPANT = "discrepant"

# Per manifold and r: (tv0 poly, tv0 value), (tv1 ...), (tv2 ...), tvstar value.
# Polynomials are {power: coefficient}; an empty dict is the zero polynomial.
ONE = {0: 1}
TABLES = {
    "S3": {
        3: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.500),
        4: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.250),
        5: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.138),
        6: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.083),
        7: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.054),
    },
    "RP3": {
        3: (({0: 1}, 1.0), ({0: -1}, -1.0), ({}, 0.0), 0.000),
        4: (({0: 2}, 2.0), ({3: 1, 1: -1}, -1.414), ({}, 0.0), 0.146),
        5: (({3: -1, 2: 1, 0: 2}, 2.618),
            ({3: 1, 2: -1, 0: -2}, -2.618), ({}, 0.0), 0.000),
        6: (({0: 4}, 4.0), ({3: 2, 1: -4}, -3.464), ({}, 0.0), 0.045),
        7: (({5: -2, 4: 1, 3: -1, 2: 2, 0: 3}, 5.049),
            ({5: 2, 4: -1, 3: 1, 2: -2, 0: -3}, -5.049), ({}, 0.0), 0.000),
    },
    "L(3,1)": {
        3: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.500),
        4: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.250),
        5: (({3: -1, 2: 1, 0: 2}, 2.618), ({}, 0.0), ({}, 0.0), 0.362),
        6: (({0: 3}, 3.0), ({}, 0.0), ({}, 0.0), 0.250),
        7: ((DISCREPANT, 3.247), ({}, 0.0), ({}, 0.0), 0.175),
    },
    "L(4,1)": {
        3: (({0: 1}, 1.0), ({}, 0.0), ({0: 1}, 1.0), 1.000),
        4: (({0: 2}, 2.0), ({}, 0.0), ({}, 0.0), 0.500),
        5: (({0: 1}, 1.0), ({}, 0.0), ({0: 1}, 1.0), 0.276),
        6: (({0: 4}, 4.0), ({}, 0.0), ({}, 0.0), 0.333),
        7: ((DISCREPANT, 3.247), ({}, 0.0), (DISCREPANT, 3.247), 0.349),
    },
    "L(5,1)": {
        3: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.500),
        4: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.250),
        5: (({3: -1, 2: 1, 0: 3}, 3.618), ({}, 0.0), ({}, 0.0), 0.500),
        6: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.083),
        7: (({5: -2, 4: 1, 3: -1, 2: 2, 0: 3}, 5.049),
            ({}, 0.0), ({}, 0.0), 0.272),
    },
    "L(5,2)": {
        3: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.500),
        4: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.250),
        5: (({}, 0.0), ({}, 0.0), ({}, 0.0), 0.000),
        6: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.083),
        7: (({5: -2, 4: 1, 3: -1, 2: 2, 0: 3}, 5.049),
            ({}, 0.0), ({}, 0.0), 0.272),
    },
    "L(6,1)": {
        3: (({0: 1}, 1.0), ({0: -1}, -1.0), ({}, 0.0), 0.000),
        4: (({0: 2}, 2.0), ({3: -1, 1: 1}, 1.414), ({}, 0.0), 0.853),
        5: (({0: 1}, 1.0), ({0: -1}, -1.0), ({}, 0.0), 0.000),
        6: (({0: 6}, 6.0), ({}, 0.0), ({}, 0.0), 0.500),
        7: (({0: 1}, 1.0), ({0: -1}, -1.0), ({}, 0.0), 0.000),
    },
    "L(7,2)": {
        3: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.500),
        4: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.250),
        5: (({3: -1, 2: 1, 0: 2}, 2.618), ({}, 0.0), ({}, 0.0), 0.362),
        6: (({0: 1}, 1.0), ({}, 0.0), ({}, 0.0), 0.083),
        7: (({}, 0.0), ({}, 0.0), ({}, 0.0), 0.000),
    },
    "L(8,3)": {
        3: (({0: 1}, 1.0), ({}, 0.0), ({0: 1}, 1.0), 1.000),
        4: (({0: 2}, 2.0), ({}, 0.0), ({0: 2}, 2.0), 1.000),
        5: (({3: -1, 2: 1, 0: 2}, 2.618), ({}, 0.0),
            ({3: -1, 2: 1, 0: 2}, 2.618), 0.724),
        6: (({0: 4}, 4.0), ({}, 0.0), ({}, 0.0), 0.333),
        7: (({0: 1}, 1.0), ({}, 0.0), ({0: 1}, 1.0), 0.108),
    },
}

# The published-but-inconsistent polynomial at the two r = 7 spots, printed
# alongside the decimal 3.247 which the computed value must match.
DISCREPANT_PRINTED_POLY = {5: -1, 2: 2, 0: 2}
DISCREPANT_PRINTED_VALUE = 3.247

R_RANGE = range(3, 8)
SMALL_FIXTURES = ["S3", "RP3", "L(3,1)", "L(4,1)", "L(5,1)", "L(5,2)",
                  "L(6,1)", "L(7,2)", "L(8,3)"]


def _criterion(num, desc, failures):
    status = "PASS" if not failures else "FAIL"
    print(f"ACCEPTANCE {num} ({desc}): {status}")
    assert not failures, f"criterion {num} ({desc}):\n" + "\n".join(failures)


def test_criterion_1_exact_table_polynomials(reports):
    failures = []
    start = time.perf_counter()
    for name in TABLES:
        for r in R_RANGE:
            rep = reports.std(name, r)
            row = TABLES[name][r]
            for qname, (poly, _val) in zip(("tv0", "tv1", "tv2"), row[:3]):
                if poly is DISCREPANT:
                    continue  # handled by criterion 3
                got = rep.quantity(qname).poly
                want = QPolynomial.from_terms(r, poly)
                if got != want:
                    failures.append(
                        f"{name} r={r} {qname}: got {got.format()}, "
                        f"expected {want.format()}")
    elapsed = time.perf_counter() - start
    print(f"[criterion 1 sweep over 9 manifolds x r=3..7: {elapsed:.1f}s]")
    if elapsed >= 60.0:
        failures.append(f"table sweep took {elapsed:.1f}s, budget is 60s")
    _criterion(1, "exact table polynomials", failures)


def test_criterion_2_table_decimals(reports):
    failures = []
    for name in TABLES:
        for r in R_RANGE:
            rep = reports.std(name, r)
            row = TABLES[name][r]
            for qname, (_poly, val) in zip(("tv0", "tv1", "tv2"), row[:3]):
                got = rep.quantity(qname).value
                if abs(got.real - val) > 1e-3 or abs(got.imag) > 1e-3:
                    failures.append(f"{name} r={r} {qname}: {got} != {val}")
            got_star = rep.tvstar.value
            if abs(got_star.real - row[3]) > 1e-3 or abs(got_star.imag) > 1e-3:
                failures.append(f"{name} r={r} tvstar: {got_star} != {row[3]}")
    _criterion(2, "table decimals within 0.001", failures)


def test_criterion_3_documented_discrepancies(reports):
    failures = []
    printed = QPolynomial.from_terms(7, DISCREPANT_PRINTED_POLY)
    printed_value = printed.evaluate()
    if abs(printed_value.imag) < 0.1:
        failures.append("published polynomial unexpectedly evaluates real; "
                        "discrepancy data needs review")
    spots = [("L(3,1)", "tv0"), ("L(4,1)", "tv0"), ("L(4,1)", "tv2")]
    for name, qname in spots:
        qty = reports.std(name, 7).quantity(qname)
        if abs(qty.value.imag) > 1e-9:
            failures.append(f"{name} r=7 {qname}: computed value is not real")
        if abs(qty.value.real - DISCREPANT_PRINTED_VALUE) > 1e-3:
            failures.append(
                f"{name} r=7 {qname}: {qty.value.real} != printed "
                f"{DISCREPANT_PRINTED_VALUE}")
        if qty.poly == printed:
            failures.append(
                f"{name} r=7 {qname}: computed polynomial equals the "
                "inconsistent published one")
        else:
            print(f"[criterion 3 flag] {name} r=7 {qname}: published "
                  f"polynomial {printed.format()} is not real at the "
                  f"evaluation point (value {printed_value:.3f}); computed "
                  f"{qty.poly.format()} = {qty.value.real:.3f} is used")
        if not qty.element.conj() == qty.element:
            failures.append(f"{name} r=7 {qname}: reality check failed")
    _criterion(3, "documented discrepancy handling", failures)


def test_criterion_4_identity_suite(reports):
    failures = []
    for name in catalog():
        for r in R_RANGE:
            std = reports.std(name, r)
            mir = reports.mirror(name, r)
            e = lambda rep, n: rep.quantity(n).element
            if e(std, "tv") != e(std, "tv0") + e(std, "tv1") + e(std, "tv2"):
                failures.append(f"{name} r={r}: tv != tv0+tv1+tv2")
            for n, qname in enumerate(("tv0", "tv1", "tv2")):
                rhs = e(mir, qname)
                if n % 2:
                    rhs = -rhs
                if e(std, qname) != rhs:
                    failures.append(f"{name} r={r}: {qname} mirror parity")
            half_sum = (e(std, "tv") + e(mir, "tv")) / 2
            half_diff = (e(std, "tv") - e(mir, "tv")) / 2
            if e(std, "tv0") + e(std, "tv2") != half_sum:
                failures.append(f"{name} r={r}: even half-sum identity")
            if e(std, "tv1") != half_diff:
                failures.append(f"{name} r={r}: odd half-difference identity")
    _criterion(4, "exact identity suite, all fixtures r=3..7", failures)


def test_criterion_5_loop_identity_suite():
    failures = []
    for r in R_RANGE:
        field = field_new(r)
        for label, u in (("q", field.q_std), ("-q", -field.q_std)):
            checks = ball_removal_identities(QAlgebra(field, u))
            for key, ok in checks.items():
                if not ok:
                    failures.append(f"r={r} at {label}: {key} identity failed")
    _criterion(5, "loop identity suite r=3..7", failures)


def test_criterion_6_oracle_equivalence(reports):
    failures = []
    for name in SMALL_FIXTURES:
        tri = reports.tri(name)
        if tri.n_edges > 7:
            failures.append(f"{name}: fixture grew beyond 7 edges")
            continue
        for r in (3, 4, 5):
            expected = brute_force_colorings(tri, r)
            qspec = QSpec.standard(field_new(r))
            sums = class_sums(tri, qspec)
            by_class = {"adm0": [], "adm1": [], "admE": []}
            for coloring in expected:
                by_class[classify(tri, coloring)].append(coloring)
            n0 = len(by_class["adm0"])
            n1 = len(by_class["adm1"])
            nE = n0 + len(by_class["admE"])
            if (sums.n0, sums.n1, sums.nE) != (n0, n1, nE):
                failures.append(f"{name} r={r}: coloring counts disagree")
            zero = qspec.field.zero
            s0 = sum((weight(tri, c, qspec) for c in by_class["adm0"]), zero)
            s1 = sum((weight(tri, c, qspec) for c in by_class["adm1"]), zero)
            sE = s0 + sum((weight(tri, c, qspec) for c in by_class["admE"]), zero)
            if (sums.sum0, sums.sum1, sums.sumE) != (s0, s1, sE):
                failures.append(f"{name} r={r}: class sums disagree")
            for coloring in expected:
                exact = weight(tri, coloring, qspec).approx()
                lit = literal_weight(tri, coloring, r)
                if abs(exact - lit) > 1e-9:
                    failures.append(
                        f"{name} r={r} {coloring}: exact {exact} vs "
                        f"literal {lit}")
                    break
    _criterion(6, "pruned/unpruned and literal-formula oracles", failures)


def test_criterion_7_triangulation_independence(reports):
    failures = []
    tri5 = build(pentachoron_sphere_spec())
    for r in R_RANGE:
        a = reports.std("S3", r)
        b = compute_report(tri5, QSpec.standard(field_new(r)))
        for qname in a.QUANTITIES:
            if a.quantity(qname).element != b.quantity(qname).element:
                failures.append(f"r={r}: {qname} differs between the "
                                "2-tetrahedron and 5-tetrahedron spheres")
    _criterion(7, "triangulation independence of S3", failures)


def test_criterion_8_fixture_validation(reports):
    failures = []
    for name in catalog():
        try:
            tri = build(catalog_spec(name))
        except Exception as exc:
            failures.append(f"{name}: build failed: {exc}")
            continue
        if tri.euler_characteristic != 0:
            failures.append(f"{name}: nonzero Euler characteristic")
        h1 = homology_h1(tri)
        if h1 != catalog_homology(name):
            failures.append(f"{name}: H1 = {h1}, expected "
                            f"{catalog_homology(name)}")
    _criterion(8, "fixture validation (closed, chi=0, links, H1)", failures)


def test_criterion_9_worker_determinism(reports):
    failures = []
    for name in catalog():
        tri = reports.tri(name)
        for r in R_RANGE:
            field = field_new(r)
            specs = [QSpec.standard(field), QSpec.mirror(field)]
            eight = class_sums_multi(tri, specs, workers=8)
            for cached, fresh in zip(reports.pair(name, r), eight):
                base = (cached.tvstar0.element, cached.tvstar1.element,
                        cached.tvstarE.element)
                alg = QAlgebra(field, field.q_std if fresh.label == "q"
                               else -field.q_std)
                a = tri.n_vertices
                redo = (fresh.sum0 * alg.inv_omega0_sq ** a,
                        fresh.sum1 * alg.inv_omega_sq ** a,
                        fresh.sumE * alg.inv_omega_sq ** a)
                if base != redo:
                    failures.append(f"{name} r={r} {fresh.label}: workers=8 "
                                    "differs from workers=1")
                if (cached.counts["adm0"], cached.counts["adm1"],
                        cached.counts["admE"]) != (fresh.n0, fresh.n1, fresh.nE):
                    failures.append(f"{name} r={r}: counts differ")
    _criterion(9, "determinism for 1 and 8 workers", failures)
