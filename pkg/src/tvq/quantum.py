"""Quantum algebra at a root of unity: admissible triples, quantum integers
and factorials, squared theta and edge weights, 6j brackets, and the loop
normalization constants.

Square roots are never materialized.  The state-sum engine only ever needs
the squares delta_sq and weight_sq (every face of a closed triangulation is
shared by exactly two tetrahedron sides, pairing the theta factors), so all
arithmetic stays inside the cyclotomic field.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import CycloField, FieldElement


class DenominatorVanished(ArithmeticError):
    """A denominator quantum factorial vanished; unreachable from admissible input."""


def admissible(r: int, i: int, j: int, k: int) -> bool:
    """True iff (i, j, k) is an admissible triple of colors at level r."""
    s = i + j + k
    return s % 2 == 0 and s <= 2 * r - 4 and abs(i - j) <= k <= i + j


def admissible_triples(r: int):
    """All admissible ordered triples at level r."""
    n = r - 1
    return [(i, j, k)
            for i in range(n) for j in range(n) for k in range(n)
            if admissible(r, i, j, k)]


def tet_sign_exponent(colors) -> int:
    """Sum of the six tetrahedron edge colors mod 4 (the sqrt(-1) prefactor
    exponent; the engine multiplies by i_unit**(-S))."""
    return sum(colors) % 4


class QAlgebra:
    """Memoized quantum-weight calculator for one field and evaluation point u.

    u is the element playing the role of q (the standard choice is zeta^2,
    the mirror evaluation uses -zeta^2); u**2 must have multiplicative order
    exactly r.  All methods are pure and cached, so instances are safe to
    share across concurrent workers: cache entries are idempotent exact
    values and insertion order cannot affect results.
    """

    def __init__(self, field: CycloField, u: FieldElement):
        self.field = field
        self.r = field.r
        self.u = u
        self.u_inv = u.inverse()
        self._u_pows = {0: field.one, 1: u, -1: self.u_inv}
        self._q_int = {}
        self._q_fact = [field.one, field.one]  # [0]! = [1]! = 1
        self._q_fact_inv = {}
        self._delta_sq = {}
        self._bracket = {}
        self._weight_sq = {}
        self._i_pows = (field.one, field.i_unit,
                        field.i_unit * field.i_unit,
                        field.i_unit ** 3)
        m = -((u - self.u_inv) ** 2)  # = |q - q^(-1)|^2 for unit-modulus q
        self.norm_sq = m
        self.omega_sq = m.inverse() * (2 * self.r)
        self.omega0_sq = m.inverse() * self.r
        self.inv_omega_sq = m * Fraction(1, 2 * self.r)
        self.inv_omega0_sq = m * Fraction(1, self.r)

    def u_pow(self, k: int) -> FieldElement:
        p = self._u_pows.get(k)
        if p is None:
            base = self.u if k > 0 else self.u_inv
            p = self.u_pow(k - 1 if k > 0 else k + 1) * base
            self._u_pows[k] = p
        return p

    def i_pow(self, e: int) -> FieldElement:
        return self._i_pows[e % 4]

    def q_int(self, n: int) -> FieldElement:
        """[n] = (u^n - u^-n)/(u - u^-1), division-free via the telescoped sum."""
        if n == 0:
            return self.field.zero
        v = self._q_int.get(n)
        if v is None:
            v = self.u_pow(n - 1)
            for t in range(1, n):
                v = v + self.u_pow(n - 1 - 2 * t)
            self._q_int[n] = v
        return v

    def q_fact(self, n: int) -> FieldElement:
        """[n]! = [n][n-1]...[1], with [0]! = 1."""
        fact = self._q_fact
        while len(fact) <= n:
            fact.append(fact[-1] * self.q_int(len(fact)))
        return fact[n]

    def _fact_inv(self, n: int) -> FieldElement:
        v = self._q_fact_inv.get(n)
        if v is None:
            f = self.q_fact(n)
            if f.is_zero():
                raise DenominatorVanished(f"[{n}]! = 0 at level {self.r}")
            v = f.inverse()
            self._q_fact_inv[n] = v
        return v

    def weight_sq(self, i: int) -> FieldElement:
        """Squared edge weight (-1)^i [i+1]."""
        v = self._weight_sq.get(i)
        if v is None:
            v = self.q_int(i + 1)
            if i % 2:
                v = -v
            self._weight_sq[i] = v
        return v

    def delta_sq(self, i: int, j: int, k: int) -> FieldElement:
        """Squared theta weight of an admissible triple:

            [(i+j-k)/2]! [(i+k-j)/2]! [(j+k-i)/2]! / [(i+j+k)/2 + 1]!

        Symmetric in its arguments, so cached by sorted triple.
        """
        key = (i, j, k) if i <= j <= k else tuple(sorted((i, j, k)))
        v = self._delta_sq.get(key)
        if v is None:
            a, b, c = key
            num = (self.q_fact((a + b - c) // 2)
                   * self.q_fact((a + c - b) // 2)
                   * self.q_fact((b + c - a) // 2))
            v = num * self._fact_inv((a + b + c) // 2 + 1)
            self._delta_sq[key] = v
        return v

    def bracket6j(self, colors) -> FieldElement:
        """The alternating bracket sum of a colored tetrahedron.

        colors = (i, j, k, l, m, n) where (i, j, k) colors one face and
        (i, l), (j, m), (k, n) are opposite-edge pairs.  z runs from the
        largest face half-sum to the smallest quadrilateral half-sum; terms
        whose numerator factorial [z+1]! vanishes at the root of unity are
        skipped before any division.
        """
        colors = tuple(colors)
        v = self._bracket.get(colors)
        if v is not None:
            return v
        i, j, k, l, m, n = colors
        halves = (i + j + k, i + m + n, j + l + n, k + l + m)
        quads = (i + j + l + m, i + k + l + n, j + k + m + n)
        z_lo = max(halves) // 2
        z_hi = min(quads) // 2
        total = self.field.zero
        for z in range(z_lo, z_hi + 1):
            numer = self.q_fact(z + 1)
            if numer.is_zero():
                continue
            term = numer
            for h in halves:
                term = term * self._fact_inv(z - h // 2)
            for qd in quads:
                term = term * self._fact_inv(qd // 2 - z)
            total = total - term if z % 2 else total + term
        self._bracket[colors] = total
        return total


def ball_removal_identities(alg: QAlgebra) -> dict:
    """Exact checks of the loop identities behind the omega normalizations.

    Returns booleans for:
      * closing:   sum_t w_{2t}^4 == r / |q - q^(-1)|^2  (= omega0^2)
      * even_loop: for every even j, the even-colored loop sum over k, l with
                   {j,k,l} admissible equals w_j^2 times the j = 0 value
      * full_loop: for every j, the full loop sum equals w_j^2 * omega^2
    """
    r = alg.r
    colors = range(r - 1)
    closing_sum = alg.field.zero
    for t in range(r // 2):
        w = alg.weight_sq(2 * t)
        closing_sum = closing_sum + w * w
    closing = closing_sum == alg.omega0_sq

    def loop_sum(j, even_only):
        s = alg.field.zero
        for k in colors:
            if even_only and k % 2:
                continue
            for l in colors:
                if even_only and l % 2:
                    continue
                if admissible(r, j, k, l):
                    s = s + alg.weight_sq(k) * alg.weight_sq(l)
        return s

    base = loop_sum(0, True)  # w_0 = 1
    even_loop = all(loop_sum(j, True) == alg.weight_sq(j) * base
                    for j in range(0, r - 1, 2))
    full_loop = all(loop_sum(j, False) == alg.weight_sq(j) * alg.omega_sq
                    for j in colors)
    return {"closing": closing, "even_loop": even_loop, "full_loop": full_loop}
