"""Exact arithmetic in the cyclotomic field Q(zeta), zeta a primitive 4r-th
root of unity.

All state-sum arithmetic downstream happens in these fields with rational
coefficients, so every intermediate value is exact.  The field is taken large
enough to contain both q = zeta^2 (a primitive 2r-th root) and sqrt(-1) =
zeta^r for every r >= 3.  Elements that happen to lie in the subfield Q(q)
get a canonical second representation: a polynomial in q reduced modulo the
2r-th cyclotomic polynomial.  Floating point enters only at the very end,
when such a polynomial is evaluated at q = exp(i*pi/r).
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, pi


class NotInSubfield(Exception):
    """The element is not expressible as a rational polynomial in q = zeta^2."""


class ZeroInversionError(ZeroDivisionError):
    """Inverse of the zero field element was requested."""


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _exact_div(num, den):
    """Divide integer polynomials exactly; den must be monic and divide num."""
    num = list(num)
    dn = len(den) - 1
    qn = len(num) - 1 - dn
    out = [0] * (qn + 1)
    for k in range(qn, -1, -1):
        c = num[k + dn]
        out[k] = c
        if c:
            for i in range(dn + 1):
                num[k + i] -= c * den[i]
    if any(num):
        raise ArithmeticError("polynomial division left a remainder")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, ascending order."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _exact_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def field_new(r: int) -> "CycloField":
    """The (cached) cyclotomic field of order 4r supporting level-r state sums."""
    return CycloField(r)


class CycloField:
    """Q(zeta) with zeta of multiplicative order 4r.

    Elements live in the power basis 1, zeta, ..., zeta^(degree-1), where
    degree = totient(4r) and the modulus is the 4r-th cyclotomic polynomial.
    Distinguished elements: ``zeta``, ``q_std = zeta^2`` and ``i_unit =
    zeta^r`` with ``i_unit**2 == -1``.
    """

    def __init__(self, r: int):
        if r < 3:
            raise ValueError(f"need r >= 3, got {r}")
        self.r = r
        self.order = 4 * r
        self.modulus = cyclotomic_polynomial(self.order)
        self.degree = len(self.modulus) - 1
        self.q_degree = totient(2 * r)
        self._zeta_pows = self._power_table()
        self.zero = FieldElement(self, (0,) * self.degree, 1)
        self.one = self.zeta_power(0)
        self.zeta = self.zeta_power(1)
        self.q_std = self.zeta_power(2)
        self.i_unit = self.zeta_power(r)
        self._zeta_numeric = cmath.exp(1j * pi / (2 * r))
        self._q_basis = [self._zeta_pows[(2 * k) % self.order]
                         for k in range(self.q_degree)]

    def __repr__(self):
        return f"CycloField(r={self.r}, order={self.order}, degree={self.degree})"

    def _power_table(self):
        """Reduced integer coefficient vectors of zeta^k for k = 0..4r-1."""
        pows = []
        vec = [0] * self.degree
        vec[0] = 1
        for _ in range(self.order):
            pows.append(tuple(vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(self.degree):
                    vec[i] -= top * self.modulus[i]
        return pows

    def _reduce_int(self, vec):
        """Reduce an integer coefficient list modulo the (monic) field modulus."""
        d = self.degree
        for k in range(len(vec) - 1, d - 1, -1):
            c = vec[k]
            if c:
                vec[k] = 0
                base = k - d
                for i in range(d):
                    m = self.modulus[i]
                    if m:
                        vec[base + i] -= c * m
        del vec[d:]
        return vec

    def zeta_power(self, k: int) -> "FieldElement":
        return FieldElement(self, self._zeta_pows[k % self.order], 1)

    def element(self, coeffs) -> "FieldElement":
        """Element from rational coefficients in the zeta power basis."""
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        vec = [int(f * den) for f in fracs]
        if len(vec) > self.degree:
            self._reduce_int(vec)
        vec.extend([0] * (self.degree - len(vec)))
        return FieldElement(self, tuple(vec), den)

    def from_rational(self, c) -> "FieldElement":
        return self.element([c])

    def to_q_polynomial(self, x: "FieldElement") -> "QPolynomial":
        """Canonical representation of x as a polynomial in q = zeta^2.

        Solves the exact linear system expressing x over the basis
        1, q, ..., q^(totient(2r)-1) inside the zeta power basis.  Raises
        NotInSubfield when the system is inconsistent.
        """
        if x.field is not self:
            raise ValueError("element from a different field")
        t = self.q_degree
        rows = [[Fraction(self._q_basis[j][i]) for j in range(t)]
                + [Fraction(x.num[i], x.den)]
                for i in range(self.degree)]
        pivot_of_col = {}
        rank = 0
        for col in range(t):
            pivot = next((i for i in range(rank, self.degree) if rows[i][col]), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            pr = rows[rank]
            inv = 1 / pr[col]
            rows[rank] = pr = [c * inv for c in pr]
            for i in range(self.degree):
                if i != rank and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
            pivot_of_col[col] = rank
            rank += 1
        for i in range(rank, self.degree):
            if rows[i][t]:
                raise NotInSubfield(
                    "element has no expression as a polynomial in q")
        # the q-powers are linearly independent, so every column has a pivot
        sol = [rows[pivot_of_col[c]][t] for c in range(t)]
        return QPolynomial(self.r, sol)


class FieldElement:
    """An exact element of a cyclotomic field.

    Stored as an integer coefficient vector over the zeta power basis plus a
    positive common denominator, normalized so the representation is unique.
    Immutable; all operations return new elements.
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = den
        for c in num:
            if c:
                g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        self.field = field
        self.num = num
        self.den = den

    # -- helpers -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        da, db = self.den, other.den
        num = tuple(a * db + b * da for a, b in zip(self.num, other.num))
        return FieldElement(self.field, num, da * db)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        da, db = self.den, other.den
        num = tuple(a * db - b * da for a, b in zip(self.num, other.num))
        return FieldElement(self.field, num, da * db)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.num), self.den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return FieldElement(self.field,
                                tuple(c * f.numerator for c in self.num),
                                self.den * f.denominator)
        if not isinstance(other, FieldElement):
            return NotImplemented
        a, b = self.num, other.num
        d = self.field.degree
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        self.field._reduce_int(conv)
        return FieldElement(self.field, tuple(conv), self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if f == 0:
                raise ZeroDivisionError("division by zero scalar")
            return self * Fraction(f.denominator, f.numerator)
        if isinstance(other, FieldElement):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroInversionError("zero field element has no inverse")
        r0 = [Fraction(c) for c in self.field.modulus]
        r1 = _trim([Fraction(c) for c in self.num])
        t0, t1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, rem = _frac_divmod(r0, r1)
            r0, r1 = r1, rem
            t0, t1 = t1, _frac_sub(t0, _frac_mul(q, t1))
        # modulus is irreducible over Q, so the gcd is a nonzero constant
        c = r1[0]
        return self.field.element([t * self.den / c for t in t1])

    def conj(self) -> "FieldElement":
        """The automorphism zeta -> zeta^(-1); realizes complex conjugation."""
        f = self.field
        acc = [0] * f.degree
        for k, c in enumerate(self.num):
            if c:
                vec = f._zeta_pows[(f.order - k) % f.order]
                for i, v in enumerate(vec):
                    if v:
                        acc[i] += c * v
        return FieldElement(f, tuple(acc), self.den)

    # -- comparisons, conversions ------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.field.order, self.num, self.den))

    def approx(self) -> complex:
        """Numeric value under the embedding zeta -> exp(i*pi/(2r))."""
        z = self.field._zeta_numeric
        total = 0j
        p = 1 + 0j
        for c in self.num:
            if c:
                total += c * p
            p *= z
        return total / self.den

    def rational_part(self):
        """The element as a Fraction if it is rational, else None."""
        if any(self.num[1:]):
            return None
        return Fraction(self.num[0], self.den)

    def __repr__(self):
        terms = [f"{Fraction(c, self.den)}*z^{k}"
                 for k, c in enumerate(self.num) if c]
        return "FieldElement(" + (" + ".join(terms) or "0") + ")"


def conj_auto(x: FieldElement) -> FieldElement:
    return x.conj()


def _trim(p):
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _frac_divmod(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(1, len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] / lead
        if c:
            q[k] = c
            for i in range(db + 1):
                a[k + i] -= c * b[i]
    return q, _trim(a[:db] or [Fraction(0)])


def _frac_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _frac_sub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


class QPolynomial:
    """A rational polynomial in q, reduced modulo the 2r-th cyclotomic polynomial.

    Coefficients are indexed by powers q^0 ... q^(totient(2r)-1); the reduced
    representation of a value is unique.
    """

    __slots__ = ("r", "coeffs")

    def __init__(self, r: int, coeffs):
        n = totient(2 * r)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != n:
            raise ValueError(f"expected {n} coefficients for r={r}, got {len(coeffs)}")
        self.r = r
        self.coeffs = coeffs

    @classmethod
    def from_terms(cls, r: int, terms: dict) -> "QPolynomial":
        """Build from a {power: coefficient} mapping (already-reduced powers)."""
        n = totient(2 * r)
        vec = [Fraction(0)] * n
        for p, c in terms.items():
            if not 0 <= p < n:
                raise ValueError(f"power {p} out of range for r={r}")
            vec[p] += Fraction(c)
        return cls(r, vec)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def evaluate(self) -> complex:
        """Value at q = exp(i*pi/r) in double precision."""
        q = cmath.exp(1j * pi / self.r)
        total = 0j
        p = 1 + 0j
        for c in self.coeffs:
            if c:
                total += float(c) * p
            p *= q
        return total

    def __eq__(self, other):
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self.r == other.r and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.r, self.coeffs))

    def format(self) -> str:
        """Human form, highest power first: e.g. ``-q^3+q^2+2``."""
        parts = []
        for p in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[p]
            if not c:
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            mag = abs(c)
            if p == 0:
                body = str(mag)
            else:
                var = "q" if p == 1 else f"q^{p}"
                if mag == 1:
                    body = var
                elif mag.denominator == 1:
                    body = f"{mag}{var}"
                else:
                    body = f"({mag}){var}"
            parts.append(sign + body)
        return "".join(parts) or "0"

    def __repr__(self):
        return f"QPolynomial(r={self.r}, {self.format()})"


def eval_numeric(p: QPolynomial) -> complex:
    return p.evaluate()
