"""Exact integer polynomial arithmetic for cyclotomic divisibility questions.

No floating point is used in this module. Polynomials are immutable tuples
of Python ints in ascending degree.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .core import canonical_residues
from .errors import InvalidArgumentError, SizeLimitError

TILING_SIZE_LIMIT = 64


class IntPolynomial:
    __slots__ = ("coefficients",)

    def __init__(self, coefficients=()):
        c = [int(x) for x in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self.coefficients = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coefficients == other.coefficients
        return NotImplemented

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"IntPolynomial({list(self.coefficients)})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else ""
            else:
                coef = str(c)
            terms.append(f"{coef}{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __neg__(self):
        return IntPolynomial([-c for c in self.coefficients])

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    def divmod_rational(self, divisor: "IntPolynomial") -> tuple[list[Fraction], list[Fraction]]:
        """Long division over Q. Returns (quotient, remainder) coefficient lists."""
        if divisor.is_zero():
            raise InvalidArgumentError("division by the zero polynomial")
        rem = [Fraction(c) for c in self.coefficients]
        d = divisor.coefficients
        lead = d[-1]
        q = [Fraction(0)] * max(len(rem) - len(d) + 1, 0)
        for shift in range(len(rem) - len(d), -1, -1):
            coef = rem[shift + len(d) - 1] / lead
            q[shift] = coef
            if coef:
                for i, c in enumerate(d):
                    rem[shift + i] -= coef * c
        while rem and rem[-1] == 0:
            rem.pop()
        return q, rem

    def exact_div(self, divisor: "IntPolynomial") -> "IntPolynomial":
        """Quotient when the division is exact over Z; raises otherwise."""
        q, r = self.divmod_rational(divisor)
        if r or any(c.denominator != 1 for c in q):
            raise InvalidArgumentError(f"{divisor} does not divide {self} over Z")
        return IntPolynomial(int(c) for c in q)

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def totient(n: int) -> int:
    return sum(1 for j in range(1, n + 1) if math.gcd(j, n) == 1)


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPolynomial:
    """``Phi_n`` as the exact quotient of ``z**n - 1`` by ``prod_{d | n, d < n} Phi_d``."""
    if n < 1:
        raise InvalidArgumentError("cyclotomic index must be >= 1")
    num = IntPolynomial.monomial(n) - IntPolynomial([1])
    den = IntPolynomial([1])
    for d in divisors(n)[:-1]:
        den = den * cyclotomic(d)
    return num.exact_div(den)


def characteristic_poly(A) -> IntPolynomial:
    """``P_A(z) = sum_{a in A} z**a`` for a set of nonnegative residues."""
    A = sorted({int(a) for a in A})
    if not A:
        raise InvalidArgumentError("residue set must be nonempty")
    if A[0] < 0:
        raise InvalidArgumentError("residues must be nonnegative")
    coeffs = [0] * (A[-1] + 1)
    for a in A:
        coeffs[a] = 1
    return IntPolynomial(coeffs)


def divides_exactly(d: IntPolynomial, p: IntPolynomial) -> bool:
    if d.is_zero():
        raise InvalidArgumentError("zero divisor")
    _, r = p.divmod_rational(d)
    return not r


def divisor_set(n: int, L) -> tuple[int, ...]:
    """All ``d > 1`` with ``d | n`` and ``Phi_d | P_L``."""
    p = characteristic_poly(canonical_residues(L, n))
    return tuple(d for d in divisors(n)[1:] if divides_exactly(cyclotomic(d), p))


def predicted_zero_diagonals(n: int, L) -> tuple[int, ...]:
    """Wrapped diagonals ``+-s*n/d`` (gcd(s, d) = 1) forced to vanish by each d in the divisor set."""
    zeros = set()
    for d in divisor_set(n, L):
        step = n // d
        for s in range(1, d):
            if math.gcd(s, d) == 1:
                zeros.add((s * step) % n)
                zeros.add((-s * step) % n)
    return tuple(sorted(zeros))


def find_tiling_complement(A, n: int) -> Optional[tuple[int, ...]]:
    """Search for ``B`` with ``A (+) B = Z_n`` (every residue covered exactly once).

    Depth-first: the smallest uncovered residue ``u`` must be ``a + b`` for some
    ``a`` in A, which fixes the candidate translate ``b = u - a``.
    """
    if n > TILING_SIZE_LIMIT:
        raise SizeLimitError(f"tiling search is limited to N <= {TILING_SIZE_LIMIT}")
    A = canonical_residues(A, n)
    if not A or n % len(A):
        return None
    full = (1 << n) - 1
    masks = {}
    for b in range(n):
        mask = 0
        for a in A:
            mask |= 1 << ((a + b) % n)
        masks[b] = mask

    def search(covered: int, chosen: list[int]) -> Optional[list[int]]:
        if covered == full:
            return chosen
        u = (~covered & (covered + 1)).bit_length() - 1
        for a in A:
            b = (u - a) % n
            if masks[b] & covered == 0:
                found = search(covered | masks[b], chosen + [b])
                if found is not None:
                    return found
        return None

    found = search(0, [])
    return None if found is None else tuple(sorted(found))


def interlace_diagonality_check(n: int, p: int, L) -> bool:
    """Arithmetic condition: for each j = 1..n/p - 1 some d in the divisor set
    makes ``j*p*d/n`` an integer coprime to d.

    Candidates where ``j*p*d/n`` is not an integer are skipped.
    """
    if p <= 1 or n % p:
        raise InvalidArgumentError(f"p={p} must be a divisor of N={n} greater than 1")
    D = divisor_set(n, L)
    for j in range(1, n // p):
        if not any((j * p * d) % n == 0 and math.gcd(j * p * d // n, d) == 1 for d in D):
            return False
    return True


def interlace_support_check(n: int, p: int, L) -> bool:
    """Whether the predicted zero diagonals cover every nonzero multiple of ``n/p``.

    With ``K = <n/p>`` and a window interlaced from a Fourier-column family,
    the translation matrix lives exactly on multiples of ``n/p``; this is the
    condition under which the predicted zeros make the frame operator diagonal.
    """
    if p <= 1 or n % p:
        raise InvalidArgumentError(f"p={p} must be a divisor of N={n} greater than 1")
    step = n // p
    zeros = set(predicted_zero_diagonals(n, L))
    return all((j * step) % n in zeros for j in range(1, p))
