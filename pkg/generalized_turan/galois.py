"""Exact arithmetic in GF(p^k).

Elements are integer codes: the code of a polynomial residue ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}``
is ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``. Code 0 is zero and code 1 is one. All arithmetic goes
through the owning :class:`GaloisField`.
"""

import logging
from math import gcd

from generalized_turan.errors import (
    DivisibilityError,
    NotPrimeError,
    ParameterError,
    SizeLimitError,
    UndefinedOrderError,
)

logger = logging.getLogger(__name__)

FIELD_MAX_ORDER = 1 << 16
_ADD_TABLE_MAX_ORDER = 256

type FieldElement = int


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in ascending order."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` for a prime p, or None."""
    if q < 2:
        return None
    factors = prime_factors(q)
    if len(factors) != 1:
        return None
    p = factors[0]
    k = 0
    while q > 1:
        q //= p
        k += 1
    return p, k


def _digits(code: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        code, digit = divmod(code, p)
        out.append(digit)
    return out


def _undigits(digits: list[int], p: int) -> int:
    code = 0
    for digit in reversed(digits):
        code = code * p + digit
    return code


def _poly_rem(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of ``num`` modulo the monic polynomial ``den`` (coefficients low to high)."""
    rem = list(num)
    deg = len(den) - 1
    for top in range(len(rem) - 1, deg - 1, -1):
        c = rem[top]
        if c:
            shift = top - deg
            for i, coeff in enumerate(den):
                rem[shift + i] = (rem[shift + i] - c * coeff) % p
    return rem[:deg]


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for low in range(p**d):
            divisor = [*_digits(low, p, d), 1]
            if not any(_poly_rem(poly, divisor, p)):
                return False
    return True


class GaloisField:
    """GF(p^k) with exp/log tables over the smallest-code primitive element."""

    def __init__(self, p: int, k: int, modulus: list[int]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus)
        self.generator = self._find_generator()
        self._exp = [1] * (self.q - 1)
        for i in range(1, self.q - 1):
            self._exp[i] = self._slow_mul(self._exp[i - 1], self.generator)
        self._log = [0] * self.q
        for i, code in enumerate(self._exp):
            self._log[code] = i
        self._add_table: list[list[int]] | None = None
        if k > 1 and p != 2 and self.q <= _ADD_TABLE_MAX_ORDER:
            self._add_table = [[self._slow_add(a, b) for b in range(self.q)] for a in range(self.q)]

    def __repr__(self) -> str:
        return f"GaloisField(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    def _slow_add(self, a: int, b: int) -> int:
        da = _digits(a, self.p, self.k)
        db = _digits(b, self.p, self.k)
        return _undigits([(x + y) % self.p for x, y in zip(da, db, strict=True)], self.p)

    def _slow_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        da = _digits(a, self.p, self.k)
        db = _digits(b, self.p, self.k)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return _undigits(_poly_rem(prod, list(self.modulus), self.p), self.p)

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        order = self.q - 1
        primes = prime_factors(order)
        for code in range(1, self.q):
            if all(self._slow_pow(code, order // r) != 1 for r in primes):
                return code
        msg = f"no primitive element found for modulus {self.modulus}; modulus is not irreducible"
        raise ParameterError(msg)

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._slow_add(a, b)

    def neg(self, a: FieldElement) -> FieldElement:
        if self.k == 1:
            return -a % self.p
        return _undigits([-d % self.p for d in _digits(a, self.p, self.k)], self.p)

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.add(a, self.neg(b))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inverse(self, a: FieldElement) -> FieldElement:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self._exp[-self._log[a] % (self.q - 1)]

    def power(self, a: FieldElement, e: int) -> FieldElement:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[self._log[a] * e % (self.q - 1)]

    def log(self, a: FieldElement) -> int:
        """Discrete logarithm of a non-zero element to the base :attr:`generator`."""
        if a == 0:
            raise UndefinedOrderError("zero has no discrete logarithm")
        return self._log[a]


def make_field(p: int, k: int = 1) -> GaloisField:
    """GF(p^k) realised modulo the lexicographically smallest monic irreducible of degree k."""
    if k < 1:
        msg = f"extension degree must be at least 1, got {k}"
        raise ParameterError(msg)
    if not is_prime(p):
        msg = f"characteristic {p} is not prime"
        raise NotPrimeError(msg)
    if p**k > FIELD_MAX_ORDER:
        msg = f"field order {p}^{k} exceeds the supported maximum {FIELD_MAX_ORDER}"
        raise SizeLimitError(msg)
    if k == 1:
        return GaloisField(p, 1, [0, 1])
    for low in range(p**k):
        candidate = [*_digits(low, p, k), 1]
        if _is_irreducible(candidate, p):
            logger.debug("GF(%d^%d) modulus %s", p, k, candidate)
            return GaloisField(p, k, candidate)
    msg = f"no irreducible polynomial of degree {k} over GF({p})"
    raise ParameterError(msg)


def make_field_of_order(q: int) -> GaloisField:
    decomposition = prime_power(q)
    if decomposition is None:
        msg = f"{q} is not a prime power"
        raise NotPrimeError(msg)
    return make_field(*decomposition)


def element_order(f: GaloisField, x: FieldElement) -> int:
    """Least d >= 1 with x^d = 1."""
    if x == 0:
        raise UndefinedOrderError("the multiplicative order of zero is undefined")
    return (f.q - 1) // gcd(f.log(x), f.q - 1)


def element_of_order(f: GaloisField, d: int) -> FieldElement:
    """The element g^((q-1)/d) of exact order d, g the smallest-code primitive element."""
    if d < 1 or (f.q - 1) % d:
        msg = f"no element of order {d} in GF({f.q}): {d} does not divide {f.q - 1}"
        raise DivisibilityError(msg)
    return f.power(f.generator, (f.q - 1) // d)


def cyclic_subgroup(f: GaloisField, h: FieldElement) -> list[FieldElement]:
    """The members h^1, h^2, ..., h^d of the subgroup generated by h, d its order."""
    return [f.power(h, e) for e in range(1, element_order(f, h) + 1)]
