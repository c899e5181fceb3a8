"""GF(2^k) arithmetic and univariate polynomials for the q-bounded FE layer.

Elements are carried as plain ints (bit i is the coefficient of x^i);
:class:`FieldElem` wraps one with its field for the public API.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Fixed reduction polynomial per extension degree (bit i = coefficient of x^i).
IRREDUCIBLE = {
    2: 0b111,
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10000011,
    8: 0b100011011,  # x^8 + x^4 + x^3 + x + 1
}


class FieldError(ValueError):
    pass


def _clmul_mod(a: int, b: int, k: int, poly: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> k:
            a ^= poly
    return out


class GF2k:
    """The field GF(2^k) with a precomputed multiplication table."""

    def __init__(self, k: int):
        if k not in IRREDUCIBLE:
            raise FieldError(f"no reduction polynomial fixed for k={k}")
        self.k = k
        self.order = 1 << k
        self.poly = IRREDUCIBLE[k]
        n = self.order
        table = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                table[a, b] = table[b, a] = _clmul_mod(a, b, k, self.poly)
        self._mul = table
        self._inv = np.zeros(n, dtype=np.int64)
        for a in range(1, n):
            self._inv[a] = int(np.flatnonzero(table[a] == 1)[0])

    def __repr__(self):
        return f"GF(2^{self.k})"

    def __eq__(self, other):
        return isinstance(other, GF2k) and other.k == self.k

    def __hash__(self):
        return hash(("GF2k", self.k))

    def __call__(self, value: int) -> "FieldElem":
        return FieldElem(self, int(value))

    def check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise FieldError(f"{a} is not an element of {self}")
        return a

    def mul(self, a: int, b: int) -> int:
        return int(self._mul[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self._inv[a])

    def pow(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = int(self._mul[out, a])
        return out

    def random(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.order))

    def to_bits(self, a: int) -> np.ndarray:
        """Coefficient bits, constant term first."""
        return np.array([(a >> i) & 1 for i in range(self.k)], dtype=np.uint8)

    def from_bits(self, bits) -> int:
        return sum(int(b) << i for i, b in enumerate(bits))

    def mul_matrix(self, c: int) -> np.ndarray:
        """k x k GF(2) matrix M with bits(c*a) = M @ bits(a)."""
        m = np.zeros((self.k, self.k), dtype=np.uint8)
        for j in range(self.k):
            m[:, j] = self.to_bits(self.mul(c, 1 << j))
        return m


@lru_cache(maxsize=None)
def gf(k: int) -> GF2k:
    return GF2k(k)


@dataclass(frozen=True)
class FieldElem:
    field: GF2k
    value: int

    def __post_init__(self):
        self.field.check(self.value)

    def _same(self, other: "FieldElem") -> None:
        if not isinstance(other, FieldElem) or other.field.k != self.field.k:
            raise FieldError("operands live in different fields")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        return FieldElem(self.field, self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return fe_mul(self, other)

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value


def fe_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    if a.field.k != b.field.k:
        raise FieldError(f"degree mismatch: GF(2^{a.field.k}) vs GF(2^{b.field.k})")
    return FieldElem(a.field, a.field.mul(a.value, b.value))


@dataclass(frozen=True)
class UniPoly:
    """Polynomial over GF(2^k), constant term first."""

    field: GF2k
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def __call__(self, x: int) -> int:
        mul = self.field._mul
        acc = 0
        for c in reversed(self.coeffs):
            acc = int(mul[acc, x]) ^ c
        return acc

    def eval(self, x: FieldElem) -> FieldElem:
        return FieldElem(self.field, self(x.value))


def random_poly_with_constant(c0: FieldElem | int, degree: int, rng: np.random.Generator,
                              field: GF2k | None = None) -> UniPoly:
    """Degree-bounded polynomial with the given constant term and uniform other coefficients."""
    if isinstance(c0, FieldElem):
        field = c0.field
        c0 = c0.value
    if field is None:
        raise FieldError("field required when c0 is a raw int")
    if degree < 0:
        raise FieldError("degree must be non-negative")
    rest = rng.integers(0, field.order, size=degree).tolist()
    return UniPoly(field, (field.check(c0), *rest))


def interpolate_at(points, x0, field: GF2k | None = None):
    """Evaluate at x0 the unique interpolant through the given (x, y) points.

    Accepts FieldElem pairs (returns a FieldElem) or raw ints with ``field``.
    """
    wrapped = bool(points) and isinstance(points[0][0], FieldElem)
    if wrapped:
        field = points[0][0].field
        xs = [p[0].value for p in points]
        ys = [p[1].value for p in points]
        x0v = x0.value
    else:
        if field is None:
            raise FieldError("field required for raw-int points")
        xs = [int(p[0]) for p in points]
        ys = [int(p[1]) for p in points]
        x0v = int(x0)
    if len(set(xs)) != len(xs):
        raise FieldError("duplicate abscissa in interpolation points")
    mul = field._mul
    acc = 0
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if j != i:
                num = int(mul[num, x0v ^ xj])
                den = int(mul[den, xi ^ xj])
        acc ^= int(mul[int(mul[yi, num]), field.inv(den)])
    return FieldElem(field, acc) if wrapped else acc
