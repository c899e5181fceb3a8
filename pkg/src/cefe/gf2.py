"""GF(2) linear algebra, classical linear codes and CSS code pairs.

Bit vectors and bit matrices are numpy ``uint8`` arrays holding 0/1.
Everything here is immutable once built; codes cache their derived tables
lazily but never change their public fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

# Exhaustive distance checks enumerate 2^k codewords; beyond this length the
# caller has to vouch for the distance.
BRUTE_FORCE_MAX_LENGTH = 24

COSET_SPACES = ("C1/C2", "F/C1", "C2", "F/C2perp")


class CodeError(ValueError):
    pass


class DecodeFailure(CodeError):
    """No codeword lies within the correctable radius."""


def as_bits(x) -> np.ndarray:
    """Coerce a sequence, 0/1 string, or array to a ``uint8`` bit array."""
    if isinstance(x, str):
        x = [int(ch) for ch in x if ch in "01"]
    return np.asarray(x, dtype=np.uint8) & 1


def bits_to_str(x) -> str:
    return "".join("1" if b else "0" for b in np.asarray(x).ravel())


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(2) and the pivot columns."""
    r = np.array(m, dtype=np.uint8, copy=True) & 1
    if r.ndim != 2:
        raise CodeError("rref expects a 2-d matrix")
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        hits = np.flatnonzero(r[row:, col])
        if hits.size == 0:
            continue
        src = row + hits[0]
        if src != row:
            r[[row, src]] = r[[src, row]]
        others = np.flatnonzero(r[:, col])
        others = others[others != row]
        if others.size:
            r[others] ^= r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(m) -> int:
    return len(rref(m)[1])


def nullspace(m) -> np.ndarray:
    """Basis (as rows) of {x : m x = 0}."""
    m = np.asarray(m, dtype=np.uint8)
    cols = m.shape[1]
    r, pivots = rref(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            basis[i, p] = r[row, f]
    return basis


def solve(a, b) -> np.ndarray | None:
    """One solution x of a @ x = b over GF(2), or None."""
    a = np.asarray(a, dtype=np.uint8)
    b = as_bits(b).reshape(-1, 1)
    aug, pivots = rref(np.hstack([a, b]))
    ncols = a.shape[1]
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.uint8)
    for row, p in enumerate(pivots):
        x[p] = aug[row, ncols]
    return x


def int_vectors(n: int) -> np.ndarray:
    """All 2^n bit vectors of length n, one per row (row i is binary of i, MSB first)."""
    idx = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A binary [q, k] code held by its RREF generator matrix."""

    generator: np.ndarray
    distance_hint: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        g = np.asarray(self.generator, dtype=np.uint8)
        if g.ndim != 2:
            raise CodeError("generator must be 2-d")
        r, pivots = rref(g)
        r = r[: len(pivots)]
        r.setflags(write=False)
        object.__setattr__(self, "generator", r)
        object.__setattr__(self, "pivots", tuple(pivots))

    @classmethod
    def from_rows(cls, rows, length: int | None = None, distance_hint: int | None = None):
        rows = [as_bits(r) for r in rows]
        if not rows:
            if length is None:
                raise CodeError("empty code needs an explicit length")
            return cls(np.zeros((0, length), dtype=np.uint8), distance_hint)
        return cls(np.vstack(rows), distance_hint)

    @property
    def length(self) -> int:
        return self.generator.shape[1]

    @property
    def dimension(self) -> int:
        return self.generator.shape[0]

    @property
    def parity_check(self) -> np.ndarray:
        if "h" not in self._cache:
            h = nullspace(self.generator)
            h.setflags(write=False)
            self._cache["h"] = h
        return self._cache["h"]

    def dual(self) -> "LinearCode":
        if "dual" not in self._cache:
            self._cache["dual"] = LinearCode(self.parity_check)
        return self._cache["dual"]

    def encode(self, msg) -> np.ndarray:
        return (as_bits(msg) @ self.generator.astype(np.int64) & 1).astype(np.uint8)

    def contains(self, x) -> bool:
        x = as_bits(x)
        if x.shape != (self.length,):
            raise CodeError(f"vector length {x.shape[0]} != code length {self.length}")
        return not np.any(mod_c(x, self))

    def codewords(self) -> np.ndarray:
        if self.dimension > 20:
            raise CodeError("refusing to enumerate more than 2^20 codewords")
        return (int_vectors(self.dimension).astype(np.int64) @ self.generator & 1).astype(np.uint8)

    def min_distance(self) -> int:
        """Exact minimum distance by enumeration (length <= 24), else the caller's hint."""
        if "d" in self._cache:
            return self._cache["d"]
        if self.dimension == 0:
            d = self.length + 1
        elif self.length <= BRUTE_FORCE_MAX_LENGTH and self.dimension <= 20:
            words = self.codewords()[1:]
            d = int(words.sum(axis=1).min())
        elif self.length <= BRUTE_FORCE_MAX_LENGTH:
            d = _distance_via_dual(self)
        elif self.distance_hint is not None:
            d = self.distance_hint
        else:
            raise CodeError(
                f"cannot verify distance of a length-{self.length} code; pass distance_hint"
            )
        self._cache["d"] = d
        return d

    def __repr__(self):
        return f"LinearCode[{self.length},{self.dimension}]"


def _distance_via_dual(code: LinearCode) -> int:
    # Smallest weight w such that some weight-w vector has zero syndrome.
    h = code.parity_check.astype(np.int64)
    for w in range(1, code.length + 1):
        for support in combinations(range(code.length), w):
            if not np.any(h[:, list(support)].sum(axis=1) & 1):
                return w
    return code.length + 1


def mod_c(x, code: LinearCode) -> np.ndarray:
    """Canonical coset representative of x modulo the code.

    Clears x on every pivot column of the RREF generator, so two vectors map
    to the same output exactly when they differ by a codeword.
    """
    x = as_bits(x).copy()
    if x.shape != (code.length,):
        raise CodeError(f"vector length {x.shape[0]} != code length {code.length}")
    g = code.generator
    for row, p in enumerate(code.pivots):
        if x[p]:
            x ^= g[row]
    return x


@dataclass(frozen=True, eq=False)
class CssPair:
    """Nested codes C2 subset C1 with C1 and C2-dual both correcting t errors."""

    c1: LinearCode
    c2: LinearCode
    t: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.c1.length != self.c2.length:
            raise CodeError("C1 and C2 must share a length")
        if self.k1 <= self.k2:
            raise CodeError(f"need k1 > k2, got k1={self.k1}, k2={self.k2}")
        for row in self.c2.generator:
            if not self.c1.contains(row):
                raise CodeError("C2 is not contained in C1")
        need = 2 * self.t + 1
        for name, code in (("C1", self.c1), ("C2perp", self.c2.dual())):
            d = code.min_distance()
            if d < need:
                raise CodeError(f"{name} has distance {d} < 2t+1 = {need}")

    @property
    def q(self) -> int:
        return self.c1.length

    @property
    def k1(self) -> int:
        return self.c1.dimension

    @property
    def k2(self) -> int:
        return self.c2.dimension

    @property
    def message_bits(self) -> int:
        return self.k1 - self.k2

    def representatives(self, which: str) -> np.ndarray:
        """Every canonical representative of the named coset space (desk sizes only)."""
        if which == "C1/C2":
            words = self.c1.codewords()
            reps = {mod_c(w, self.c2).tobytes(): mod_c(w, self.c2) for w in words}
        elif which == "C2":
            return self.c2.codewords()
        elif which in ("F/C1", "F/C2perp"):
            code = self.c1 if which == "F/C1" else self.c2.dual()
            if self.q > 20:
                raise CodeError("refusing to enumerate the ambient space")
            reps = {}
            for v in int_vectors(self.q):
                r = mod_c(v, code)
                reps[r.tobytes()] = r
        else:
            raise CodeError(f"unknown coset space {which!r}")
        return np.array(sorted(reps.values(), key=bits_to_str), dtype=np.uint8)

    def encode_message(self, m) -> np.ndarray:
        """Map k1-k2 message bits onto a canonical C1/C2 representative."""
        m = as_bits(m)
        if m.shape != (self.message_bits,):
            raise CodeError(f"message must have {self.message_bits} bits")
        basis = self._quotient_basis()
        word = (m.astype(np.int64) @ basis & 1).astype(np.uint8)
        return mod_c(word, self.c2)

    def decode_message(self, rep) -> np.ndarray:
        """Inverse of encode_message on canonical representatives."""
        rep = mod_c(rep, self.c2)
        basis = self._quotient_basis()
        m = solve(basis.T, rep)
        if m is None:
            raise CodeError("vector is not a C1/C2 representative")
        return m

    def _quotient_basis(self) -> np.ndarray:
        # C1 rows reduced mod C2 that stay independent of C2 and of each other.
        if "qb" not in self._cache:
            acc = [r for r in self.c2.generator]
            current = len(acc)
            rows = []
            for g in self.c1.generator:
                red = mod_c(g, self.c2)
                if rank(np.array(acc + [red], dtype=np.uint8)) > current:
                    acc.append(red)
                    rows.append(red)
                    current += 1
            self._cache["qb"] = np.array(rows, dtype=np.uint8).reshape(len(rows), self.q)
        return self._cache["qb"]


def sample_coset_space(pair: CssPair, which: str, rng: np.random.Generator) -> np.ndarray:
    """Uniform element of a coset space, returned as its canonical representative."""
    q = pair.q
    if which == "C1/C2":
        coeffs = rng.integers(0, 2, pair.k1, dtype=np.uint8)
        return mod_c(pair.c1.encode(coeffs), pair.c2)
    if which == "C2":
        return pair.c2.encode(rng.integers(0, 2, pair.k2, dtype=np.uint8))
    if which == "F/C1":
        return mod_c(rng.integers(0, 2, q, dtype=np.uint8), pair.c1)
    if which == "F/C2perp":
        return mod_c(rng.integers(0, 2, q, dtype=np.uint8), pair.c2.dual())
    raise CodeError(f"unknown coset space {which!r}; expected one of {COSET_SPACES}")


def _syndrome_table(code: LinearCode, t: int) -> dict[bytes, np.ndarray]:
    key = ("syn", t)
    if key not in code._cache:
        h = code.parity_check.astype(np.int64)
        table: dict[bytes, np.ndarray] = {}
        for w in range(t + 1):
            for support in combinations(range(code.length), w):
                e = np.zeros(code.length, dtype=np.uint8)
                e[list(support)] = 1
                s = (h @ e & 1).astype(np.uint8).tobytes()
                table.setdefault(s, e)
        code._cache[key] = table
    return code._cache[key]


def syndrome_decode(pair: CssPair, y, side: str = "C1") -> np.ndarray:
    """Nearest codeword within distance t of y, on C1 or on C2-dual."""
    code = {"C1": pair.c1, "C2perp": pair.c2.dual()}.get(side)
    if code is None:
        raise CodeError(f"side must be 'C1' or 'C2perp', got {side!r}")
    y = as_bits(y)
    if y.shape != (pair.q,):
        raise CodeError(f"vector length {y.shape[0]} != {pair.q}")
    s = (code.parity_check.astype(np.int64) @ y & 1).astype(np.uint8).tobytes()
    e = _syndrome_table(code, pair.t).get(s)
    if e is None:
        raise DecodeFailure("syndrome not within the correctable radius")
    return y ^ e


def security_margin(p: int, q: int, t: int, k1: int, k2: int) -> float:
    """t*p/(p+q) - 4*(k1-k2)*ln 2; the CSS scheme wants this superlogarithmic."""
    if min(p, q) <= 0 or t < 0 or k1 <= k2:
        raise CodeError("need p, q > 0, t >= 0 and k1 > k2")
    return t * p / (p + q) - 4 * (k1 - k2) * math.log(2)


# ---------------------------------------------------------------- code builders


def hamming_code(r: int) -> LinearCode:
    """The [2^r - 1, 2^r - 1 - r, 3] Hamming code."""
    n = (1 << r) - 1
    cols = np.array([[(j >> (r - 1 - i)) & 1 for i in range(r)] for j in range(1, n + 1)], dtype=np.uint8)
    return LinearCode(nullspace(cols.T), distance_hint=3)


def cyclic_code(n: int, gen_poly: int) -> LinearCode:
    """Cyclic code of length n from a generator polynomial given as an int (bit i = x^i)."""
    deg = gen_poly.bit_length() - 1
    k = n - deg
    rows = np.zeros((k, n), dtype=np.uint8)
    for i in range(k):
        for j in range(deg + 1):
            rows[i, i + j] = (gen_poly >> j) & 1
    return LinearCode(rows)


def _gf2_polymul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def bch_generator(m: int, designed_distance: int, prim_poly: int) -> int:
    """Generator polynomial of the narrow-sense binary BCH code of length 2^m - 1."""
    n = (1 << m) - 1
    # Minimal polynomials via cyclotomic cosets of alpha^i, i = 1..d-1.
    exp = [1] * (2 * n)
    for i in range(1, 2 * n):
        v = exp[i - 1] << 1
        if v >> m:
            v ^= prim_poly
        exp[i] = v
    log = {exp[i]: i for i in range(n)}

    def gmul(a, b):
        if a == 0 or b == 0:
            return 0
        return exp[(log[a] + log[b]) % n]

    seen: set[int] = set()
    g = 1
    for i in range(1, designed_distance):
        if i % n in seen:
            continue
        coset = []
        j = i % n
        while j not in coset:
            coset.append(j)
            j = (2 * j) % n
        seen.update(coset)
        # prod (x - alpha^j) with coefficients in GF(2^m); result lies in GF(2).
        poly = [1]
        for j in coset:
            root = exp[j]
            nxt = [0] * (len(poly) + 1)
            for d, c in enumerate(poly):
                nxt[d + 1] ^= c
                nxt[d] ^= gmul(c, root)
            poly = nxt
        mp = sum((c & 1) << d for d, c in enumerate(poly))
        g = _gf2_polymul(g, mp)
    return g


GOLAY_23_GENERATOR = 0b110001110101  # x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1


def css_from_dual_containing(code: LinearCode, t: int) -> CssPair:
    """C1 = code, C2 = code-dual; requires the dual to sit inside the code."""
    return CssPair(code, code.dual(), t)


def steane_pair() -> CssPair:
    """C1 = [7,4] Hamming, C2 = its [7,3] dual; t = 1, one plaintext bit."""
    return css_from_dual_containing(hamming_code(3), 1)


def hamming15_pair() -> CssPair:
    """[15,11] Hamming (BCH with designed distance 3) over its [15,4] dual; t = 1."""
    return css_from_dual_containing(cyclic_code(15, bch_generator(4, 3, 0b10011)), 1)


def golay_pair() -> CssPair:
    """[23,12,7] Golay over its [23,11] dual; t = 3, one plaintext bit."""
    return css_from_dual_containing(cyclic_code(23, GOLAY_23_GENERATOR), 3)


NAMED_PAIRS = {
    "steane": steane_pair,
    "hamming15": hamming15_pair,
    "golay": golay_pair,
}


def named_pair(name: str) -> CssPair:
    try:
        return NAMED_PAIRS[name]()
    except KeyError:
        raise CodeError(f"unknown CSS pair {name!r}; known: {sorted(NAMED_PAIRS)}") from None


def parse_code(text: str, distance_hint: int | None = None) -> LinearCode:
    """Parse the plain-text code format: ``q k`` then k generator rows of 0/1."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise CodeError("empty code description")
    try:
        q, k = (int(v) for v in lines[0].split())
    except ValueError:
        raise CodeError(f"bad header line {lines[0]!r}") from None
    rows = lines[1 : 1 + k]
    if len(rows) != k:
        raise CodeError(f"expected {k} generator rows, found {len(rows)}")
    mat = np.zeros((k, q), dtype=np.uint8)
    for i, row in enumerate(rows):
        if len(row) != q or set(row) - {"0", "1"}:
            raise CodeError(f"row {i} is not a length-{q} 0/1 string")
        mat[i] = as_bits(row)
    code = LinearCode(mat, distance_hint)
    if code.dimension != k:
        raise CodeError(f"generator rows are dependent (rank {code.dimension} < {k})")
    return code


def load_code(path: str | Path, distance_hint: int | None = None) -> LinearCode:
    return parse_code(Path(path).read_text(), distance_hint)


def format_code(code: LinearCode) -> str:
    lines = [f"{code.length} {code.dimension}"]
    lines += [bits_to_str(r) for r in code.generator]
    return "\n".join(lines) + "\n"
