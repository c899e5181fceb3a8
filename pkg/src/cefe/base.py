"""Classical building blocks: tagged SKE, toy Regev-style PKE, lazily sampled random oracle.

None of this is production cryptography.  Bit strings are numpy ``uint8``
0/1 arrays; ``None`` stands for the failure symbol.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TAG_BITS = 32
DEFAULT_LAMBDA = 128


class ParameterError(ValueError):
    pass


def random_bits(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, n, dtype=np.uint8)


def pack(bits) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def prf(key, x, nbits: int) -> np.ndarray:
    """Counter-mode SHA-256 expansion of key || x, truncated to nbits."""
    seed = pack(key) + pack(x)
    out = bytearray()
    ctr = 0
    while len(out) * 8 < nbits:
        out += hashlib.sha256(seed + ctr.to_bytes(4, "big")).digest()
        ctr += 1
    return np.unpackbits(np.frombuffer(bytes(out), dtype=np.uint8))[:nbits]


def prf_many(keys, xs, nbits: int) -> np.ndarray:
    """Row-wise :func:`prf` over matching 2-D arrays of keys and inputs."""
    kb = np.packbits(np.asarray(keys, dtype=np.uint8), axis=1)
    xb = np.packbits(np.asarray(xs, dtype=np.uint8), axis=1)
    nblocks = -(-nbits // 256)
    out = bytearray()
    sha = hashlib.sha256
    for k, x in zip(kb, xb):
        seed = k.tobytes() + x.tobytes()
        for ctr in range(nblocks):
            out += sha(seed + ctr.to_bytes(4, "big")).digest()
    flat = np.unpackbits(np.frombuffer(bytes(out), dtype=np.uint8))
    return flat.reshape(len(kb), nblocks * 256)[:, :nbits]


# ------------------------------------------------------------------------ SKE


@dataclass(frozen=True)
class SkeCiphertext:
    nonce: np.ndarray
    body: np.ndarray

    @property
    def message_bits(self) -> int:
        return len(self.body) - TAG_BITS


def ske_keygen(rng: np.random.Generator, lam: int = DEFAULT_LAMBDA) -> np.ndarray:
    return random_bits(lam, rng)


def ske_enc(key, m, rng: np.random.Generator) -> SkeCiphertext:
    """(r, PRF(k, r) xor (m || 0^tau))."""
    m = np.asarray(m, dtype=np.uint8)
    nonce = random_bits(len(key), rng)
    padded = np.concatenate([m, np.zeros(TAG_BITS, dtype=np.uint8)])
    return SkeCiphertext(nonce, prf(key, nonce, len(padded)) ^ padded)


def ske_enc_many(keys, msgs, rng: np.random.Generator) -> list[SkeCiphertext]:
    """Row i of ``msgs`` under row i of ``keys``; same distribution as repeated ske_enc."""
    keys = np.asarray(keys, dtype=np.uint8)
    msgs = np.asarray(msgs, dtype=np.uint8)
    rows = len(keys)
    nonces = rng.integers(0, 2, keys.shape, dtype=np.uint8)
    padded = np.concatenate([msgs.reshape(rows, -1), np.zeros((rows, TAG_BITS), np.uint8)], axis=1)
    bodies = prf_many(keys, nonces, padded.shape[1]) ^ padded
    return [SkeCiphertext(nonces[i], bodies[i]) for i in range(rows)]


def ske_dec(key, ct: SkeCiphertext) -> np.ndarray | None:
    """Plaintext, or None when the redundancy tag does not vanish."""
    plain = prf(key, ct.nonce, len(ct.body)) ^ ct.body
    if plain[-TAG_BITS:].any():
        return None
    return plain[:-TAG_BITS]


def ske_dec_many(keys, cts) -> list:
    """Row-wise :func:`ske_dec` for ciphertexts of one common length."""
    if not cts:
        return []
    nonces = np.stack([c.nonce for c in cts])
    bodies = np.stack([c.body for c in cts])
    plain = prf_many(np.asarray(keys, dtype=np.uint8), nonces, bodies.shape[1]) ^ bodies
    ok = ~plain[:, -TAG_BITS:].any(axis=1)
    return [plain[i, :-TAG_BITS] if ok[i] else None for i in range(len(cts))]


# ------------------------------------------------------------------------ LWE


@dataclass(frozen=True)
class LweParams:
    n: int = 256
    q: int = 4099
    m: int = 512
    beta: int = 2

    def check(self) -> None:
        if min(self.n, self.q, self.m) <= 0 or self.beta < 0:
            raise ParameterError("LWE parameters must be positive")
        if not self.q / 4 > self.m * self.beta:
            raise ParameterError(
                f"decryption margin violated: q/4 = {self.q / 4} <= m*beta = {self.m * self.beta}"
            )

    @classmethod
    def parse(cls, text: str) -> "LweParams":
        """key=value lines with keys n, q, m, beta; missing keys keep defaults."""
        vals = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in ("n", "q", "m", "beta"):
                raise ParameterError(f"bad LWE parameter line {line!r}")
            vals[key] = int(value)
        return cls(**vals)

    @classmethod
    def load(cls, path: str | Path) -> "LweParams":
        return cls.parse(Path(path).read_text())

    def dump(self) -> str:
        return f"n={self.n}\nq={self.q}\nm={self.m}\nbeta={self.beta}\n"


# Small instance for the composite schemes, which encrypt thousands of labels.
TOY_LWE = LweParams(n=32, q=521, m=64, beta=1)


@dataclass(frozen=True, eq=False)
class LwePublicKey:
    params: LweParams
    a: np.ndarray  # n x m, shared between keys of one setup
    b: np.ndarray  # m


@dataclass(frozen=True, eq=False)
class LweSecretKey:
    params: LweParams
    s: np.ndarray


@dataclass(frozen=True, eq=False)
class LweCiphertext:
    """Bitwise ciphertext: column j of c1 and c2[j] encrypt bit j."""

    c1: np.ndarray  # n x L
    c2: np.ndarray  # L


def lwe_matrix(params: LweParams, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, params.q, (params.n, params.m), dtype=np.int64)


def lwe_keygen(params: LweParams, rng: np.random.Generator, matrix: np.ndarray | None = None):
    """pk = (A, b = A^T s + e), sk = s.  ``matrix`` lets keys share a public A."""
    params.check()
    a = lwe_matrix(params, rng) if matrix is None else matrix
    s = rng.integers(0, params.q, params.n, dtype=np.int64)
    e = rng.integers(-params.beta, params.beta + 1, params.m, dtype=np.int64)
    b = (a.T @ s + e) % params.q
    return LwePublicKey(params, a, b), LweSecretKey(params, s)


def lwe_keygen_many(params: LweParams, count: int, rng: np.random.Generator, matrix: np.ndarray | None = None):
    """``count`` key pairs over one public matrix, sampled in a single batch."""
    params.check()
    a = lwe_matrix(params, rng) if matrix is None else matrix
    s = rng.integers(0, params.q, (count, params.n), dtype=np.int64)
    e = rng.integers(-params.beta, params.beta + 1, (count, params.m), dtype=np.int64)
    b = (s @ a + e) % params.q
    return [(LwePublicKey(params, a, b[i]), LweSecretKey(params, s[i])) for i in range(count)]


def lwe_enc(pk: LwePublicKey, bits, rng: np.random.Generator) -> LweCiphertext:
    p = pk.params
    bits = np.atleast_1d(np.asarray(bits, dtype=np.int64))
    r = rng.integers(0, 2, (p.m, len(bits))).astype(np.float64)
    # float matmul is exact here: entries stay far below 2^53.
    c1 = (pk.a.astype(np.float64) @ r).astype(np.int64) % p.q
    c2 = ((pk.b.astype(np.float64) @ r).astype(np.int64) + bits * (p.q // 2)) % p.q
    return LweCiphertext(c1, c2)


def lwe_enc_many(pks, msgs, rng: np.random.Generator) -> list[LweCiphertext]:
    """Row i of ``msgs`` under ``pks[i]``, batched when the keys share one matrix."""
    msgs = np.asarray(msgs, dtype=np.int64)
    if not pks:
        return []
    a = pks[0].a
    if any(pk.a is not a for pk in pks):
        return [lwe_enc(pk, row, rng) for pk, row in zip(pks, msgs)]
    p = pks[0].params
    rows, width = msgs.shape
    r = rng.integers(0, 2, (rows, p.m, width)).astype(np.float64)
    c1 = np.einsum("nm,rmw->rnw", a.astype(np.float64), r, optimize=True).astype(np.int64) % p.q
    b = np.stack([pk.b for pk in pks]).astype(np.float64)
    c2 = (np.einsum("rm,rmw->rw", b, r).astype(np.int64) + msgs * (p.q // 2)) % p.q
    return [LweCiphertext(c1[i], c2[i]) for i in range(rows)]


def lwe_dec(sk: LweSecretKey, ct: LweCiphertext) -> np.ndarray:
    q = sk.params.q
    v = (ct.c2 - sk.s @ ct.c1) % q
    return (np.rint(2 * v / q).astype(np.int64) % 2).astype(np.uint8)


# ----------------------------------------------------------------------- QROM


@dataclass(eq=False)
class Qrom:
    """Lazily sampled random function on bit strings (classical queries only).

    Outputs are an unbounded stream per input; a query for k bits returns
    the first k bits of that stream, sampling more when needed, so layers
    asking for different lengths still see one consistent function.
    """

    seed: int | None = None
    out_bits: int = 2 * DEFAULT_LAMBDA
    _rng: np.random.Generator = field(init=False, repr=False)
    _table: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self._rng = np.random.default_rng(self.seed)

    def query(self, x, nbits: int | None = None) -> np.ndarray:
        nbits = self.out_bits if nbits is None else nbits
        x = np.asarray(x, dtype=np.uint8)
        key = (len(x), pack(x))
        got = self._table.get(key)
        if got is None or len(got) < nbits:
            have = 0 if got is None else len(got)
            extra = random_bits(nbits - have, self._rng)
            got = extra if got is None else np.concatenate([got, extra])
            self._table[key] = got
        return got[:nbits].copy()

    def query_many(self, xs, nbits: int | None = None) -> np.ndarray:
        """Row-wise queries; repeated rows agree, unseen rows are sampled in one draw."""
        nbits = self.out_bits if nbits is None else nbits
        xs = np.asarray(xs, dtype=np.uint8)
        packed = np.packbits(xs, axis=1)
        width = xs.shape[1]
        out = np.empty((len(xs), nbits), dtype=np.uint8)
        fresh: dict = {}
        for i, row in enumerate(packed):
            key = (width, row.tobytes())
            got = self._table.get(key)
            if got is not None and len(got) >= nbits:
                out[i] = got[:nbits]
            elif got is None:
                fresh.setdefault(key, []).append(i)
            else:
                out[i] = self.query(xs[i], nbits)
        if fresh:
            block = random_bits(len(fresh) * nbits, self._rng).reshape(len(fresh), nbits)
            for row, (key, idx) in zip(block, fresh.items()):
                self._table[key] = row
                out[idx] = row
        return out

    def __len__(self):
        return len(self._table)


def qrom_query(o: Qrom, x, nbits: int | None = None) -> np.ndarray:
    return o.query(x, nbits)


def monobit_z(bits) -> float:
    """Standardized excess of ones; |z| < 3 passes a 3-sigma frequency test."""
    bits = np.asarray(bits).ravel()
    n = len(bits)
    return (2 * int(bits.sum()) - n) / math.sqrt(n)
