"""Functional encryption: 1-bounded (garbled circuit + CE-PKE labels), adaptive, and q-bounded.

Quantum layouts (for twirls and Modify) concatenate components in a fixed
order.  fe1: the garbled rows, then the 2s label ciphertexts (i-major,
alpha-minor).  fead: the fe1 layout of the inner ciphertext.  feq: the fe1
layouts of instances 1..N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gf2
from .base import TOY_LWE, LweParams, Qrom, lwe_keygen_many, lwe_matrix
from .cd import (
    COMPACT_PROFILE,
    CeProfile,
    cd_vrfy_many,
    ce_dec_qrom_many,
    ce_del_qrom_many,
    ce_enc_qrom_many,
    modify_layout,
    twirl_layout,
)
from .field import IRREDUCIBLE, gf, interpolate_at, random_poly_with_constant
from .garble import (
    FunctionFamily,
    GarbledCircuit,
    LinearFunction,
    LinearGf2kFamily,
    gc_eval,
    gc_grbl,
    gc_samp,
)
from .rnce import RnceCiphertext, rnce_dec, rnce_del, rnce_enc, rnce_keygen, rnce_setup, rnce_vrfy


class FeError(ValueError):
    pass


def _oracle(oracle, rng) -> Qrom:
    return oracle if oracle is not None else Qrom(seed=int(rng.integers(2**63)))


# -------------------------------------------------------------- 1-bounded


@dataclass(frozen=True, eq=False)
class Fe1Mpk:
    family: FunctionFamily
    keys: tuple  # 2s LWE public keys, index 2*i + alpha
    oracle: Qrom
    profile: CeProfile


@dataclass(frozen=True, eq=False)
class Fe1Msk:
    family: FunctionFamily
    keys: tuple


@dataclass(frozen=True, eq=False)
class Fe1Sk:
    f: object
    fbits: np.ndarray
    keys: tuple  # s secret keys, for columns fbits[i]


@dataclass(eq=False)
class Fe1Ciphertext:
    gc: GarbledCircuit
    labels: tuple  # 2s CE-PKE bundles

    def registers(self) -> list:
        return self.gc.registers() + [b.quantum for b in self.labels]

    @property
    def vk(self) -> tuple:
        return self.gc.vk + tuple(b.vk for b in self.labels)

    @property
    def quantum_size(self) -> int:
        return sum(r.n for r in self.registers())


def fe1_setup(family: FunctionFamily, rng: np.random.Generator, oracle: Qrom | None = None,
              params: LweParams = TOY_LWE, profile: CeProfile = COMPACT_PROFILE):
    params.check()
    a = lwe_matrix(params, rng)
    pairs = lwe_keygen_many(params, 2 * family.key_bits, rng, matrix=a)
    mpk = Fe1Mpk(family, tuple(p[0] for p in pairs), _oracle(oracle, rng), profile)
    return mpk, Fe1Msk(family, tuple(p[1] for p in pairs))


def fe1_keygen(msk: Fe1Msk, f) -> Fe1Sk:
    fbits = msk.family.encode_key(f)
    return Fe1Sk(f, fbits, tuple(msk.keys[2 * i + int(b)] for i, b in enumerate(fbits)))


def fe1_enc(mpk: Fe1Mpk, m, rng: np.random.Generator):
    """(vk, ct): garble U(., m) and encrypt both labels of every key wire."""
    circuit = mpk.family.hardwire(m)
    labels = gc_samp(circuit.n, rng, mpk.profile.lam)
    gc, _ = gc_grbl(circuit, labels, rng, mpk.oracle, mpk.profile)
    label_cts = ce_enc_qrom_many(mpk.keys, labels.keys.reshape(-1, labels.keys.shape[-1]),
                                 mpk.oracle, rng, mpk.profile)
    ct = Fe1Ciphertext(gc, tuple(label_cts))
    return ct.vk, ct


def fe1_dec(sk: Fe1Sk, ct: Fe1Ciphertext, oracle: Qrom, rng=None) -> np.ndarray | None:
    s = len(sk.fbits)
    if len(ct.labels) != 2 * s:
        raise FeError("ciphertext and key disagree on the key length")
    chosen = [ct.labels[2 * i + int(b)] for i, b in enumerate(sk.fbits)]
    labels = ce_dec_qrom_many(list(sk.keys), chosen, oracle, rng)
    if any(lab is None for lab in labels):
        return None
    return gc_eval(ct.gc, np.stack(labels), rng)


def fe1_del(ct: Fe1Ciphertext, rng: np.random.Generator) -> list:
    return ce_del_qrom_many(list(ct.gc.rows) + list(ct.labels), rng)


def fe1_vrfy(vk, cert) -> bool:
    return cd_vrfy_many(list(vk), list(cert))


def fe1_modify(a, c, cert) -> list:
    return modify_layout(a, c, cert)


def fe1_twirl(ct: Fe1Ciphertext, a, c) -> None:
    """Z^c X^a on the whole quantum layout."""
    twirl_layout(ct.registers(), a, c)


def fe1_quantum_size(family: FunctionFamily, profile: CeProfile, rng=None) -> int:
    """Qubits in an fe1 ciphertext; fixed because U(., m) has an m-independent shape."""
    rng = rng if rng is not None else np.random.default_rng(0)
    circuit = family.hardwire(family.random_message(rng))
    per = profile.quantum_size(profile.lam)
    return (8 * circuit.q + 2 * family.key_bits) * per


# --------------------------------------------------------------- adaptive


@dataclass(frozen=True, eq=False)
class FeadMpk:
    nad: Fe1Mpk
    nce: object
    size: int  # inner quantum size n; RNCE carries 2n bits


@dataclass(frozen=True, eq=False)
class FeadMsk:
    nad: Fe1Msk
    nce: object


@dataclass(frozen=True, eq=False)
class FeadSk:
    nad: Fe1Sk
    nce: object


@dataclass(eq=False)
class FeadCiphertext:
    nad: Fe1Ciphertext
    nce: RnceCiphertext


@dataclass(frozen=True, eq=False)
class FeadVk:
    nad: tuple
    nce: tuple
    a: np.ndarray
    c: np.ndarray


def fead_setup(family: FunctionFamily, rng: np.random.Generator, oracle: Qrom | None = None,
               params: LweParams = TOY_LWE, profile: CeProfile = COMPACT_PROFILE):
    oracle = _oracle(oracle, rng)
    nad_mpk, nad_msk = fe1_setup(family, rng, oracle, params, profile)
    size = fe1_quantum_size(family, profile)
    nce_pk, nce_msk = rnce_setup(2 * size, rng, oracle, params, profile)
    return FeadMpk(nad_mpk, nce_pk, size), FeadMsk(nad_msk, nce_msk)


def fead_keygen(msk: FeadMsk, f, rng: np.random.Generator) -> FeadSk:
    return FeadSk(fe1_keygen(msk.nad, f), rnce_keygen(msk.nce, rng))


def fead_enc(mpk: FeadMpk, m, rng: np.random.Generator, twirl=None):
    """(vk, ct).  ``twirl`` fixes (a, c) instead of sampling them (tests only)."""
    nad_vk, nad_ct = fe1_enc(mpk.nad, m, rng)
    if nad_ct.quantum_size != mpk.size:
        raise FeError("inner ciphertext size differs from the setup's")
    if twirl is None:
        a = rng.integers(0, 2, mpk.size, dtype=np.uint8)
        c = rng.integers(0, 2, mpk.size, dtype=np.uint8)
    else:
        a, c = (gf2.as_bits(t) for t in twirl)
    fe1_twirl(nad_ct, a, c)
    nce_vk, nce_ct = rnce_enc(mpk.nce, np.concatenate([a, c]), rng)
    return FeadVk(nad_vk, nce_vk, a, c), FeadCiphertext(nad_ct, nce_ct)


def fead_dec(sk: FeadSk, ct: FeadCiphertext, oracle: Qrom, rng=None) -> np.ndarray | None:
    """Untwirl with the RNCE-recovered masks, decrypt, then restore the twirl."""
    ac = rnce_dec(sk.nce, ct.nce, oracle)
    if ac is None:
        return None
    n = len(ac) // 2
    a, c = ac[:n], ac[n:]
    fe1_twirl(ct.nad, a, c)
    try:
        return fe1_dec(sk.nad, ct.nad, oracle, rng)
    finally:
        fe1_twirl(ct.nad, a, c)


def fead_del(ct: FeadCiphertext, rng: np.random.Generator):
    return fe1_del(ct.nad, rng), rnce_del(ct.nce, rng)


def fead_vrfy(vk: FeadVk, cert) -> bool:
    nad_cert, nce_cert = cert
    if not rnce_vrfy(vk.nce, nce_cert):
        return False
    return fe1_vrfy(vk.nad, fe1_modify(vk.a, vk.c, nad_cert))


# -------------------------------------------------------------- q-bounded


def _next_pow2(x: int) -> int:
    return 1 << max(0, math.ceil(math.log2(max(1, x))))


@dataclass(frozen=True)
class FeqParams:
    q: int
    lam: int
    D: int
    l: int
    t: int
    N: int
    v: int
    S: int
    k: int

    @property
    def gamma_size(self) -> int:
        return self.t * self.D + 1

    def validate(self) -> None:
        if min(self.q, self.lam, self.D, self.l, self.t, self.N, self.v, self.S) < 1:
            raise FeError("all feq parameters must be positive")
        if self.k not in IRREDUCIBLE:
            raise FeError(f"no field GF(2^{self.k}) available")
        if (1 << self.k) <= self.N:
            raise FeError(f"field too small: 2^{self.k} <= N = {self.N}")
        if self.gamma_size > self.N:
            raise FeError(f"|Gamma| = tD+1 = {self.gamma_size} exceeds N = {self.N}")
        if self.v > self.S:
            raise FeError(f"v = {self.v} exceeds S = {self.S}")

    @classmethod
    def derive(cls, q: int, lam: int, D: int, l: int, **overrides) -> "FeqParams":
        """Concrete constants for the asymptotic regime; every field may be overridden."""
        t = overrides.pop("t", q * q * lam)
        N = overrides.pop("N", max(_next_pow2(D * D * q * q * t), _next_pow2(t * D + 1)))
        v = overrides.pop("v", lam)
        S = overrides.pop("S", 4 * v * q * q)
        k = overrides.pop("k", max(2, N.bit_length()))
        if overrides:
            raise FeError(f"unknown overrides {sorted(overrides)}")
        p = cls(q, lam, D, l, t, N, v, S, k)
        p.validate()
        return p

    @classmethod
    def desk(cls) -> "FeqParams":
        p = cls(q=1, lam=2, D=2, l=2, t=2, N=16, v=4, S=16, k=6)
        p.validate()
        return p

    @classmethod
    def parse(cls, text: str) -> "FeqParams":
        vals = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or key.strip() not in cls.__dataclass_fields__:
                raise FeError(f"bad feq parameter line {line!r}")
            vals[key.strip()] = int(value)
        missing = set(cls.__dataclass_fields__) - set(vals)
        if missing:
            raise FeError(f"missing feq parameters {sorted(missing)}")
        p = cls(**vals)
        p.validate()
        return p

    def dump(self) -> str:
        return "".join(f"{k}={getattr(self, k)}\n" for k in self.__dataclass_fields__)

    def family(self) -> LinearGf2kFamily:
        return LinearGf2kFamily(self.l, self.D, self.S, self.k)


@dataclass(frozen=True, eq=False)
class FeqMpk:
    params: FeqParams
    family: LinearGf2kFamily
    instances: tuple  # N Fe1Mpk
    oracle: Qrom


@dataclass(frozen=True, eq=False)
class FeqMsk:
    params: FeqParams
    instances: tuple


@dataclass(frozen=True, eq=False)
class FeqKey:
    coeffs: tuple
    gamma: tuple  # 1-based instance indices
    delta: tuple  # 0-based pad indices
    keys: dict  # index in gamma -> Fe1Sk
    k: int  # field degree


@dataclass(eq=False)
class FeqCiphertext:
    instances: tuple  # N Fe1Ciphertext

    def registers(self) -> list:
        return [r for ct in self.instances for r in ct.registers()]


def feq_setup(params: FeqParams, rng: np.random.Generator, oracle: Qrom | None = None,
              lwe: LweParams = TOY_LWE, profile: CeProfile = COMPACT_PROFILE):
    params.validate()
    family = params.family()
    oracle = _oracle(oracle, rng)
    pairs = [fe1_setup(family, rng, oracle, lwe, profile) for _ in range(params.N)]
    mpk = FeqMpk(params, family, tuple(p[0] for p in pairs), oracle)
    return mpk, FeqMsk(params, tuple(p[1] for p in pairs))


def _subset(rng, universe: int, size: int, offset: int) -> tuple[int, ...]:
    return tuple(sorted(int(i) + offset for i in rng.choice(universe, size, replace=False)))


def feq_keygen(msk: FeqMsk, coeffs, rng: np.random.Generator, gamma=None, delta=None) -> FeqKey:
    """Key for C (graded-lex coefficients).  ``gamma``/``delta`` pin the random sets (tests)."""
    p = msk.params
    gamma = _subset(rng, p.N, p.gamma_size, 1) if gamma is None else tuple(sorted(gamma))
    delta = _subset(rng, p.S, p.v, 0) if delta is None else tuple(sorted(delta))
    if len(gamma) < p.gamma_size or len(set(gamma)) != len(gamma) or not set(gamma) <= set(range(1, p.N + 1)):
        raise FeError(f"Gamma must be at least {p.gamma_size} distinct indices in [1, {p.N}]")
    g = LinearFunction(tuple(int(c) for c in coeffs), delta)
    keys = {i: fe1_keygen(msk.instances[i - 1], g) for i in gamma}
    return FeqKey(g.coeffs, gamma, delta, keys, p.k)


def feq_enc(mpk: FeqMpk, x, rng: np.random.Generator):
    p = mpk.params
    F = gf(p.k)
    x = [F.check(int(v)) for v in x]
    if len(x) != p.l:
        raise FeError(f"input must hold {p.l} field elements")
    mus = [random_poly_with_constant(v, p.t, rng, F) for v in x]
    xis = [random_poly_with_constant(0, p.D * p.t, rng, F) for _ in range(p.S)]
    vks, cts = [], []
    for i in range(1, p.N + 1):
        vk, ct = fe1_enc(mpk.instances[i - 1], [mu(i) for mu in mus] + [xi(i) for xi in xis], rng)
        vks.append(vk)
        cts.append(ct)
    return tuple(vks), FeqCiphertext(tuple(cts))


def feq_eta(sk: FeqKey, ct: FeqCiphertext, oracle: Qrom, rng=None) -> dict | None:
    """eta(i) for every i in Gamma, or None if some instance fails."""
    F = gf(sk.k)
    out = {}
    for i in sk.gamma:
        bits = fe1_dec(sk.keys[i], ct.instances[i - 1], oracle, rng)
        if bits is None:
            return None
        out[i] = F.from_bits(bits)
    return out


def feq_dec(sk: FeqKey, ct: FeqCiphertext, oracle: Qrom, rng=None) -> int | None:
    eta = feq_eta(sk, ct, oracle, rng)
    if eta is None:
        return None
    return interpolate_at(sorted(eta.items()), 0, gf(sk.k))


def feq_del(ct: FeqCiphertext, rng: np.random.Generator) -> list:
    return [fe1_del(c, rng) for c in ct.instances]


def feq_vrfy(vk, cert) -> bool:
    if len(vk) != len(cert):
        return False
    return all(fe1_vrfy(v, c) for v, c in zip(vk, cert))


def feq_twirl(ct: FeqCiphertext, a, c) -> None:
    twirl_layout(ct.registers(), a, c)


def feq_modify(a, c, cert) -> list:
    flat = [comp for inst in cert for comp in inst]
    fixed = modify_layout(a, c, flat)
    out, off = [], 0
    for inst in cert:
        out.append(fixed[off:off + len(inst)])
        off += len(inst)
    return out


@dataclass(frozen=True)
class Estimate:
    hits: int
    trials: int
    low: float
    high: float

    @property
    def rate(self) -> float:
        return self.hits / self.trials


def binomial_interval(hits: int, trials: int, level: float = 0.95) -> Estimate:
    from scipy.stats import binomtest

    ci = binomtest(hits, trials).proportion_ci(confidence_level=level, method="wilson")
    return Estimate(hits, trials, float(ci.low), float(ci.high))


def feq_collision_diag(params: FeqParams, trials: int, rng: np.random.Generator,
                       level: float = 0.95) -> tuple[Estimate, Estimate]:
    """Monte Carlo rates of the two bad events over q honestly sampled keys.

    Event 1: the pairwise Gamma intersections jointly cover more than t indices.
    Event 2: some Delta_i lies inside the union of the other Deltas.
    """
    if trials < 1000:
        raise FeError("use at least 1000 trials")
    over = cover = 0
    for _ in range(trials):
        gammas = [set(_subset(rng, params.N, params.gamma_size, 1)) for _ in range(params.q)]
        deltas = [set(_subset(rng, params.S, params.v, 0)) for _ in range(params.q)]
        union = set()
        for i in range(params.q):
            for j in range(i + 1, params.q):
                union |= gammas[i] & gammas[j]
        over += len(union) > params.t
        if params.q > 1:
            cover += any(
                deltas[i] <= set().union(*(deltas[j] for j in range(params.q) if j != i))
                for i in range(params.q)
            )
    return binomial_interval(over, trials, level), binomial_interval(cover, trials, level)
