"""Receiver non-committing encryption with certified deletion, one CE-PKE pair per message bit.

Component order everywhere (public keys, ciphertexts, verification keys,
certificates) is i-major, alpha-minor: index ``2*i + alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .base import TOY_LWE, LweParams, Qrom, lwe_keygen_many, lwe_matrix
from .cd import (
    COMPACT_PROFILE,
    CeBundle,
    CeProfile,
    cd_vrfy_many,
    ce_dec_qrom_many,
    ce_del_qrom_many,
    ce_enc_qrom_many,
    modify_layout,
)


class RnceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RncePk:
    keys: tuple  # 2n LWE public keys
    oracle: Qrom
    profile: CeProfile

    @property
    def n(self) -> int:
        return len(self.keys) // 2


@dataclass(frozen=True, eq=False)
class RnceMsk:
    keys: tuple  # 2n LWE secret keys


@dataclass(frozen=True, eq=False)
class RnceSk:
    x: np.ndarray
    keys: tuple  # n secret keys, keys[i] for column x[i]


@dataclass(frozen=True, eq=False)
class RnceAux:
    x_star: np.ndarray


@dataclass(eq=False)
class RnceCiphertext:
    bundles: tuple  # 2n CE-PKE bundles

    @property
    def vk(self) -> tuple:
        return tuple(b.vk for b in self.bundles)

    def registers(self) -> list:
        return [b.quantum for b in self.bundles]


def rnce_setup(n: int, rng: np.random.Generator, oracle: Qrom | None = None,
               params: LweParams = TOY_LWE, profile: CeProfile = COMPACT_PROFILE):
    """(pk, msk): 2n independent CE-PKE key pairs over one shared LWE matrix."""
    if n <= 0:
        raise RnceError("message length must be positive")
    params.check()
    a = lwe_matrix(params, rng)
    pairs = lwe_keygen_many(params, 2 * n, rng, matrix=a)
    oracle = oracle if oracle is not None else Qrom(seed=int(rng.integers(2**63)))
    pk = RncePk(tuple(p[0] for p in pairs), oracle, profile)
    return pk, RnceMsk(tuple(p[1] for p in pairs))


def rnce_keygen(msk: RnceMsk, rng: np.random.Generator) -> RnceSk:
    n = len(msk.keys) // 2
    x = rng.integers(0, 2, n, dtype=np.uint8)
    return RnceSk(x, tuple(msk.keys[2 * i + int(x[i])] for i in range(n)))


def _encrypt_grid(pk: RncePk, bits, rng) -> RnceCiphertext:
    bundles = ce_enc_qrom_many(pk.keys, np.asarray(bits, np.uint8).reshape(-1, 1), pk.oracle, rng, pk.profile)
    return RnceCiphertext(tuple(bundles))


def rnce_enc(pk: RncePk, m, rng: np.random.Generator):
    """(vk, ct): both columns of row i encrypt m[i]."""
    m = gf2.as_bits(m)
    if len(m) != pk.n:
        raise RnceError(f"message has {len(m)} bits, key expects {pk.n}")
    ct = _encrypt_grid(pk, np.repeat(m, 2), rng)
    return ct.vk, ct


def rnce_dec(sk: RnceSk, ct: RnceCiphertext, oracle: Qrom) -> np.ndarray | None:
    n = len(sk.x)
    if len(ct.bundles) != 2 * n:
        raise RnceError("ciphertext and key sizes differ")
    chosen = [ct.bundles[2 * i + int(sk.x[i])] for i in range(n)]
    got = ce_dec_qrom_many(list(sk.keys), chosen, oracle)
    if any(g is None for g in got):
        return None
    return np.concatenate(got).astype(np.uint8)


def rnce_del(ct: RnceCiphertext, rng: np.random.Generator) -> list:
    return ce_del_qrom_many(list(ct.bundles), rng)


def rnce_vrfy(vk, cert) -> bool:
    return cd_vrfy_many(list(vk), list(cert))


def rnce_modify(a, b, cert) -> list:
    return modify_layout(a, b, cert)


def rnce_fake(pk: RncePk, rng: np.random.Generator):
    """(vk, fake ct, aux): column x*[i] encrypts 0 and the other column 1."""
    x_star = rng.integers(0, 2, pk.n, dtype=np.uint8)
    bits = np.empty(2 * pk.n, dtype=np.uint8)
    bits[0::2] = x_star  # column 0 holds 0 iff x*[i] = 0
    bits[1::2] = x_star ^ 1
    ct = _encrypt_grid(pk, bits, rng)
    return ct.vk, ct, RnceAux(x_star)


def rnce_reveal(pk: RncePk, msk: RnceMsk, aux: RnceAux, m) -> RnceSk:
    m = gf2.as_bits(m)
    if len(aux.x_star) != pk.n or len(msk.keys) != 2 * pk.n:
        raise RnceError("aux, msk and pk sizes disagree")
    if len(m) != pk.n:
        raise RnceError(f"message has {len(m)} bits, key expects {pk.n}")
    sel = aux.x_star ^ m
    return RnceSk(sel, tuple(msk.keys[2 * i + int(sel[i])] for i in range(pk.n)))


def rnce_bundles(ct: RnceCiphertext) -> list[CeBundle]:
    return list(ct.bundles)
