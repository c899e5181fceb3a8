"""Certified deletion: the one-time BB84 layer and the two certified-everlasting wrappers.

Three layers live here:

* OT-CD SKE (``cd_*``): BB84 states under a fixed-weight basis mask.
* The oracle wrapper (``ce_*_qrom``): h = H(R) xor cd.sk, R encrypted by a
  classical backend (tagged SKE key or LWE public key).
* The CSS wrapper (``ce_*_css``): coset states of a CSS pair, with the
  quantum register itself serving as the deletion certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2, qsim
from .base import (
    DEFAULT_LAMBDA,
    LweCiphertext,
    LwePublicKey,
    LweSecretKey,
    Qrom,
    SkeCiphertext,
    lwe_dec,
    lwe_enc,
    lwe_enc_many,
    random_bits,
    ske_dec,
    ske_dec_many,
    ske_enc,
    ske_enc_many,
)
from .qsim import COMPUTATIONAL, HADAMARD, PauliMask, QuantumRegister, QubitPermutation


class CdError(ValueError):
    pass


# Honest decryption measures deterministic outcomes, so this generator is
# only consulted when a caller feeds in a tampered or mismatched state.
_FALLBACK_RNG = np.random.default_rng()


def _rng(rng):
    return rng if rng is not None else _FALLBACK_RNG


# ---------------------------------------------------------------------- OT-CD


@dataclass(frozen=True, eq=False)
class CdKey:
    """Basis mask theta (weight w) and payload r, both n bits."""

    theta: np.ndarray
    r: np.ndarray

    @property
    def n(self) -> int:
        return len(self.theta)

    @property
    def w(self) -> int:
        return int(self.theta.sum())

    @property
    def message_bits(self) -> int:
        return self.n - self.w

    def to_bits(self) -> np.ndarray:
        return np.concatenate([self.theta, self.r])

    @classmethod
    def from_bits(cls, bits) -> "CdKey":
        bits = gf2.as_bits(bits)
        n = len(bits) // 2
        return cls(bits[:n].copy(), bits[n:].copy())


def _fixed_weight(rows: int, n: int, w: int, rng) -> np.ndarray:
    if not 0 <= w <= n:
        raise CdError(f"weight {w} outside [0, {n}]")
    pos = np.argsort(rng.random((rows, n)), axis=1)[:, :w]
    out = np.zeros((rows, n), dtype=np.uint8)
    np.put_along_axis(out, pos, 1, axis=1)
    return out


def cd_keygen(n: int, w: int, rng: np.random.Generator) -> CdKey:
    theta = _fixed_weight(1, n, w, rng)[0]
    return CdKey(theta, random_bits(n, rng))


def _cd_payload(theta, r, m):
    bits = r.copy()
    bits[theta == 0] ^= m
    return bits


def cd_enc(key: CdKey, m) -> QuantumRegister:
    m = gf2.as_bits(m)
    if len(m) != key.message_bits:
        raise CdError(f"message has {len(m)} bits, key expects {key.message_bits}")
    return qsim.prepare_bb84(_cd_payload(key.theta, key.r, m), key.theta)


def cd_dec(key: CdKey, reg: QuantumRegister, rng=None) -> np.ndarray:
    if reg.n != key.n:
        raise CdError("register size does not match key")
    comp = np.flatnonzero(key.theta == 0)
    return qsim.measure(reg, comp, COMPUTATIONAL, _rng(rng)) ^ key.r[comp]


def cd_del(reg: QuantumRegister, rng: np.random.Generator) -> np.ndarray:
    """Measure every qubit in the Hadamard basis; the register is gone afterwards."""
    cert = qsim.measure_all(reg, HADAMARD, rng)
    reg.consume()
    return cert


def cd_vrfy(key: CdKey, cert) -> bool:
    cert = gf2.as_bits(cert)
    if len(cert) != key.n:
        return False
    had = key.theta == 1
    return bool(np.array_equal(cert[had], key.r[had]))


def cd_vrfy_many(keys, certs) -> bool:
    """Conjunction of :func:`cd_vrfy` over matching lists, in one vectorized pass."""
    if len(keys) != len(certs):
        return False
    if not keys:
        return True
    if any(len(c) != k.n for k, c in zip(keys, certs)):
        return False
    theta = np.concatenate([k.theta for k in keys])
    r = np.concatenate([k.r for k in keys])
    cert = np.concatenate([np.asarray(c, dtype=np.uint8) for c in certs]) & 1
    had = theta == 1
    return bool(np.array_equal(cert[had], r[had]))


def cd_modify(a, b, cert) -> np.ndarray:
    """Undo a twirl Z^b X^a on a Hadamard-basis certificate: X is invisible, Z flips."""
    cert = gf2.as_bits(cert)
    b = gf2.as_bits(b)
    if len(b) != len(cert) or len(gf2.as_bits(a)) != len(cert):
        raise CdError("mask length does not match certificate")
    return cert ^ b


def measure_all_attack(reg: QuantumRegister, rng: np.random.Generator) -> None:
    """The adversary of the detection experiments: collapse every qubit computationally."""
    qsim.measure_all(reg, COMPUTATIONAL, rng)


def twirl(reg: QuantumRegister, a, b) -> None:
    """Z^b X^a (.) X^a Z^b on the register."""
    qsim.apply_pauli(reg, PauliMask(a, b))


# ------------------------------------------------------------ shared bundle


@dataclass(frozen=True)
class CeProfile:
    """Size knobs of the oracle variant: |R| = lam and w check positions per instance."""

    lam: int = DEFAULT_LAMBDA
    w: int = DEFAULT_LAMBDA

    def quantum_size(self, message_bits: int) -> int:
        return message_bits + self.w


DESK_PROFILE = CeProfile()
# Used inside the composite schemes, which create thousands of bundles.
COMPACT_PROFILE = CeProfile(lam=32, w=8)
# For the adaptive FE layer, whose RNCE part grows with the whole inner ciphertext.
TINY_PROFILE = CeProfile(lam=16, w=4)


@dataclass(eq=False)
class CeBundle:
    """(classical part, quantum register, verification key) of one encryption."""

    classical: object
    quantum: QuantumRegister
    vk: object
    variant: str

    @property
    def quantum_size(self) -> int:
        return self.quantum.n


def _backend_enc(backend, bits, rng):
    if isinstance(backend, LwePublicKey):
        return lwe_enc(backend, bits, rng)
    return ske_enc(np.asarray(backend, dtype=np.uint8), bits, rng)


def _backend_dec(key, ct):
    if isinstance(ct, LweCiphertext):
        if not isinstance(key, LweSecretKey):
            raise TypeError("LWE ciphertext needs an LWE secret key")
        return lwe_dec(key, ct)
    if isinstance(ct, SkeCiphertext):
        if isinstance(key, (LweSecretKey, LwePublicKey)):
            raise TypeError("SKE ciphertext needs an SKE key")
        return ske_dec(np.asarray(key, dtype=np.uint8), ct)
    raise TypeError(f"unknown backend ciphertext {type(ct).__name__}")


# ----------------------------------------------------------- oracle variant


@dataclass(frozen=True, eq=False)
class QromPart:
    h: np.ndarray
    backend_ct: object
    w: int


def ce_enc_qrom(backend, m, oracle: Qrom, rng: np.random.Generator,
                profile: CeProfile = DESK_PROFILE) -> CeBundle:
    m = gf2.as_bits(m)
    cdk = cd_keygen(profile.quantum_size(len(m)), profile.w, rng)
    big_r = random_bits(profile.lam, rng)
    h = oracle.query(big_r, 2 * cdk.n) ^ cdk.to_bits()
    part = QromPart(h, _backend_enc(backend, big_r, rng), profile.w)
    return CeBundle(part, cd_enc(cdk, m), cdk, "qrom")


def ce_enc_qrom_many(backends, msgs, oracle: Qrom, rng: np.random.Generator,
                     profile: CeProfile = DESK_PROFILE) -> list[CeBundle]:
    """Row i of ``msgs`` under ``backends[i]`` (SKE keys as rows, or LWE public keys)."""
    msgs = gf2.as_bits(msgs)
    rows, mlen = msgs.shape
    if rows == 0:
        return []
    n = profile.quantum_size(mlen)
    theta = _fixed_weight(rows, n, profile.w, rng)
    r = rng.integers(0, 2, (rows, n), dtype=np.uint8)
    big_r = rng.integers(0, 2, (rows, profile.lam), dtype=np.uint8)
    h = oracle.query_many(big_r, 2 * n) ^ np.concatenate([theta, r], axis=1)
    if isinstance(backends[0], LwePublicKey):
        cts = lwe_enc_many(list(backends), big_r, rng)
    else:
        cts = ske_enc_many(np.asarray(backends, dtype=np.uint8), big_r, rng)
    payload = r.copy()
    payload[theta == 0] ^= msgs.ravel()
    regs = qsim.prepare_bb84_batch(payload, theta)
    return [
        CeBundle(QromPart(h[i], cts[i], profile.w), regs[i], CdKey(theta[i], r[i]), "qrom")
        for i in range(rows)
    ]


def ce_dec_qrom(key, bundle: CeBundle, oracle: Qrom, rng=None) -> np.ndarray | None:
    """Plaintext, or None when the backend rejects or the recovered key is malformed."""
    part: QromPart = bundle.classical
    big_r = _backend_dec(key, part.backend_ct)
    if big_r is None:
        return None
    cdk = CdKey.from_bits(oracle.query(big_r, len(part.h)) ^ part.h)
    if cdk.w != part.w or cdk.n != bundle.quantum.n:
        return None
    return cd_dec(cdk, bundle.quantum, rng)


def ce_dec_qrom_many(keys, bundles, oracle: Qrom, rng=None) -> list:
    """Batched :func:`ce_dec_qrom`; entry i is the plaintext or None."""
    if not bundles:
        return []
    parts = [b.classical for b in bundles]
    cts = [p.backend_ct for p in parts]
    if all(isinstance(c, LweCiphertext) for c in cts) and len({c.c1.shape for c in cts}) == 1:
        q = keys[0].params.q
        s = np.stack([k.s for k in keys])
        c1 = np.stack([c.c1 for c in cts])
        c2 = np.stack([c.c2 for c in cts])
        v = (c2 - np.einsum("rn,rnw->rw", s, c1)) % q
        rs = list((np.rint(2 * v / q).astype(np.int64) % 2).astype(np.uint8))
    elif all(isinstance(c, SkeCiphertext) for c in cts) and len({len(c.body) for c in cts}) == 1 \
            and not any(isinstance(k, (LweSecretKey, LwePublicKey)) for k in keys):
        rs = ske_dec_many(np.asarray(keys, dtype=np.uint8), cts)
    else:
        rs = [_backend_dec(k, c) for k, c in zip(keys, cts)]
    out: list = [None] * len(bundles)
    live = [i for i, r in enumerate(rs) if r is not None]
    if not live:
        return out
    widths = {len(parts[i].h) for i in live}
    regs, pos, cdks = [], [], []
    for width in widths:
        idx = [i for i in live if len(parts[i].h) == width]
        got = oracle.query_many(np.stack([rs[i] for i in idx]), width)
        for row, i in zip(got, idx):
            cdk = CdKey.from_bits(row ^ parts[i].h)
            if cdk.w != parts[i].w or cdk.n != bundles[i].quantum.n:
                continue
            regs.append(i)
            pos.append(np.flatnonzero(cdk.theta == 0))
            cdks.append(cdk)
    res = qsim.measure_many([bundles[i].quantum for i in regs], pos, [COMPUTATIONAL] * len(regs), _rng(rng))
    for i, p_, cdk, val in zip(regs, pos, cdks, res):
        out[i] = val ^ cdk.r[p_]
    return out


def ce_del_qrom_many(bundles, rng: np.random.Generator) -> list[np.ndarray]:
    regs = [b.quantum for b in bundles]
    certs = qsim.measure_many(regs, [np.arange(r.n) for r in regs], [HADAMARD] * len(regs), rng)
    for r in regs:
        r.consume()
    return certs


def ce_del_qrom(bundle: CeBundle, rng: np.random.Generator) -> np.ndarray:
    return cd_del(bundle.quantum, rng)


def ce_vrfy_qrom(vk: CdKey, cert) -> bool:
    return cd_vrfy(vk, cert)


def ce_modify_qrom(a, b, cert) -> np.ndarray:
    return cd_modify(a, b, cert)


# -------------------------------------------------------------- CSS variant


@dataclass(frozen=True, eq=False)
class CssVk:
    basis: np.ndarray  # B, p bits
    subset: tuple[int, ...]  # Q, sorted, size p
    r: np.ndarray  # p bits


@dataclass(frozen=True, eq=False)
class CssPart:
    backend_ct: object
    u: np.ndarray
    h: np.ndarray


@dataclass(frozen=True, eq=False)
class CssCiphertext:
    pair: gf2.CssPair
    p: int
    parts: tuple[CssPart, ...]

    @property
    def block(self) -> int:
        return self.p + self.pair.q


def _pack_css_secret(basis, subset, r, y, total):
    ind = np.zeros(total, dtype=np.uint8)
    ind[list(subset)] = 1
    return np.concatenate([basis, ind, r, y])


def _unpack_css_secret(bits, p, q):
    basis = bits[:p]
    ind = bits[p:2 * p + q]
    r = bits[2 * p + q:3 * p + q]
    y = bits[3 * p + q:]
    return basis, tuple(np.flatnonzero(ind).tolist()), r, y


def _block_permutation(subsets, block: int, inverse: bool) -> QubitPermutation:
    image = []
    for i, sub in enumerate(subsets):
        perm = QubitPermutation.front_loading(sub, block)
        if inverse:
            perm = perm.inverse()
        image.extend(i * block + j for j in perm.image)
    return QubitPermutation(tuple(image))


def ce_enc_css(backend, pair: gf2.CssPair, p: int, m, rng: np.random.Generator) -> CeBundle:
    """Encrypt m, split into (k1-k2)-bit chunks, one coset-state instance per chunk."""
    m = gf2.as_bits(m)
    k = pair.message_bits
    if len(m) == 0 or len(m) % k:
        raise CdError(f"message length must be a positive multiple of {k}")
    q = pair.q
    block = p + q
    bits, basis_all, subsets, parts, vks = [], [], [], [], []
    for chunk in m.reshape(-1, k):
        basis = random_bits(p, rng)
        subset = tuple(sorted(rng.choice(block, p, replace=False).tolist()))
        y = gf2.sample_coset_space(pair, "C1/C2", rng)
        u = gf2.sample_coset_space(pair, "F/C1", rng)
        r = random_bits(p, rng)
        x = gf2.sample_coset_space(pair, "C1/C2", rng)
        w = gf2.sample_coset_space(pair, "C2", rng)
        h = gf2.mod_c(pair.encode_message(chunk) ^ x ^ y, pair.c2)
        ct = _backend_enc(backend, _pack_css_secret(basis, subset, r, y, block), rng)
        bits.append(np.concatenate([r, x ^ w ^ u]))
        basis_all.append(np.concatenate([basis, np.zeros(q, np.uint8)]))
        subsets.append(subset)
        parts.append(CssPart(ct, u, h))
        vks.append(CssVk(basis, subset, r))
    reg = qsim.prepare_bb84(np.concatenate(bits), np.concatenate(basis_all))
    qsim.apply_permutation(reg, _block_permutation(subsets, block, inverse=True))
    return CeBundle(CssCiphertext(pair, p, tuple(parts)), reg, tuple(vks), "css")


def ce_dec_css(key, bundle: CeBundle, rng=None) -> np.ndarray | None:
    ct: CssCiphertext = bundle.classical
    pair, p, q, block = ct.pair, ct.p, ct.pair.q, ct.block
    if bundle.quantum.n != block * len(ct.parts):
        raise CdError("register size does not match ciphertext")
    out = []
    for i, part in enumerate(ct.parts):
        secret = _backend_dec(key, part.backend_ct)
        if secret is None:
            return None
        _, subset, _, y = _unpack_css_secret(secret, p, q)
        if len(subset) != p:
            return None
        view = bundle.quantum.view(i * block, (i + 1) * block)
        qsim.apply_permutation(view, QubitPermutation.front_loading(subset, block))
        gamma = qsim.measure(view, np.arange(p, block), COMPUTATIONAL, _rng(rng))
        x = gf2.mod_c(gamma ^ part.u, pair.c2)
        try:
            out.append(pair.decode_message(part.h ^ x ^ y))
        except gf2.CodeError:
            return None
    return np.concatenate(out)


def ce_del_css(bundle: CeBundle) -> QuantumRegister:
    """The certificate is the ciphertext register itself."""
    return bundle.quantum


def ce_vrfy_css(vk: tuple[CssVk, ...], cert: QuantumRegister, rng: np.random.Generator) -> bool:
    p = len(vk[0].basis)
    block = cert.n // len(vk)
    if block * len(vk) != cert.n:
        return False
    ok = True
    for i, v in enumerate(vk):
        view = cert.view(i * block, (i + 1) * block)
        qsim.apply_permutation(view, QubitPermutation.front_loading(v.subset, block))
        qsim.apply_hadamard_mask(view, np.concatenate([v.basis, np.zeros(block - p, np.uint8)]))
        got = qsim.measure(view, np.arange(p), COMPUTATIONAL, rng)
        ok &= bool(np.array_equal(got, v.r))
    cert.consume()
    return ok


def ce_modify_css(a, b, cert: QuantumRegister) -> QuantumRegister:
    """Re-apply X^a Z^b, cancelling a twirl by the same Paulis up to phase."""
    qsim.apply_pauli(cert, PauliMask(a, b))
    return cert


# ---------------------------------------------------------- layout routing


def layout_sizes(regs) -> list[int]:
    return [r.n for r in regs]


def twirl_layout(regs, a, b) -> None:
    """Apply Z^b X^a across a list of registers laid end to end."""
    a = gf2.as_bits(a)
    b = gf2.as_bits(b)
    total = sum(r.n for r in regs)
    if len(a) != total or len(b) != total:
        raise CdError(f"mask length {len(a)} != layout size {total}")
    off = 0
    for r in regs:
        if a[off:off + r.n].any() or b[off:off + r.n].any():
            qsim.apply_pauli(r, PauliMask(a[off:off + r.n], b[off:off + r.n]))
        off += r.n


def modify_layout(a, b, certs) -> list:
    """Slice global masks by component size and apply each component's Modify rule."""
    a = gf2.as_bits(a)
    b = gf2.as_bits(b)
    sizes = [c.n if isinstance(c, QuantumRegister) else len(c) for c in certs]
    if len(a) != sum(sizes) or len(b) != sum(sizes):
        raise CdError(f"mask length {len(a)} != certificate layout size {sum(sizes)}")
    out, off = [], 0
    for c, n in zip(certs, sizes):
        out.append(ce_modify(a[off:off + n], b[off:off + n], c))
        off += n
    return out


# ------------------------------------------------------ variant dispatchers


def ce_dec(key, bundle: CeBundle, oracle: Qrom | None = None, rng=None):
    if bundle.variant == "qrom":
        return ce_dec_qrom(key, bundle, oracle, rng)
    return ce_dec_css(key, bundle, rng)


def ce_del(bundle: CeBundle, rng: np.random.Generator):
    if bundle.variant == "qrom":
        return ce_del_qrom(bundle, rng)
    return ce_del_css(bundle)


def ce_vrfy(vk, cert, rng: np.random.Generator | None = None) -> bool:
    if isinstance(vk, CdKey):
        if isinstance(cert, QuantumRegister):
            return False
        return ce_vrfy_qrom(vk, cert)
    if not isinstance(cert, QuantumRegister) or not vk or not all(isinstance(v, CssVk) for v in vk):
        return False
    return ce_vrfy_css(vk, cert, _rng(rng))


def ce_modify(a, b, cert):
    if isinstance(cert, QuantumRegister):
        return ce_modify_css(a, b, cert)
    return ce_modify_qrom(a, b, cert)
