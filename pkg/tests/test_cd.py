from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cefe import cd, gf2, qsim
from cefe.base import LweParams, Qrom, TOY_LWE, lwe_keygen, random_bits, ske_keygen
from cefe.cd import CdKey, CdError

FAST = settings(max_examples=30, deadline=None)
STEANE = gf2.steane_pair()


# ------------------------------------------------------------------- OT-CD


def test_keygen_weight():
    rng = np.random.default_rng(0)
    for w in range(6):
        key = cd.cd_keygen(5, w, rng)
        assert key.w == w and key.message_bits == 5 - w
    with pytest.raises(CdError):
        cd.cd_keygen(3, 4, rng)


def test_otcd_exhaustive_small():
    rng = np.random.default_rng(1)
    for theta in product((0, 1), repeat=3):
        theta = np.array(theta, np.uint8)
        for r in product((0, 1), repeat=3):
            key = CdKey(theta, np.array(r, np.uint8))
            for m in product((0, 1), repeat=key.message_bits):
                reg = cd.cd_enc(key, m)
                assert cd.cd_dec(key, reg, rng).tolist() == list(m)
                assert cd.cd_dec(key, reg, rng).tolist() == list(m)
                reg = cd.cd_enc(key, m)
                assert cd.cd_vrfy(key, cd.cd_del(reg, rng))
                assert reg.consumed


@FAST
@given(st.integers(1, 20), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_otcd_flipped_check_bit_rejected(mlen, w, seed):
    rng = np.random.default_rng(seed)
    key = cd.cd_keygen(mlen + w, w, rng)
    cert = cd.cd_del(cd.cd_enc(key, random_bits(mlen, rng)), rng)
    bad = cert.copy()
    bad[np.flatnonzero(key.theta)[0]] ^= 1
    assert cd.cd_vrfy(key, cert) and not cd.cd_vrfy(key, bad)
    # Flipping a computational-basis position is invisible to Vrfy.
    if mlen:
        ok = cert.copy()
        ok[np.flatnonzero(key.theta == 0)[0]] ^= 1
        assert cd.cd_vrfy(key, ok)


def test_vrfy_length_mismatch():
    key = cd.cd_keygen(4, 2, np.random.default_rng(0))
    assert not cd.cd_vrfy(key, [0, 0, 0])
    assert not cd.cd_vrfy_many([key], [[0, 0, 0]])


def test_vrfy_many_conjunction():
    rng = np.random.default_rng(2)
    keys = [cd.cd_keygen(6, 3, rng) for _ in range(4)]
    certs = [cd.cd_del(cd.cd_enc(k, random_bits(3, rng)), rng) for k in keys]
    assert cd.cd_vrfy_many(keys, certs)
    certs[2] = certs[2].copy()
    certs[2][np.flatnonzero(keys[2].theta)[0]] ^= 1
    assert not cd.cd_vrfy_many(keys, certs)
    assert cd.cd_vrfy_many([], [])


def test_otcd_message_length_enforced():
    key = cd.cd_keygen(5, 2, np.random.default_rng(0))
    with pytest.raises(CdError):
        cd.cd_enc(key, [0, 1])


def test_dec_after_delete_refused():
    rng = np.random.default_rng(3)
    key = cd.cd_keygen(6, 2, rng)
    reg = cd.cd_enc(key, random_bits(4, rng))
    cd.cd_del(reg, rng)
    with pytest.raises(qsim.ConsumedRegisterError):
        cd.cd_dec(key, reg, rng)


def test_twirl_then_modify_verifies():
    rng = np.random.default_rng(4)
    for _ in range(50):
        key = cd.cd_keygen(12, 4, rng)
        reg = cd.cd_enc(key, random_bits(8, rng))
        a, b = random_bits(12, rng), random_bits(12, rng)
        cd.twirl(reg, a, b)
        assert cd.cd_vrfy(key, cd.cd_modify(a, b, cd.cd_del(reg, rng)))


def test_key_bits_roundtrip():
    key = cd.cd_keygen(7, 3, np.random.default_rng(5))
    again = CdKey.from_bits(key.to_bits())
    assert np.array_equal(again.theta, key.theta) and np.array_equal(again.r, key.r)


# ------------------------------------------------------- oracle wrapper


@pytest.fixture
def oracle():
    return Qrom(seed=99)


@pytest.mark.parametrize("backend", ["ske", "lwe"])
def test_ce_qrom_roundtrip(backend, oracle):
    rng = np.random.default_rng(6)
    ek, dk = (ske_keygen(rng),) * 2 if backend == "ske" else lwe_keygen(TOY_LWE, rng)
    for mlen in (1, 5, 16):
        m = random_bits(mlen, rng)
        bundle = cd.ce_enc_qrom(ek, m, oracle, rng, cd.COMPACT_PROFILE)
        assert bundle.quantum_size == mlen + cd.COMPACT_PROFILE.w
        assert np.array_equal(cd.ce_dec(dk, bundle, oracle, rng), m)
        assert np.array_equal(cd.ce_dec(dk, bundle, oracle, rng), m)
        assert cd.ce_vrfy(bundle.vk, cd.ce_del(bundle, rng))


def test_ce_qrom_special_correctness(oracle):
    rng = np.random.default_rng(7)
    key = ske_keygen(rng)
    for _ in range(50):
        bundle = cd.ce_enc_qrom(key, random_bits(8, rng), oracle, rng)
        assert cd.ce_dec(ske_keygen(rng), bundle, oracle, rng) is None


def test_ce_qrom_batch_matches(oracle):
    rng = np.random.default_rng(8)
    keys = rng.integers(0, 2, (5, 128), dtype=np.uint8)
    msgs = rng.integers(0, 2, (5, 6), dtype=np.uint8)
    bundles = cd.ce_enc_qrom_many(keys, msgs, oracle, rng)
    got = cd.ce_dec_qrom_many(keys, bundles, oracle, rng)
    assert all(np.array_equal(g, m) for g, m in zip(got, msgs))
    assert cd.ce_dec_qrom_many(keys[::-1], bundles, oracle, rng)[0] is None
    certs = cd.ce_del_qrom_many(bundles, rng)
    assert all(cd.ce_vrfy_qrom(b.vk, c) for b, c in zip(bundles, certs))


def test_ce_qrom_measure_all_rate_sanity(oracle):
    rng = np.random.default_rng(9)
    profile = cd.CeProfile(lam=32, w=2)
    hits = 0
    for _ in range(400):
        bundle = cd.ce_enc_qrom(ske_keygen(rng), random_bits(4, rng), oracle, rng, profile)
        cert = qsim.measure_all(bundle.quantum, qsim.COMPUTATIONAL, rng)
        hits += cd.ce_vrfy(bundle.vk, cert)
    # Expected 1/4; 400 trials give sigma ~ 0.022.
    assert abs(hits / 400 - 0.25) < 0.09


# ---------------------------------------------------------------- CSS wrapper


@pytest.mark.parametrize("backend", ["ske", "lwe"])
def test_ce_css_roundtrip(backend):
    rng = np.random.default_rng(10)
    ek, dk = (ske_keygen(rng),) * 2 if backend == "ske" else lwe_keygen(LweParams(), rng)
    m = random_bits(3, rng)
    bundle = cd.ce_enc_css(ek, STEANE, 7, m, rng)
    assert bundle.quantum_size == 3 * (7 + 7)
    assert np.array_equal(cd.ce_dec(dk, bundle, rng=rng), m)
    assert np.array_equal(cd.ce_dec(dk, bundle, rng=rng), m)
    assert cd.ce_vrfy(bundle.vk, cd.ce_del(bundle, rng), rng)


def test_ce_css_special_correctness():
    rng = np.random.default_rng(11)
    for _ in range(30):
        bundle = cd.ce_enc_css(ske_keygen(rng), STEANE, 7, random_bits(2, rng), rng)
        assert cd.ce_dec(ske_keygen(rng), bundle, rng=rng) is None


def test_ce_css_twirl_modify():
    rng = np.random.default_rng(12)
    for _ in range(20):
        bundle = cd.ce_enc_css(ske_keygen(rng), STEANE, 7, random_bits(2, rng), rng)
        n = bundle.quantum_size
        a, b = random_bits(n, rng), random_bits(n, rng)
        cd.twirl(bundle.quantum, a, b)
        assert cd.ce_vrfy(bundle.vk, cd.ce_modify(a, b, cd.ce_del(bundle, rng)), rng)


def test_ce_css_golay_pair():
    rng = np.random.default_rng(13)
    pair = gf2.golay_pair()
    key = ske_keygen(rng)
    m = random_bits(pair.message_bits, rng)
    bundle = cd.ce_enc_css(key, pair, 16, m, rng)
    assert np.array_equal(cd.ce_dec(key, bundle, rng=rng), m)


def test_ce_css_message_granularity():
    with pytest.raises(CdError):
        cd.ce_enc_css(ske_keygen(np.random.default_rng(0)), gf2.named_pair("hamming15"), 4, [1], np.random.default_rng(0))


def test_cross_type_vrfy_rejected(oracle):
    rng = np.random.default_rng(14)
    key = ske_keygen(rng)
    qb = cd.ce_enc_qrom(key, random_bits(4, rng), oracle, rng, cd.COMPACT_PROFILE)
    cb = cd.ce_enc_css(key, STEANE, 7, random_bits(1, rng), rng)
    assert not cd.ce_vrfy(qb.vk, cb.quantum, rng)
    assert not cd.ce_vrfy(cb.vk, np.zeros(qb.quantum_size, np.uint8), rng)
    assert not cd.ce_vrfy((), cb.quantum, rng)


def test_layout_routing():
    rng = np.random.default_rng(15)
    keys = [cd.cd_keygen(5, 2, rng), cd.cd_keygen(7, 3, rng)]
    regs = [cd.cd_enc(k, random_bits(k.message_bits, rng)) for k in keys]
    a, b = random_bits(12, rng), random_bits(12, rng)
    cd.twirl_layout(regs, a, b)
    certs = cd.modify_layout(a, b, [cd.cd_del(r, rng) for r in regs])
    assert all(cd.cd_vrfy(k, c) for k, c in zip(keys, certs))
    with pytest.raises(CdError):
        cd.twirl_layout(regs, a[:5], b[:5])
