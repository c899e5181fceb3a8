from itertools import product

import numpy as np
import pytest

from cefe import fe, garble
from cefe.base import random_bits
from cefe.cd import TINY_PROFILE
from cefe.fe import FeError, FeqParams
from cefe.field import gf, interpolate_at

MUX2 = garble.build_mux_family(2)
# q=2 instance small enough for unit tests: |Gamma| = 3 of N = 7.
FEQ_Q2 = FeqParams(q=2, lam=1, D=1, l=1, t=2, N=7, v=1, S=2, k=3)


@pytest.fixture(scope="module")
def fe1_mux2():
    return fe.fe1_setup(MUX2, np.random.default_rng(0))


# --------------------------------------------------------------------- fe1


def test_fe1_mux_all_functions(fe1_mux2):
    mpk, msk = fe1_mux2
    rng = np.random.default_rng(1)
    for fbits in product((0, 1), repeat=4):
        f = np.array(fbits, np.uint8)
        sk = fe.fe1_keygen(msk, f)
        m = MUX2.random_message(rng)
        vk, ct = fe.fe1_enc(mpk, m, rng)
        want = MUX2.apply(f, m)
        assert np.array_equal(fe.fe1_dec(sk, ct, mpk.oracle), want)
        assert np.array_equal(fe.fe1_dec(sk, ct, mpk.oracle), want)
        assert fe.fe1_vrfy(vk, fe.fe1_del(ct, rng))


def test_fe1_reference_mux(fe1_mux2):
    mpk, msk = fe1_mux2
    rng = np.random.default_rng(2)
    sk = fe.fe1_keygen(msk, [0, 1, 1, 0])
    _, ct = fe.fe1_enc(mpk, [1, 0], rng)
    assert fe.fe1_dec(sk, ct, mpk.oracle).tolist() == [1]


def test_fe1_twirl_modify(fe1_mux2):
    mpk, _ = fe1_mux2
    rng = np.random.default_rng(3)
    vk, ct = fe.fe1_enc(mpk, [0, 1], rng)
    assert ct.quantum_size == fe.fe1_quantum_size(MUX2, mpk.profile)
    a, c = random_bits(ct.quantum_size, rng), random_bits(ct.quantum_size, rng)
    fe.fe1_twirl(ct, a, c)
    assert fe.fe1_vrfy(vk, fe.fe1_modify(a, c, fe.fe1_del(ct, rng)))


def test_fe1_wrong_instance_key_fails(fe1_mux2):
    mpk, _ = fe1_mux2
    _, other = fe.fe1_setup(MUX2, np.random.default_rng(4), oracle=mpk.oracle)
    rng = np.random.default_rng(5)
    _, ct = fe.fe1_enc(mpk, [1, 1], rng)
    assert fe.fe1_dec(fe.fe1_keygen(other, [1, 1, 1, 1]), ct, mpk.oracle) is None


def test_fe1_linear_family():
    fam = garble.build_linear_gf2k_family(1, 1, 2, 2)
    rng = np.random.default_rng(6)
    mpk, msk = fe.fe1_setup(fam, rng)
    for _ in range(3):
        f = fam.random_function(rng)
        m = fam.random_message(rng)
        _, ct = fe.fe1_enc(mpk, m, rng)
        got = fe.fe1_dec(fe.fe1_keygen(msk, f), ct, mpk.oracle)
        assert fam.field.from_bits(got) == fam.apply_field(f, m)


# -------------------------------------------------------------------- fead


@pytest.fixture(scope="module")
def fead_mux1():
    fam = garble.build_mux_family(1)
    mpk, msk = fe.fead_setup(fam, np.random.default_rng(7), profile=TINY_PROFILE)
    return fam, mpk, msk


def test_fead_roundtrip(fead_mux1):
    fam, mpk, msk = fead_mux1
    rng = np.random.default_rng(8)
    for f, m in product(product((0, 1), repeat=2), product((0, 1), repeat=1)):
        sk = fe.fead_keygen(msk, np.array(f, np.uint8), rng)
        vk, ct = fe.fead_enc(mpk, m, rng)
        want = fam.apply(np.array(f, np.uint8), m)
        assert np.array_equal(fe.fead_dec(sk, ct, mpk.nad.oracle), want)
        assert np.array_equal(fe.fead_dec(sk, ct, mpk.nad.oracle), want)
        assert fe.fead_vrfy(vk, fe.fead_del(ct, rng))


def test_fead_rnce_size(fead_mux1):
    _, mpk, _ = fead_mux1
    assert mpk.nce.n == 2 * mpk.size


def test_fead_unmodified_cert_rejected(fead_mux1):
    _, mpk, _ = fead_mux1
    rng = np.random.default_rng(9)
    ones = np.ones(mpk.size, np.uint8)
    vk, ct = fe.fead_enc(mpk, [1], rng, twirl=(ones * 0, ones))
    nad_cert, nce_cert = fe.fead_del(ct, rng)
    # With Z on every qubit, every Hadamard-basis outcome flips; skipping Modify must fail.
    assert not fe.fe1_vrfy(vk.nad, nad_cert)
    assert fe.fead_vrfy(vk, (nad_cert, nce_cert))


def test_fead_broken_rnce_cert_rejected(fead_mux1):
    _, mpk, _ = fead_mux1
    rng = np.random.default_rng(10)
    vk, ct = fe.fead_enc(mpk, [0], rng)
    nad_cert, nce_cert = fe.fead_del(ct, rng)
    nce_cert[0] = nce_cert[0].copy()
    nce_cert[0][np.flatnonzero(vk.nce[0].theta)[0]] ^= 1
    assert not fe.fead_vrfy(vk, (nad_cert, nce_cert))


# --------------------------------------------------------------------- feq


def test_feq_params_validation():
    FeqParams.desk()
    with pytest.raises(FeError):
        FeqParams(q=1, lam=1, D=2, l=1, t=4, N=8, v=1, S=1, k=4).validate()  # |Gamma| = 9 > N
    with pytest.raises(FeError):
        FeqParams(q=1, lam=1, D=1, l=1, t=1, N=8, v=1, S=1, k=3).validate()  # 2^k <= N
    with pytest.raises(FeError):
        FeqParams(q=1, lam=1, D=1, l=1, t=1, N=3, v=2, S=1, k=2).validate()


def test_feq_derive_reference():
    p = FeqParams.derive(2, 2, 2, 2)
    assert (p.t, p.N, p.v, p.S, p.k) == (8, 128, 2, 32, 8)
    assert FeqParams.parse(p.dump()) == p


def test_feq_tiny_roundtrip():
    p = FeqParams(q=1, lam=1, D=1, l=1, t=1, N=3, v=1, S=1, k=2)
    rng = np.random.default_rng(11)
    mpk, msk = fe.feq_setup(p, rng, profile=TINY_PROFILE)
    fam = mpk.family
    for _ in range(3):
        g = fam.random_function(rng, p.v)
        x = [int(rng.integers(4))]
        sk = fe.feq_keygen(msk, g.coeffs, rng)
        vk, ct = fe.feq_enc(mpk, x, rng)
        assert fe.feq_dec(sk, ct, mpk.oracle) == fam.evaluate_poly(g.coeffs, x)
        assert fe.feq_vrfy(vk, fe.feq_del(ct, rng))


def test_feq_constant_polynomial():
    p = FeqParams(q=1, lam=1, D=1, l=1, t=1, N=3, v=1, S=1, k=2)
    rng = np.random.default_rng(12)
    mpk, msk = fe.feq_setup(p, rng, profile=TINY_PROFILE)
    sk = fe.feq_keygen(msk, (3, 0), rng)
    for x in range(4):
        _, ct = fe.feq_enc(mpk, [x], rng)
        assert fe.feq_dec(sk, ct, mpk.oracle) == 3


@pytest.fixture(scope="module")
def feq_q2():
    rng = np.random.default_rng(13)
    return fe.feq_setup(FEQ_Q2, rng, profile=TINY_PROFILE)


def test_feq_two_keys(feq_q2):
    mpk, msk = feq_q2
    rng = np.random.default_rng(14)
    fam = mpk.family
    keys = [(g, fe.feq_keygen(msk, g.coeffs, rng)) for g in (fam.random_function(rng, 1) for _ in range(2))]
    x = [5]
    vk, ct = fe.feq_enc(mpk, x, rng)
    for g, sk in keys:
        assert fe.feq_dec(sk, ct, mpk.oracle) == fam.evaluate_poly(g.coeffs, x)
    assert fe.feq_vrfy(vk, fe.feq_del(ct, rng))


def test_feq_eta_points_lie_on_low_degree_poly(feq_q2):
    mpk, msk = feq_q2
    rng = np.random.default_rng(15)
    F = gf(FEQ_Q2.k)
    sk = fe.feq_keygen(msk, (1, 6), rng, gamma=range(1, 8))
    _, ct = fe.feq_enc(mpk, [2], rng)
    eta = fe.feq_eta(sk, ct, mpk.oracle)
    pts = sorted(eta.items())
    basis = pts[: FEQ_Q2.gamma_size]
    # Degree tD = 2, so any three points determine the rest.
    for i, y in pts[FEQ_Q2.gamma_size:]:
        assert interpolate_at(basis, i, F) == y


def test_feq_twirl_modify(feq_q2):
    mpk, _ = feq_q2
    rng = np.random.default_rng(16)
    vk, ct = fe.feq_enc(mpk, [1], rng)
    total = sum(r.n for r in ct.registers())
    a, c = random_bits(total, rng), random_bits(total, rng)
    fe.feq_twirl(ct, a, c)
    assert fe.feq_vrfy(vk, fe.feq_modify(a, c, fe.feq_del(ct, rng)))


def test_feq_gamma_checked(feq_q2):
    _, msk = feq_q2
    rng = np.random.default_rng(17)
    with pytest.raises(FeError):
        fe.feq_keygen(msk, (1, 1), rng, gamma=(1, 2))
    with pytest.raises(FeError):
        fe.feq_keygen(msk, (1, 1), rng, gamma=(1, 2, 9))


def test_collision_diag_q1_is_zero():
    over, cover = fe.feq_collision_diag(FeqParams.desk(), 1000, np.random.default_rng(18))
    assert over.hits == 0 and cover.hits == 0
    with pytest.raises(FeError):
        fe.feq_collision_diag(FeqParams.desk(), 10, np.random.default_rng(18))


def test_binomial_interval_covers_rate():
    est = fe.binomial_interval(30, 100)
    assert est.low < 0.3 < est.high and est.rate == 0.3
