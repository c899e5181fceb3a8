"""Randomized correctness trials, one function per scheme/variant/backend.

Each trial draws fresh keys and messages, runs the honest algorithms and
returns ``{property: passed}``.  The properties are decryption correctness,
verification of an honest deletion, special correctness (an unrelated key
yields None) and modification correctness (twirl, delete, Modify, verify).
``run_trials`` aggregates them; ``selftest`` and the acceptance suite both
use it.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import fe, garble, gf2, rnce
from .base import LweParams, Qrom, lwe_keygen, random_bits, ske_keygen
from .cd import (
    DESK_PROFILE,
    TINY_PROFILE,
    cd_dec,
    cd_del,
    cd_enc,
    cd_keygen,
    cd_modify,
    cd_vrfy,
    ce_dec,
    ce_del,
    ce_enc_css,
    ce_enc_qrom,
    ce_modify,
    ce_vrfy,
    twirl,
    twirl_layout,
)

STEANE = gf2.steane_pair()
CSS_P = 7
# Tiny q-bounded instance: one variable, degree 1, three sub-instances.
FEQ_TINY = fe.FeqParams(q=1, lam=1, D=1, l=1, t=1, N=3, v=1, S=1, k=2)
_MUX2 = garble.build_mux_family(2)
_MUX1 = garble.build_mux_family(1)


def _masks(n: int, rng):
    return random_bits(n, rng), random_bits(n, rng)


def trial_otcd(rng) -> dict:
    mlen = int(rng.integers(1, 17))
    key = cd_keygen(mlen + 8, 8, rng)
    m = random_bits(mlen, rng)
    reg = cd_enc(key, m)
    ok_dec = np.array_equal(cd_dec(key, reg), m) and np.array_equal(cd_dec(key, reg), m)
    ok_vrfy = cd_vrfy(key, cd_del(reg, rng))
    reg = cd_enc(key, m)
    a, b = _masks(key.n, rng)
    twirl(reg, a, b)
    ok_mod = cd_vrfy(key, cd_modify(a, b, cd_del(reg, rng)))
    return {"dec": ok_dec, "vrfy": ok_vrfy, "modify": ok_mod}


def _ce_trial(keygen, enc, rng, oracle=None) -> dict:
    ek, dk = keygen()
    _, other = keygen()
    b1, m = enc(ek)
    got = ce_dec(dk, b1, oracle)
    again = ce_dec(dk, b1, oracle)
    ok_dec = got is not None and np.array_equal(got, m) and again is not None and np.array_equal(again, m)
    ok_vrfy = ce_vrfy(b1.vk, ce_del(b1, rng), rng)
    b2, _ = enc(ek)
    ok_special = ce_dec(other, b2, oracle) is None
    b3, _ = enc(ek)
    a, c = _masks(b3.quantum.n, rng)
    twirl(b3.quantum, a, c)
    ok_mod = ce_vrfy(b3.vk, ce_modify(a, c, ce_del(b3, rng)), rng)
    return {"dec": ok_dec, "vrfy": ok_vrfy, "special": ok_special, "modify": ok_mod}


def trial_ske_qrom(rng) -> dict:
    oracle = Qrom(seed=int(rng.integers(2**63)))

    def keygen():
        k = ske_keygen(rng)
        return k, k

    def enc(k):
        m = random_bits(int(rng.integers(1, 17)), rng)
        return ce_enc_qrom(k, m, oracle, rng, DESK_PROFILE), m

    return _ce_trial(keygen, enc, rng, oracle)


def trial_ske_css(rng) -> dict:
    def keygen():
        k = ske_keygen(rng)
        return k, k

    def enc(k):
        m = random_bits(8, rng)
        return ce_enc_css(k, STEANE, CSS_P, m, rng), m

    return _ce_trial(keygen, enc, rng)


_LWE = LweParams()


def trial_pke_qrom(rng) -> dict:
    oracle = Qrom(seed=int(rng.integers(2**63)))

    def enc(pk):
        m = random_bits(int(rng.integers(1, 17)), rng)
        return ce_enc_qrom(pk, m, oracle, rng, DESK_PROFILE), m

    return _ce_trial(lambda: lwe_keygen(_LWE, rng), enc, rng, oracle)


def trial_pke_css(rng) -> dict:
    def enc(pk):
        # Eight one-bit instances: a wrong key slips through each with
        # probability about 1/40, so all eight together stay negligible.
        m = random_bits(8, rng)
        return ce_enc_css(pk, STEANE, CSS_P, m, rng), m

    return _ce_trial(lambda: lwe_keygen(_LWE, rng), enc, rng)


def trial_rnce(rng) -> dict:
    n = int(rng.integers(1, 6))
    pk, msk = rnce.rnce_setup(n, rng)
    sk = rnce.rnce_keygen(msk, rng)
    m = random_bits(n, rng)
    vk, ct = rnce.rnce_enc(pk, m, rng)
    got = rnce.rnce_dec(sk, ct, pk.oracle)
    ok_dec = got is not None and np.array_equal(got, m)
    ok_vrfy = rnce.rnce_vrfy(vk, rnce.rnce_del(ct, rng))
    fvk, fct, aux = rnce.rnce_fake(pk, rng)
    target = random_bits(n, rng)
    fsk = rnce.rnce_reveal(pk, msk, aux, target)
    got = rnce.rnce_dec(fsk, fct, pk.oracle)
    ok_fake = got is not None and np.array_equal(got, target)
    regs = fct.registers()
    a, c = _masks(sum(r.n for r in regs), rng)
    twirl_layout(regs, a, c)
    ok_mod = rnce.rnce_vrfy(fvk, rnce.rnce_modify(a, c, rnce.rnce_del(fct, rng)))
    return {"dec": ok_dec, "vrfy": ok_vrfy, "fake-reveal": ok_fake, "modify": ok_mod}


def trial_garble(rng) -> dict:
    n = int(rng.integers(2, 6))
    circuit = garble.random_leveled_circuit(n, int(rng.integers(1, 9)), int(rng.integers(1, 3)), rng)
    labels = garble.gc_samp(n, rng)
    x = random_bits(n, rng)
    gc, vk = garble.gc_grbl(circuit, labels, rng)
    y = circuit.evaluate(x)
    got = garble.gc_eval(gc, labels.select(x))
    again = garble.gc_eval(gc, labels.select(x))
    ok_eval = got is not None and np.array_equal(got, y) and again is not None and np.array_equal(again, y)
    ok_vrfy = garble.gc_vrfy(vk, garble.gc_del(gc, rng))
    sim_labels = labels.select(x)
    sgc, _ = garble.gc_sim(circuit.topology(), y, sim_labels, rng)
    got = garble.gc_eval(sgc, sim_labels)
    ok_sim = got is not None and np.array_equal(got, y)
    gc2, vk2 = garble.gc_grbl(circuit, labels, rng)
    a, c = _masks(gc2.quantum_size, rng)
    garble.gc_twirl(gc2, a, c)
    ok_mod = garble.gc_vrfy(vk2, garble.gc_modify(a, c, garble.gc_del(gc2, rng)))
    return {"eval": ok_eval, "vrfy": ok_vrfy, "sim": ok_sim, "modify": ok_mod}


def trial_fe1(rng) -> dict:
    fam = _MUX2
    mpk, msk = fe.fe1_setup(fam, rng)
    f = fam.random_function(rng)
    m = fam.random_message(rng)
    sk = fe.fe1_keygen(msk, f)
    vk, ct = fe.fe1_enc(mpk, m, rng)
    got = fe.fe1_dec(sk, ct, mpk.oracle)
    ok_dec = got is not None and np.array_equal(got, fam.apply(f, m))
    ok_vrfy = fe.fe1_vrfy(vk, fe.fe1_del(ct, rng))
    vk2, ct2 = fe.fe1_enc(mpk, m, rng)
    a, c = _masks(ct2.quantum_size, rng)
    fe.fe1_twirl(ct2, a, c)
    ok_mod = fe.fe1_vrfy(vk2, fe.fe1_modify(a, c, fe.fe1_del(ct2, rng)))
    return {"dec": ok_dec, "vrfy": ok_vrfy, "modify": ok_mod}


def trial_fead(rng) -> dict:
    fam = _MUX1
    mpk, msk = fe.fead_setup(fam, rng, profile=TINY_PROFILE)
    f = fam.random_function(rng)
    m = fam.random_message(rng)
    sk = fe.fead_keygen(msk, f, rng)
    vk, ct = fe.fead_enc(mpk, m, rng)
    got = fe.fead_dec(sk, ct, mpk.nad.oracle)
    again = fe.fead_dec(sk, ct, mpk.nad.oracle)
    want = fam.apply(f, m)
    ok_dec = got is not None and np.array_equal(got, want) and again is not None and np.array_equal(again, want)
    # Vrfy internally applies Modify with the twirl masks, so it also
    # exercises modification correctness of the inner scheme.
    ok_vrfy = fe.fead_vrfy(vk, fe.fead_del(ct, rng))
    return {"dec": ok_dec, "vrfy": ok_vrfy}


def trial_feq(rng) -> dict:
    mpk, msk = fe.feq_setup(FEQ_TINY, rng, profile=TINY_PROFILE)
    fam = mpk.family
    g = fam.random_function(rng, FEQ_TINY.v)
    x = fam.random_message(rng)[: FEQ_TINY.l]
    sk = fe.feq_keygen(msk, g.coeffs, rng)
    vk, ct = fe.feq_enc(mpk, x, rng)
    ok_dec = fe.feq_dec(sk, ct, mpk.oracle) == fam.evaluate_poly(g.coeffs, x)
    ok_vrfy = fe.feq_vrfy(vk, fe.feq_del(ct, rng))
    vk2, ct2 = fe.feq_enc(mpk, x, rng)
    total = sum(r.n for r in ct2.registers())
    a, c = _masks(total, rng)
    fe.feq_twirl(ct2, a, c)
    ok_mod = fe.feq_vrfy(vk2, fe.feq_modify(a, c, fe.feq_del(ct2, rng)))
    return {"dec": ok_dec, "vrfy": ok_vrfy, "modify": ok_mod}


TRIALS = {
    "otcd": trial_otcd,
    "ske-qrom": trial_ske_qrom,
    "ske-css": trial_ske_css,
    "pke-qrom": trial_pke_qrom,
    "pke-css": trial_pke_css,
    "rnce": trial_rnce,
    "garble": trial_garble,
    "fe1": trial_fe1,
    "fead": trial_fead,
    "feq": trial_feq,
}


@dataclass
class TrialReport:
    scheme: str
    trials: int
    failures: Counter
    seconds: float

    @property
    def ok(self) -> bool:
        return not sum(self.failures.values())

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        detail = ", ".join(f"{k}={v}" for k, v in sorted(self.failures.items())) or "0 failures"
        return f"{status} {self.scheme}: {self.trials} trials, {detail}, {self.seconds:.1f}s"


def run_trials(scheme: str, trials: int, rng: np.random.Generator) -> TrialReport:
    fn = TRIALS[scheme]
    fails: Counter = Counter()
    start = time.perf_counter()
    for _ in range(trials):
        for prop, passed in fn(rng).items():
            if not passed:
                fails[prop] += 1
    return TrialReport(scheme, trials, fails, time.perf_counter() - start)
