"""Acceptance suite: one test per headline criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines as they are
produced; they are also collected into the terminal summary.
"""

import math
import time
from decimal import Decimal, getcontext
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from scipy.stats import chisquare

import samples
from cefe import attack, checks, fe, garble, gf2, qsim, serialize
from cefe.cd import TINY_PROFILE
from cefe.cli import cli_main
from cefe.field import gf, interpolate_at
from cefe.garble import Gate, LeveledCircuit

pytestmark = pytest.mark.slow


def within_3sigma(hits: int, trials: int, p: float) -> tuple[bool, float]:
    sigma = math.sqrt(p * (1 - p) / trials)
    z = (hits / trials - p) / sigma
    return abs(z) <= 3, z


# --------------------------------------------------------------- criterion 1


def test_c1_correctness_suite(criterion):
    rng = np.random.default_rng(20260101)
    start = time.perf_counter()
    reports = [checks.run_trials(name, 1000, rng) for name in checks.TRIALS]
    total = time.perf_counter() - start
    for rep in reports:
        print("   ", rep.line())
    failures = sum(sum(r.failures.values()) for r in reports)
    ok = failures == 0 and total <= 300
    assert criterion("criterion 1 (correctness suite)", ok,
                     f"{len(reports)} combinations x 1000 trials, {failures} failures, {total:.0f}s")


# --------------------------------------------------------------- criterion 2


def test_c2_otcd_detection(criterion):
    rng = np.random.default_rng(2)
    n = 100_000
    p = 2.0 ** -8
    est = attack.run_attack("otcd", "measure-all", n, rng, w=8)
    inside, z = within_3sigma(est.hits, n, p)
    honest = attack.run_attack("otcd", "honest", n, rng, w=8)
    ok = inside and honest.hits == n
    assert criterion("criterion 2 (OT-CD detection, w=8)", ok,
                     f"measure-all {est.rate:.5f} vs {p:.5f} (z={z:+.2f}); honest {honest.hits}/{n}")


# --------------------------------------------------------------- criterion 3


def test_c3_css_detection(criterion):
    # Closed form by enumeration first: (3/4)^p for every small p.
    assert all(attack.css_pass_probability(k) == Fraction(3, 4) ** k for k in range(1, 11))
    p_exact = float(Fraction(3, 4) ** 7)
    rng = np.random.default_rng(3)
    n = 100_000
    est = attack.run_attack("cesk-css", "measure-all", n, rng, p=7)
    inside, z = within_3sigma(est.hits, n, p_exact)
    honest = attack.run_attack("cesk-css", "honest", 2000, rng, p=7)
    ok = inside and honest.hits == 2000
    assert criterion("criterion 3 (CSS detection, p=7)", ok,
                     f"measure-all {est.rate:.5f} vs (3/4)^7 = {p_exact:.5f} (z={z:+.2f}); "
                     f"honest {honest.hits}/2000")


# --------------------------------------------------------------- criterion 4


def test_c4_teleportation(criterion):
    rng = np.random.default_rng(4)
    pvals = {}
    for n in (1, 2, 3):
        counts = np.zeros(4**n, dtype=np.int64)
        weights = 1 << np.arange(2 * n)[::-1]
        for _ in range(10_000):
            payload = qsim.random_stabilizer_register(n, rng, depth=2 * n + 2)
            a, _ = qsim.make_bell_pairs(n)
            x, z = qsim.teleport(payload, a, rng)
            counts[int(np.concatenate([x, z]) @ weights)] += 1
        pvals[n] = chisquare(counts).pvalue
    equal = 0
    for trial in range(1000):
        n = 1 + trial % 3
        payload = qsim.random_stabilizer_register(n, rng)
        with qsim.test_harness():
            ref = qsim.duplicate_for_test(payload)
        a, b = qsim.make_bell_pairs(n)
        x, z = qsim.teleport(payload, a, rng)
        qsim.apply_pauli(b, qsim.PauliMask(x, z))
        equal += qsim.canonical_equal(b, ref)
    ok = all(p > 0.05 for p in pvals.values()) and equal == 1000
    detail = ", ".join(f"n={n} chi2 p={p:.3f}" for n, p in pvals.items())
    assert criterion("criterion 4 (teleportation)", ok, f"{detail}; corrected state equal {equal}/1000")


# --------------------------------------------------------------- criterion 5


def two_gate_circuits():
    tables = [tuple(int(b) for b in f"{t:04b}") for t in range(16)]
    pairs = list(product(range(2), repeat=2))
    for (a1, b1), (a2, b2) in product(pairs, pairs):
        for t1, t2 in product(tables, tables):
            yield LeveledCircuit(2, (Gate(t1, a1, b1, 2, 1), Gate(t2, a2, b2, 3, 1)), (2, 3))
    for a1, b1 in pairs:
        for t1, t2 in product(tables, tables):
            yield LeveledCircuit(2, (Gate(t1, a1, b1, 2, 1), Gate(t2, 2, 2, 3, 2)), (2, 3))


def test_c5_garbling(criterion):
    rng = np.random.default_rng(5)
    inputs = [np.array(x, np.uint8) for x in product((0, 1), repeat=2)]
    exhaustive = bad = 0
    for circ in two_gate_circuits():
        labels = garble.gc_samp(2, rng)
        gc, _ = garble.gc_grbl(circ, labels, rng)
        for x in inputs:
            got = garble.gc_eval(gc, labels.select(x))
            bad += got is None or not np.array_equal(got, circ.evaluate(x))
        exhaustive += 1
    rand_ok = 0
    for _ in range(500):
        n = int(rng.integers(2, 9))
        circ = garble.random_leveled_circuit(n, int(rng.integers(1, 65)), int(rng.integers(1, 5)), rng)
        labels = garble.gc_samp(n, rng)
        gc, _ = garble.gc_grbl(circ, labels, rng)
        x = rng.integers(0, 2, n, dtype=np.uint8)
        got = garble.gc_eval(gc, labels.select(x))
        rand_ok += got is not None and np.array_equal(got, circ.evaluate(x))
    sim_ok = 0
    for _ in range(500):
        n = int(rng.integers(2, 9))
        circ = garble.random_leveled_circuit(n, int(rng.integers(1, 65)), int(rng.integers(1, 5)), rng)
        x = rng.integers(0, 2, n, dtype=np.uint8)
        y = circ.evaluate(x)
        sel = garble.gc_samp(n, rng).select(x)
        gc, _ = garble.gc_sim(circ.topology(), y, sel, rng)
        got = garble.gc_eval(gc, sel)
        sim_ok += got is not None and np.array_equal(got, y)
    ok = bad == 0 and rand_ok == 500 and sim_ok == 500
    assert criterion("criterion 5 (garbling)", ok,
                     f"{exhaustive} two-gate circuits x 4 inputs, {bad} mismatches; "
                     f"random {rand_ok}/500; Sim {sim_ok}/500")


# --------------------------------------------------------------- criterion 6


@pytest.fixture(scope="module")
def desk_feq():
    rng = np.random.default_rng(6)
    params = fe.FeqParams.desk()
    return params, [fe.feq_setup(params, rng, profile=TINY_PROFILE) for _ in range(5)], rng


def test_c6a_feq_desk_decryption(criterion, desk_feq):
    params, setups, rng = desk_feq
    assert (params.D, params.l, params.t, params.N, params.S, params.k) == (2, 2, 2, 16, 16, 6)
    good = 0
    for i in range(100):
        mpk, msk = setups[i % len(setups)]
        g = mpk.family.random_function(rng, params.v)
        x = mpk.family.random_message(rng)[: params.l]
        sk = fe.feq_keygen(msk, g.coeffs, rng)
        _, ct = fe.feq_enc(mpk, x, rng)
        good += fe.feq_dec(sk, ct, mpk.oracle) == mpk.family.evaluate_poly(g.coeffs, x)
    assert criterion("criterion 6a (feq desk decryption)", good == 100, f"{good}/100 instances")


def test_c6b_gamma_subset_independence(criterion, desk_feq):
    params, setups, rng = desk_feq
    F = gf(params.k)
    agree = pairs = 0
    for i in range(10):
        mpk, msk = setups[i % len(setups)]
        g = mpk.family.random_function(rng, params.v)
        x = mpk.family.random_message(rng)[: params.l]
        sk = fe.feq_keygen(msk, g.coeffs, rng, gamma=range(1, params.N + 1))
        _, ct = fe.feq_enc(mpk, x, rng)
        eta = fe.feq_eta(sk, ct, mpk.oracle)
        want = mpk.family.evaluate_poly(g.coeffs, x)
        for _ in range(100):
            subs = [sorted(rng.choice(params.N, params.gamma_size, replace=False) + 1) for _ in range(2)]
            vals = [interpolate_at([(int(j), eta[int(j)]) for j in s], 0, F) for s in subs]
            agree += vals[0] == vals[1] == want
            pairs += 1
    assert criterion("criterion 6b (Gamma-subset independence)", agree == pairs == 1000,
                     f"{agree}/{pairs} subset pairs give eta(0) = C(x)")


def exact_overlap_rate(N: int, size: int, t: int) -> Fraction:
    """P(|A & B| > t) for two uniform size-subsets of an N-set (hypergeometric tail)."""
    total = math.comb(N, size)
    return sum((Fraction(math.comb(size, j) * math.comb(N - size, size - j), total)
                for j in range(t + 1, size + 1)), Fraction(0))


@pytest.mark.xfail(strict=True, reason="desk profile at q=2 has overlap rate 606/4368 > 5% by construction")
def test_c6c_collision_diag_desk_q2(criterion):
    d = fe.FeqParams.desk()
    params = fe.FeqParams(q=2, lam=d.lam, D=d.D, l=d.l, t=d.t, N=d.N, v=d.v, S=d.S, k=d.k)
    over, cover = fe.feq_collision_diag(params, 10_000, np.random.default_rng(61))
    exact = exact_overlap_rate(params.N, params.gamma_size, params.t)
    assert exact == Fraction(606, 4368)
    assert over.low <= float(exact) <= over.high
    ok = over.rate < 0.05 and cover.rate < 0.05
    criterion("criterion 6c (collision diag, desk profile at q=2)", ok,
              f"Gamma overlap {over.rate:.4f} (exact {float(exact):.4f}), Delta cover {cover.rate:.4f}")
    assert ok


def test_c6c_collision_diag_derived_q2(criterion):
    params = fe.FeqParams.derive(2, 2, 2, 2)
    over, cover = fe.feq_collision_diag(params, 2000, np.random.default_rng(62))
    ok = over.high < 0.05 and cover.high < 0.05
    assert criterion("criterion 6c (collision diag, derived q=2 profile)", ok,
                     f"N={params.N} t={params.t} S={params.S} v={params.v}: Gamma overlap {over.rate:.4f} "
                     f"[{over.low:.4f}, {over.high:.4f}], Delta cover {cover.rate:.4f} "
                     f"[{cover.low:.4f}, {cover.high:.4f}]")


# --------------------------------------------------------------- criterion 7


def decimal_margin(p: int, q: int, t: int, dk: int) -> Decimal:
    getcontext().prec = 50
    return Decimal(t * p) / Decimal(p + q) - 4 * dk * Decimal(2).ln()


def test_c7_parameter_gate(criterion, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    worst = 0.0
    direct = gf2.security_margin(128, 128, 32, 2, 1)
    worst = max(worst, abs(direct - float(decimal_margin(128, 128, 32, 1))))
    codes = {"steane": gf2.steane_pair(), "hamming15": gf2.named_pair("hamming15"), "golay": gf2.golay_pair()}
    rejected_ok = True
    for name, pair in codes.items():
        for p in (7, 64, 300, 1000, 5000):
            status = cli_main(["params", "check", "--pair", name, "--p", str(p)])
            out = capsys.readouterr().out
            got = float(out.split("margin = ")[1].split()[0])
            want = decimal_margin(p, pair.q, pair.t, pair.k1 - pair.k2)
            worst = max(worst, abs(got - float(want)))
            rejected_ok &= status == (0 if want > 0 else 4)
    (tmp_path / "c1").write_text(gf2.format_code(codes["golay"].c1))
    (tmp_path / "c2").write_text(gf2.format_code(codes["golay"].c2))
    rejected_ok &= cli_main(["params", "check", "--c1", "c1", "--c2", "c2", "--t", "3", "--p", "50"]) == 4
    capsys.readouterr()
    ok = worst <= 1e-9 and rejected_ok
    assert criterion("criterion 7 (parameter gate)", ok,
                     f"max |margin - decimal oracle| = {worst:.2e}; non-positive margins exit 4: {rejected_ok}")


# --------------------------------------------------------------- criterion 8


def test_c8_envelope_roundtrip(criterion):
    objs = samples.build(8)
    generic = {b"SKEY", b"VKEY", b"CERT", b"DATA"}
    failed = []
    for tag in sorted(serialize.ALL_TAGS):
        obj = objs[tag.decode()]
        data = serialize.dumps(obj, tag if tag in generic else None)
        got_tag, again = serialize.loads(data)
        if got_tag != tag or serialize.dumps(again, got_tag) != data:
            failed.append(tag.decode())
    rng = np.random.default_rng(80)
    tableau_ok = 0
    for n in range(1, 41):
        reg = qsim.random_stabilizer_register(n, rng)
        data = serialize.dumps(reg)
        _, again = serialize.loads(data)
        tableau_ok += qsim.canonical_equal(reg, again) and serialize.dumps(again) == data
    a, b = qsim.make_bell_pairs(4)
    _, (a2, b2) = serialize.loads(serialize.dumps((a, b), "DATA"))
    bell_ok = np.array_equal(qsim.measure_all(a2, 1, rng), qsim.measure_all(b2, 1, rng))
    ok = not failed and tableau_ok == 40 and bell_ok
    assert criterion("criterion 8 (envelope round trip)", ok,
                     f"{len(serialize.ALL_TAGS) - len(failed)}/{len(serialize.ALL_TAGS)} tags byte-stable"
                     f"{' (failed: ' + ', '.join(failed) + ')' if failed else ''}; "
                     f"tableau registers {tableau_ok}/40; shared Bell state preserved: {bell_ok}")
