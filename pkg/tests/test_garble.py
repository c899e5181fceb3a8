from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cefe import garble
from cefe.base import random_bits
from cefe.field import gf
from cefe.garble import TABLES, CircuitError, Gate, LeveledCircuit

FAST = settings(max_examples=25, deadline=None)


def and_circuit():
    return LeveledCircuit(2, (Gate(TABLES["AND"], 0, 1, 2, 1),), (2,))


# ------------------------------------------------------------------ circuits


def test_validate_rejects_level_skip():
    with pytest.raises(CircuitError, match="non-leveled"):
        LeveledCircuit(2, (Gate(TABLES["AND"], 0, 1, 2, 1), Gate(TABLES["OR"], 0, 2, 3, 2)), (3,))


def test_validate_rejects_reused_wire():
    with pytest.raises(CircuitError):
        LeveledCircuit(2, (Gate(TABLES["AND"], 0, 1, 2, 1), Gate(TABLES["OR"], 0, 1, 2, 1)), (2,))


def test_text_roundtrip():
    rng = np.random.default_rng(0)
    c = garble.random_leveled_circuit(4, 10, 3, rng)
    again = LeveledCircuit.parse(c.to_text())
    for x in product((0, 1), repeat=4):
        assert np.array_equal(c.evaluate(x), again.evaluate(x))
    with pytest.raises(CircuitError):
        LeveledCircuit.parse("2 1 4 1\n1 0001 0 1 2\n2\n")


def test_lint_linear():
    c = LeveledCircuit(2, (Gate(TABLES["XOR"], 0, 1, 2, 1), Gate(TABLES["AND"], 0, 1, 3, 1)), (2, 3))
    assert garble.lint_linear(c) == [1]


# ------------------------------------------------------------------- garbling


def test_single_and_gate_exhaustive():
    rng = np.random.default_rng(1)
    c = and_circuit()
    labels = garble.gc_samp(2, rng)
    gc, vk = garble.gc_grbl(c, labels, rng)
    assert len(gc.rows) == 8
    for x in product((0, 1), repeat=2):
        assert garble.gc_eval(gc, labels.select(x)).tolist() == [x[0] & x[1]]
    assert garble.gc_vrfy(vk, garble.gc_del(gc, rng))


def test_label_pairs_are_distinct_even_when_short():
    rng = np.random.default_rng(11)
    keys = garble.gc_samp(2000, rng, lam=1).keys
    assert (keys[:, 0] != keys[:, 1]).all()
    # 2-bit labels: equal pairs on internal wires would leave gates ambiguous.
    for _ in range(20):
        c = garble.random_leveled_circuit(3, 24, 4, rng)
        labels = garble.gc_samp(3, rng, lam=2)
        gc, _ = garble.gc_grbl(c, labels, rng)
        x = rng.integers(0, 2, 3, dtype=np.uint8)
        assert np.array_equal(garble.gc_eval(gc, labels.select(x)), c.evaluate(x))


def test_foreign_label_yields_none():
    rng = np.random.default_rng(2)
    labels = garble.gc_samp(2, rng)
    gc, _ = garble.gc_grbl(and_circuit(), labels, rng)
    held = labels.select([1, 0]).copy()
    held[0] = random_bits(held.shape[1], rng)
    assert garble.gc_eval(gc, held) is None


def test_flipped_certificate_bit_rejected():
    rng = np.random.default_rng(3)
    gc, vk = garble.gc_grbl(and_circuit(), garble.gc_samp(2, rng), rng)
    cert = garble.gc_del(gc, rng)
    row = 5
    cert[row] = cert[row].copy()
    cert[row][np.flatnonzero(vk[row].theta)[0]] ^= 1
    assert not garble.gc_vrfy(vk, cert)


@FAST
@given(st.integers(1, 5), st.integers(1, 12), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_random_circuits_evaluate(n, q, m, seed):
    rng = np.random.default_rng(seed)
    c = garble.random_leveled_circuit(n, q, m, rng)
    labels = garble.gc_samp(n, rng)
    gc, vk = garble.gc_grbl(c, labels, rng)
    x = random_bits(n, rng)
    assert np.array_equal(garble.gc_eval(gc, labels.select(x)), c.evaluate(x))
    a, b = random_bits(gc.quantum_size, rng), random_bits(gc.quantum_size, rng)
    garble.gc_twirl(gc, a, b)
    assert garble.gc_vrfy(vk, garble.gc_modify(a, b, garble.gc_del(gc, rng)))


@FAST
@given(st.integers(1, 4), st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_simulator_outputs_y(n, q, seed):
    rng = np.random.default_rng(seed)
    c = garble.random_leveled_circuit(n, q, 2, rng)
    labels = garble.gc_samp(n, rng)
    x = random_bits(n, rng)
    y = c.evaluate(x)
    gc, vk = garble.gc_sim(c.topology(), y, labels.select(x), rng)
    assert np.array_equal(garble.gc_eval(gc, labels.select(x)), y)
    assert garble.gc_vrfy(vk, garble.gc_del(gc, rng))


def test_inputdep_endpoints():
    rng = np.random.default_rng(4)
    c = garble.random_leveled_circuit(3, 8, 2, rng)
    labels = garble.gc_samp(3, rng)
    for x in product((0, 1), repeat=3):
        sel = labels.select(x)
        for j in (0, 4, c.q):
            gc, _ = garble.gc_inputdep_sim(j, c, x, sel, rng)
            assert np.array_equal(garble.gc_eval(gc, sel), c.evaluate(x))
    with pytest.raises(CircuitError):
        garble.gc_inputdep_sim(c.q + 1, c, [0, 0, 0], labels.select([0, 0, 0]), rng)


def test_label_count_checked():
    rng = np.random.default_rng(5)
    with pytest.raises(CircuitError):
        garble.gc_grbl(and_circuit(), garble.gc_samp(3, rng), rng)


# ------------------------------------------------------------------- families


def test_mux_reference():
    fam = garble.build_mux_family(2)
    f = np.array([0, 1, 1, 0], np.uint8)
    assert fam.apply(f, [1, 0]).tolist() == [1]
    assert fam.hardwire([1, 0]).evaluate(f).tolist() == [1]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_mux_exhaustive(k):
    fam = garble.build_mux_family(k)
    rng = np.random.default_rng(k)
    for m in product((0, 1), repeat=k):
        circ = fam.hardwire(m)
        assert garble.lint_linear(circ) == []
        for _ in range(8):
            f = fam.random_function(rng)
            idx = int("".join(map(str, m)), 2)
            assert circ.evaluate(f).tolist() == [int(f[idx])]


def test_xor_network_parity():
    c = garble.xor_network(4, [[0, 1, 2], [], [3, 3], [2]])
    for x in product((0, 1), repeat=4):
        assert c.evaluate(x).tolist() == [x[0] ^ x[1] ^ x[2], 0, 0, x[2]]


def test_graded_lex_order():
    assert garble.graded_lex_monomials(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("shape", [(1, 1, 2, 2), (2, 2, 3, 3), (3, 1, 1, 4)])
def test_linear_family_matches_direct_evaluation(shape):
    nvars, degree, pads, k = shape
    fam = garble.build_linear_gf2k_family(nvars, degree, pads, k)
    F = gf(k)
    rng = np.random.default_rng(sum(shape))
    for _ in range(10):
        f = fam.random_function(rng)
        m = fam.random_message(rng)
        mu, xi = m[:nvars], m[nvars:]
        want = 0
        for c, e in zip(f.coeffs, fam.monomials):
            term = c
            for base, power in zip(mu, e):
                for _ in range(power):
                    term = F.mul(term, base)
            want ^= term
        for i in f.delta:
            want ^= xi[i]
        assert fam.apply_field(f, m) == want
        circ = fam.hardwire(m)
        assert garble.lint_linear(circ) == []
        assert F.from_bits(circ.evaluate(fam.encode_key(f))) == want


def test_linear_family_key_validation():
    fam = garble.build_linear_gf2k_family(1, 1, 2, 2)
    with pytest.raises(CircuitError):
        fam.encode_key(garble.LinearFunction((1,), ()))
    with pytest.raises(CircuitError):
        fam.encode_key(garble.LinearFunction((1, 2), (5,)))
