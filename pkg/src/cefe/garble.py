"""Leveled boolean circuits and their certified-everlasting garbling.

Wires 0..n-1 are inputs (level 0); gate i writes wire ``c`` at its level and
reads two wires of the level just below.  Truth tables are 4-tuples in the
order g(0,0), g(0,1), g(1,0), g(1,1).

Garbled rows are CE-SKE bundles of the oracle variant.  The quantum layout
used by :func:`gc_modify` is gate-major, stored (shuffled) row order, the
``a`` component before the ``b`` component, so bundle ``8*i + 2*j + side``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from math import comb

import numpy as np

from . import gf2
from .base import Qrom
from .cd import (
    COMPACT_PROFILE,
    CeBundle,
    CeProfile,
    cd_vrfy_many,
    ce_dec_qrom_many,
    ce_del_qrom_many,
    ce_enc_qrom_many,
    modify_layout,
    twirl_layout,
)
from .field import gf

TABLES = {
    "CONST0": (0, 0, 0, 0),
    "AND": (0, 0, 0, 1),
    "PROJ_A": (0, 0, 1, 1),
    "PROJ_B": (0, 1, 0, 1),
    "XOR": (0, 1, 1, 0),
    "OR": (0, 1, 1, 1),
    "NAND": (1, 1, 1, 0),
    "CONST1": (1, 1, 1, 1),
}
LINEAR_TABLES = frozenset(TABLES[k] for k in ("CONST0", "CONST1", "PROJ_A", "PROJ_B", "XOR"))


class CircuitError(ValueError):
    pass


# ------------------------------------------------------------------------- IR


@dataclass(frozen=True)
class Gate:
    table: tuple[int, int, int, int]
    a: int
    b: int
    c: int
    level: int

    def __call__(self, va: int, vb: int) -> int:
        return self.table[2 * va + vb]


@dataclass(frozen=True)
class CircuitTopology:
    """What a simulator may see: wiring and levels, no truth tables."""

    n: int
    wires: tuple[tuple[int, int, int, int], ...]  # (a, b, c, level)
    outputs: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.wires)

    @property
    def p(self) -> int:
        return self.n + self.q


@dataclass(frozen=True)
class LeveledCircuit:
    n: int
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "outputs", tuple(int(o) for o in self.outputs))
        self.validate()

    @property
    def q(self) -> int:
        return len(self.gates)

    @property
    def p(self) -> int:
        return self.n + self.q

    @property
    def m(self) -> int:
        return len(self.outputs)

    @property
    def depth(self) -> int:
        return max((g.level for g in self.gates), default=0)

    def validate(self) -> None:
        if self.n < 0:
            raise CircuitError("negative input count")
        level = {i: 0 for i in range(self.n)}
        last = 1
        for idx, g in enumerate(self.gates):
            if len(g.table) != 4 or any(t not in (0, 1) for t in g.table):
                raise CircuitError(f"gate {idx}: truth table must be four bits")
            if g.level < last:
                raise CircuitError(f"gate {idx}: gates must be sorted by ascending level >= 1")
            last = g.level
            if not self.n <= g.c < self.p or g.c in level:
                raise CircuitError(f"gate {idx}: output wire {g.c} invalid or reused")
            for w in (g.a, g.b):
                if w not in level:
                    raise CircuitError(f"gate {idx}: wire {w} is not available")
                if level[w] != g.level - 1:
                    raise CircuitError(
                        f"non-leveled circuit: gate {idx} at level {g.level} reads wire {w} of level {level[w]}"
                    )
            level[g.c] = g.level
        for o in self.outputs:
            if o not in level:
                raise CircuitError(f"output wire {o} does not exist")

    def wire_values(self, x) -> np.ndarray:
        x = gf2.as_bits(x)
        if len(x) != self.n:
            raise CircuitError(f"circuit takes {self.n} inputs, got {len(x)}")
        v = np.zeros(self.p, dtype=np.uint8)
        v[: self.n] = x
        for g in self.gates:
            v[g.c] = g(int(v[g.a]), int(v[g.b]))
        return v

    def evaluate(self, x) -> np.ndarray:
        return self.wire_values(x)[list(self.outputs)]

    def topology(self) -> CircuitTopology:
        return CircuitTopology(self.n, tuple((g.a, g.b, g.c, g.level) for g in self.gates), self.outputs)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m} {self.p} {self.q}"]
        for g in self.gates:
            lines.append(f"{g.level} {''.join(map(str, g.table))} {g.a} {g.b} {g.c}")
        lines.append(" ".join(map(str, self.outputs)))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "LeveledCircuit":
        rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
        rows = [r for r in rows if r]
        if not rows or len(rows[0]) != 4:
            raise CircuitError("header must be 'n m p q'")
        n, m, p, q = map(int, rows[0])
        if len(rows) < q + 1:
            raise CircuitError("fewer gate lines than q")
        gates = []
        for r in rows[1 : q + 1]:
            if len(r) != 5 or len(r[1]) != 4 or set(r[1]) - {"0", "1"}:
                raise CircuitError(f"bad gate line {' '.join(r)!r}")
            gates.append(Gate(tuple(int(ch) for ch in r[1]), int(r[2]), int(r[3]), int(r[4]), int(r[0])))
        outs = [int(t) for r in rows[q + 1 :] for t in r]
        if len(outs) != m:
            raise CircuitError(f"expected {m} output wires, found {len(outs)}")
        circ = cls(n, tuple(gates), tuple(outs))
        if circ.p != p:
            raise CircuitError(f"header says p={p} but n+q={circ.p}")
        return circ


def random_leveled_circuit(n: int, q: int, m: int, rng: np.random.Generator,
                           depth: int | None = None, tables=None) -> LeveledCircuit:
    """Random leveled circuit with q gates spread over ``depth`` levels."""
    if n < 1 or q < 1 or m < 1:
        raise CircuitError("need at least one input, gate and output")
    depth = depth if depth is not None else int(rng.integers(1, min(q, 6) + 1))
    depth = max(1, min(depth, q))
    cuts = np.sort(rng.choice(np.arange(1, q), depth - 1, replace=False)) if depth > 1 else []
    sizes = np.diff(np.concatenate([[0], cuts, [q]])).astype(int)
    tables = list(tables) if tables is not None else [tuple(int(b) for b in f"{t:04b}") for t in range(16)]
    gates = []
    prev = list(range(n))
    wire = n
    for lvl, size in enumerate(sizes, start=1):
        cur = []
        for _ in range(size):
            a, b = (int(v) for v in rng.choice(prev, 2))
            gates.append(Gate(tables[int(rng.integers(len(tables)))], a, b, wire, lvl))
            cur.append(wire)
            wire += 1
        prev = cur
    outs = rng.choice(np.arange(n, n + q), m, replace=m > q)
    return LeveledCircuit(n, tuple(gates), tuple(int(o) for o in outs))


def lint_linear(circuit: LeveledCircuit) -> list[int]:
    """Indices of gates that are not XOR, pass-through or constant."""
    return [i for i, g in enumerate(circuit.gates) if g.table not in LINEAR_TABLES]


# ------------------------------------------------------------------ garbling


@dataclass(eq=False)
class LabelSet:
    keys: np.ndarray  # (wires, 2, lam)

    @property
    def n(self) -> int:
        return self.keys.shape[0]

    def select(self, x) -> np.ndarray:
        x = gf2.as_bits(x)
        return self.keys[np.arange(len(x)), x]


@dataclass(eq=False)
class GarbledCircuit:
    topology: CircuitTopology
    rows: tuple[CeBundle, ...]
    output_maps: tuple  # per output: ((key0, bit0), (key1, bit1))
    oracle: Qrom
    profile: CeProfile = field(default=COMPACT_PROFILE)

    def registers(self) -> list:
        return [b.quantum for b in self.rows]

    @property
    def quantum_size(self) -> int:
        return sum(b.quantum.n for b in self.rows)

    @property
    def vk(self) -> tuple:
        return tuple(b.vk for b in self.rows)


def _key_pairs(count: int, lam: int, rng) -> np.ndarray:
    """(count, 2, lam) uniform keys with key 0 != key 1 on every wire.

    Equal keys would make all four rows of a gate decryptable, which short
    labels hit often enough to matter.
    """
    keys = rng.integers(0, 2, (count, 2, lam), dtype=np.uint8)
    same = np.flatnonzero((keys[:, 0] == keys[:, 1]).all(axis=1))
    while len(same):
        keys[same, 1] = rng.integers(0, 2, (len(same), lam), dtype=np.uint8)
        same = same[(keys[same, 0] == keys[same, 1]).all(axis=1)]
    return keys


def gc_samp(n: int, rng: np.random.Generator, lam: int = COMPACT_PROFILE.lam) -> LabelSet:
    return LabelSet(_key_pairs(n, lam, rng))


def _full_keys(topology: CircuitTopology, inputs: np.ndarray, rng) -> np.ndarray:
    lam = inputs.shape[-1]
    keys = np.empty((topology.p, 2, lam), dtype=np.uint8)
    keys[: topology.n] = inputs
    keys[topology.n :] = _key_pairs(topology.q, lam, rng)
    return keys


_SIGMA_A = np.array([0, 0, 1, 1])
_SIGMA_B = np.array([0, 1, 0, 1])


def _garble(topology: CircuitTopology, keys: np.ndarray, cidx: np.ndarray, maps, rng,
            oracle: Qrom | None, profile: CeProfile):
    """Core of every garbler; ``cidx[i, row]`` picks which key of wire c row encrypts."""
    q = topology.q
    lam = keys.shape[-1]
    if lam != profile.lam:
        profile = CeProfile(lam=lam, w=profile.w)
    oracle = oracle if oracle is not None else Qrom(seed=int(rng.integers(2**63)))
    if q == 0:
        return GarbledCircuit(topology, (), tuple(maps), oracle, profile), ()
    wires = np.array(topology.wires, dtype=np.int64).reshape(q, 4)
    a, b, c = wires[:, 0], wires[:, 1], wires[:, 2]
    gamma = np.argsort(rng.random((q, 4)), axis=1)  # stored row j = original row gamma[i, j]
    sa = _SIGMA_A[gamma]
    sb = _SIGMA_B[gamma]
    pads = rng.integers(0, 2, (q, 4, lam), dtype=np.uint8)
    kc = keys[c[:, None], np.take_along_axis(cidx, gamma, axis=1)]
    enc_keys = np.stack([keys[a[:, None], sa], keys[b[:, None], sb]], axis=2)  # (q, 4, 2, lam)
    msgs = np.stack([pads, pads ^ kc], axis=2)
    bundles = ce_enc_qrom_many(enc_keys.reshape(-1, lam), msgs.reshape(-1, lam), oracle, rng, profile)
    gc = GarbledCircuit(topology, tuple(bundles), tuple(maps), oracle, profile)
    return gc, gc.vk


def _honest_cidx(circuit: LeveledCircuit) -> np.ndarray:
    return np.array([g.table for g in circuit.gates], dtype=np.int64).reshape(circuit.q, 4)


def _maps(topology: CircuitTopology, keys, flips=None):
    flips = np.zeros(len(topology.outputs), np.uint8) if flips is None else flips
    return tuple(
        ((keys[o, 0].copy(), int(f)), (keys[o, 1].copy(), int(f) ^ 1))
        for o, f in zip(topology.outputs, flips)
    )


def gc_grbl(circuit: LeveledCircuit, labels: LabelSet, rng: np.random.Generator,
            oracle: Qrom | None = None, profile: CeProfile = COMPACT_PROFILE):
    """(garbled circuit, vk).  vk lists the 8q component keys in layout order."""
    circuit.validate()
    if labels.n != circuit.n:
        raise CircuitError(f"{labels.n} input label pairs for {circuit.n} inputs")
    topo = circuit.topology()
    keys = _full_keys(topo, labels.keys, rng)
    return _garble(topo, keys, _honest_cidx(circuit), _maps(topo, keys), rng, oracle, profile)


def gc_eval(gc: GarbledCircuit, input_labels, rng=None) -> np.ndarray | None:
    """Outputs, or None if some gate lacks a unique decryptable row or an output key is unknown.

    Honest decryption measures deterministic outcomes only, so the garbled
    circuit survives and can be evaluated again.
    """
    topo = gc.topology
    input_labels = np.asarray(input_labels, dtype=np.uint8)
    if input_labels.shape[0] != topo.n:
        raise CircuitError(f"{input_labels.shape[0]} labels for {topo.n} inputs")
    lam = input_labels.shape[1]
    held = np.zeros((topo.p, lam), dtype=np.uint8)
    held[: topo.n] = input_labels
    by_level: dict[int, list[int]] = {}
    for i, w in enumerate(topo.wires):
        by_level.setdefault(w[3], []).append(i)
    # Gates on one level only read wires fixed on earlier levels, so every
    # row of a level can be tried in a single batched call.
    for level in sorted(by_level):
        gates = by_level[level]
        keys = [held[topo.wires[i][s]] for i in gates for _ in range(4) for s in (0, 1)]
        rows = [gc.rows[8 * i + k] for i in gates for k in range(8)]
        got = ce_dec_qrom_many(keys, rows, gc.oracle, rng)
        for g, i in enumerate(gates):
            found = []
            for j in range(4):
                da, db = got[8 * g + 2 * j], got[8 * g + 2 * j + 1]
                if da is not None and db is not None:
                    found.append(da ^ db)
            if len(found) != 1:
                return None
            held[topo.wires[i][2]] = found[0]
    out = np.zeros(len(topo.outputs), dtype=np.uint8)
    for k, (o, ((k0, v0), (k1, v1))) in enumerate(zip(topo.outputs, gc.output_maps)):
        if np.array_equal(held[o], k0):
            out[k] = v0
        elif np.array_equal(held[o], k1):
            out[k] = v1
        else:
            return None
    return out


def gc_del(gc: GarbledCircuit, rng: np.random.Generator) -> list:
    return ce_del_qrom_many(list(gc.rows), rng)


def gc_vrfy(vk, cert) -> bool:
    return cd_vrfy_many(list(vk), list(cert))


def gc_modify(a, b, cert) -> list:
    return modify_layout(a, b, cert)


def gc_twirl(gc: GarbledCircuit, a, b) -> None:
    twirl_layout(gc.registers(), a, b)


def gc_sim(topology, y, input_labels, rng: np.random.Generator,
           oracle: Qrom | None = None, profile: CeProfile = COMPACT_PROFILE):
    """Garble from the topology, the output y and one label per input.

    Every row carries key 0 of its outgoing wire, and the output maps are
    keyed so that key 0 reads as y.  The simulator never learns x, so the
    given labels are filed as key 0 of each input wire; the gate garbler
    treats both keys alike, so nothing depends on that choice.
    """
    if isinstance(topology, LeveledCircuit):
        topology = topology.topology()
    y = gf2.as_bits(y)
    input_labels = np.asarray(input_labels, dtype=np.uint8)
    lam = input_labels.shape[1]
    inputs = np.empty((topology.n, 2, lam), dtype=np.uint8)
    inputs[:, 0] = input_labels
    inputs[:, 1] = rng.integers(0, 2, (topology.n, lam), dtype=np.uint8)
    keys = _full_keys(topology, inputs, rng)
    cidx = np.zeros((topology.q, 4), dtype=np.int64)
    return _garble(topology, keys, cidx, _maps(topology, keys, y), rng, oracle, profile)


def gc_inputdep_sim(j: int, circuit: LeveledCircuit, x, input_labels, rng: np.random.Generator,
                    oracle: Qrom | None = None, profile: CeProfile = COMPACT_PROFILE):
    """Gates 1..j encrypt the key of the value their wire carries on x; the rest are honest."""
    if not 0 <= j <= circuit.q:
        raise CircuitError(f"j must lie in [0, {circuit.q}]")
    x = gf2.as_bits(x)
    input_labels = np.asarray(input_labels, dtype=np.uint8)
    lam = input_labels.shape[1]
    idx = np.arange(circuit.n)
    inputs = np.empty((circuit.n, 2, lam), dtype=np.uint8)
    inputs[idx, x] = input_labels
    inputs[idx, x ^ 1] = rng.integers(0, 2, (circuit.n, lam), dtype=np.uint8)
    topo = circuit.topology()
    keys = _full_keys(topo, inputs, rng)
    v = circuit.wire_values(x)
    cidx = _honest_cidx(circuit)
    for i, g in enumerate(circuit.gates[:j]):
        cidx[i, :] = v[g.c]
    return _garble(topo, keys, cidx, _maps(topo, keys), rng, oracle, profile)


# ------------------------------------------------------------------ families


class FunctionFamily:
    """A key encoding of functions f plus circuits U(., m) with m hardwired."""

    name = "family"
    key_bits: int
    output_bits: int

    def encode_key(self, f) -> np.ndarray:
        raise NotImplementedError

    def hardwire(self, m) -> LeveledCircuit:
        raise NotImplementedError

    def apply(self, f, m) -> np.ndarray:
        raise NotImplementedError

    def random_function(self, rng):
        raise NotImplementedError

    def random_message(self, rng):
        raise NotImplementedError


class MuxFamily(FunctionFamily):
    """f is a truth table on k bits; U(., m) picks entry m (first bit most significant)."""

    name = "mux"
    MAX_K = 8

    def __init__(self, k: int):
        if not 1 <= k <= self.MAX_K:
            raise CircuitError(f"mux domain bits must lie in [1, {self.MAX_K}]")
        self.k = k
        self.key_bits = 1 << k
        self.output_bits = 1
        self.message_bits = k

    def encode_key(self, f) -> np.ndarray:
        f = gf2.as_bits(f)
        if f.shape != (self.key_bits,):
            raise CircuitError(f"truth table must have {self.key_bits} entries")
        return f

    def hardwire(self, m) -> LeveledCircuit:
        m = gf2.as_bits(m)
        if m.shape != (self.k,):
            raise CircuitError(f"message must have {self.k} bits")
        gates = []
        prev = list(range(self.key_bits))
        wire = self.key_bits
        for lvl in range(1, self.k + 1):
            sel = TABLES["PROJ_B"] if m[self.k - lvl] else TABLES["PROJ_A"]
            cur = []
            for j in range(0, len(prev), 2):
                gates.append(Gate(sel, prev[j], prev[j + 1], wire, lvl))
                cur.append(wire)
                wire += 1
            prev = cur
        return LeveledCircuit(self.key_bits, tuple(gates), (prev[0],))

    def apply(self, f, m) -> np.ndarray:
        idx = int("".join(map(str, gf2.as_bits(m))), 2)
        return gf2.as_bits([gf2.as_bits(f)[idx]])

    def random_function(self, rng):
        return rng.integers(0, 2, self.key_bits, dtype=np.uint8)

    def random_message(self, rng):
        return rng.integers(0, 2, self.k, dtype=np.uint8)


def graded_lex_monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= degree: by degree, then lexicographically descending."""
    out = []
    for d in range(degree + 1):
        level = [e for e in product(range(d + 1), repeat=nvars) if sum(e) == d]
        out.extend(sorted(level, reverse=True))
    return out


@dataclass(frozen=True)
class LinearFunction:
    """C as graded-lex coefficients in GF(2^k) plus the pad selector Delta (0-based)."""

    coeffs: tuple[int, ...]
    delta: tuple[int, ...]


def xor_network(n_inputs: int, subsets) -> LeveledCircuit:
    """Leveled circuit whose output j is the XOR of input wires subsets[j].

    Balanced XOR trees; an odd wire is carried up by a pass-through gate and
    an empty subset becomes a constant-0 gate.
    """
    if n_inputs < 1:
        raise CircuitError("need at least one input wire")
    gates: list[Gate] = []
    wire = n_inputs
    # Repeated wires cancel in pairs.
    current = [sorted(w for w, c in Counter(int(v) for v in s).items() if c % 2) for s in subsets]
    at_input = [True] * len(current)
    lvl = 0
    while any(at_input[j] or len(cur) > 1 for j, cur in enumerate(current)):
        lvl += 1
        for j, cur in enumerate(current):
            if not (at_input[j] or len(cur) > 1):
                continue
            nxt = []
            if not cur:
                gates.append(Gate(TABLES["CONST0"], 0, 0, wire, lvl))
                nxt.append(wire)
                wire += 1
            for t in range(0, len(cur) - 1, 2):
                gates.append(Gate(TABLES["XOR"], cur[t], cur[t + 1], wire, lvl))
                nxt.append(wire)
                wire += 1
            if len(cur) % 2:
                gates.append(Gate(TABLES["PROJ_A"], cur[-1], cur[-1], wire, lvl))
                nxt.append(wire)
                wire += 1
            current[j] = nxt
            at_input[j] = False
    return LeveledCircuit(n_inputs, tuple(gates), tuple(cur[0] for cur in current))


class LinearGf2kFamily(FunctionFamily):
    """G(m) = C(mu) + sum_{i in Delta} xi_i over GF(2^k), with m = (mu_1..mu_l, xi_1..xi_S) hardwired.

    The key encodes C's coefficients (k bits each, constant term first) and
    then the S indicator bits of Delta.  With m fixed every monomial is a
    field constant, so each output bit is an XOR of key bits.
    """

    name = "linear"

    def __init__(self, nvars: int, degree: int, pads: int, k: int):
        self.nvars = nvars
        self.degree = degree
        self.pads = pads
        self.field = gf(k)
        self.k = k
        self.monomials = graded_lex_monomials(nvars, degree)
        if len(self.monomials) != comb(nvars + degree, degree):
            raise CircuitError("monomial enumeration mismatch")
        self.key_bits = len(self.monomials) * k + pads
        self.output_bits = k
        self.message_len = nvars + pads

    @property
    def monomial_count(self) -> int:
        return len(self.monomials)

    def encode_key(self, f: LinearFunction) -> np.ndarray:
        if len(f.coeffs) != self.monomial_count:
            raise CircuitError(f"expected {self.monomial_count} coefficients")
        bits = [self.field.to_bits(self.field.check(int(c))) for c in f.coeffs]
        ind = np.zeros(self.pads, dtype=np.uint8)
        for i in f.delta:
            if not 0 <= i < self.pads:
                raise CircuitError(f"pad index {i} out of range")
            ind[i] = 1
        return np.concatenate(bits + [ind])

    def monomial_values(self, mu) -> list[int]:
        F = self.field
        out = []
        for e in self.monomials:
            v = 1
            for base, power in zip(mu, e):
                v = F.mul(v, F.pow(int(base), power))
            out.append(v)
        return out

    def evaluate_poly(self, coeffs, mu) -> int:
        acc = 0
        for c, v in zip(coeffs, self.monomial_values(mu)):
            acc ^= self.field.mul(int(c), v)
        return acc

    def _split(self, m):
        m = [int(v) for v in m]
        if len(m) != self.message_len:
            raise CircuitError(f"message must hold {self.message_len} field elements")
        return m[: self.nvars], m[self.nvars :]

    def apply_field(self, f: LinearFunction, m) -> int:
        mu, xi = self._split(m)
        acc = self.evaluate_poly(f.coeffs, mu)
        for i in f.delta:
            acc ^= xi[i]
        return acc

    def apply(self, f, m) -> np.ndarray:
        return self.field.to_bits(self.apply_field(f, m))

    def hardwire(self, m) -> LeveledCircuit:
        mu, xi = self._split(m)
        k = self.k
        subsets: list[list[int]] = [[] for _ in range(k)]
        for j, v in enumerate(self.monomial_values(mu)):
            mat = self.field.mul_matrix(v)
            for t in range(k):
                subsets[t].extend(j * k + u for u in np.flatnonzero(mat[t]).tolist())
        base = self.monomial_count * k
        for i, val in enumerate(xi):
            for t in range(k):
                if (int(val) >> t) & 1:
                    subsets[t].append(base + i)
        return xor_network(self.key_bits, subsets)

    def random_function(self, rng, delta_size: int | None = None) -> LinearFunction:
        coeffs = tuple(int(c) for c in rng.integers(0, self.field.order, self.monomial_count))
        size = int(rng.integers(0, self.pads + 1)) if delta_size is None else delta_size
        delta = tuple(sorted(int(i) for i in rng.choice(self.pads, size, replace=False)))
        return LinearFunction(coeffs, delta)

    def random_message(self, rng):
        return [int(v) for v in rng.integers(0, self.field.order, self.message_len)]


def build_mux_family(k: int) -> MuxFamily:
    return MuxFamily(k)


def build_linear_gf2k_family(nvars: int, degree: int, pads: int, k: int) -> LinearGf2kFamily:
    return LinearGf2kFamily(nvars, degree, pads, k)
