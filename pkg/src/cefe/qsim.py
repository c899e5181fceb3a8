"""Classical simulation of the quantum objects used by the schemes.

States are stabilizer states.  A :class:`QuantumRegister` is a handle onto
some qubits of a backing state; several handles may share one state (Bell
pairs).  Unentangled states are kept in a product form (one single-qubit
stabilizer per qubit), which is just a diagonal tableau stored as three
vectors; the first entangling gate upgrades the state to a full
stabilizer tableau.

Only Clifford gates and Pauli-basis measurements exist here.  No-cloning
is an API contract: registers are consumed by destructive operations and
only code running inside :func:`test_harness` may duplicate one.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass

import numpy as np

from . import gf2

MAX_QUBITS = 4096

COMPUTATIONAL = 0
HADAMARD = 1

CLIFFORD_GATES = frozenset({"I", "X", "Y", "Z", "H", "S", "SDG", "CNOT", "CZ", "SWAP"})

_harness = contextvars.ContextVar("qsim_harness", default=False)


class QuantumError(RuntimeError):
    pass


class ConsumedRegisterError(QuantumError):
    pass


class NonCliffordError(QuantumError):
    pass


class CloningError(QuantumError):
    pass


@contextlib.contextmanager
def test_harness():
    """Grant the current context permission to duplicate registers."""
    token = _harness.set(True)
    try:
        yield
    finally:
        _harness.reset(token)


# --------------------------------------------------------------------- backend


def _pauli_product_phase(x1, z1, x2, z2):
    """Sum over qubits of the i-exponent picked up by P1*P2 (Aaronson-Gottesman g)."""
    x1 = x1.astype(np.int64)
    z1 = z1.astype(np.int64)
    x2 = x2.astype(np.int64)
    z2 = z2.astype(np.int64)
    g = np.where(
        (x1 == 1) & (z1 == 1),
        z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )
    return g.sum(axis=-1)


class _State:
    """A pure stabilizer state on ``n`` qubits.

    Product form: ``x, z, r`` are length-n vectors; generator j is
    ``(-1)^r[j]`` times X, Z or Y on qubit j.  Tableau form: ``x, z`` are
    n x n matrices of generators (rows) over qubits (columns).
    """

    __slots__ = ("n", "product", "x", "z", "r", "forward")

    def __init__(self, x, z, r, product: bool):
        self.n = len(r)
        if not product and self.n > MAX_QUBITS:
            raise QuantumError(f"{self.n} qubits exceeds the simulator cap of {MAX_QUBITS}")
        self.product = product
        self.x = x
        self.z = z
        self.r = r
        self.forward = None

    # -- conversion

    def to_tableau(self) -> None:
        if not self.product:
            return
        n = self.n
        if n > MAX_QUBITS:
            raise QuantumError(f"{n} entangled qubits exceeds the simulator cap of {MAX_QUBITS}")
        x = np.zeros((n, n), dtype=np.uint8)
        z = np.zeros((n, n), dtype=np.uint8)
        idx = np.arange(n)
        x[idx, idx] = self.x
        z[idx, idx] = self.z
        self.x, self.z = x, z
        self.product = False

    # -- single-qubit Cliffords, vectorized over a qubit index array

    def h(self, qs) -> None:
        if self.product:
            self.r[qs] ^= self.x[qs] & self.z[qs]
            self.x[qs], self.z[qs] = self.z[qs].copy(), self.x[qs].copy()
        else:
            self.r ^= (np.bitwise_and(self.x[:, qs], self.z[:, qs]).sum(axis=1, dtype=np.int64) & 1).astype(np.uint8)
            self.x[:, qs], self.z[:, qs] = self.z[:, qs].copy(), self.x[:, qs].copy()

    def s(self, qs) -> None:
        if self.product:
            self.r[qs] ^= self.x[qs] & self.z[qs]
            self.z[qs] ^= self.x[qs]
        else:
            self.r ^= (np.bitwise_and(self.x[:, qs], self.z[:, qs]).sum(axis=1, dtype=np.int64) & 1).astype(np.uint8)
            self.z[:, qs] ^= self.x[:, qs]

    def pauli(self, xs, zs) -> None:
        """Conjugate by X on qubits ``xs`` and Z on qubits ``zs`` (sign flips only)."""
        xs = np.asarray(xs, dtype=np.int64)
        zs = np.asarray(zs, dtype=np.int64)
        if self.product:
            if len(xs):
                self.r[xs] ^= self.z[xs]
            if len(zs):
                self.r[zs] ^= self.x[zs]
        else:
            flip = np.zeros(self.n, dtype=np.int64)
            if len(xs):
                flip += self.z[:, xs].sum(axis=1, dtype=np.int64)
            if len(zs):
                flip += self.x[:, zs].sum(axis=1, dtype=np.int64)
            self.r ^= (flip & 1).astype(np.uint8)

    def cnot(self, c: int, t: int) -> None:
        self.to_tableau()
        x, z = self.x, self.z
        self.r ^= x[:, c] & z[:, t] & (x[:, t] ^ z[:, c] ^ 1)
        x[:, t] ^= x[:, c]
        z[:, c] ^= z[:, t]

    # -- measurement

    def measure(self, qs, basis, rng: np.random.Generator) -> np.ndarray:
        """Measure qubits ``qs`` in per-qubit bases (0 = Z, 1 = X)."""
        qs = np.asarray(qs, dtype=np.int64)
        basis = np.asarray(basis, dtype=np.uint8)
        if self.product:
            # Deterministic iff the qubit's stabilizer is the measured Pauli.
            want_x = basis
            want_z = basis ^ 1
            det = (self.x[qs] == want_x) & (self.z[qs] == want_z)
            out = np.where(det, self.r[qs], rng.integers(0, 2, len(qs), dtype=np.uint8)).astype(np.uint8)
            self.x[qs] = want_x
            self.z[qs] = want_z
            self.r[qs] = out
            return out
        out = np.zeros(len(qs), dtype=np.uint8)
        for i, (q, b) in enumerate(zip(qs.tolist(), basis.tolist())):
            if b:
                self.h([q])
            out[i] = self._measure_z(q, rng)
            if b:
                self.h([q])
        return out

    def _rowmul(self, dst: int, src: int) -> None:
        """generator[dst] <- generator[src] * generator[dst]."""
        ph = _pauli_product_phase(self.x[src], self.z[src], self.x[dst], self.z[dst])
        total = (2 * int(self.r[src]) + 2 * int(self.r[dst]) + int(ph)) % 4
        self.r[dst] = total // 2
        self.x[dst] ^= self.x[src]
        self.z[dst] ^= self.z[src]

    def _measure_z(self, q: int, rng) -> int:
        anti = np.flatnonzero(self.x[:, q])
        if anti.size:
            p = int(anti[0])
            for k in anti[1:].tolist():
                self._rowmul(k, p)
            outcome = int(rng.integers(0, 2))
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, q] = 1
            self.r[p] = outcome
            return outcome
        # Z_q is in the stabilizer group: find which generators multiply to it.
        target = np.zeros(2 * self.n, dtype=np.uint8)
        target[self.n + q] = 1
        coeffs = gf2.solve(np.hstack([self.x, self.z]).T, target)
        if coeffs is None:
            raise QuantumError("state is not pure; Z measurement undetermined")
        rows = np.flatnonzero(coeffs).tolist()
        acc_x = np.zeros(self.n, dtype=np.uint8)
        acc_z = np.zeros(self.n, dtype=np.uint8)
        acc_r = 0
        for row in rows:
            ph = _pauli_product_phase(self.x[row], self.z[row], acc_x, acc_z)
            acc_r = (2 * int(self.r[row]) + 2 * acc_r + int(ph)) % 4 // 2
            acc_x ^= self.x[row]
            acc_z ^= self.z[row]
        return acc_r

    # -- structure

    def copy(self) -> "_State":
        return _State(self.x.copy(), self.z.copy(), self.r.copy(), self.product)

    def generators(self):
        """Full (x, z, r) tableau view without changing the representation."""
        if self.product:
            n = self.n
            x = np.zeros((n, n), dtype=np.uint8)
            z = np.zeros((n, n), dtype=np.uint8)
            idx = np.arange(n)
            x[idx, idx] = self.x
            z[idx, idx] = self.z
            return x, z, self.r.copy()
        return self.x.copy(), self.z.copy(), self.r.copy()

    def absorb(self, other: "_State") -> int:
        """Tensor ``other`` onto the end of this state; return its qubit offset."""
        offset = self.n
        if not (self.product and other.product) and self.n + other.n > MAX_QUBITS:
            raise QuantumError("merged state exceeds the simulator cap")
        if self.product and other.product:
            self.x = np.concatenate([self.x, other.x])
            self.z = np.concatenate([self.z, other.z])
        else:
            ax, az, _ = self.generators()
            bx, bz, _ = other.generators()
            n = self.n + other.n
            x = np.zeros((n, n), dtype=np.uint8)
            z = np.zeros((n, n), dtype=np.uint8)
            x[: self.n, : self.n] = ax
            z[: self.n, : self.n] = az
            x[self.n :, self.n :] = bx
            z[self.n :, self.n :] = bz
            self.x, self.z = x, z
            self.product = False
        self.r = np.concatenate([self.r, other.r])
        self.n += other.n
        other.forward = (self, offset)
        return offset


def _echelon(x, z, r, cols):
    """Gaussian elimination over the listed combined columns, tracking signs.

    ``cols`` index the concatenation [x | z].  Returns the number of pivot rows;
    x, z, r are modified in place with pivot rows moved to the top.
    """
    nq = x.shape[1]
    rows = x.shape[0]
    piv = 0
    for c in cols:
        if piv == rows:
            break
        colv = x[:, c] if c < nq else z[:, c - nq]
        hits = np.flatnonzero(colv[piv:])
        if hits.size == 0:
            continue
        src = piv + int(hits[0])
        if src != piv:
            x[[piv, src]] = x[[src, piv]]
            z[[piv, src]] = z[[src, piv]]
            r[[piv, src]] = r[[src, piv]]
        colv = x[:, c] if c < nq else z[:, c - nq]
        for k in np.flatnonzero(colv).tolist():
            if k == piv:
                continue
            ph = _pauli_product_phase(x[piv], z[piv], x[k], z[k])
            r[k] = ((2 * int(r[piv]) + 2 * int(r[k]) + int(ph)) % 4) // 2
            x[k] ^= x[piv]
            z[k] ^= z[piv]
        piv += 1
    return piv


# -------------------------------------------------------------------- handles


@dataclass(frozen=True)
class PauliMask:
    """The operator Z^z X^x, applied by conjugation."""

    x_bits: np.ndarray
    z_bits: np.ndarray

    def __post_init__(self):
        xb = gf2.as_bits(self.x_bits)
        zb = gf2.as_bits(self.z_bits)
        if xb.shape != zb.shape:
            raise QuantumError("X and Z masks differ in length")
        object.__setattr__(self, "x_bits", xb)
        object.__setattr__(self, "z_bits", zb)

    def __len__(self):
        return len(self.x_bits)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "PauliMask":
        return cls(rng.integers(0, 2, n, dtype=np.uint8), rng.integers(0, 2, n, dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "PauliMask":
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    def slice(self, start: int, stop: int) -> "PauliMask":
        return PauliMask(self.x_bits[start:stop], self.z_bits[start:stop])


@dataclass(frozen=True)
class QubitPermutation:
    """Qubit i moves to position image[i]."""

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(i) for i in self.image)
        if sorted(img) != list(range(len(img))):
            raise QuantumError("not a permutation")
        object.__setattr__(self, "image", img)

    def inverse(self) -> "QubitPermutation":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return QubitPermutation(tuple(inv))

    def then(self, other: "QubitPermutation") -> "QubitPermutation":
        """Apply self first, then other."""
        return QubitPermutation(tuple(other.image[j] for j in self.image))

    @classmethod
    def front_loading(cls, subset, total: int) -> "QubitPermutation":
        """U_Q: the qubits in ``subset`` (ascending) go to the front, the rest follow."""
        subset = sorted(int(i) for i in subset)
        rest = [i for i in range(total) if i not in set(subset)]
        order = subset + rest
        image = [0] * total
        for pos, q in enumerate(order):
            image[q] = pos
        return cls(tuple(image))


class QuantumRegister:
    """Handle onto ``n`` qubits of a backing stabilizer state."""

    __slots__ = ("_state", "_qubits", "consumed")

    def __init__(self, state: _State, qubits):
        self._state = state
        self._qubits = np.asarray(qubits, dtype=np.int64)
        self.consumed = False

    @property
    def n(self) -> int:
        return len(self._qubits)

    def __len__(self):
        return len(self._qubits)

    def __repr__(self):
        tag = " consumed" if self.consumed else ""
        return f"<QuantumRegister n={self.n}{tag}>"

    def _live(self) -> tuple[_State, np.ndarray]:
        if self.consumed:
            raise ConsumedRegisterError("register has been consumed")
        st = self._state
        while st.forward is not None:
            st, off = st.forward
            self._qubits = self._qubits + off
        self._state = st
        return st, self._qubits

    def consume(self) -> None:
        self._live()
        self.consumed = True

    def view(self, start: int, stop: int) -> "QuantumRegister":
        """Handle onto positions start..stop-1 of this register (same backing state)."""
        _, qs = self._live()
        return QuantumRegister(self._state, qs[start:stop].copy())

    def standalone(self) -> bool:
        st, qs = self._live()
        return st.n == len(qs)


def prepare_bb84(bits, basis) -> QuantumRegister:
    """Qubit i is |bits_i> if basis_i == 0, else H|bits_i>."""
    bits = gf2.as_bits(bits)
    basis = gf2.as_bits(basis)
    if bits.shape != basis.shape:
        raise QuantumError("bits and basis differ in length")
    st = _State(basis.copy(), basis ^ 1, bits.copy(), product=True)
    return QuantumRegister(st, np.arange(len(bits)))


def prepare_bb84_batch(bits, basis) -> list[QuantumRegister]:
    """One register per row, all views onto a single product state.

    Unentangled, so the handles behave exactly like separately prepared
    registers; sharing the backing arrays just saves allocations.
    """
    bits = gf2.as_bits(bits)
    basis = gf2.as_bits(basis)
    if bits.shape != basis.shape or bits.ndim != 2:
        raise QuantumError("bits and basis must be matching 2-D arrays")
    rows, n = bits.shape
    st = _State(basis.ravel().copy(), basis.ravel() ^ 1, bits.ravel().copy(), product=True)
    return [QuantumRegister(st, np.arange(i * n, (i + 1) * n)) for i in range(rows)]


def zero_state(n: int) -> QuantumRegister:
    return prepare_bb84(np.zeros(n, np.uint8), np.zeros(n, np.uint8))


def apply_pauli(reg: QuantumRegister, mask: PauliMask) -> None:
    st, qs = reg._live()
    if len(mask) != len(qs):
        raise QuantumError(f"mask length {len(mask)} != register size {len(qs)}")
    st.pauli(qs[mask.x_bits == 1], qs[mask.z_bits == 1])


def apply_hadamard_mask(reg: QuantumRegister, mask) -> None:
    st, qs = reg._live()
    mask = gf2.as_bits(mask)
    if len(mask) != len(qs):
        raise QuantumError(f"mask length {len(mask)} != register size {len(qs)}")
    sel = qs[mask == 1]
    if len(sel):
        st.h(sel)


def apply_permutation(reg: QuantumRegister, perm: QubitPermutation) -> None:
    """Relabel qubits: the qubit at position i moves to position perm.image[i]."""
    _, qs = reg._live()
    if len(perm.image) != len(qs):
        raise QuantumError("permutation size mismatch")
    new = np.empty_like(qs)
    new[np.asarray(perm.image)] = qs
    reg._qubits = new


def apply_gate(reg: QuantumRegister, name: str, *positions: int) -> None:
    """Apply a named Clifford gate; anything outside the Clifford group is refused."""
    name = name.upper()
    if name not in CLIFFORD_GATES:
        raise NonCliffordError(f"gate {name!r} is not a supported Clifford gate")
    st, qs = reg._live()
    q = [int(qs[p]) for p in positions]
    if name == "I":
        return
    if name == "X":
        st.pauli(q, [])
    elif name == "Z":
        st.pauli([], q)
    elif name == "Y":
        st.pauli(q, q)
    elif name == "H":
        st.h(q)
    elif name == "S":
        st.s(q)
    elif name == "SDG":
        st.s(q)
        st.pauli([], q)
    elif name == "CNOT":
        st.cnot(q[0], q[1])
    elif name == "CZ":
        st.h([q[1]])
        st.cnot(q[0], q[1])
        st.h([q[1]])
    elif name == "SWAP":
        reg._qubits[[positions[0], positions[1]]] = reg._qubits[[positions[1], positions[0]]]


def measure(reg: QuantumRegister, positions, basis, rng: np.random.Generator) -> np.ndarray:
    """Measure the given positions, each in the computational (0) or Hadamard (1) basis.

    Measured qubits collapse in place.  A measurement whose outcome was
    already certain leaves the state untouched.
    """
    st, qs = reg._live()
    positions = np.asarray(positions, dtype=np.int64)
    if len(np.unique(positions)) != len(positions):
        raise QuantumError("measured positions must be distinct")
    basis = np.broadcast_to(np.asarray(basis, dtype=np.uint8), positions.shape)
    return st.measure(qs[positions], basis, rng)


def measure_many(regs, positions, basis, rng: np.random.Generator) -> list[np.ndarray]:
    """Measure positions[i] of regs[i] for every i, batching registers that share a state.

    The registers must be pairwise disjoint; outcomes match separate
    :func:`measure` calls in distribution.
    """
    groups: dict[int, tuple[_State, list]] = {}
    for i, reg in enumerate(regs):
        st, qs = reg._live()
        groups.setdefault(id(st), (st, []))[1].append((i, qs[positions[i]]))
    out: list = [None] * len(regs)
    for st, items in groups.values():
        qs = np.concatenate([it[1] for it in items])
        lens = [len(it[1]) for it in items]
        if all(np.isscalar(basis[i]) for i, _ in items):
            bs = np.repeat(np.array([basis[i] for i, _ in items], dtype=np.uint8), lens)
        else:
            bs = np.concatenate([
                np.broadcast_to(np.asarray(basis[i], dtype=np.uint8), (n,)) for (i, _), n in zip(items, lens)
            ])
        res = st.measure(qs, bs, rng)
        for (i, _), piece in zip(items, np.split(res, np.cumsum(lens)[:-1])):
            out[i] = piece
    return out


def measure_all(reg: QuantumRegister, basis, rng) -> np.ndarray:
    return measure(reg, np.arange(reg.n), basis, rng)


def make_bell_pairs(n: int) -> tuple[QuantumRegister, QuantumRegister]:
    """n Bell pairs; A holds qubits 0..n-1 and B the partners n..2n-1."""
    st = _State(np.zeros(2 * n, np.uint8), np.ones(2 * n, np.uint8), np.zeros(2 * n, np.uint8), True)
    a = np.arange(n)
    st.h(a)
    for j in range(n):
        st.cnot(j, n + j)
    return QuantumRegister(st, a), QuantumRegister(st, np.arange(n, 2 * n))


def _join(a: QuantumRegister, b: QuantumRegister) -> _State:
    sa, _ = a._live()
    sb, _ = b._live()
    if sa is not sb:
        sa.absorb(sb)
        b._live()
    return sa


def teleport(payload: QuantumRegister, epr_a: QuantumRegister, rng) -> tuple[np.ndarray, np.ndarray]:
    """Bell-measure (payload_j, A_j) for each j and return the outcomes (x, z).

    Afterwards B holds X^x Z^z rho Z^z X^x; payload and A are consumed.
    """
    if payload.n != epr_a.n:
        raise QuantumError("payload and EPR half differ in size")
    st = _join(epr_a, payload)
    _, cq = payload._live()
    _, aq = epr_a._live()
    n = payload.n
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    for j in range(n):
        st.cnot(int(cq[j]), int(aq[j]))
        st.h([int(cq[j])])
        z[j] = st.measure([int(cq[j])], [0], rng)[0]
        x[j] = st.measure([int(aq[j])], [0], rng)[0]
    payload.consumed = True
    epr_a.consumed = True
    return x, z


# ------------------------------------------------------------ canonical forms


def _restricted_generators(reg: QuantumRegister):
    """Generators of the stabilizer subgroup supported on the register's qubits.

    Returned as (x, z, r) over the register's own qubit order.
    """
    st, qs = reg._live()
    if st.product:
        n = len(qs)
        x = np.zeros((n, n), dtype=np.uint8)
        z = np.zeros((n, n), dtype=np.uint8)
        idx = np.arange(n)
        x[idx, idx] = st.x[qs]
        z[idx, idx] = st.z[qs]
        return x, z, st.r[qs].copy()
    x, z, r = st.generators()
    others = np.setdiff1d(np.arange(st.n), qs)
    cols = list(others) + [st.n + o for o in others]
    piv = _echelon(x, z, r, cols)
    sub = slice(piv, None)
    return x[sub][:, qs].copy(), z[sub][:, qs].copy(), r[sub].copy()


def canonical_form(reg: QuantumRegister) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unique generator set (RREF over [x|z] with signs) of the register's reduced state."""
    x, z, r = _restricted_generators(reg)
    n = reg.n
    piv = _echelon(x, z, r, list(range(2 * n)))
    return x[:piv], z[:piv], r[:piv]


def canonical_equal(a: QuantumRegister, b: QuantumRegister) -> bool:
    """State equality up to global phase."""
    if a.n != b.n:
        return False
    fa = canonical_form(a)
    fb = canonical_form(b)
    return all(u.shape == v.shape and np.array_equal(u, v) for u, v in zip(fa, fb))


def is_pure(reg: QuantumRegister) -> bool:
    x, _, _ = _restricted_generators(reg)
    return x.shape[0] == reg.n


def duplicate_for_test(reg: QuantumRegister) -> QuantumRegister:
    """Clone a register's classical descriptor.  Harness-only."""
    if not _harness.get():
        raise CloningError("duplicating a quantum register requires the test harness")
    st, qs = reg._live()
    return QuantumRegister(st.copy(), qs.copy())


# ------------------------------------------------------------- tableau export


def to_tableau(reg: QuantumRegister):
    """(product_flag, x, z, r) describing the register's pure state.

    Product registers export three length-n vectors; entangled-but-pure ones
    export their full n x n generator matrices.
    """
    st, qs = reg._live()
    if st.product:
        return True, st.x[qs].copy(), st.z[qs].copy(), st.r[qs].copy()
    x, z, r = _restricted_generators(reg)
    if x.shape[0] != reg.n:
        raise QuantumError("register is entangled with qubits outside it; cannot export")
    return False, x, z, r


def from_tableau(product: bool, x, z, r) -> QuantumRegister:
    x = np.asarray(x, dtype=np.uint8)
    z = np.asarray(z, dtype=np.uint8)
    r = np.asarray(r, dtype=np.uint8)
    if product:
        if np.any((x == 0) & (z == 0)):
            raise QuantumError("product tableau has an identity generator")
        st = _State(x.copy(), z.copy(), r.copy(), True)
    else:
        n = len(r)
        if n > MAX_QUBITS:
            raise QuantumError(f"{n} qubits exceeds the simulator cap of {MAX_QUBITS}")
        if x.shape != (n, n) or z.shape != (n, n):
            raise QuantumError("tableau shape mismatch")
        if gf2.rank(np.hstack([x, z])) != n:
            raise QuantumError("tableau generators are dependent")
        sym = (x.astype(np.int64) @ z.T.astype(np.int64) + z.astype(np.int64) @ x.T.astype(np.int64)) & 1
        if np.any(sym):
            raise QuantumError("tableau generators do not commute")
        st = _State(x.copy(), z.copy(), r.copy(), False)
    return QuantumRegister(st, np.arange(st.n))


def random_stabilizer_register(n: int, rng: np.random.Generator, depth: int | None = None) -> QuantumRegister:
    """Random Clifford circuit applied to |0...0>; entangled in general."""
    reg = zero_state(n)
    depth = depth if depth is not None else 4 * n + 4
    for _ in range(depth):
        kind = int(rng.integers(0, 3 if n > 1 else 2))
        if kind == 0:
            apply_gate(reg, "H", int(rng.integers(0, n)))
        elif kind == 1:
            apply_gate(reg, "S", int(rng.integers(0, n)))
        else:
            a, b = rng.choice(n, 2, replace=False)
            apply_gate(reg, "CNOT", int(a), int(b))
    apply_pauli(reg, PauliMask.random(n, rng))
    return reg
