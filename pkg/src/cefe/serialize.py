"""Versioned binary envelope for keys, ciphertexts, certificates and oracles.

Layout (big-endian)::

    magic "CEFE" | version u16 | tag 4 bytes | payload length u64 | payload

The payload is canonical JSON (sorted keys, no whitespace).  CESK and CEPK
payloads carry one leading variant byte (0 = oracle variant, 1 = CSS).
Objects that occur more than once in a tree (a shared oracle, a shared LWE
matrix, an entangled backing state) are written once and referenced after,
so sharing survives a round trip.

Quantum registers travel as bit-packed stabilizer descriptions whose first
byte is the SIMULATION flag.  Writing a "quantum" ciphertext to a file is a
modeling convenience of the classical simulator, nothing more.
"""

from __future__ import annotations

import base64
import dataclasses
import json
import struct
from pathlib import Path

import numpy as np

from . import base, cd, fe, field, garble, gf2, qsim, rnce

MAGIC = b"CEFE"
VERSION = 1
HEADER = struct.Struct(">4sH4sQ")
SIMULATION_FLAG = 0x53

# Every class a payload may instantiate, by name.
_CLASSES = {
    c.__name__: c
    for mod in (base, cd, fe, garble, gf2, rnce, qsim, field)
    for c in vars(mod).values()
    if isinstance(c, type) and dataclasses.is_dataclass(c) and c.__module__ == mod.__name__
}
_FAMILIES = {"MuxFamily": garble.MuxFamily, "LinearGf2kFamily": garble.LinearGf2kFamily}

# Type tags chosen from the top-level object's class.
_TAG_BY_CLASS = {
    "RnceCiphertext": b"RNCE",
    "GarbledCircuit": b"GCIR",
    "Fe1Ciphertext": b"FE1C",
    "FeadCiphertext": b"FEAD",
    "FeqCiphertext": b"FEQC",
    "LwePublicKey": b"LWPK",
    "LweSecretKey": b"LWSK",
    "LweParams": b"LWEP",
    "CdKey": b"CDKY",
    "Qrom": b"ORCL",
    "RncePk": b"RNPK",
    "RnceMsk": b"RNMK",
    "RnceSk": b"RNSK",
    "RnceAux": b"RNAX",
    "LeveledCircuit": b"CIRC",
    "LabelSet": b"LBLS",
    "Fe1Mpk": b"F1PK",
    "Fe1Msk": b"F1MK",
    "Fe1Sk": b"F1SK",
    "FeadMpk": b"FAPK",
    "FeadMsk": b"FAMK",
    "FeadSk": b"FASK",
    "FeadVk": b"FAVK",
    "FeqParams": b"FQPR",
    "FeqMpk": b"FQPK",
    "FeqMsk": b"FQMK",
    "FeqKey": b"FQSK",
    "QuantumRegister": b"QREG",
}
# Tags for plain trees (bit strings, tuples of keys); the caller names them.
GENERIC_TAGS = (b"SKEY", b"VKEY", b"CERT", b"DATA")
BUNDLE_TAGS = (b"CESK", b"CEPK")
ALL_TAGS = frozenset(_TAG_BY_CLASS.values()) | set(GENERIC_TAGS) | set(BUNDLE_TAGS)


class EnvelopeError(ValueError):
    pass


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _unb64(text: str) -> bytes:
    return base64.b64decode(text.encode("ascii"), validate=True)


# ------------------------------------------------------------ state blobs


def _state_blob(product: bool, x, z, r) -> str:
    n = len(r)
    head = struct.pack(">BBI", SIMULATION_FLAG, 0 if product else 1, n)
    body = b"".join(np.packbits(np.asarray(a, dtype=np.uint8).ravel()).tobytes() for a in (x, z, r))
    return _b64(head + body)


def _parse_state_blob(text: str):
    raw = _unb64(text)
    if len(raw) < 6:
        raise EnvelopeError("state blob too short")
    flag, form, n = struct.unpack(">BBI", raw[:6])
    if flag != SIMULATION_FLAG:
        raise EnvelopeError(f"state blob lacks the SIMULATION flag (got {flag:#04x})")
    if form not in (0, 1):
        raise EnvelopeError(f"unknown state form {form}")
    size = n if form == 0 else n * n
    chunk = (size + 7) // 8
    rchunk = (n + 7) // 8
    if len(raw) != 6 + 2 * chunk + rchunk:
        raise EnvelopeError("state blob has the wrong length")
    bits = np.frombuffer(raw, dtype=np.uint8, offset=6)
    x = np.unpackbits(bits[:chunk])[:size]
    z = np.unpackbits(bits[chunk:2 * chunk])[:size]
    r = np.unpackbits(bits[2 * chunk:])[:n].copy()
    if form == 1:
        x, z = x.reshape(n, n), z.reshape(n, n)
    return form == 0, x.copy(), z.copy(), r


# --------------------------------------------------------------- encoding


class _Encoder:
    def __init__(self, detach_oracle: bool):
        self.detach_oracle = detach_oracle
        self.ids: dict[int, int] = {}
        self.keep: list = []  # pins encoded objects so ids stay unique

    def _memo(self, obj):
        k = self.ids.get(id(obj))
        if k is not None:
            return {"@": k}, None
        k = len(self.ids)
        self.ids[id(obj)] = k
        self.keep.append(obj)
        return None, k

    def enc(self, obj):
        if obj is None or isinstance(obj, (bool, str)):
            return obj
        if isinstance(obj, (int, np.integer)):
            return int(obj)
        if isinstance(obj, (float, np.floating)):
            return {"F": float(obj).hex()}
        if isinstance(obj, bytes):
            return {"B": _b64(obj)}
        if isinstance(obj, list):
            return [self.enc(v) for v in obj]
        if isinstance(obj, tuple):
            return {"T": [self.enc(v) for v in obj]}
        if isinstance(obj, dict):
            return {"D": [[self.enc(k), self.enc(v)] for k, v in obj.items()]}
        ref, k = self._memo(obj)
        if ref is not None:
            return ref
        if isinstance(obj, np.ndarray):
            arr = np.ascontiguousarray(obj)
            dt = arr.dtype.newbyteorder("<") if arr.dtype.byteorder == ">" else arr.dtype
            return {"#": k, "A": [dt.str, list(arr.shape), _b64(arr.astype(dt).tobytes())]}
        if isinstance(obj, base.Qrom):
            if self.detach_oracle:
                return {"#": k, "Q": None}
            table = [[w, _b64(key), len(v), _b64(np.packbits(v).tobytes())] for (w, key), v in obj._table.items()]
            rng_state = obj._rng.bit_generator.state
            return {"#": k, "Q": {"seed": obj.seed, "out_bits": obj.out_bits, "table": table,
                                  "rng": json.loads(json.dumps(rng_state))}}
        if isinstance(obj, qsim.QuantumRegister):
            return {"#": k, "R": self._register(obj)}
        if isinstance(obj, qsim._State):
            return {"#": k, "S": _state_blob(obj.product, obj.x, obj.z, obj.r)}
        if isinstance(obj, garble.MuxFamily):
            return {"#": k, "M": ["MuxFamily", [obj.k]]}
        if isinstance(obj, garble.LinearGf2kFamily):
            return {"#": k, "M": ["LinearGf2kFamily", [obj.nvars, obj.degree, obj.pads, obj.k]]}
        if isinstance(obj, field.GF2k):
            return {"#": k, "G": obj.k}
        if dataclasses.is_dataclass(obj) and type(obj).__name__ in _CLASSES:
            fields = {f.name: self.enc(getattr(obj, f.name))
                      for f in dataclasses.fields(obj) if f.init and not f.name.startswith("_")}
            return {"#": k, "C": type(obj).__name__, "f": fields}
        raise EnvelopeError(f"cannot serialize {type(obj).__name__}")

    def _register(self, reg: qsim.QuantumRegister):
        if reg.consumed:
            return {"consumed": True, "n": reg.n}
        st, qs = reg._live()
        if st.product:
            # Product qubits carry no correlations, so the slice is the whole story.
            return {"consumed": False, "blob": _state_blob(True, st.x[qs], st.z[qs], st.r[qs])}
        return {"consumed": False, "state": self.enc(st), "qubits": self.enc(qs)}


class _Decoder:
    def __init__(self, oracle):
        self.oracle = oracle
        self.memo: dict[int, object] = {}

    def _put(self, node, obj):
        self.memo[node["#"]] = obj
        return obj

    def dec(self, node):
        if node is None or isinstance(node, (bool, int, str)):
            return node
        if isinstance(node, list):
            return [self.dec(v) for v in node]
        if not isinstance(node, dict):
            raise EnvelopeError(f"unexpected JSON value {type(node).__name__}")
        if "@" in node:
            try:
                return self.memo[node["@"]]
            except KeyError:
                raise EnvelopeError(f"dangling reference {node['@']}") from None
        if "F" in node:
            return float.fromhex(node["F"])
        if "B" in node:
            return _unb64(node["B"])
        if "T" in node:
            return tuple(self.dec(v) for v in node["T"])
        if "D" in node:
            return {self._key(self.dec(k)): self.dec(v) for k, v in node["D"]}
        if "A" in node:
            dt, shape, data = node["A"]
            arr = np.frombuffer(_unb64(data), dtype=np.dtype(dt)).reshape(shape).copy()
            return self._put(node, arr)
        if "Q" in node:
            return self._put(node, self._qrom(node["Q"]))
        if "R" in node:
            return self._put(node, self._register(node["R"]))
        if "S" in node:
            product, x, z, r = _parse_state_blob(node["S"])
            return self._put(node, qsim._State(x, z, r, product))
        if "M" in node:
            name, args = node["M"]
            if name not in _FAMILIES:
                raise EnvelopeError(f"unknown function family {name!r}")
            return self._put(node, _FAMILIES[name](*args))
        if "G" in node:
            return self._put(node, field.gf(node["G"]))
        if "C" in node:
            cls = _CLASSES.get(node["C"])
            if cls is None:
                raise EnvelopeError(f"unknown class {node['C']!r}")
            fields = {k: self.dec(v) for k, v in node["f"].items()}
            return self._put(node, cls(**fields))
        raise EnvelopeError(f"unrecognized node with keys {sorted(node)}")

    @staticmethod
    def _key(k):
        return tuple(k) if isinstance(k, list) else k

    def _qrom(self, spec):
        if spec is None:
            if self.oracle is None:
                raise EnvelopeError("payload references a detached oracle; supply one")
            return self.oracle
        o = base.Qrom(seed=spec["seed"], out_bits=spec["out_bits"])
        for w, key, nbits, bits in spec["table"]:
            o._table[(w, _unb64(key))] = np.unpackbits(np.frombuffer(_unb64(bits), dtype=np.uint8))[:nbits].copy()
        o._rng.bit_generator.state = spec["rng"]
        return o

    def _register(self, spec):
        if spec["consumed"]:
            reg = qsim.QuantumRegister(qsim._State(np.zeros(0, np.uint8), np.ones(0, np.uint8),
                                                   np.zeros(0, np.uint8), True), np.zeros(0, np.int64))
            reg._qubits = np.full(spec["n"], -1, dtype=np.int64)
            reg.consumed = True
            return reg
        if "blob" in spec:
            product, x, z, r = _parse_state_blob(spec["blob"])
            return qsim.QuantumRegister(qsim._State(x, z, r, product), np.arange(len(r)))
        st = self.dec(spec["state"])
        qs = self.dec(spec["qubits"])
        if not isinstance(st, qsim._State) or np.any(qs < 0) or np.any(qs >= st.n):
            raise EnvelopeError("register refers to qubits outside its state")
        return qsim.QuantumRegister(st, qs)


# ---------------------------------------------------------------- envelope


def tag_for(obj) -> bytes:
    if isinstance(obj, cd.CeBundle):
        ct = obj.classical.backend_ct if obj.variant == "qrom" else obj.classical.parts[0].backend_ct
        return b"CEPK" if isinstance(ct, base.LweCiphertext) else b"CESK"
    tag = _TAG_BY_CLASS.get(type(obj).__name__)
    if tag is None:
        raise EnvelopeError(f"no type tag for {type(obj).__name__}; pass one of {GENERIC_TAGS}")
    return tag


def dumps(obj, tag: bytes | str | None = None, detach_oracle: bool = False) -> bytes:
    """Envelope bytes for ``obj``.  ``detach_oracle`` leaves a placeholder for any Qrom."""
    tag = tag_for(obj) if tag is None else (tag.encode() if isinstance(tag, str) else tag)
    if tag not in ALL_TAGS:
        raise EnvelopeError(f"unknown type tag {tag!r}")
    body = json.dumps(_Encoder(detach_oracle).enc(obj), sort_keys=True, separators=(",", ":")).encode()
    if tag in BUNDLE_TAGS:
        if not isinstance(obj, cd.CeBundle):
            raise EnvelopeError(f"tag {tag.decode()} needs a CeBundle")
        body = bytes([0 if obj.variant == "qrom" else 1]) + body
    return HEADER.pack(MAGIC, VERSION, tag, len(body)) + body


def loads(data: bytes, expect: bytes | str | tuple | None = None, oracle=None):
    """(tag, object).  ``expect`` restricts the accepted tags."""
    if len(data) < HEADER.size:
        raise EnvelopeError(f"truncated envelope: {len(data)} bytes, header needs {HEADER.size}")
    magic, version, tag, length = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise EnvelopeError(f"bad magic {magic!r}")
    if version != VERSION:
        raise EnvelopeError(f"unsupported envelope version {version}")
    if tag not in ALL_TAGS:
        raise EnvelopeError(f"unknown type tag {tag!r}")
    body = data[HEADER.size:]
    if len(body) != length:
        raise EnvelopeError(f"payload length {len(body)} differs from header {length}")
    if expect is not None:
        allowed = (expect,) if isinstance(expect, (bytes, str)) else expect
        allowed = {a.encode() if isinstance(a, str) else a for a in allowed}
        if tag not in allowed:
            raise EnvelopeError(f"expected tag {sorted(a.decode() for a in allowed)}, got {tag.decode()}")
    variant = None
    if tag in BUNDLE_TAGS:
        if not body or body[0] not in (0, 1):
            raise EnvelopeError("missing or bad variant byte")
        variant, body = ("qrom", "css")[body[0]], body[1:]
    try:
        tree = json.loads(body.decode("utf-8"))
        obj = _Decoder(oracle).dec(tree)
    except EnvelopeError:
        raise
    except (ValueError, TypeError, KeyError, struct.error) as exc:
        raise EnvelopeError(f"malformed payload: {exc}") from None
    if variant is not None and (not isinstance(obj, cd.CeBundle) or obj.variant != variant):
        raise EnvelopeError("variant byte disagrees with the payload")
    return tag, obj


def save(path, obj, tag=None, detach_oracle: bool = False) -> None:
    Path(path).write_bytes(dumps(obj, tag, detach_oracle))


def load(path, expect=None, oracle=None):
    return loads(Path(path).read_bytes(), expect, oracle)[1]
