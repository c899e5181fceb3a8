"""Command-line front end.

Every key, ciphertext, certificate and oracle lives in an envelope file
(see :mod:`cefe.serialize`).  Oracle-based schemes share one lazily sampled
oracle stored in its own file (``--oracle``), which every command loads and
writes back.

Exit codes: 0 ok, 1 usage, 2 bad envelope, 3 protocol failure (None from
Dec, a rejected certificate, a consumed ciphertext), 4 parameter rejection.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import attack, checks, fe, garble, gf2, qsim, rnce, serialize
from .base import LweParams, ParameterError, Qrom, lwe_keygen, ske_keygen
from .cd import (
    CdError,
    CeProfile,
    COMPACT_PROFILE,
    DESK_PROFILE,
    TINY_PROFILE,
    ce_dec,
    ce_del,
    ce_enc_css,
    ce_enc_qrom,
    ce_vrfy,
)
from .field import FieldError
from .serialize import EnvelopeError

EXIT_OK, EXIT_USAGE, EXIT_ENVELOPE, EXIT_BOTTOM, EXIT_PARAMS = 0, 1, 2, 3, 4
PROFILES = {"desk": DESK_PROFILE, "compact": COMPACT_PROFILE, "tiny": TINY_PROFILE}


class UsageError(Exception):
    pass


class Bottom(Exception):
    """A protocol-level failure: None from Dec or a rejected certificate."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ------------------------------------------------------------------ helpers


def _bits(text: str) -> np.ndarray:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise UsageError(f"expected a 0/1 string, got {text!r}")
    return np.array([int(c) for c in text], dtype=np.uint8)


def _show(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _read_message(args) -> np.ndarray:
    if getattr(args, "message", None) is not None:
        return _bits(args.message)
    if getattr(args, "input", None) is not None:
        data = Path(args.input).read_bytes()
        return np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    raise UsageError("give --message BITS or --in FILE")


def _write_message(args, bits) -> None:
    if getattr(args, "out", None):
        if len(bits) % 8:
            raise UsageError(f"{len(bits)}-bit plaintext cannot be written as bytes; omit --out")
        Path(args.out).write_bytes(np.packbits(bits).tobytes())
        print(f"wrote {len(bits) // 8} bytes to {args.out}")
    else:
        print(f"m = {_show(bits)}")


def _load_oracle(args, rng, create: bool = False) -> Qrom:
    path = Path(args.oracle)
    if not path.exists():
        if create:
            return Qrom(seed=int(rng.integers(2**63)))
        raise UsageError(f"oracle file {path} not found")
    return serialize.load(path, expect=b"ORCL")


def _save_oracle(args, oracle: Qrom) -> None:
    serialize.save(args.oracle, oracle)


def _load(path, expect, oracle=None):
    if not Path(path).exists():
        raise UsageError(f"file {path} not found")
    return serialize.load(path, expect=expect, oracle=oracle)


def _save(path, obj, tag=None) -> None:
    serialize.save(path, obj, tag, detach_oracle=True)
    print(f"wrote {path}")


def _verdict(ok: bool) -> None:
    if not ok:
        print("rejected")
        raise Bottom("certificate rejected")
    print("accepted")


def _profile(args) -> CeProfile:
    return PROFILES[args.profile]


# ---------------------------------------------------------------- CE SKE/PKE


def _css_pair(args) -> gf2.CssPair:
    pair = gf2.named_pair(args.pair)
    margin = gf2.security_margin(args.p, pair.q, pair.t, pair.k1, pair.k2)
    if margin <= 0 and not args.force:
        raise ParameterError(f"CSS margin {margin:.6f} <= 0 for pair {args.pair}, p={args.p}; pass --force to proceed")
    return pair


def ce_keygen(args, rng, public: bool) -> None:
    oracle = _load_oracle(args, rng, create=True)
    if public:
        params = LweParams.load(args.lwe) if args.lwe else LweParams()
        pk, sk = lwe_keygen(params, rng)
        _save(args.pk, pk)
        _save(args.sk, sk)
    else:
        _save(args.key, ske_keygen(rng, args.lam), b"SKEY")
    _save_oracle(args, oracle)


def ce_encrypt(args, rng, public: bool) -> None:
    backend = _load(args.pk, b"LWPK") if public else _load(args.key, b"SKEY")
    m = _read_message(args)
    if args.variant == "css":
        bundle = ce_enc_css(backend, _css_pair(args), args.p, m, rng)
    else:
        oracle = _load_oracle(args, rng)
        bundle = ce_enc_qrom(backend, m, oracle, rng, CeProfile(lam=args.lam, w=args.w))
        _save_oracle(args, oracle)
    _save(args.ct, bundle)
    _save(args.vk, bundle.vk, b"VKEY")


def ce_decrypt(args, rng, public: bool) -> None:
    key = _load(args.sk, b"LWSK") if public else _load(args.key, b"SKEY")
    bundle = _load(args.ct, (b"CEPK",) if public else (b"CESK",))
    oracle = _load_oracle(args, rng) if bundle.variant == "qrom" else None
    got = ce_dec(key, bundle, oracle, rng)
    if oracle is not None:
        _save_oracle(args, oracle)
    if got is None:
        print("dec = None")
        raise Bottom("decryption failed")
    _write_message(args, got)


def ce_delete(args, rng, public: bool) -> None:
    bundle = _load(args.ct, (b"CEPK",) if public else (b"CESK",))
    cert = ce_del(bundle, rng)
    if bundle.variant == "css":
        # The certificate is the register itself; move it out of the ciphertext.
        serialize.save(args.cert, cert, b"CERT")
        cert.consume()
    else:
        serialize.save(args.cert, cert, b"CERT")
    serialize.save(args.ct, bundle)
    print(f"wrote {args.cert}; ciphertext register consumed")


def ce_verify(args, rng, public: bool) -> None:
    vk = _load(args.vk, b"VKEY")
    cert = _load(args.cert, b"CERT")
    _verdict(ce_vrfy(vk, cert, rng))


# ----------------------------------------------------------------------- RNCE


def rnce_cmd(args, rng) -> None:
    if args.action == "keygen":
        oracle = _load_oracle(args, rng, create=True)
        pk, msk = rnce.rnce_setup(args.bits, rng, oracle)
        _save(args.pk, pk)
        _save(args.msk, msk)
        _save(args.sk, rnce.rnce_keygen(msk, rng))
        _save_oracle(args, oracle)
    elif args.action == "enc":
        oracle = _load_oracle(args, rng)
        pk = _load(args.pk, b"RNPK", oracle)
        vk, ct = rnce.rnce_enc(pk, _read_message(args), rng)
        _save(args.ct, ct)
        _save(args.vk, vk, b"VKEY")
        _save_oracle(args, oracle)
    elif args.action == "dec":
        oracle = _load_oracle(args, rng)
        got = rnce.rnce_dec(_load(args.sk, b"RNSK"), _load(args.ct, b"RNCE"), oracle)
        _save_oracle(args, oracle)
        if got is None:
            raise Bottom("decryption failed")
        _write_message(args, got)
    elif args.action == "del":
        ct = _load(args.ct, b"RNCE")
        serialize.save(args.cert, rnce.rnce_del(ct, rng), b"CERT")
        serialize.save(args.ct, ct)
        print(f"wrote {args.cert}; ciphertext registers consumed")
    else:
        _verdict(rnce.rnce_vrfy(_load(args.vk, b"VKEY"), _load(args.cert, b"CERT")))


# -------------------------------------------------------------------- garble


def _circuit(path) -> garble.LeveledCircuit:
    if not Path(path).exists():
        raise UsageError(f"file {path} not found")
    return garble.LeveledCircuit.parse(Path(path).read_text())


def garble_cmd(args, rng) -> None:
    if args.action == "keygen":
        circuit = _circuit(args.circuit)
        _save(args.labels, garble.gc_samp(circuit.n, rng, args.lam))
    elif args.action == "enc":
        oracle = _load_oracle(args, rng, create=True)
        circuit = _circuit(args.circuit)
        gc, vk = garble.gc_grbl(circuit, _load(args.labels, b"LBLS"), rng, oracle)
        _save(args.gc, gc)
        _save(args.vk, vk, b"VKEY")
        _save_oracle(args, oracle)
    elif args.action == "dec":
        oracle = _load_oracle(args, rng)
        gc = _load(args.gc, b"GCIR", oracle)
        labels = _load(args.labels, b"LBLS")
        y = garble.gc_eval(gc, labels.select(_bits(args.input)), rng)
        if y is None:
            raise Bottom("evaluation failed")
        print(f"y = {_show(y)}")
    elif args.action == "del":
        oracle = _load_oracle(args, rng)
        gc = _load(args.gc, b"GCIR", oracle)
        serialize.save(args.cert, garble.gc_del(gc, rng), b"CERT")
        serialize.save(args.gc, gc, detach_oracle=True)
        print(f"wrote {args.cert}; garbled circuit consumed")
    else:
        _verdict(garble.gc_vrfy(_load(args.vk, b"VKEY"), _load(args.cert, b"CERT")))


# ------------------------------------------------------------------------ FE


def _family(spec: str) -> garble.FunctionFamily:
    name, _, rest = spec.partition(":")
    vals = _ints(rest)
    if name == "mux" and len(vals) == 1:
        return garble.build_mux_family(vals[0])
    if name == "linear" and len(vals) == 4:
        return garble.build_linear_gf2k_family(*vals)
    raise UsageError(f"family must be mux:K or linear:NVARS,DEGREE,PADS,K, got {spec!r}")


def _function(family, text: str):
    if isinstance(family, garble.MuxFamily):
        return _bits(text)
    coeffs, _, delta = text.partition("/")
    return garble.LinearFunction(tuple(_ints(coeffs)), tuple(_ints(delta)))


def _fe_message(family, text: str):
    if isinstance(family, garble.MuxFamily):
        return _bits(text)
    return _ints(text)


_FE_TAGS = {
    "fe1": (b"F1PK", b"F1MK", b"F1SK", b"FE1C"),
    "fead": (b"FAPK", b"FAMK", b"FASK", b"FEAD"),
    "feq": (b"FQPK", b"FQMK", b"FQSK", b"FEQC"),
}


def _feq_params(args) -> fe.FeqParams:
    if args.params:
        if not Path(args.params).exists():
            raise UsageError(f"file {args.params} not found")
        p = fe.FeqParams.parse(Path(args.params).read_text())
        p.validate()
        return p
    return checks.FEQ_TINY if args.tiny else fe.FeqParams.desk()


def _fe_family_of(scheme, mpk):
    return {"fe1": lambda: mpk.family, "fead": lambda: mpk.nad.family, "feq": lambda: mpk.family}[scheme]()


def fe_cmd(args, rng) -> None:
    scheme = args.scheme
    pk_tag, msk_tag, sk_tag, ct_tag = _FE_TAGS[scheme]
    if args.action == "setup":
        oracle = _load_oracle(args, rng, create=True)
        if scheme == "feq":
            mpk, msk = fe.feq_setup(_feq_params(args), rng, oracle, profile=_profile(args))
        elif scheme == "fe1":
            mpk, msk = fe.fe1_setup(_family(args.family), rng, oracle, profile=_profile(args))
        else:
            mpk, msk = fe.fead_setup(_family(args.family), rng, oracle, profile=_profile(args))
        _save(args.mpk, mpk)
        _save(args.msk, msk)
        _save_oracle(args, oracle)
        return
    oracle = _load_oracle(args, rng)
    try:
        if args.action == "keygen":
            msk = _load(args.msk, msk_tag, oracle)
            if scheme == "feq":
                delta = tuple(_ints(args.delta)) if args.delta else None
                sk = fe.feq_keygen(msk, _ints(args.function), rng, delta=delta)
            elif scheme == "fe1":
                sk = fe.fe1_keygen(msk, _function(msk.family, args.function))
            else:
                sk = fe.fead_keygen(msk, _function(msk.nad.family, args.function), rng)
            _save(args.sk, sk)
        elif args.action == "enc":
            mpk = _load(args.mpk, pk_tag, oracle)
            if scheme == "feq":
                vk, ct = fe.feq_enc(mpk, _ints(args.message), rng)
            else:
                fam = _fe_family_of(scheme, mpk)
                enc = fe.fe1_enc if scheme == "fe1" else fe.fead_enc
                vk, ct = enc(mpk, _fe_message(fam, args.message), rng)
            _save(args.ct, ct)
            _save(args.vk, vk, b"VKEY")
        elif args.action == "dec":
            sk = _load(args.sk, sk_tag, oracle)
            ct = _load(args.ct, ct_tag, oracle)
            dec = {"fe1": fe.fe1_dec, "fead": fe.fead_dec, "feq": fe.feq_dec}[scheme]
            got = dec(sk, ct, oracle, rng)
            if got is None:
                print("dec = None")
                raise Bottom("decryption failed")
            print(f"dec = {got}" if scheme == "feq" else f"dec = {_show(got)}")
        elif args.action == "del":
            ct = _load(args.ct, ct_tag, oracle)
            delete = {"fe1": fe.fe1_del, "fead": fe.fead_del, "feq": fe.feq_del}[scheme]
            serialize.save(args.cert, delete(ct, rng), b"CERT")
            serialize.save(args.ct, ct, detach_oracle=True)
            print(f"wrote {args.cert}; ciphertext consumed")
        else:
            vrfy = {"fe1": fe.fe1_vrfy, "fead": fe.fead_vrfy, "feq": fe.feq_vrfy}[scheme]
            _verdict(vrfy(_load(args.vk, b"VKEY"), _load(args.cert, b"CERT")))
    finally:
        _save_oracle(args, oracle)


# -------------------------------------------------------------- params check


def params_check(args) -> int:
    if args.c1 or args.c2:
        if not (args.c1 and args.c2 and args.t is not None):
            raise UsageError("--c1, --c2 and --t go together")
        pair = gf2.CssPair(gf2.load_code(args.c1), gf2.load_code(args.c2), args.t)
        label = f"{args.c1}/{args.c2}"
    else:
        pair = gf2.named_pair(args.pair)
        label = args.pair
    margin = gf2.security_margin(args.p, pair.q, pair.t, pair.k1, pair.k2)
    print(f"pair {label}: q={pair.q} k1={pair.k1} k2={pair.k2} t={pair.t} p={args.p}")
    print(f"margin = {margin!r}")
    status = EXIT_OK
    if margin <= 0:
        print("margin is not positive: CSS parameter set rejected" + (" (forced)" if args.force else ""))
        status = EXIT_OK if args.force else EXIT_PARAMS
    if args.feq:
        p = fe.FeqParams.parse(Path(args.feq).read_text())
        p.validate()
        print(f"feq parameters valid: {p}")
    if args.lwe:
        lp = LweParams.load(args.lwe)
        lp.check()
        print(f"LWE parameters valid: {lp}")
    return status


# ---------------------------------------------------------------------- demo


def demo(args, rng) -> None:
    out = print
    s = args.scheme
    out(f"# demo {s} (seed {args.seed})")
    if s in ("ske", "pke"):
        oracle = Qrom(seed=int(rng.integers(2**63)))
        if s == "ske":
            ek = dk = ske_keygen(rng)
        else:
            ek, dk = lwe_keygen(LweParams(), rng)
        m = rng.integers(0, 2, 16, dtype=np.uint8)
        out(f"m = {_show(m)}")
        b = ce_enc_qrom(ek, m, oracle, rng, DESK_PROFILE)
        out(f"enc: {b.quantum.n} qubits, vk weight {b.vk.w}")
        got = ce_dec(dk, b, oracle, rng)
        out(f"dec = {_show(got)}")
        ok = got is not None and np.array_equal(got, m)
        cert = ce_del(b, rng)
        out(f"del: certificate of {len(cert)} bits; vrfy = {ce_vrfy(b.vk, cert)}")
        out(f"dec = m: {'OK' if ok else 'FAIL'}")
    elif s == "rnce":
        pk, msk = rnce.rnce_setup(8, rng)
        sk = rnce.rnce_keygen(msk, rng)
        m = rng.integers(0, 2, 8, dtype=np.uint8)
        vk, ct = rnce.rnce_enc(pk, m, rng)
        out(f"m = {_show(m)}; dec = {_show(rnce.rnce_dec(sk, ct, pk.oracle))}")
        out(f"vrfy(del) = {rnce.rnce_vrfy(vk, rnce.rnce_del(ct, rng))}")
        fvk, fct, aux = rnce.rnce_fake(pk, rng)
        target = rng.integers(0, 2, 8, dtype=np.uint8)
        got = rnce.rnce_dec(rnce.rnce_reveal(pk, msk, aux, target), fct, pk.oracle)
        ok = got is not None and np.array_equal(got, target)
        out(f"fake ciphertext revealed as {_show(target)}: dec = {_show(got)}")
        out(f"dec = revealed m: {'OK' if ok else 'FAIL'}")
    elif s == "garble":
        c = garble.random_leveled_circuit(4, 6, 2, rng)
        labels = garble.gc_samp(c.n, rng)
        gc, vk = garble.gc_grbl(c, labels, rng)
        x = rng.integers(0, 2, c.n, dtype=np.uint8)
        y = garble.gc_eval(gc, labels.select(x))
        out(f"circuit: n={c.n} gates={c.q} depth={c.depth}; x = {_show(x)}")
        out(f"eval = {_show(y)}; C(x) = {_show(c.evaluate(x))}")
        out(f"vrfy(del) = {garble.gc_vrfy(vk, garble.gc_del(gc, rng))}")
        out(f"eval = C(x): {'OK' if y is not None and np.array_equal(y, c.evaluate(x)) else 'FAIL'}")
    elif s in ("fe1", "fead"):
        fam = garble.build_mux_family(2 if s == "fe1" else 1)
        if s == "fe1":
            mpk, msk = fe.fe1_setup(fam, rng)
            f = fam.random_function(rng)
            sk = fe.fe1_keygen(msk, f)
        else:
            mpk, msk = fe.fead_setup(fam, rng, profile=TINY_PROFILE)
            f = fam.random_function(rng)
            sk = fe.fead_keygen(msk, f, rng)
        m = fam.random_message(rng)
        out(f"family mux:{fam.k}; f = {_show(f)}; m = {_show(m)}")
        enc, dec, dele, vrfy = ((fe.fe1_enc, fe.fe1_dec, fe.fe1_del, fe.fe1_vrfy) if s == "fe1"
                                else (fe.fead_enc, fe.fead_dec, fe.fead_del, fe.fead_vrfy))
        vk, ct = enc(mpk, m, rng)
        oracle = mpk.oracle if s == "fe1" else mpk.nad.oracle
        got = dec(sk, ct, oracle)
        want = fam.apply(f, m)
        out(f"dec = {_show(got)}; f(m) = {_show(want)}")
        out(f"vrfy(del) = {vrfy(vk, dele(ct, rng))}")
        out(f"dec = f(m): {'OK' if got is not None and np.array_equal(got, want) else 'FAIL'}")
    elif s == "feq":
        p = checks.FEQ_TINY
        mpk, msk = fe.feq_setup(p, rng, profile=TINY_PROFILE)
        g = mpk.family.random_function(rng, p.v)
        x = mpk.family.random_message(rng)[: p.l]
        sk = fe.feq_keygen(msk, g.coeffs, rng)
        vk, ct = fe.feq_enc(mpk, x, rng)
        got = fe.feq_dec(sk, ct, mpk.oracle)
        want = mpk.family.evaluate_poly(g.coeffs, x)
        out(f"C = {g.coeffs}; x = {x}; Gamma = {sk.gamma}")
        out(f"dec = {got}; C(x) = {want}")
        out(f"vrfy(del) = {fe.feq_vrfy(vk, fe.feq_del(ct, rng))}")
        out(f"dec = C(x): {'OK' if got == want else 'FAIL'}")


# -------------------------------------------------------------------- parser


def _add_oracle(p) -> None:
    p.add_argument("--oracle", default="oracle.cefe", help="oracle state file (created on first use)")


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cefe", description="Certified-everlasting encryption on a simulated quantum substrate.")
    ap.add_argument("--seed", type=int, default=None, help="seed for every random choice")
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("params").add_subparsers(dest="what", required=True).add_parser("check")
    pc.add_argument("--pair", default="steane", choices=sorted(gf2.NAMED_PAIRS))
    pc.add_argument("--c1", help="code file for C1")
    pc.add_argument("--c2", help="code file for C2")
    pc.add_argument("--t", type=int)
    pc.add_argument("--p", type=int, required=True)
    pc.add_argument("--feq", help="q-bounded FE parameter file to validate")
    pc.add_argument("--lwe", help="LWE parameter file to validate")
    pc.add_argument("--force", action="store_true")

    for name in ("ske", "pke"):
        sp = sub.add_parser(name).add_subparsers(dest="action", required=True)
        kg = sp.add_parser("keygen")
        if name == "ske":
            kg.add_argument("--key", required=True)
            kg.add_argument("--lam", type=int, default=128)
        else:
            kg.add_argument("--pk", required=True)
            kg.add_argument("--sk", required=True)
            kg.add_argument("--lwe")
        en = sp.add_parser("enc")
        en.add_argument("--key" if name == "ske" else "--pk", required=True)
        en.add_argument("--message")
        en.add_argument("--in", dest="input")
        en.add_argument("--ct", required=True)
        en.add_argument("--vk", required=True)
        en.add_argument("--variant", choices=("qrom", "css"), default="qrom")
        en.add_argument("--lam", type=int, default=DESK_PROFILE.lam)
        en.add_argument("--w", type=int, default=DESK_PROFILE.w)
        en.add_argument("--pair", default="steane", choices=sorted(gf2.NAMED_PAIRS))
        en.add_argument("--p", type=int, default=7)
        en.add_argument("--force", action="store_true", help="accept a non-positive CSS margin")
        de = sp.add_parser("dec")
        de.add_argument("--key" if name == "ske" else "--sk", required=True)
        de.add_argument("--ct", required=True)
        de.add_argument("--out")
        dl = sp.add_parser("del")
        dl.add_argument("--ct", required=True)
        dl.add_argument("--cert", required=True)
        vr = sp.add_parser("vrfy")
        vr.add_argument("--vk", required=True)
        vr.add_argument("--cert", required=True)
        for p in (kg, en, de, dl, vr):
            _add_oracle(p)

    sp = sub.add_parser("rnce").add_subparsers(dest="action", required=True)
    kg = sp.add_parser("keygen")
    kg.add_argument("--bits", type=int, required=True)
    for opt in ("--pk", "--msk", "--sk"):
        kg.add_argument(opt, required=True)
    en = sp.add_parser("enc")
    en.add_argument("--pk", required=True)
    en.add_argument("--message")
    en.add_argument("--in", dest="input")
    en.add_argument("--ct", required=True)
    en.add_argument("--vk", required=True)
    de = sp.add_parser("dec")
    de.add_argument("--sk", required=True)
    de.add_argument("--ct", required=True)
    de.add_argument("--out")
    dl = sp.add_parser("del")
    dl.add_argument("--ct", required=True)
    dl.add_argument("--cert", required=True)
    vr = sp.add_parser("vrfy")
    vr.add_argument("--vk", required=True)
    vr.add_argument("--cert", required=True)
    for p in (kg, en, de, dl, vr):
        _add_oracle(p)

    sp = sub.add_parser("garble").add_subparsers(dest="action", required=True)
    kg = sp.add_parser("keygen", help="sample input labels for a circuit")
    kg.add_argument("--circuit", required=True)
    kg.add_argument("--labels", required=True)
    kg.add_argument("--lam", type=int, default=COMPACT_PROFILE.lam)
    en = sp.add_parser("enc", help="garble a circuit")
    en.add_argument("--circuit", required=True)
    en.add_argument("--labels", required=True)
    en.add_argument("--gc", required=True)
    en.add_argument("--vk", required=True)
    de = sp.add_parser("dec", help="evaluate on an input")
    de.add_argument("--gc", required=True)
    de.add_argument("--labels", required=True)
    de.add_argument("--input", required=True)
    dl = sp.add_parser("del")
    dl.add_argument("--gc", required=True)
    dl.add_argument("--cert", required=True)
    vr = sp.add_parser("vrfy")
    vr.add_argument("--vk", required=True)
    vr.add_argument("--cert", required=True)
    for p in (kg, en, de, dl, vr):
        _add_oracle(p)

    for name in ("fe1", "fead", "feq"):
        sp = sub.add_parser(name).add_subparsers(dest="action", required=True)
        st = sp.add_parser("setup")
        st.add_argument("--mpk", required=True)
        st.add_argument("--msk", required=True)
        st.add_argument("--profile", choices=sorted(PROFILES), default="tiny" if name != "fe1" else "compact")
        if name == "feq":
            st.add_argument("--params", help="key=value parameter file")
            st.add_argument("--tiny", action="store_true", help="use the tiny test profile instead of the desk one")
        else:
            st.add_argument("--family", required=True, help="mux:K or linear:NVARS,DEGREE,PADS,K")
        kg = sp.add_parser("keygen")
        kg.add_argument("--msk", required=True)
        kg.add_argument("--function", required=True,
                        help="truth table bits (mux), COEFFS/DELTA (linear) or coefficients (feq)")
        kg.add_argument("--sk", required=True)
        if name == "feq":
            kg.add_argument("--delta", help="pin the pad set (comma-separated)")
        en = sp.add_parser("enc")
        en.add_argument("--mpk", required=True)
        en.add_argument("--message", required=True)
        en.add_argument("--ct", required=True)
        en.add_argument("--vk", required=True)
        de = sp.add_parser("dec")
        de.add_argument("--sk", required=True)
        de.add_argument("--ct", required=True)
        dl = sp.add_parser("del")
        dl.add_argument("--ct", required=True)
        dl.add_argument("--cert", required=True)
        vr = sp.add_parser("vrfy")
        vr.add_argument("--vk", required=True)
        vr.add_argument("--cert", required=True)
        for p in (st, kg, en, de, dl, vr):
            _add_oracle(p)

    dm = sub.add_parser("demo")
    dm.add_argument("scheme", choices=("ske", "pke", "rnce", "garble", "fe1", "fead", "feq"))

    at = sub.add_parser("attack")
    at.add_argument("scheme", choices=attack.SCHEMES)
    at.add_argument("--strategy", choices=attack.STRATEGIES, default="measure-all")
    at.add_argument("--trials", type=int, default=10000)
    at.add_argument("--w", type=int, default=8, help="check positions (otcd, cesk-qrom)")
    at.add_argument("--p", type=int, default=7, help="r-qubits per instance (cesk-css)")
    at.add_argument("--csv", help="also write a CSV report here")

    sf = sub.add_parser("selftest")
    sf.add_argument("--trials", type=int, default=10)
    sf.add_argument("--schemes", default=",".join(checks.TRIALS))
    return ap


def _run(args, rng) -> int:
    cmd = args.command
    if cmd == "params":
        return params_check(args)
    if cmd in ("ske", "pke"):
        public = cmd == "pke"
        {"keygen": ce_keygen, "enc": ce_encrypt, "dec": ce_decrypt,
         "del": ce_delete, "vrfy": ce_verify}[args.action](args, rng, public)
    elif cmd == "rnce":
        rnce_cmd(args, rng)
    elif cmd == "garble":
        garble_cmd(args, rng)
    elif cmd in _FE_TAGS:
        args.scheme = cmd
        fe_cmd(args, rng)
    elif cmd == "demo":
        demo(args, rng)
    elif cmd == "attack":
        if args.trials <= 0:
            raise UsageError("--trials must be positive")
        est = attack.run_attack(args.scheme, args.strategy, args.trials, rng, args.w, args.p)
        print(attack.report(args.scheme, args.strategy, est,
                            attack.expected_rate(args.scheme, args.strategy, args.w, args.p)))
        if args.csv:
            Path(args.csv).write_text(attack.csv_report(args.strategy, est))
            print(f"wrote {args.csv}")
    elif cmd == "selftest":
        ok = True
        for name in args.schemes.split(","):
            if name not in checks.TRIALS:
                raise UsageError(f"unknown scheme {name!r}")
            rep = checks.run_trials(name, args.trials, rng)
            print(rep.line())
            ok &= rep.ok
        if not ok:
            raise Bottom("selftest failures")
    return EXIT_OK


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args, np.random.default_rng(args.seed))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnvelopeError as exc:
        print(f"bad envelope: {exc}", file=sys.stderr)
        return EXIT_ENVELOPE
    except (Bottom, qsim.ConsumedRegisterError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_BOTTOM
    except (ParameterError, fe.FeError, gf2.CodeError, CdError, rnce.RnceError,
            garble.CircuitError, FieldError) as exc:
        print(f"parameter rejected: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
