import struct

import numpy as np
import pytest

import samples
from cefe import cd, fe, qsim, serialize
from cefe.base import Qrom, ske_dec
from cefe.serialize import EnvelopeError, HEADER, dumps, loads


@pytest.fixture(scope="module")
def objs():
    return samples.build(0)


def test_every_tag_has_a_sample(objs):
    assert {t.encode() for t in objs} == set(serialize.ALL_TAGS)


@pytest.mark.parametrize("tag", sorted(t.decode() for t in serialize.ALL_TAGS))
def test_roundtrip_is_byte_stable(objs, tag):
    data = dumps(objs[tag], tag if tag in ("SKEY", "VKEY", "CERT", "DATA") else None)
    got_tag, obj = loads(data)
    assert got_tag == tag.encode()
    assert dumps(obj, got_tag) == data


def test_header_layout(objs):
    data = dumps(objs["CDKY"])
    magic, version, tag, length = HEADER.unpack_from(data)
    assert (magic, version, tag) == (b"CEFE", 1, b"CDKY")
    assert length == len(data) - HEADER.size == len(data) - 18


def test_bundle_variant_byte(objs):
    for tag, variant in (("CESK", 0), ("CEPK", 1)):
        assert dumps(objs[tag])[HEADER.size] == variant


def test_decrypt_after_roundtrip():
    rng = np.random.default_rng(1)
    key = np.ones(128, np.uint8)
    oracle = Qrom(seed=3)
    m = np.array([1, 0, 1, 1], np.uint8)
    bundle = cd.ce_enc_qrom(key, m, oracle, rng)
    _, again = loads(dumps(bundle))
    _, o2 = loads(dumps(oracle))
    assert np.array_equal(cd.ce_dec(key, again, o2, rng), m)
    assert cd.ce_vrfy(again.vk, cd.ce_del(again, rng))


def test_oracle_state_continues():
    o = Qrom(seed=4)
    o.query([1, 1], 16)
    _, o2 = loads(dumps(o))
    assert np.array_equal(o2.query([1, 1], 64), o.query([1, 1], 64))
    assert np.array_equal(o2.query([0], 32), o.query([0], 32))


def test_detached_oracle(objs):
    mpk = objs["F1PK"]
    data = dumps(mpk, detach_oracle=True)
    with pytest.raises(EnvelopeError, match="detached oracle"):
        loads(data)
    _, again = loads(data, oracle=mpk.oracle)
    assert again.oracle is mpk.oracle


def test_tableau_register_roundtrip():
    rng = np.random.default_rng(5)
    reg = qsim.random_stabilizer_register(6, rng)
    _, again = loads(dumps(reg))
    assert qsim.canonical_equal(reg, again)


def test_bell_pair_keeps_entanglement():
    a, b = qsim.make_bell_pairs(3)
    _, (a2, b2) = loads(dumps((a, b), "DATA"))
    rng = np.random.default_rng(6)
    assert np.array_equal(qsim.measure_all(a2, 1, rng), qsim.measure_all(b2, 1, rng))


def test_consumed_register_stays_consumed():
    reg = qsim.zero_state(4)
    reg.consume()
    _, again = loads(dumps(reg))
    assert again.consumed and again.n == 4
    with pytest.raises(qsim.ConsumedRegisterError):
        qsim.measure_all(again, 0, np.random.default_rng(0))


def test_feq_key_roundtrip_decrypts(objs):
    mpk, sk, ct = objs["FQPK"], objs["FQSK"], objs["FEQC"]
    _, sk2 = loads(dumps(sk))
    _, ct2 = loads(dumps(ct))
    assert fe.feq_dec(sk2, ct2, mpk.oracle) == fe.feq_dec(sk, ct, mpk.oracle)


def test_ske_key_generic_tag(objs):
    _, key = loads(dumps(objs["SKEY"], "SKEY"), expect="SKEY")
    bundle = objs["CESK"]
    assert ske_dec(key, bundle.classical.backend_ct) is not None


# ----------------------------------------------------------------- errors


def test_truncated(objs):
    data = dumps(objs["CDKY"])
    with pytest.raises(EnvelopeError, match="truncated"):
        loads(data[:10])
    with pytest.raises(EnvelopeError, match="length"):
        loads(data[:-3])


def test_bad_magic_version_and_tag(objs):
    data = bytearray(dumps(objs["CDKY"]))
    with pytest.raises(EnvelopeError, match="magic"):
        loads(b"XXXX" + bytes(data[4:]))
    with pytest.raises(EnvelopeError, match="version"):
        loads(bytes(data[:4]) + struct.pack(">H", 9) + bytes(data[6:]))
    with pytest.raises(EnvelopeError, match="ZZZZ"):
        loads(bytes(data[:6]) + b"ZZZZ" + bytes(data[10:]))


def test_expect_mismatch(objs):
    with pytest.raises(EnvelopeError, match="expected"):
        loads(dumps(objs["CDKY"]), expect="LWPK")


def test_simulation_flag_required():
    reg = qsim.zero_state(2)
    data = dumps(reg).replace(b'"blob":"Uw', b'"blob":"AA')
    with pytest.raises(EnvelopeError):
        loads(data)


def test_unserializable_object():
    with pytest.raises(EnvelopeError):
        dumps(object(), "DATA")
    with pytest.raises(EnvelopeError):
        dumps({"x": 1})


def test_file_helpers(tmp_path, objs):
    path = tmp_path / "k.cefe"
    serialize.save(path, objs["CDKY"])
    key = serialize.load(path, expect="CDKY")
    assert np.array_equal(key.theta, objs["CDKY"].theta)
