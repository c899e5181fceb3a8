"""Statistical deletion-detection harness.

An adversary holding a ciphertext produces a certificate without the
verification key; we count how often Vrfy accepts.  ``honest`` runs the
real deletion; ``measure-all`` measures every qubit in the computational
basis and submits what it saw.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from itertools import product

import numpy as np

from . import gf2, qsim
from .base import Qrom, random_bits
from .cd import (
    CdKey,
    CeProfile,
    _fixed_weight,
    cd_vrfy,
    ce_del_css,
    ce_enc_css,
    ce_enc_qrom_many,
    ce_vrfy_css,
    ce_vrfy_qrom,
)
from .fe import Estimate, binomial_interval

STRATEGIES = ("measure-all", "honest")
SCHEMES = ("otcd", "cesk-qrom", "cesk-css")
CSV_COLUMNS = ("strategy", "trials", "passes", "rate", "ci_low", "ci_high")


def css_pass_probability(p: int) -> Fraction:
    """Exact measure-all pass probability for the CSS variant by enumeration.

    For each basis string B and each qubit: a computational-basis r-qubit
    survives the adversary's measurement; a Hadamard one collapses to a
    uniform Z eigenstate and Vrfy's X measurement then matches r with
    probability 1/2.  Averaging over all 2^p strings B gives the rate.
    """
    total = Fraction(0)
    for basis in product((0, 1), repeat=p):
        pr = Fraction(1)
        for b in basis:
            pr *= Fraction(1, 2) if b else Fraction(1)
        total += pr
    return total / 2**p


def expected_rate(scheme: str, strategy: str, w: int = 8, p: int = 7) -> float:
    if strategy == "honest":
        return 1.0
    if scheme == "cesk-css":
        return float(css_pass_probability(p))
    return 2.0 ** -w


def _measure_all_certs(regs, rng):
    return qsim.measure_many(regs, [np.arange(r.n) for r in regs], [qsim.COMPUTATIONAL] * len(regs), rng)


def _honest_certs(regs, rng):
    certs = qsim.measure_many(regs, [np.arange(r.n) for r in regs], [qsim.HADAMARD] * len(regs), rng)
    for r in regs:
        r.consume()
    return certs


def _otcd(trials, strategy, rng, w, mbits=8):
    n = mbits + w
    theta = _fixed_weight(trials, n, w, rng)
    r = rng.integers(0, 2, (trials, n), dtype=np.uint8)
    m = rng.integers(0, 2, (trials, mbits), dtype=np.uint8)
    payload = r.copy()
    payload[theta == 0] ^= m.ravel()
    regs = qsim.prepare_bb84_batch(payload, theta)
    certs = (_honest_certs if strategy == "honest" else _measure_all_certs)(regs, rng)
    return sum(cd_vrfy(CdKey(theta[i], r[i]), certs[i]) for i in range(trials))


def _cesk_qrom(trials, strategy, rng, w, mbits=8):
    profile = CeProfile(lam=128, w=w)
    keys = rng.integers(0, 2, (trials, profile.lam), dtype=np.uint8)
    msgs = rng.integers(0, 2, (trials, mbits), dtype=np.uint8)
    bundles = ce_enc_qrom_many(keys, msgs, Qrom(seed=int(rng.integers(2**63))), rng, profile)
    regs = [b.quantum for b in bundles]
    certs = (_honest_certs if strategy == "honest" else _measure_all_certs)(regs, rng)
    return sum(ce_vrfy_qrom(b.vk, c) for b, c in zip(bundles, certs))


def _cesk_css(trials, strategy, rng, p, chunk=4096):
    """One trial per coset-state instance; instances are batched into long messages."""
    pair = gf2.steane_pair()
    k = pair.message_bits
    passes = 0
    done = 0
    while done < trials:
        count = min(chunk, trials - done)
        key = random_bits(128, rng)
        bundle = ce_enc_css(key, pair, p, random_bits(count * k, rng), rng)
        reg = ce_del_css(bundle)
        if strategy == "measure-all":
            qsim.measure_all(reg, qsim.COMPUTATIONAL, rng)
        block = bundle.classical.block
        for i, v in enumerate(bundle.vk):
            passes += ce_vrfy_css((v,), reg.view(i * block, (i + 1) * block), rng)
        done += count
    return passes


def run_attack(scheme: str, strategy: str, trials: int, rng: np.random.Generator,
               w: int = 8, p: int = 7) -> Estimate:
    if scheme not in SCHEMES:
        raise ValueError(f"unknown attack target {scheme!r}; choose from {SCHEMES}")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if trials <= 0:
        raise ValueError("trials must be positive")
    if scheme == "otcd":
        passes = _otcd(trials, strategy, rng, w)
    elif scheme == "cesk-qrom":
        passes = _cesk_qrom(trials, strategy, rng, w)
    else:
        passes = _cesk_css(trials, strategy, rng, p)
    return binomial_interval(int(passes), trials)


def report(scheme: str, strategy: str, est: Estimate, expected: float) -> str:
    inside = est.low <= expected <= est.high
    return "\n".join([
        f"target     {scheme}",
        f"strategy   {strategy}",
        f"trials     {est.trials}",
        f"passes     {est.hits}",
        f"rate       {est.rate:.6f}",
        f"95% CI     [{est.low:.6f}, {est.high:.6f}]",
        f"expected   {expected:.6f} ({'inside' if inside else 'outside'} the interval)",
    ])


def csv_report(strategy: str, est: Estimate) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerow([strategy, est.trials, est.hits, f"{est.rate:.8f}", f"{est.low:.8f}", f"{est.high:.8f}"])
    return buf.getvalue()
