"""WER estimation at one (code, decoder, p) point with deterministic
per-shot seeding and Wilson confidence intervals.

Reproducibility contract: every shot owns an independent RNG stream whose
seed is a stateless 64-bit mix of (base_seed, point_id, shot_index), so
(failures, shots) is bit-identical for any worker partitioning. point_id is
a stable hash of (code_name, decoder_name, p quantized to 1e-9, shots);
re-running a sweep with added points never perturbs existing ones.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .bposd import BpOsdConfig, decode_sector
from .codes import CssCode, logical_failure
from .erasure import sample_erasure, syndromes
from .matching import (
    build_matching_graph,
    mwpm_decode,
    weights_erasure_aware,
    weights_uninformed,
)

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(x: int) -> int:
    """SplitMix64 finalizer: the fixed avalanche behind all seed derivation."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_point_seed(base_seed: int, point_id: int) -> int:
    return _mix64(_mix64((base_seed + _GOLDEN) & _MASK64) ^ point_id)


def derive_shot_seed(base_seed: int, point_id: int, shot_index: int) -> int:
    """Stateless mixing of (base_seed, point_id, shot_index); identical
    across any thread partitioning."""
    return _mix64(derive_point_seed(base_seed, point_id) ^ shot_index)


def stable_point_id(code_name: str, decoder_name: str, p: float, shots: int) -> int:
    """Version-independent 64-bit id of one Monte Carlo point."""
    payload = f"{code_name}|{decoder_name}|{round(p * 1e9)}|{shots}".encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def tagged_seed(base_seed: int, tag: str, extra: str = "") -> int:
    """Stage-tagged seed (e.g. "pstar-boot", "fss-boot") so bootstrap
    stages draw from streams disjoint from the simulation shots."""
    payload = f"{tag}|{extra}".encode()
    tag_id = int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")
    return derive_point_seed(base_seed, tag_id)


def wilson_interval(failures: int, shots: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if not 0 <= failures <= shots or shots < 1:
        raise ValueError(f"need 0 <= failures <= shots, shots >= 1; got {failures}/{shots}")
    z = float(norm.ppf(0.5 + confidence / 2.0))
    phat = failures / shots
    z2 = z * z
    denom = 1.0 + z2 / shots
    center = (phat + z2 / (2.0 * shots)) / denom
    half = z * np.sqrt(phat * (1.0 - phat) / shots + z2 / (4.0 * shots * shots)) / denom
    lo = 0.0 if failures == 0 else max(0.0, center - half)
    hi = 1.0 if failures == shots else min(1.0, center + half)
    return lo, hi


@dataclass
class WerPoint:
    """One Monte Carlo evaluation of the word error rate."""

    code_name: str
    n: int
    k: int
    p: float
    shots: int
    failures: int
    wer: float
    wilson_lo: float
    wilson_hi: float
    point_seed: int


DECODER_NAMES = ("bposd", "mwpm-uninformed", "mwpm-erasure")


class BposdShotDecoder:
    """BP-OSD on both sectors: X errors decoded through hz, Z through hx."""

    def __init__(self, code: CssCode, cfg: BpOsdConfig | None = None):
        self.code = code
        self.cfg = cfg or BpOsdConfig()

    def decode(self, sample) -> tuple[np.ndarray, np.ndarray]:
        syn_x, syn_z = syndromes(self.code, sample)
        corr_x = decode_sector(self.code.hz, syn_x, sample.erased, self.cfg)
        corr_z = decode_sector(self.code.hx, syn_z, sample.erased, self.cfg)
        return corr_x, corr_z


class MwpmShotDecoder:
    """MWPM on both toric sectors, uninformed or erasure-aware. The
    erasure-aware mode builds a fresh weighted graph every shot; the
    uninformed weights are constant so the weighted graphs are reused."""

    def __init__(self, code: CssCode, mode: str, p: float):
        if mode not in ("uninformed", "erasure"):
            raise ValueError(f"unknown MWPM mode {mode!r}")
        self.code = code
        self.mode = mode
        self.base_x = build_matching_graph(code, "X")
        self.base_z = build_matching_graph(code, "Z")
        if mode == "uninformed":
            self.graph_x = weights_uninformed(self.base_x, p)
            self.graph_z = weights_uninformed(self.base_z, p)

    def decode(self, sample) -> tuple[np.ndarray, np.ndarray]:
        syn_x, syn_z = syndromes(self.code, sample)
        if self.mode == "erasure":
            graph_x = weights_erasure_aware(self.base_x, sample.erased)
            graph_z = weights_erasure_aware(self.base_z, sample.erased)
        else:
            graph_x = self.graph_x
            graph_z = self.graph_z
        return mwpm_decode(graph_x, syn_x), mwpm_decode(graph_z, syn_z)


def make_decoder(name: str, code: CssCode, cfg: BpOsdConfig | None, p: float):
    if name == "bposd":
        return BposdShotDecoder(code, cfg)
    if name == "mwpm-uninformed":
        return MwpmShotDecoder(code, "uninformed", p)
    if name == "mwpm-erasure":
        return MwpmShotDecoder(code, "erasure", p)
    raise KeyError(f"unknown decoder {name!r}; known: {', '.join(DECODER_NAMES)}")


def _count_failures(args) -> int:
    code, decoder_name, cfg, p, point_seed, start, stop = args
    decoder = make_decoder(decoder_name, code, cfg, p)
    failures = 0
    for i in range(start, stop):
        rng = np.random.default_rng(_mix64(point_seed ^ i))
        sample = sample_erasure(code.n, p, rng)
        try:
            corr_x, corr_z = decoder.decode(sample)
            if logical_failure(code, sample.e_x ^ corr_x, sample.e_z ^ corr_z):
                failures += 1
        except Exception as exc:
            raise RuntimeError(
                f"decoder {decoder_name!r} failed at shot {i} (p={p})"
            ) from exc
    return failures


def estimate_wer(
    code: CssCode,
    decoder: str,
    p: float,
    shots: int,
    point_seed: int,
    cfg: BpOsdConfig | None = None,
    workers: int = 1,
    confidence: float = 0.95,
) -> WerPoint:
    """Run the trial loop (erase, error, decode, validate) `shots` times;
    a failure is a logical error in either sector. The result is
    independent of `workers` because shots are seeded individually and
    failures add commutatively."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if decoder not in DECODER_NAMES:
        raise KeyError(f"unknown decoder {decoder!r}; known: {', '.join(DECODER_NAMES)}")

    if workers <= 1 or shots < 64:
        failures = _count_failures((code, decoder, cfg, p, point_seed, 0, shots))
    else:
        bounds = np.linspace(0, shots, 4 * workers + 1, dtype=int)
        tasks = [
            (code, decoder, cfg, p, point_seed, int(a), int(b))
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            failures = sum(pool.map(_count_failures, tasks))

    wer = failures / shots
    lo, hi = wilson_interval(failures, shots, confidence)
    return WerPoint(
        code_name=code.name,
        n=code.n,
        k=code.k,
        p=p,
        shots=shots,
        failures=failures,
        wer=wer,
        wilson_lo=lo,
        wilson_hi=hi,
        point_seed=point_seed,
    )
