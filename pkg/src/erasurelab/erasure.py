"""The i.i.d. erasure channel and its syndromes.

Each qubit is erased independently with probability p; an erased qubit
then carries an X error with probability 0.5 and, independently, a Z error
with probability 0.5 (so Y = X·Z occurs with probability 0.25). Non-erased
qubits are error-free.

The RNG consumption order is fixed for bit-stable replay: one uniform per
qubit for the erasure coins (index order), then one per erased qubit for
the X coins (erased indices ascending), then the Z coins likewise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import CssCode


@dataclass
class ErasureSample:
    """One shot of the channel: erasure mask plus X/Z error supports,
    with e_x and e_z contained in the erased set."""

    erased: np.ndarray
    e_x: np.ndarray
    e_z: np.ndarray


def sample_erasure(n: int, p: float, rng: np.random.Generator) -> ErasureSample:
    """Draw one erasure-channel sample on n qubits at erasure rate p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {p}")
    erased = (rng.random(n) < p).astype(np.uint8)
    idx = np.flatnonzero(erased)
    e_x = np.zeros(n, dtype=np.uint8)
    e_z = np.zeros(n, dtype=np.uint8)
    e_x[idx] = rng.random(idx.size) < 0.5
    e_z[idx] = rng.random(idx.size) < 0.5
    return ErasureSample(erased=erased, e_x=e_x, e_z=e_z)


def syndromes(code: CssCode, sample: ErasureSample) -> tuple[np.ndarray, np.ndarray]:
    """(syn_x, syn_z) = (hz·e_x, hx·e_z) over GF(2): X errors are detected
    by Z checks and vice versa."""
    if len(sample.erased) != code.n:
        raise ValueError(f"sample length {len(sample.erased)} != code.n {code.n}")
    return code.hz.matvec(sample.e_x), code.hx.matvec(sample.e_z)
