"""CSS code construction: bivariate bicycle codes and toric codes.

Bivariate bicycle (BB) codes are built from two bivariate polynomials over
the group Z_L x Z_M: each monomial x^a y^b maps to the LM x LM permutation
matrix (cyclic shift by a) ⊗ (cyclic shift by b), the polynomial matrices
A and B are GF(2) sums of their monomials, and the parity checks are
Hx = [A | B], Hz = [B^T | A^T] on N = 2LM qubits.

Toric codes place qubits on the 2L^2 edges of an L x L torus with vertex
checks in Hx and plaquette checks in Hz.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gf2 import BinaryMatrix, in_rowspace, rank


@dataclass(frozen=True)
class Monomial:
    """A term x^a y^b with exponents reduced mod (L, M) at build time."""

    x_power: int
    y_power: int


# The polynomial pair used throughout: A = x^3 + y + y^2, B = y^3 + x + x^2.
# (L, M) = (12, 6) gives the [[144, 12, 12]] Gross code.
POLY_A = (Monomial(3, 0), Monomial(0, 1), Monomial(0, 2))
POLY_B = (Monomial(0, 3), Monomial(1, 0), Monomial(2, 0))


@dataclass(frozen=True, eq=False)
class CssCode:
    """An immutable CSS code; hx·hz^T = 0 over GF(2) and k = n - rk hx - rk hz."""

    name: str
    family: str  # "BB" or "Toric"
    n: int
    k: int
    l_param: int
    m_param: int
    hx: BinaryMatrix
    hz: BinaryMatrix


def _coerce_poly(poly: Sequence[Monomial | tuple[int, int]]) -> list[Monomial]:
    out = []
    for t in poly:
        out.append(t if isinstance(t, Monomial) else Monomial(int(t[0]), int(t[1])))
    return out


def _poly_matrix(poly: Iterable[Monomial], l: int, m: int) -> np.ndarray:
    """GF(2) sum of monomial permutation matrices, shape (l*m, l*m)."""
    shift_l = np.roll(np.eye(l, dtype=np.uint8), 1, axis=1)
    shift_m = np.roll(np.eye(m, dtype=np.uint8), 1, axis=1)
    acc = np.zeros((l * m, l * m), dtype=np.uint8)
    for term in poly:
        x_mat = np.linalg.matrix_power(shift_l, term.x_power % l).astype(np.uint8)
        y_mat = np.linalg.matrix_power(shift_m, term.y_power % m).astype(np.uint8)
        acc ^= np.kron(x_mat, y_mat)
    return acc


def build_bb_code(
    l: int,
    m: int,
    poly_a: Sequence[Monomial | tuple[int, int]] = POLY_A,
    poly_b: Sequence[Monomial | tuple[int, int]] = POLY_B,
    name: str | None = None,
) -> CssCode:
    """Construct the bivariate bicycle code for (L, M) and two polynomials."""
    if l < 2 or m < 2:
        raise ValueError(f"BB construction needs l, m >= 2, got ({l}, {m})")
    terms_a = _coerce_poly(poly_a)
    terms_b = _coerce_poly(poly_b)
    if not terms_a or not terms_b:
        raise ValueError("polynomials must be non-empty")

    a_mat = _poly_matrix(terms_a, l, m)
    b_mat = _poly_matrix(terms_b, l, m)
    hx = BinaryMatrix.from_dense(np.hstack([a_mat, b_mat]))
    hz = BinaryMatrix.from_dense(np.hstack([b_mat.T, a_mat.T]))

    n = 2 * l * m
    k = n - rank(hx) - rank(hz)
    return CssCode(
        name=name or f"bb-{l}x{m}",
        family="BB",
        n=n,
        k=k,
        l_param=l,
        m_param=m,
        hx=hx,
        hz=hz,
    )


def build_toric_code(l: int) -> CssCode:
    """Toric code on an L x L torus: 2L^2 edge qubits, K = 2.

    Qubit indexing: index = 2*(r*L + c) + o with o = 0 for the horizontal
    edge from vertex (r, c) to (r, c+1) and o = 1 for the vertical edge
    from (r, c) to (r+1, c), wrapping mod L. Vertex checks form hx,
    plaquette checks form hz; every check touches exactly 4 qubits.
    """
    if l < 2:
        raise ValueError(f"toric construction needs l >= 2, got {l}")

    n = 2 * l * l

    def h_edge(r, c):
        return 2 * ((r % l) * l + (c % l))

    def v_edge(r, c):
        return 2 * ((r % l) * l + (c % l)) + 1

    hx_dense = np.zeros((l * l, n), dtype=np.uint8)
    hz_dense = np.zeros((l * l, n), dtype=np.uint8)
    for r in range(l):
        for c in range(l):
            row = r * l + c
            # star at vertex (r, c)
            for q in (h_edge(r, c), h_edge(r, c - 1), v_edge(r, c), v_edge(r - 1, c)):
                hx_dense[row, q] ^= 1
            # plaquette with top-left corner (r, c)
            for q in (h_edge(r, c), h_edge(r + 1, c), v_edge(r, c), v_edge(r, c + 1)):
                hz_dense[row, q] ^= 1

    hx = BinaryMatrix.from_dense(hx_dense)
    hz = BinaryMatrix.from_dense(hz_dense)
    k = n - rank(hx) - rank(hz)
    return CssCode(
        name=f"toric-{l}",
        family="Toric",
        n=n,
        k=k,
        l_param=l,
        m_param=l,
        hx=hx,
        hz=hz,
    )


def logical_failure(code: CssCode, residual_x: np.ndarray, residual_z: np.ndarray) -> bool:
    """True iff a syndrome-free residual acts as a logical operator.

    Residuals must already satisfy hz·residual_x = 0 and hx·residual_z = 0
    (the decoder contract); a nonzero syndrome here is an upstream bug and
    raises. Failure means residual_x outside rowspace(hx) or residual_z
    outside rowspace(hz).
    """
    residual_x = np.asarray(residual_x, dtype=np.uint8)
    residual_z = np.asarray(residual_z, dtype=np.uint8)
    if code.hz.matvec(residual_x).any():
        raise ValueError("residual_x has nonzero syndrome; decoder contract violated")
    if code.hx.matvec(residual_z).any():
        raise ValueError("residual_z has nonzero syndrome; decoder contract violated")
    return not in_rowspace(code.hx, residual_x) or not in_rowspace(code.hz, residual_z)


BB_SIZES = {
    "bb-12x6": (12, 6),
    "bb-18x9": (18, 9),
    "bb-24x12": (24, 12),
    "bb-30x15": (30, 15),
    "bb-36x18": (36, 18),
}

TORIC_SIZES = ("toric-12", "toric-24", "toric-30", "toric-36")

_TORIC_RE = re.compile(r"^toric-(\d+)$")


def registry_names() -> list[str]:
    """Canonical registry: the five BB codes and the standard toric sizes.
    Any toric-L with L >= 2 also resolves."""
    return list(BB_SIZES) + list(TORIC_SIZES)


def get_code(name: str) -> CssCode:
    """Resolve a registry name to a freshly constructed code."""
    if name in BB_SIZES:
        l, m = BB_SIZES[name]
        return build_bb_code(l, m)
    match = _TORIC_RE.match(name)
    if match:
        return build_toric_code(int(match.group(1)))
    raise KeyError(f"unknown code {name!r}; known codes: {', '.join(registry_names())} or toric-L")
