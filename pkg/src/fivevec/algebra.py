"""Adjoint (bivector) index algebra for the five-dimensional tangent space.

The tangent space at each point has four spacetime directions (indices
0..3) and one extra direction stored at array position 4, conventionally
written "5" in index notation.  Antisymmetric index pairs (K, L) with
K < L form the ten-dimensional adjoint space; components over it live in
arrays whose trailing axis has length 10, ordered canonically as

    01 < 02 < 03 < 05 < 12 < 13 < 15 < 23 < 25 < 35

Pairs may be written with the label 5 or the array position 4
interchangeably; every function normalizes on input.  Grid axes, when
present, always lead and are broadcast through.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "FIFTH",
    "ADJ_PAIRS",
    "E_SLOTS",
    "Z_SLOTS",
    "FiveMetric",
    "slot_index",
    "slot_pair",
    "basis_bivector",
    "split_bivector",
    "join_bivector",
    "expand_bivector",
    "restrict_bivector",
    "adjoint_wedge",
    "wedge_chain",
    "adjoint_pair",
    "m_matrix_4",
    "m_matrix_5",
    "m_operator_tables",
    "bivector_action",
    "adjoint_rep_matrix",
    "poincare_generators",
    "poincare_algebra_check",
]

FIFTH = 4  # array position of the fifth tangent direction

ADJ_PAIRS: tuple[tuple[int, int], ...] = (
    (0, 1), (0, 2), (0, 3), (0, 4), (1, 2),
    (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),
)

# slots whose pair contains the fifth direction, in row order 05,15,25,35
E_SLOTS: tuple[int, ...] = (3, 6, 8, 9)
# purely spacetime slots, in row order 01,02,03,12,13,23
Z_SLOTS: tuple[int, ...] = (0, 1, 2, 4, 5, 7)

_SLOT_OF = {pair: slot for slot, pair in enumerate(ADJ_PAIRS)}


def _axis(k: int) -> int:
    """Map an index label to its array position (5 and 4 both mean 4)."""
    if k == 5:
        return FIFTH
    if 0 <= k <= 4:
        return int(k)
    raise ValueError(f"tangent index must be in 0..5, got {k}")


def slot_index(pair: tuple[int, int]) -> int:
    """Canonical adjoint slot of an ordered pair (K, L) with K < L."""
    i, j = (_axis(k) for k in pair)
    if i == j:
        raise ValueError(f"degenerate pair {pair}")
    if i > j:
        raise ValueError(f"pair {pair} is not canonically ordered")
    return _SLOT_OF[(i, j)]


def slot_pair(slot: int) -> tuple[int, int]:
    """Inverse of :func:`slot_index`."""
    if not 0 <= slot <= 9:
        raise ValueError(f"adjoint slot must be in 0..9, got {slot}")
    return ADJ_PAIRS[slot]


def _signed_slot(i: int, j: int) -> tuple[int, float]:
    """Slot and orientation sign for an arbitrary non-degenerate pair."""
    if i < j:
        return _SLOT_OF[(i, j)], 1.0
    return _SLOT_OF[(j, i)], -1.0


def basis_bivector(pair: tuple[int, int]) -> NDArray[np.float64]:
    """Unit adjoint vector e_{KL}, shape (10,)."""
    out = np.zeros(10)
    out[slot_index(pair)] = 1.0
    return out


@dataclass(frozen=True)
class FiveMetric:
    """Block-diagonal metric data for the five-dimensional tangent space.

    ``g4`` is the spacetime block, shape ``(..., 4, 4)`` with any leading
    grid axes.  The raised fifth-fifth component is ``h55 = 1/kappa**2``
    where ``kappa`` is the package's inverse-length constant; there is no
    mixing between the spacetime block and the fifth direction.
    """

    g4: NDArray[np.float64]
    kappa: float = 1.0

    def __post_init__(self) -> None:
        g4 = np.asarray(self.g4, dtype=float)
        if g4.shape[-2:] != (4, 4):
            raise ValueError(f"g4 must end in a 4x4 block, got shape {g4.shape}")
        if not np.array_equal(g4, np.swapaxes(g4, -1, -2)):
            raise ValueError("g4 must be exactly symmetric")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        object.__setattr__(self, "g4", g4)

    @property
    def h55(self) -> float:
        return 1.0 / self.kappa**2

    def lowered(self, degenerate: bool = True) -> NDArray[np.float64]:
        """Lowered five-metric, shape ``(..., 5, 5)``.

        The default puts 0 in the fifth-fifth entry, the form every group
        and commutator identity in this package is checked against.  With
        ``degenerate=False`` the entry is ``kappa**2`` (the reciprocal of
        the raised component), which is the convention used by
        :func:`m_matrix_5`.
        """
        g5 = np.zeros(self.g4.shape[:-2] + (5, 5))
        g5[..., :4, :4] = self.g4
        if not degenerate:
            g5[..., 4, 4] = self.kappa**2
        return g5

    def raised(self) -> NDArray[np.float64]:
        """Raised five-metric: inverse spacetime block plus h55."""
        h = np.zeros(self.g4.shape[:-2] + (5, 5))
        h[..., :4, :4] = np.linalg.inv(self.g4)
        h[..., 4, 4] = self.h55
        return h


def split_bivector(a: NDArray) -> tuple[NDArray, NDArray]:
    """Split adjoint components into the fifth-direction part and the
    spacetime part.

    Returns ``(e, z)`` where ``e`` has shape ``(..., 4)`` holding the
    components A^{mu 5}, and ``z`` is the antisymmetric ``(..., 4, 4)``
    array of the purely spacetime components A^{mu nu}.
    """
    a = np.asarray(a, dtype=float)
    if a.shape[-1] != 10:
        raise ValueError(f"adjoint components must end in axis length 10, got {a.shape}")
    e = a[..., list(E_SLOTS)]
    z = np.zeros(a.shape[:-1] + (4, 4))
    for slot in Z_SLOTS:
        i, j = ADJ_PAIRS[slot]
        z[..., i, j] = a[..., slot]
        z[..., j, i] = -a[..., slot]
    return e, z


def join_bivector(e: NDArray, z: NDArray) -> NDArray[np.float64]:
    """Inverse of :func:`split_bivector`; ``z`` is antisymmetrized."""
    e = np.asarray(e, dtype=float)
    z = np.asarray(z, dtype=float)
    z = 0.5 * (z - np.swapaxes(z, -1, -2))
    out = np.zeros(e.shape[:-1] + (10,))
    out[..., list(E_SLOTS)] = e
    for slot in Z_SLOTS:
        i, j = ADJ_PAIRS[slot]
        out[..., slot] = z[..., i, j]
    return out


def expand_bivector(a: NDArray) -> NDArray[np.float64]:
    """Full antisymmetric representation, shape ``(..., 5, 5)``."""
    a = np.asarray(a, dtype=float)
    if a.shape[-1] != 10:
        raise ValueError(f"adjoint components must end in axis length 10, got {a.shape}")
    full = np.zeros(a.shape[:-1] + (5, 5))
    for slot, (i, j) in enumerate(ADJ_PAIRS):
        full[..., i, j] = a[..., slot]
        full[..., j, i] = -a[..., slot]
    return full


def restrict_bivector(full: NDArray) -> NDArray[np.float64]:
    """Canonical components of an antisymmetric ``(..., 5, 5)`` array."""
    full = np.asarray(full, dtype=float)
    if full.shape[-2:] != (5, 5):
        raise ValueError(f"expected trailing (5, 5) axes, got {full.shape}")
    out = np.zeros(full.shape[:-2] + (10,))
    for slot, (i, j) in enumerate(ADJ_PAIRS):
        out[..., slot] = full[..., i, j]
    return out


def adjoint_wedge(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    """Antisymmetrized tensor product of two adjoint vectors.

    Result shape ``(..., 10, 10)`` with entries A^A B^B - B^A A^B.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    outer = np.einsum("...a,...b->...ab", a, b)
    return outer - np.swapaxes(outer, -1, -2)


def wedge_chain(vectors: list[NDArray]) -> NDArray[np.float64]:
    """Wedge of m adjoint vectors as a totally antisymmetric rank-m array.

    Sum over all permutations with signs and no 1/m! factor, so for two
    factors this reduces to :func:`adjoint_wedge`.
    """
    from itertools import permutations

    m = len(vectors)
    if m == 0:
        raise ValueError("need at least one factor")
    vs = [np.asarray(v, dtype=float) for v in vectors]
    letters = "abcdefgh"[:m]
    spec = ",".join(f"...{c}" for c in letters) + "->..." + letters
    out = None
    for perm in permutations(range(m)):
        sign = _perm_sign(perm)
        term = sign * np.einsum(spec, *(vs[p] for p in perm))
        out = term if out is None else out + term
    return out


def _perm_sign(perm: tuple[int, ...]) -> float:
    sign = 1.0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def adjoint_pair(form: NDArray, mv: NDArray) -> float:
    """Pair a rank-m adjoint form with a rank-m adjoint multivector.

    Both arguments are totally antisymmetric arrays of shape (10,)*m.
    The contraction sums each slot pair once (restricted summation), so
    pairing the wedge of m distinct dual basis vectors with the wedge of
    the matching basis vectors gives exactly 1.
    """
    form = np.asarray(form, dtype=float)
    mv = np.asarray(mv, dtype=float)
    if form.shape != mv.shape:
        raise ValueError(f"rank mismatch: form {form.shape} vs multivector {mv.shape}")
    if form.shape != (10,) * form.ndim:
        raise ValueError(f"expected shape (10,)*m, got {form.shape}")
    m = form.ndim
    return float(np.tensordot(form, mv, axes=m) / factorial(m))


def _m_from_lowered(pair: tuple[int, int], g: NDArray) -> NDArray[np.float64]:
    """Generator matrix delta^A_L g_{KB} - delta^A_K g_{LB} for any size."""
    i, j = pair
    m = np.zeros(g.shape)
    if i == j:
        return m
    m[..., j, :] += g[..., i, :]
    m[..., i, :] -= g[..., j, :]
    return m


def m_matrix_4(pair: tuple[int, int], g: NDArray) -> NDArray[np.float64]:
    """Rotation generator on four-vectors for one adjoint index.

    (M_{ab})^mu_nu = delta^mu_b g_{a nu} - delta^mu_a g_{b nu}; pairs
    containing the fifth direction act as zero on four-vectors.
    """
    i, j = (_axis(k) for k in pair)
    g = np.asarray(g, dtype=float)
    if g.shape[-2:] != (4, 4):
        raise ValueError(f"expected trailing (4, 4) metric axes, got {g.shape}")
    if FIFTH in (i, j):
        return np.zeros(g.shape)
    return _m_from_lowered((i, j), g)


def m_matrix_5(pair: tuple[int, int], fg: FiveMetric) -> NDArray[np.float64]:
    """Generator on five-vectors, using the non-degenerate lowering."""
    i, j = (_axis(k) for k in pair)
    return _m_from_lowered((i, j), fg.lowered(degenerate=False))


def m_operator_tables(fg: FiveMetric) -> tuple[NDArray, NDArray]:
    """All ten generator matrices at once.

    Returns ``(m4, m5)`` with shapes ``(..., 10, 4, 4)`` and
    ``(..., 10, 5, 5)``, slot axis third from the end.
    """
    lead = fg.g4.shape[:-2]
    m4 = np.zeros(lead + (10, 4, 4))
    m5 = np.zeros(lead + (10, 5, 5))
    for slot, pair in enumerate(ADJ_PAIRS):
        m4[..., slot, :, :] = m_matrix_4(pair, fg.g4)
        m5[..., slot, :, :] = m_matrix_5(pair, fg)
    return m4, m5


def bivector_action(mat: NDArray, biv: NDArray) -> NDArray[np.float64]:
    """Act with a five-by-five matrix on adjoint components.

    Leibniz action on both raised slots: (M B)^{KL} = M^K_S B^{SL}
    + M^L_S B^{KS}, returned in canonical components.
    """
    full = expand_bivector(biv)
    acted = np.einsum("...ks,...sl->...kl", mat, full)
    acted = acted + np.einsum("...ls,...ks->...kl", mat, full)
    return restrict_bivector(acted)


def adjoint_rep_matrix(mat: NDArray) -> NDArray[np.float64]:
    """Ten-by-ten matrix of :func:`bivector_action` on the slot basis."""
    mat = np.asarray(mat, dtype=float)
    eye = np.eye(10)
    cols = [bivector_action(mat, eye[b]) for b in range(10)]
    return np.stack(cols, axis=-1)


def poincare_generators(fg: FiveMetric, convention: str = "with-translation") -> NDArray[np.float64]:
    """Five-by-five generator table for the inhomogeneous group.

    with-translation
        Spacetime slots carry the rotation generators built with the
        degenerate lowering; fifth-direction slots carry minus the same
        construction, whose only nonzero content is the bottom row
        G^5_{beta} = -g_{mu beta}.
    rotation-only
        Fifth-direction slots are identically zero.
    """
    if convention not in ("with-translation", "rotation-only"):
        raise ValueError(f"unknown convention {convention!r}")
    g5 = fg.lowered(degenerate=True)
    table = np.zeros(g5.shape[:-2] + (10, 5, 5))
    for slot, (i, j) in enumerate(ADJ_PAIRS):
        mat = _m_from_lowered((i, j), g5)
        if j == FIFTH:
            if convention == "with-translation":
                table[..., slot, :, :] = -mat
        else:
            table[..., slot, :, :] = mat
    return table


def poincare_algebra_check(
    gens: NDArray,
    fg: FiveMetric,
    lowered: NDArray | None = None,
) -> float:
    """Worst-case closure residual of a ten-generator table.

    For every slot pair, compares the matrix commutator against the
    metric combination g_{KM} G_{LN} - g_{LM} G_{KN} - g_{KN} G_{LM}
    + g_{LN} G_{KM} and returns the largest absolute entry of the
    difference.  ``lowered`` overrides the degenerate five-metric used
    for the coefficients.
    """
    gens = np.asarray(gens, dtype=float)
    if gens.shape[-3:] != (10, 5, 5):
        raise ValueError(f"expected trailing (10, 5, 5) axes, got {gens.shape}")
    g5 = fg.lowered(degenerate=True) if lowered is None else np.asarray(lowered, dtype=float)

    def signed(i: int, j: int) -> NDArray:
        if i == j:
            return np.zeros(gens.shape[:-3] + (5, 5))
        slot, sign = _signed_slot(i, j)
        return sign * gens[..., slot, :, :]

    worst = 0.0
    for a, (k, l) in enumerate(ADJ_PAIRS):
        ga = gens[..., a, :, :]
        for b, (m, n) in enumerate(ADJ_PAIRS):
            gb = gens[..., b, :, :]
            comm = ga @ gb - gb @ ga
            rhs = (
                g5[..., k, m, None, None] * signed(l, n)
                - g5[..., l, m, None, None] * signed(k, n)
                - g5[..., k, n, None, None] * signed(l, m)
                + g5[..., l, n, None, None] * signed(k, m)
            )
            worst = max(worst, float(np.max(np.abs(comm - rhs))))
    return worst
