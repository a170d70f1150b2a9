"""Bivector-field commutators, the curvature family, and identity residuals.

Three commutator conventions are supported for fields valued in the
ten-dimensional adjoint space:

* ``plain``: difference of the two directional derivatives.
* ``corrected``: plain minus the full algebraic cross term produced by
  the spacetime parts of the arguments.
* ``halved`` (default): plain minus half of that cross term.

The transport table passed to these functions should be the
with-translation one: its bottom row is what makes the fifth-direction
part of every commutator reduce to the Lie bracket of the arguments'
fifth-direction parts.

Curvature arrays follow the classical index layout ``R[..., a, b, m, n]``
= R^a_{b m n} with the derivative-direction pair last.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .algebra import (
    ADJ_PAIRS,
    E_SLOTS,
    FIFTH,
    Z_SLOTS,
    adjoint_rep_matrix,
    join_bivector,
    split_bivector,
)
from .connections import (
    BivectorConnection,
    Connection4,
    FiveConnection,
    bivector_derivative,
)
from .lattice import MetricField, partial_derivative

__all__ = [
    "CONVENTIONS",
    "riemann_tensor",
    "bivector_commutator",
    "q_constants",
    "curvature_pair",
    "curvature_R4",
    "curvature_R5",
    "curvature_R10",
    "jacobi_defect",
    "jacobi_residual",
    "curvature_operator",
    "bianchi_residual",
    "five_curvature",
    "k_tensor",
    "flatness_commuting_basis_check",
]

CONVENTIONS = ("plain", "corrected", "halved")

_ZZ_FACTOR = {"plain": 0.0, "corrected": 1.0, "halved": 0.5}


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown commutator convention {convention!r}")


def riemann_tensor(gamma: Connection4) -> NDArray[np.float64]:
    """R^a_{bmn} = d_m Gamma^a_{bn} - d_n Gamma^a_{bm} + Gamma Gamma."""
    g = gamma.gamma
    grid = gamma.grid
    dg = np.stack([partial_derivative(g, m, grid) for m in range(4)], axis=-2)
    # dg[..., a, b, m, n] = d_m Gamma^a_{bn}
    r = dg - np.swapaxes(dg, -1, -2)
    quad = np.einsum("...awm,...wbn->...abmn", g, g, optimize=True)
    return r + quad - np.swapaxes(quad, -1, -2)


def _zero_e_part(a: NDArray) -> NDArray[np.float64]:
    out = np.array(a, dtype=float, copy=True)
    out[..., list(E_SLOTS)] = 0.0
    return out


def bivector_commutator(
    a: NDArray,
    b: NDArray,
    conn: BivectorConnection,
    convention: str = "halved",
) -> NDArray[np.float64]:
    """Commutator of two adjoint-valued fields.

    All conventions share the same fifth-direction part; they differ only
    in how much of the algebraic spacetime-spacetime cross term is
    removed from the plain derivative difference.
    """
    _check_convention(convention)
    plain = bivector_derivative(b, a, conn, "bivector") - bivector_derivative(
        a, b, conn, "bivector"
    )
    factor = _ZZ_FACTOR[convention]
    if factor == 0.0:
        return plain
    az = _zero_e_part(a)
    bz = _zero_e_part(b)
    cross = bivector_derivative(bz, az, conn, "bivector") - bivector_derivative(
        az, bz, conn, "bivector"
    )
    return plain - factor * cross


def _z_wedge_basis(i: int, j: int, lead_shape: tuple[int, ...]) -> NDArray[np.float64]:
    """Constant basis bivector e_i ^ e_j (spacetime indices) as components."""
    out = np.zeros(lead_shape + (10,))
    if i == j:
        return out
    sign = 1.0
    if i > j:
        i, j, sign = j, i, -1.0
    out[..., ADJ_PAIRS.index((i, j))] = sign
    return out


def _basis_commutator_components(
    metric: MetricField,
    gamma: Connection4,
    slot_a: int,
    slot_b: int,
    convention: str,
) -> NDArray[np.float64]:
    """Components of the commutator of two constant basis bivectors."""
    _check_convention(convention)
    lead = metric.grid.shape
    k, l = ADJ_PAIRS[slot_a]
    m, n = ADJ_PAIRS[slot_b]
    out = np.zeros(lead + (10,))
    if l == FIFTH and n == FIFTH:
        return out
    if l == FIFTH or n == FIFTH:
        if n == FIFTH:  # swap so the fifth-direction slot comes first
            return -_basis_commutator_components(metric, gamma, slot_b, slot_a, convention)
        # transport of e_m ^ e_n along direction k
        g = gamma.gamma
        for sigma in range(4):
            out += g[..., sigma, m, k, None] * _z_wedge_basis(sigma, n, lead)
            out += g[..., sigma, n, k, None] * _z_wedge_basis(m, sigma, lead)
        return out
    factor = 2.0 * (1.0 - _ZZ_FACTOR[convention])
    if factor == 0.0:
        return out
    g = metric.g
    combo = (
        g[..., k, m, None] * _z_wedge_basis(l, n, lead)
        - g[..., l, m, None] * _z_wedge_basis(k, n, lead)
        - g[..., k, n, None] * _z_wedge_basis(l, m, lead)
        + g[..., l, n, None] * _z_wedge_basis(k, m, lead)
    )
    return factor * combo


def q_constants(
    metric: MetricField,
    gamma: Connection4,
    convention: str = "halved",
) -> NDArray[np.float64]:
    """Structure functions Q^S_{AB} of the constant slot basis.

    Shape ``(..., 10, 10, 10)`` indexed (result slot, first argument,
    second argument); antisymmetric in the argument slots.
    """
    q = np.zeros(metric.grid.shape + (10, 10, 10))
    for a in range(10):
        for b in range(a + 1, 10):
            val = _basis_commutator_components(metric, gamma, a, b, convention)
            q[..., :, a, b] = val
            q[..., :, b, a] = -val
    return q


def curvature_pair(
    conn: BivectorConnection,
    metric: MetricField,
    gamma: Connection4,
    slot_a: int,
    slot_b: int,
    convention: str | None = "halved",
) -> NDArray[np.float64]:
    """One adjoint-direction pair of the coefficient curvature.

    Returns the five-by-five matrix field d_A G_B - d_B G_A + [G_A, G_B]
    - Q^S_{AB} G_S, where the partial acts only through fifth-direction
    slots.  ``convention=None`` skips the structure-function subtraction
    (the bare coefficient expression).
    """
    mats = conn.g_table
    grid = conn.grid

    def d_slot(src_slot: int, other: int) -> NDArray:
        pair = ADJ_PAIRS[src_slot]
        if pair[1] != FIFTH:
            return np.zeros(grid.shape + (5, 5))
        return partial_derivative(mats[..., other], pair[0], grid)

    ga = mats[..., slot_a]
    gb = mats[..., slot_b]
    out = d_slot(slot_a, slot_b) - d_slot(slot_b, slot_a) + ga @ gb - gb @ ga
    if convention is not None:
        q = _basis_commutator_components(metric, gamma, slot_a, slot_b, convention)
        out = out - np.einsum("...s,...ijs->...ij", q, mats)
    return out


def curvature_R4(
    conn: BivectorConnection,
    metric: MetricField,
    gamma: Connection4,
    convention: str | None = "halved",
) -> NDArray[np.float64]:
    """Four-vector block of the curvature, shape ``(..., 4, 4, 10, 10)``.

    Antisymmetric in the trailing adjoint direction pair.  Memory grows
    as 1600 doubles per grid point; prefer :func:`curvature_pair` for
    refinement studies on large grids.
    """
    out = np.zeros(conn.grid.shape + (4, 4, 10, 10))
    for a in range(10):
        for b in range(a + 1, 10):
            blk = curvature_pair(conn, metric, gamma, a, b, convention)[..., :4, :4]
            out[..., a, b] = blk
            out[..., b, a] = -blk
    return out


def curvature_R5(
    conn: BivectorConnection,
    metric: MetricField,
    gamma: Connection4,
    convention: str | None = "halved",
) -> NDArray[np.float64]:
    """Five-vector curvature over adjoint direction pairs,
    shape ``(..., 5, 5, 10, 10)``."""
    out = np.zeros(conn.grid.shape + (5, 5, 10, 10))
    for a in range(10):
        for b in range(a + 1, 10):
            blk = curvature_pair(conn, metric, gamma, a, b, convention)
            out[..., a, b] = blk
            out[..., b, a] = -blk
    return out


def curvature_R10(r5: NDArray) -> NDArray[np.float64]:
    """Adjoint-space curvature induced from the five-vector one.

    Input ``(..., 5, 5, 10, 10)``; output ``(..., 10, 10, 10, 10)``
    indexed (result slot, argument slot, direction pair), acting on each
    wedge factor of a bivector in turn.
    """
    r5 = np.asarray(r5, dtype=float)
    if r5.shape[-4:-2] != (5, 5) or r5.shape[-2:] != (10, 10):
        raise ValueError(f"expected trailing (5, 5, 10, 10) axes, got {r5.shape}")
    mats = np.moveaxis(r5, (-4, -3), (-2, -1))  # (..., 10, 10, 5, 5)
    rep = adjoint_rep_matrix(mats)  # (..., 10, 10, 10, 10) slots last
    return np.moveaxis(rep, (-2, -1), (-4, -3))


def jacobi_defect(
    a: NDArray,
    b: NDArray,
    c: NDArray,
    riemann: NDArray,
) -> NDArray[np.float64]:
    """Curvature obstruction to the Jacobi identity, as adjoint components.

    Purely spacetime-valued and totally antisymmetric in the three
    arguments; vanishes identically when the curvature is zero.
    """
    ea, za = split_bivector(a)
    eb, zb = split_bivector(b)
    ec, zc = split_bivector(c)
    coeff = np.zeros(za.shape)
    for zx, ey, ez in ((za, eb, ec), (zb, ec, ea), (zc, ea, eb)):
        coeff += np.einsum(
            "...kamn,...ab,...m,...n->...kb", riemann, zx, ey, ez, optimize=True
        )
    full = -(coeff - np.swapaxes(coeff, -1, -2))
    return join_bivector(np.zeros(full.shape[:-2] + (4,)), full)


def jacobi_residual(
    a: NDArray,
    b: NDArray,
    c: NDArray,
    conn: BivectorConnection,
    gamma: Connection4,
    convention: str = "halved",
    include_defect: bool = True,
) -> NDArray[np.float64]:
    """Cyclic double-commutator sum plus the curvature defect.

    Converges to zero under grid refinement for the halved convention;
    ``include_defect=False`` drops the defect term (negative control).
    """
    total = np.zeros(np.asarray(a, dtype=float).shape)
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        inner = bivector_commutator(y, z, conn, convention)
        total = total + bivector_commutator(x, inner, conn, convention)
    if include_defect:
        total = total + jacobi_defect(a, b, c, riemann_tensor(gamma))
    return total


def curvature_operator(
    x: NDArray,
    y: NDArray,
    field: NDArray,
    conn: BivectorConnection,
    convention: str = "halved",
    kind: str | None = None,
) -> NDArray[np.float64]:
    """Curvature of the directional derivative: [D_x, D_y] - D_[x,y]."""
    dxy = bivector_derivative(bivector_derivative(field, y, conn, kind), x, conn, kind)
    dyx = bivector_derivative(bivector_derivative(field, x, conn, kind), y, conn, kind)
    bracket = bivector_commutator(x, y, conn, convention)
    return dxy - dyx - bivector_derivative(field, bracket, conn, kind)


def bianchi_residual(
    a: NDArray,
    b: NDArray,
    c: NDArray,
    u: NDArray,
    conn: BivectorConnection,
    gamma: Connection4,
    convention: str = "halved",
) -> NDArray[np.float64]:
    """Differential curvature identity probed on a test field.

    Evaluates the cyclic sum of [D_x, curv(y, z)] u plus the cyclic sum
    of curv(x, [y, z]) u, minus the derivative of u along the Jacobi
    defect.  Converges to zero at second order on smooth data.
    """
    kind = None  # inferred per call from the field shape
    total = np.zeros(np.asarray(u, dtype=float).shape)
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        curv_u = curvature_operator(y, z, u, conn, convention, kind)
        du = bivector_derivative(u, x, conn, kind)
        total = total + bivector_derivative(curv_u, x, conn, kind)
        total = total - curvature_operator(y, z, du, conn, convention, kind)
        bracket = bivector_commutator(y, z, conn, convention)
        total = total + curvature_operator(x, bracket, u, conn, convention, kind)
    defect = jacobi_defect(a, b, c, riemann_tensor(gamma))
    return total - bivector_derivative(u, defect, conn, kind)


def five_curvature(h5: FiveConnection) -> NDArray[np.float64]:
    """Curvature of a five-vector connection, shape ``(..., 5, 5, 5, 5)``.

    R^A_{BCD} = d_C H^A_{BD} - d_D H^A_{BC} + H^A_{KC} H^K_{BD}
    - H^A_{KD} H^K_{BC}; the fifth direction carries no partial.
    """
    h = h5.h
    grid = h5.grid
    r = np.einsum("...akc,...kbd->...abcd", h, h)
    r = r - np.swapaxes(r, -1, -2)
    for cdir in range(4):
        dh = partial_derivative(h, cdir, grid)  # (..., A, B, D)
        r[..., :, :, cdir, :] += dh
        r[..., :, :, :, cdir] -= dh
    return r


def k_tensor(r5: NDArray, metric: MetricField) -> NDArray[np.float64]:
    """Adjoint-valued form of the five-vector curvature.

    K^{Ab}_{CD} = g^{bw} R^A_{wCD} on spacetime b; the fifth upper column
    is defined by antisymmetry, K^{A5}_{CD} = -K^{5A}_{CD}.
    """
    r5 = np.asarray(r5, dtype=float)
    k = np.zeros(r5.shape)
    k[..., :, :4, :, :] = np.einsum("...bw,...awcd->...abcd", metric.inverse, r5[..., :, :4, :, :])
    k[..., :4, 4, :, :] = -k[..., 4, :4, :, :]
    return k


def flatness_commuting_basis_check(
    basis_fields: NDArray,
    conn: BivectorConnection,
    threshold: float = 1e-9,
) -> tuple[bool, float]:
    """Do ten given adjoint basis fields commute everywhere?

    Uses the corrected convention (the geometrically exact commutator).
    Returns (all pairwise commutators below threshold, worst residual).
    A constant slot basis passes exactly when the chart is flat.
    """
    basis = np.asarray(basis_fields, dtype=float)
    if basis.shape[0] < 10:
        raise ValueError(f"need ten basis fields, got {basis.shape[0]}")
    worst = 0.0
    for i in range(10):
        for j in range(i + 1, 10):
            comm = bivector_commutator(basis[i], basis[j], conn, "corrected")
            worst = max(worst, float(np.max(np.abs(comm))))
    return worst < threshold, worst
