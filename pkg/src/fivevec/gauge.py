"""Gauge fields on nonspacetime vector bundles with adjoint directions.

A bundle field carries ``n`` components that are scalars under spacetime
transport; its derivative along a bivector direction adds the connection
term C^i_{j,slot} per canonical slot.  Layouts: connection coefficients
``c[..., i, j, s]``; field strength ``f[..., A, B, i, j]`` antisymmetric
in the two slot axes; induced five-vector gauge fields
``b[..., i, j, A]`` over the five components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .algebra import ADJ_PAIRS, E_SLOTS, Z_SLOTS
from .connections import (
    BivectorConnection,
    Connection4,
    ContorsionForm,
    bivector_connection_G,
)
from .curvature import (
    bivector_commutator,
    jacobi_defect,
    q_constants,
    riemann_tensor,
)
from .lattice import Grid4, MetricField, partial_derivative

__all__ = [
    "GaugeConnection",
    "gauge_bivector_derivative",
    "gauge_transform",
    "five_gauge_from_bivector",
    "gauge_field_strength",
    "gauge_curvature_operator",
    "gauge_bianchi_residual",
    "five_vector_bracket",
    "five_gauge_strength",
    "gauge_directional_derivative",
    "df_zero_check",
]


@dataclass(frozen=True)
class GaugeConnection:
    """Bundle connection coefficients per adjoint direction.

    ``c[..., i, j, s]`` with bundle dimension n and ten canonical
    slots s.
    """

    c: NDArray[np.float64]
    grid: Grid4

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 7 or c.shape[:4] != self.grid.shape or c.shape[-1] != 10:
            raise ValueError(f"gauge coefficients must have shape grid + (n, n, 10), got {c.shape}")
        if c.shape[-3] != c.shape[-2] or c.shape[-3] < 1:
            raise ValueError(f"bundle blocks must be square, got {c.shape[-3:]}")
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.c.shape[-2]


def gauge_bivector_derivative(
    u: NDArray,
    direction: NDArray,
    c: GaugeConnection,
) -> NDArray[np.float64]:
    """Derivative of a bundle field along a bivector direction.

    The fifth-direction part of the direction drives plain transport of
    each component; the connection coefficients act algebraically
    through the full direction.
    """
    u = np.asarray(u, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if u.shape[-1] != c.n:
        raise ValueError(f"bundle field has {u.shape[-1]} components, connection expects {c.n}")
    if direction.shape[-1] != 10:
        raise ValueError(f"direction must end in axis 10, got {direction.shape}")
    out = np.zeros(np.broadcast_shapes(u.shape, direction.shape[:-1] + (c.n,)))
    for mu, slot in enumerate(E_SLOTS):
        out += direction[..., slot, None] * partial_derivative(u, mu, c.grid)
    out += np.einsum("...ijs,...s,...j->...i", c.c, direction, u)
    return out


def gauge_transform(c: GaugeConnection, lam: NDArray) -> GaugeConnection:
    """Frame change of the bundle connection.

    Fifth-direction slots pick up the inhomogeneous derivative term;
    spacetime-spacetime slots conjugate tensorially.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape[-2:] != (c.n, c.n):
        raise ValueError(f"frame must end in ({c.n}, {c.n}), got {lam.shape}")
    det = np.linalg.det(lam)
    if np.any(np.abs(det) < 1e-12):
        raise ValueError("frame field is singular at some grid point")
    lam_inv = np.linalg.inv(lam)
    new = np.einsum("...ik,...klS,...lj->...ijS", lam_inv, c.c, lam)
    for mu, slot in enumerate(E_SLOTS):
        new[..., slot] += lam_inv @ partial_derivative(lam, mu, c.grid)
    return GaugeConnection(new, c.grid)


def five_gauge_from_bivector(c: GaugeConnection, s: ContorsionForm) -> NDArray[np.float64]:
    """Five-vector gauge fields induced by the bivector ones.

    B_a = C_{a5} + sum over canonical spacetime pairs of
    C_{mn} s^{mn}_a for a < 4, and B_5 is the same pair sum with the
    fifth lower index.  Shape ``(..., n, n, 5)``.
    """
    b = np.zeros(c.c.shape[:-1] + (5,))
    b[..., :4] = c.c[..., list(E_SLOTS)]
    for slot in Z_SLOTS:
        i, j = ADJ_PAIRS[slot]
        b += c.c[..., slot, None] * s.s_upper[..., i, j, None, None, :]
    return b


def gauge_field_strength(
    c: GaugeConnection,
    metric: MetricField,
    gamma: Connection4,
) -> NDArray[np.float64]:
    """Field strength of a bundle connection over slot pairs.

    Shape ``(..., 10, 10, n, n)``, antisymmetric in the slot axes.
    Assembled as the directional-derivative difference plus the
    coefficient commutator, minus the contraction with the halved
    basis structure functions.
    """
    q = q_constants(metric, gamma, "halved")
    n = c.n
    dc = [partial_derivative(c.c, mu, c.grid) for mu in range(4)]
    e_dir = {slot: mu for mu, slot in enumerate(E_SLOTS)}
    f = np.zeros(c.grid.shape + (10, 10, n, n))
    for a in range(10):
        ca = c.c[..., a]
        for b in range(a + 1, 10):
            cb = c.c[..., b]
            term = ca @ cb - cb @ ca
            if a in e_dir:
                term = term + dc[e_dir[a]][..., b]
            if b in e_dir:
                term = term - dc[e_dir[b]][..., a]
            term = term - np.einsum("...ijs,...s->...ij", c.c, q[..., :, a, b])
            f[..., a, b, :, :] = term
            f[..., b, a, :, :] = -term
    return f


def gauge_curvature_operator(
    x: NDArray,
    y: NDArray,
    u: NDArray,
    c: GaugeConnection,
    conn: BivectorConnection,
    convention: str = "halved",
) -> NDArray[np.float64]:
    """[D_x, D_y]u - D_[x,y]u on a bundle field."""
    dyu = gauge_bivector_derivative(u, y, c)
    dxu = gauge_bivector_derivative(u, x, c)
    out = gauge_bivector_derivative(dyu, x, c) - gauge_bivector_derivative(dxu, y, c)
    bracket = bivector_commutator(x, y, conn, convention)
    return out - gauge_bivector_derivative(u, bracket, c)


def gauge_bianchi_residual(
    a: NDArray,
    b: NDArray,
    c_dir: NDArray,
    u: NDArray,
    c: GaugeConnection,
    metric: MetricField,
    gamma: Connection4,
    convention: str = "halved",
) -> NDArray[np.float64]:
    """Differential identity of the gauge field strength probed on a
    bundle test field; converges to zero at second order."""
    conn = bivector_connection_G(metric, gamma, "with-translation")
    total = np.zeros(np.asarray(u, dtype=float).shape)
    for x, y, z in ((a, b, c_dir), (b, c_dir, a), (c_dir, a, b)):
        curv_u = gauge_curvature_operator(y, z, u, c, conn, convention)
        du = gauge_bivector_derivative(u, x, c)
        total = total + gauge_bivector_derivative(curv_u, x, c)
        total = total - gauge_curvature_operator(y, z, du, c, conn, convention)
        bracket = bivector_commutator(y, z, conn, convention)
        total = total + gauge_curvature_operator(x, bracket, u, c, conn, convention)
    defect = jacobi_defect(a, b, c_dir, riemann_tensor(gamma))
    return total - gauge_bivector_derivative(u, defect, c)


def five_vector_bracket(u: NDArray, v: NDArray, grid: Grid4) -> NDArray[np.float64]:
    """Coordinate bracket of five-vector fields: spacetime components
    differentiate, the fifth direction is inert as a direction."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    out = np.zeros(np.broadcast_shapes(u.shape, v.shape))
    for beta in range(4):
        out += u[..., beta, None] * partial_derivative(v, beta, grid)
        out -= v[..., beta, None] * partial_derivative(u, beta, grid)
    return out


def five_gauge_strength(b: NDArray, grid: Grid4) -> NDArray[np.float64]:
    """Field strength of five-vector gauge fields.

    F_AB = d_A B_B - d_B B_A + [B_A, B_B] with no derivative along the
    fifth direction.  Shape ``(..., 5, 5, n, n)``.
    """
    b = np.asarray(b, dtype=float)
    n = b.shape[-2]
    db = [partial_derivative(b, mu, grid) for mu in range(4)]
    f = np.zeros(grid.shape + (5, 5, n, n))
    for i in range(5):
        bi = b[..., i]
        for j in range(i + 1, 5):
            bj = b[..., j]
            term = bi @ bj - bj @ bi
            if i < 4:
                term = term + db[i][..., j]
            if j < 4:
                term = term - db[j][..., i]
            f[..., i, j, :, :] = term
            f[..., j, i, :, :] = -term
    return f


def gauge_directional_derivative(
    psi: NDArray,
    u: NDArray,
    b: NDArray,
    grid: Grid4,
) -> NDArray[np.float64]:
    """Five-vector gauge-covariant derivative of a bundle field:
    spacetime components transport and couple, the fifth component
    couples algebraically."""
    psi = np.asarray(psi, dtype=float)
    u = np.asarray(u, dtype=float)
    out = np.zeros(np.broadcast_shapes(psi.shape, u.shape[:-1] + psi.shape[-1:]))
    for beta in range(4):
        coupled = partial_derivative(psi, beta, grid)
        coupled += np.einsum("...ij,...j->...i", b[..., beta], psi)
        out += u[..., beta, None] * coupled
    out += u[..., 4, None] * np.einsum("...ij,...j->...i", b[..., 4], psi)
    return out


def df_zero_check(
    psi: NDArray,
    u: NDArray,
    v: NDArray,
    w: NDArray,
    b: NDArray,
    grid: Grid4,
) -> NDArray[np.float64]:
    """Closure identity of the five-vector gauge field strength.

    Probes the cyclic operator sum of the commutator of the covariant
    derivative with the contracted field strength, plus the strength
    contracted with bracketed directions, on a bundle test field.
    Second-order small on smooth data; zero for pure-gauge fields.
    """
    f = five_gauge_strength(b, grid)

    def f_of(x: NDArray, y: NDArray) -> NDArray:
        return np.einsum("...a,...b,...abij->...ij", x, y, f)

    total = np.zeros(np.asarray(psi, dtype=float).shape)
    for x, y, z in ((u, v, w), (v, w, u), (w, u, v)):
        fyz = f_of(y, z)
        fyz_psi = np.einsum("...ij,...j->...i", fyz, psi)
        total = total + gauge_directional_derivative(fyz_psi, x, b, grid)
        dpsi = gauge_directional_derivative(psi, x, b, grid)
        total = total - np.einsum("...ij,...j->...i", fyz, dpsi)
        bracket = five_vector_bracket(y, z, grid)
        total = total + np.einsum("...ij,...j->...i", f_of(x, bracket), psi)
    return total
