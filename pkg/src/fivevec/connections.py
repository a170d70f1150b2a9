"""Connection structures and covariant derivative operators.

Index layout conventions used throughout:

* ``Connection4.gamma[..., a, b, m]`` holds Gamma^a_{b m} with ``b`` the
  object index and ``m`` the direction (coordinate axis).
* ``FiveConnection.h[..., A, B, C]`` holds H^A_{B C}, direction last;
  the fifth direction is array position 4 and carries no partial
  derivative (fields never depend on it).
* Torsion arrays keep the raised index last: ``T[..., m, n, a]`` is
  T_{mn}{}^a = (1/2)(Gamma^a_{mn} - Gamma^a_{nm}).
* ``BivectorConnection.g_table[..., A, B, s]`` holds the five-by-five
  coefficient matrix for adjoint slot ``s``.

All grids are coordinate-aligned: basis vector mu points along grid
axis mu, so directional partials are plain axis derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .algebra import (
    ADJ_PAIRS,
    E_SLOTS,
    FIFTH,
    Z_SLOTS,
    bivector_action,
    expand_bivector,
    m_matrix_4,
    restrict_bivector,
)
from .lattice import Grid4, MetricField, partial_derivative

__all__ = [
    "Connection4",
    "ContorsionForm",
    "FiveConnection",
    "BivectorConnection",
    "levi_civita",
    "torsion_of_connection",
    "torsion_trace",
    "contorsion_from_torsion",
    "torsion_from_contorsion",
    "sigma_map",
    "torsionful_connection",
    "five_connection_sigma",
    "five_connection_local_symmetric",
    "bivector_connection_G",
    "affine_bivector_connection",
    "covariant_derivative",
    "bivector_derivative",
    "five_torsion",
    "torsion_trace_5",
    "modified_divergence",
]


@dataclass(frozen=True)
class Connection4:
    """Linear connection on four-vector fields."""

    gamma: NDArray[np.float64]  # (..., 4, 4, 4), Gamma^a_{bm}
    grid: Grid4
    torsionfree: bool = True

    def __post_init__(self) -> None:
        gamma = np.asarray(self.gamma, dtype=float)
        if gamma.shape != self.grid.shape + (4, 4, 4):
            raise ValueError(f"connection shape {gamma.shape} does not match grid")
        if self.torsionfree and not np.array_equal(gamma, np.swapaxes(gamma, -1, -2)):
            raise ValueError("torsion-free connection must be symmetric in its lower indices")
        object.__setattr__(self, "gamma", gamma)


@dataclass(frozen=True)
class ContorsionForm:
    """Bivector-valued 1-form entering the sigma map.

    ``s_upper[..., a, b, C]`` holds the free components S^{ab}_C,
    antisymmetric in (a, b); C runs over the five directions, with C = 4
    the fifth-direction component.  The fifth-slot rows of the full
    adjoint table are fixed once and for all: s^{a5}_A = delta^a_A on
    spacetime indices and s^{a5}_5 = 0.
    """

    s_upper: NDArray[np.float64]  # (..., 4, 4, 5)

    def __post_init__(self) -> None:
        s = np.asarray(self.s_upper, dtype=float)
        if s.shape[-3:] != (4, 4, 5):
            raise ValueError(f"expected trailing (4, 4, 5) axes, got {s.shape}")
        if not np.array_equal(s, -np.swapaxes(s, -2, -3)):
            raise ValueError("S^{ab}_C must be exactly antisymmetric in a, b")
        object.__setattr__(self, "s_upper", s)

    @classmethod
    def zeros(cls, lead_shape: tuple[int, ...] = ()) -> "ContorsionForm":
        return cls(np.zeros(tuple(lead_shape) + (4, 4, 5)))

    def table(self) -> NDArray[np.float64]:
        """Full adjoint table s^{KL}_A, shape ``(..., 10, 5)``."""
        lead = self.s_upper.shape[:-3]
        out = np.zeros(lead + (10, 5))
        for slot in Z_SLOTS:
            i, j = ADJ_PAIRS[slot]
            out[..., slot, :] = self.s_upper[..., i, j, :]
        for mu, slot in enumerate(E_SLOTS):
            out[..., slot, mu] = 1.0
        return out

    def lowered(self, g: NDArray) -> NDArray[np.float64]:
        """s^a_{bC} = g_{bw} S^{aw}_C, shape ``(..., 4, 4, 5)``."""
        return np.einsum("...bw,...awc->...abc", np.asarray(g, dtype=float), self.s_upper)


@dataclass(frozen=True)
class FiveConnection:
    """Connection on five-vector fields (direction index last)."""

    h: NDArray[np.float64]  # (..., 5, 5, 5), H^A_{BC}
    grid: Grid4
    kind: str = "custom"

    def __post_init__(self) -> None:
        h = np.asarray(self.h, dtype=float)
        if h.shape != self.grid.shape + (5, 5, 5):
            raise ValueError(f"connection shape {h.shape} does not match grid")
        object.__setattr__(self, "h", h)


@dataclass(frozen=True)
class BivectorConnection:
    """Coefficient table for derivatives along adjoint directions."""

    g_table: NDArray[np.float64]  # (..., 5, 5, 10)
    grid: Grid4
    convention: str

    def __post_init__(self) -> None:
        g_table = np.asarray(self.g_table, dtype=float)
        if g_table.shape != self.grid.shape + (5, 5, 10):
            raise ValueError(f"coefficient table shape {g_table.shape} does not match grid")
        object.__setattr__(self, "g_table", g_table)


def levi_civita(metric: MetricField) -> Connection4:
    """Torsion-free metric-compatible connection from finite differences."""
    g = metric.g
    grid = metric.grid
    dg = np.stack([partial_derivative(g, m, grid) for m in range(4)], axis=-1)
    # C_{sbm} = (d_b g_{sm} + d_m g_{sb} - d_s g_{bm}) / 2
    c = 0.5 * (np.swapaxes(dg, -1, -2) + dg - np.moveaxis(dg, -1, -3))
    gamma = np.einsum("...as,...sbm->...abm", metric.inverse, c)
    return Connection4(gamma, grid, torsionfree=True)


def torsion_of_connection(conn: Connection4) -> NDArray[np.float64]:
    """T_{mn}{}^a = (1/2)(Gamma^a_{mn} - Gamma^a_{nm}), raised index last."""
    gamma = conn.gamma
    t = 0.5 * (gamma - np.swapaxes(gamma, -1, -2))
    return np.moveaxis(t, -3, -1)


def torsion_trace(torsion: NDArray) -> NDArray[np.float64]:
    """T_m = T_{mw}{}^w, shape ``(..., 4)``."""
    t = np.asarray(torsion, dtype=float)
    return np.einsum("...mww->...m", t)


def contorsion_from_torsion(torsion: NDArray, g: NDArray) -> ContorsionForm:
    """Recover the antisymmetric contorsion block from a torsion tensor.

    S^{ab}_m = g^{as} g^{bt} (T_{stm} - T_{tms} - T_{mst}) with
    T_{stm} = T_{st}{}^w g_{wm}.  The fifth-direction column stays zero.
    """
    torsion = np.asarray(torsion, dtype=float)
    g = np.asarray(g, dtype=float)
    if not np.array_equal(torsion, -np.swapaxes(torsion, -3, -2)):
        raise ValueError("torsion must be exactly antisymmetric in its first two indices")
    ginv = np.linalg.inv(g)
    t_low = np.einsum("...stw,...wm->...stm", torsion, g)
    combo = t_low - np.moveaxis(t_low, (-3, -2, -1), (-1, -3, -2)) - np.moveaxis(
        t_low, (-3, -2, -1), (-2, -1, -3)
    )
    s4 = np.einsum("...as,...bt,...stm->...abm", ginv, ginv, combo)
    # antisymmetric by construction; enforce it exactly against rounding
    s4 = 0.5 * (s4 - np.swapaxes(s4, -3, -2))
    s_upper = np.zeros(s4.shape[:-1] + (5,))
    s_upper[..., :4] = s4
    return ContorsionForm(s_upper)


def torsion_from_contorsion(s: ContorsionForm, g: NDArray) -> NDArray[np.float64]:
    """T_{mn}{}^a = -(1/2)(s^a_{mn} - s^a_{nm}) from the spacetime block."""
    low = s.lowered(g)[..., :4]  # s^a_{bm}
    t = -0.5 * (low - np.swapaxes(low, -1, -2))
    return np.moveaxis(t, -3, -1)


def sigma_map(s: ContorsionForm, u: NDArray) -> NDArray[np.float64]:
    """Adjoint vector sigma(u)^{KL} = s^{KL}_A u^A for a five-vector u."""
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != 5:
        raise ValueError(f"expected a five-vector with trailing axis 5, got {u.shape}")
    return np.einsum("...ka,...a->...k", s.table(), u)


def torsionful_connection(gamma: Connection4, s: ContorsionForm, metric: MetricField) -> Connection4:
    """Metric-compatible connection with torsion: Gamma - s^a_{bm}."""
    low = s.lowered(metric.g)[..., :4]
    return Connection4(gamma.gamma - low, gamma.grid, torsionfree=False)


def five_connection_sigma(
    metric: MetricField, s: ContorsionForm, gamma: Connection4
) -> FiveConnection:
    """Five-vector connection whose derivative matches the adjoint
    derivative along sigma(u) on every five-vector field.

    Nonzero blocks: H^a_{bm} = Gamma^a_{bm} - s^a_{bm}, H^a_{b5} =
    -s^a_{b5}, H^5_{bm} = -g_{bm}.
    """
    low = s.lowered(metric.g)  # (..., 4, 4, 5)
    h = np.zeros(metric.grid.shape + (5, 5, 5))
    h[..., :4, :4, :4] = gamma.gamma - low[..., :4]
    h[..., :4, :4, 4] = -low[..., 4]
    h[..., 4, :4, :4] = -metric.g
    return FiveConnection(h, metric.grid, kind="sigma-compatible")


def five_connection_local_symmetric(
    metric: MetricField, omega: float, gamma: Connection4
) -> FiveConnection:
    """Locally symmetric five-vector connection.

    Nonzero blocks: H^a_{bm} = Gamma^a_{bm}, H^5_{bm} = -g_{bm},
    H^5_{55} = omega.  Its four-vector torsion vanishes identically.
    """
    h = np.zeros(metric.grid.shape + (5, 5, 5))
    h[..., :4, :4, :4] = gamma.gamma
    h[..., 4, :4, :4] = -metric.g
    h[..., 4, 4, 4] = float(omega)
    return FiveConnection(h, metric.grid, kind="locally-symmetric")


def bivector_connection_G(
    metric: MetricField, gamma: Connection4, convention: str = "with-translation"
) -> BivectorConnection:
    """Coefficient table for the bivector derivative in a regular basis.

    Spacetime slots (m, n) carry the rotation generators of
    :func:`fivevec.algebra.m_matrix_4` embedded in the upper 4x4 block.
    Fifth-direction slots (m, 5) carry the transport coefficients
    Gamma^a_{bm}; the with-translation convention adds the bottom row
    G^5_{b m5} = -g_{bm}, while rotation-only leaves that row zero.
    """
    if convention not in ("with-translation", "rotation-only"):
        raise ValueError(f"unknown convention {convention!r}")
    table = np.zeros(metric.grid.shape + (5, 5, 10))
    for slot in Z_SLOTS:
        table[..., :4, :4, slot] = m_matrix_4(ADJ_PAIRS[slot], metric.g)
    for mu, slot in enumerate(E_SLOTS):
        table[..., :4, :4, slot] = gamma.gamma[..., :, :, mu]
        if convention == "with-translation":
            table[..., 4, :4, slot] = -metric.g[..., mu, :]
    return BivectorConnection(table, metric.grid, convention)


def affine_bivector_connection(metric: MetricField, h5: FiveConnection) -> BivectorConnection:
    """Variant table whose fifth-direction slots act as the five-vector
    connection derivative; spacetime slots are unchanged."""
    table = np.zeros(metric.grid.shape + (5, 5, 10))
    for slot in Z_SLOTS:
        table[..., :4, :4, slot] = m_matrix_4(ADJ_PAIRS[slot], metric.g)
    for mu, slot in enumerate(E_SLOTS):
        table[..., :, :, slot] = h5.h[..., :, :, mu]
    return BivectorConnection(table, metric.grid, "affine")


def _contract_index(term_table: NDArray, field: NDArray, pos: int, raised: bool) -> NDArray:
    """Connection action on one tensor slot of ``field`` at axis ``pos``."""
    moved = np.moveaxis(field, pos, -1)
    if raised:
        acted = np.einsum("...ak,...k->...a", term_table, moved)
    else:
        acted = -np.einsum("...ka,...k->...a", term_table, moved)
    return np.moveaxis(acted, -1, pos)


def covariant_derivative(
    conn: Connection4 | FiveConnection,
    field: NDArray,
    axis: int,
    indices: str | None = None,
) -> NDArray[np.float64]:
    """Covariant derivative along one direction.

    ``indices`` spells the tensor character of the trailing axes, one
    letter per axis: "u" raised, "d" lowered; default all raised.  For a
    four-index connection ``axis`` is a coordinate axis 0..3; the
    five-index connection also accepts axis 4 (the fifth direction),
    which contributes no partial derivative.
    """
    field = np.asarray(field, dtype=float)
    if isinstance(conn, Connection4):
        table, dim, max_axis = conn.gamma, 4, 3
    elif isinstance(conn, FiveConnection):
        table, dim, max_axis = conn.h, 5, 4
    else:
        raise TypeError(f"unsupported connection type {type(conn).__name__}")
    if not 0 <= axis <= max_axis:
        raise ValueError(f"direction axis {axis} out of range for this connection")
    grid = conn.grid
    ncomp = field.ndim - len(grid.shape)
    if ncomp < 0 or field.shape[: len(grid.shape)] != grid.shape:
        raise ValueError(f"field shape {field.shape} does not sit on the connection grid")
    if indices is None:
        indices = "u" * ncomp
    if len(indices) != ncomp or any(c not in "ud" for c in indices):
        raise ValueError(f"indices spec {indices!r} does not match {ncomp} tensor axes")
    if any(field.shape[len(grid.shape) + i] != dim for i in range(ncomp)):
        raise ValueError(f"tensor axes of {field.shape} must all have size {dim}")

    out = (
        partial_derivative(field, axis, grid)
        if axis <= 3
        else np.zeros_like(field)
    )
    coeff = table[..., axis]  # (..., dim, dim)
    for i, char in enumerate(indices):
        pos = field.ndim - ncomp + i
        coeff_b = coeff.reshape(coeff.shape[: len(grid.shape)] + (1,) * (ncomp - 1) + (dim, dim))
        out = out + _contract_index(coeff_b, field, pos, raised=(char == "u"))
    return out


def _infer_kind(field: NDArray, grid: Grid4) -> str:
    trailing = field.shape[len(grid.shape):]
    if trailing == ():
        return "scalar"
    if trailing == (4,):
        return "four-vector"
    if trailing == (5,):
        return "five-vector"
    if trailing == (10,):
        return "bivector"
    raise ValueError(f"cannot infer field kind from trailing axes {trailing}")


def bivector_derivative(
    field: NDArray,
    direction: NDArray,
    conn: BivectorConnection,
    kind: str | None = None,
) -> NDArray[np.float64]:
    """Derivative of a field along an adjoint (bivector) direction.

    The direction's fifth-direction components drive coordinate
    transport; its spacetime components act algebraically through the
    coefficient table.  Scalars feel only the transport part.
    """
    field = np.asarray(field, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if direction.shape[-1] != 10:
        raise ValueError(f"direction must have trailing adjoint axis 10, got {direction.shape}")
    grid = conn.grid
    if kind is None:
        kind = _infer_kind(field, grid)
    if kind not in ("scalar", "four-vector", "five-vector", "bivector"):
        raise ValueError(f"unsupported field kind {kind!r}")

    ncomp = field.ndim - len(grid.shape)
    direction = np.broadcast_to(direction, grid.shape + (10,))
    out = np.zeros_like(field)
    for mu, slot in enumerate(E_SLOTS):
        weight = direction[..., slot].reshape(direction.shape[:-1] + (1,) * ncomp)
        out = out + weight * partial_derivative(field, mu, grid)
    if kind == "scalar":
        return out

    # precontract the table with the direction once; the remaining work
    # is batched matrix algebra
    table = conn.g_table
    mdir = np.matmul(
        table.reshape(grid.shape + (25, 10)), direction[..., None]
    ).reshape(grid.shape + (5, 5))
    if kind == "four-vector":
        out = out + np.matmul(mdir[..., :4, :4], field[..., None])[..., 0]
    elif kind == "five-vector":
        out = out + np.matmul(mdir, field[..., None])[..., 0]
    else:  # bivector: act on both raised slots of the expanded form
        full = expand_bivector(field)
        acted = np.matmul(mdir, full) + np.matmul(full, np.swapaxes(mdir, -1, -2))
        out = out + restrict_bivector(acted)
    return out


def five_torsion(h5: FiveConnection) -> NDArray[np.float64]:
    """t_{KL}{}^A = (1/2)(H^A_{KL} - H^A_{LK}), raised index last."""
    t = 0.5 * (h5.h - np.swapaxes(h5.h, -1, -2))
    return np.moveaxis(t, -3, -1)


def torsion_trace_5(t5: NDArray) -> NDArray[np.float64]:
    """t_A = t_{AK}{}^K, shape ``(..., 5)``."""
    t5 = np.asarray(t5, dtype=float)
    return np.einsum("...akk->...a", t5)


def modified_divergence(
    m_field: NDArray,
    h5: FiveConnection,
    t5: NDArray | None = None,
) -> NDArray[np.float64]:
    """Torsion-corrected covariant divergence of a mixed current.

    ``m_field`` has shape ``(..., 5, 10)``: one raised five-index and a
    lowered adjoint pair.  Returns the canonical components of
    sum_A (div_A M)^A_{BC} - 2 t_{AK}{}^K M^A_{BC}, where div is the
    five-connection covariant derivative.
    """
    m_field = np.asarray(m_field, dtype=float)
    if m_field.shape[-2:] != (5, 10):
        raise ValueError(f"expected trailing (5, 10) axes, got {m_field.shape}")
    if t5 is None:
        t5 = five_torsion(h5)
    trace = torsion_trace_5(t5)  # (..., 5)
    full = expand_bivector(m_field)  # (..., 5, 5, 5)
    lead = len(h5.grid.shape)
    acc = np.zeros(full.shape[:lead] + (5, 5))
    for a in range(5):
        d_full = covariant_derivative(h5, full, axis=a, indices="udd")
        acc = acc + d_full[..., a, :, :] - (
            2.0 * trace[..., a, None, None] * full[..., a, :, :]
        )
    return restrict_bivector(acc)
