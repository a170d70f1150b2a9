"""Einstein-analog tensors, stress currents, and the coupled field equations.

Index layouts: mixed Einstein tensor ``G[..., m, a]`` = G^m_a; modified
torsion ``tmod[..., a, m, n]`` = T*^a_{mn} (raised index first); the
rank-3 analogs Y and Z are stored ``(..., 5, 5, 5)`` as Y^A_{BC},
antisymmetric in (B, C); matter currents ``(..., 5, 10)`` with a raised
five-index and a lowered adjoint pair in canonical slot order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np
from numpy.typing import NDArray

from .algebra import ADJ_PAIRS, E_SLOTS, m_matrix_4
from .connections import (
    Connection4,
    ContorsionForm,
    FiveConnection,
    covariant_derivative,
    five_torsion,
    levi_civita,
    modified_divergence,
    torsion_of_connection,
    torsion_trace,
    torsionful_connection,
)
from .curvature import five_curvature, k_tensor, riemann_tensor
from .lattice import MetricField, partial_derivative

__all__ = [
    "Constants",
    "MatterSources",
    "perm_symbol",
    "einstein_tensor",
    "modified_torsion",
    "y3_tensor",
    "y4_tensor",
    "y_tensor_closed",
    "z_tensor",
    "delta_tensor",
    "stress_tensor_components",
    "extended_k_contraction",
    "conservation_residual",
    "star_divergence_4",
    "identity_tmod_divergence",
    "identity_einstein_divergence",
    "field_equation_residuals",
    "kibble_sciama_residual",
    "kibble_sciama_solve",
]


@dataclass(frozen=True)
class Constants:
    """Coupling constants of the assembled equations.

    ``k`` is the gravitational coupling, ``kappa`` the inverse-length
    scale of the fifth direction, ``varrho`` a dimensionless sign-like
    factor, ``epsilon_sign`` and ``xi_sign`` orientation signs, and
    ``omega`` the free coefficient of the locally symmetric connection.
    """

    k: float = 1.0
    kappa: float = 1.0
    varrho: float = 1.0
    epsilon_sign: int = 1
    omega: float = 0.0
    xi_sign: int = 1

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.epsilon_sign not in (-1, 1):
            raise ValueError(f"epsilon_sign must be +-1, got {self.epsilon_sign}")
        if self.xi_sign not in (-1, 1):
            raise ValueError(f"xi_sign must be +-1, got {self.xi_sign}")

    @property
    def h55(self) -> float:
        return 1.0 / self.kappa**2


@dataclass(frozen=True)
class MatterSources:
    """Source fields for the assembled equations.

    ``theta[..., m, a]`` is the stress-energy tensor Theta^m_a;
    ``spin[..., a, m, n]`` the spin current, antisymmetric in (m, n);
    ``xi[..., m, n]`` the antisymmetric source of the torsion-trace
    sector.
    """

    theta: NDArray[np.float64]
    spin: NDArray[np.float64]
    xi: NDArray[np.float64]

    def __post_init__(self) -> None:
        theta = np.asarray(self.theta, dtype=float)
        spin = np.asarray(self.spin, dtype=float)
        xi = np.asarray(self.xi, dtype=float)
        if theta.shape[-2:] != (4, 4) or spin.shape[-3:] != (4, 4, 4) or xi.shape[-2:] != (4, 4):
            raise ValueError("source shapes must end in (4,4), (4,4,4) and (4,4)")
        if not np.array_equal(spin, -np.swapaxes(spin, -1, -2)):
            raise ValueError("spin source must be exactly antisymmetric in its last two indices")
        if not np.array_equal(xi, -np.swapaxes(xi, -1, -2)):
            raise ValueError("xi source must be exactly antisymmetric")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "spin", spin)
        object.__setattr__(self, "xi", xi)


def perm_symbol(n: int = 5) -> NDArray[np.float64]:
    """Totally antisymmetric permutation symbol with [0, 1, ..., n-1] = +1."""
    out = np.zeros((n,) * n)
    for perm in permutations(range(n)):
        sign = 1.0
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        out[perm] = sign
    return out


_PERM5 = perm_symbol(5)


def einstein_tensor(riemann: NDArray, metric: MetricField) -> NDArray[np.float64]:
    """Mixed Einstein tensor G^m_a = R^m_a - (1/2) delta^m_a R built
    from a (possibly torsionful) curvature tensor."""
    riemann = np.asarray(riemann, dtype=float)
    if riemann.shape[-4:] != (4, 4, 4, 4):
        raise ValueError(f"curvature tensor must end in (4,4,4,4), got {riemann.shape}")
    ricci = np.einsum("...aban->...bn", riemann)
    mixed = np.einsum("...mb,...ba->...ma", metric.inverse, ricci)
    scalar = np.einsum("...aa->...", mixed)
    return mixed - 0.5 * scalar[..., None, None] * np.eye(4)


def modified_torsion(torsion: NDArray) -> NDArray[np.float64]:
    """T*^a_{mn} = T_{mn}{}^a + delta^a_m T_n - delta^a_n T_m with
    T_n = T_{nw}{}^w.  The raised index comes first in the output."""
    torsion = np.asarray(torsion, dtype=float)
    trace = torsion_trace(torsion)
    tmod = np.moveaxis(torsion, -1, -3).copy()
    eye = np.eye(4)
    tmod += eye[..., :, :, None] * trace[..., None, None, :]
    tmod -= eye[..., :, None, :] * trace[..., None, :, None]
    return tmod


def _extended_k(kfull: NDArray) -> NDArray[np.float64]:
    """Extend the curvature form's direction pair by one index.

    Output ``(..., 5, 5, 5, 5, 5)`` indexed (P, Q, R, S, T): zero unless
    the pair (R, S) contains the fifth direction, in which case it
    reduces to the original table with direction pair (spacetime index,
    extra index T).
    """
    kfull = np.asarray(kfull, dtype=float)
    ext = np.zeros(kfull.shape[:-2] + (5, 5, 5))
    for m in range(4):
        ext[..., m, 4, :] = kfull[..., m, :]
        ext[..., 4, m, :] = -kfull[..., m, :]
    return ext


def y4_tensor(kfull: NDArray, sign: int = 1) -> NDArray[np.float64]:
    """Rank-4 double-dual contraction of the curvature form.

    Y4^{AB}_{CD} = -(sign/4) [CDXRQ] [STXAB] K^{RQ}_{ST} with plain
    permutation symbols and unrestricted sums.  With ``sign=+1`` the
    (m5, a5) block reproduces the mixed Einstein tensor.
    """
    kfull = np.asarray(kfull, dtype=float)
    return (-0.25 * sign) * np.einsum(
        "cdxrq,stxab,...rqst->...abcd", _PERM5, _PERM5, kfull, optimize=True
    )


def y3_tensor(kfull: NDArray, sign: int = 1) -> NDArray[np.float64]:
    """Rank-3 Einstein-tensor analog, shape ``(..., 5, 5, 5)``.

    Y^A_{BC} = -(sign/8) [BCXPQ] [RSTXA] K_ext^{PQ}_{RST}, where K_ext
    extends the curvature form's direction pair by one index.
    """
    ext = _extended_k(kfull)
    return (-0.125 * sign) * np.einsum(
        "bcxpq,rstxa,...pqrst->...abc", _PERM5, _PERM5, ext, optimize=True
    )


def y_tensor_closed(einstein: NDArray, tmod: NDArray) -> NDArray[np.float64]:
    """Closed-form blocks of the rank-3 analog: Y^a_{m5} = -G^a_m,
    Y^a_{mn} = -2 T*^a_{mn}, fifth row zero."""
    einstein = np.asarray(einstein, dtype=float)
    tmod = np.asarray(tmod, dtype=float)
    y = np.zeros(einstein.shape[:-2] + (5, 5, 5))
    y[..., :4, :4, :4] = -2.0 * tmod
    y[..., :4, :4, 4] = -einstein
    y[..., :4, 4, :4] = einstein
    return y


def _s5_lowered(s5: NDArray, metric: MetricField, h55: float) -> NDArray[np.float64]:
    """s_{mn}{}^5 = h55 g_{ma} g_{nb} s5^{ab}."""
    return h55 * np.einsum("...ma,...nb,...ab->...mn", metric.g, metric.g, s5)


def z_tensor(s5: NDArray, metric: MetricField, h55: float) -> NDArray[np.float64]:
    """Quadratic torsion-trace tensor, shape ``(..., 5, 5, 5)``.

    Z^a_{m5} = delta^a_m times the canonical-pair sum of
    s5^{st} s_{st}{}^5, and Z^5_{mn} = -2 s_{mn}{}^5; every other block
    vanishes.
    """
    s5 = np.asarray(s5, dtype=float)
    if s5.shape[-2:] != (4, 4) or not np.array_equal(s5, -np.swapaxes(s5, -1, -2)):
        raise ValueError("s5 must end in an exactly antisymmetric (4, 4) block")
    s_low = _s5_lowered(s5, metric, h55)
    scalar = 0.5 * np.einsum("...ab,...ab->...", s5, s_low)
    z = np.zeros(s5.shape[:-2] + (5, 5, 5))
    eye = np.eye(4)
    z[..., :4, :4, 4] = scalar[..., None, None] * eye
    z[..., :4, 4, :4] = -scalar[..., None, None] * eye
    z[..., 4, :4, :4] = -2.0 * s_low
    return z


def delta_tensor() -> NDArray[np.float64]:
    """Projection table delta^A_{BC} over canonical slots, shape (5, 10).

    Contracting it with adjoint components extracts their
    fifth-direction part as a spacetime-valued five-vector.
    """
    out = np.zeros((5, 10))
    for mu, slot in enumerate(E_SLOTS):
        out[mu, slot] = 1.0
    return out


def _dbar_slots(
    u: NDArray,
    h5: FiveConnection,
    metric: MetricField,
    kind: str,
    e_slot_derivative: str,
) -> NDArray[np.float64]:
    """All ten adjoint-direction derivatives of one matter field.

    Returns ``(..., 10)`` for scalars and ``(..., 10, 5)`` for
    five-vectors, slot axis before the component axis.  Rotation-slot
    action on five-vectors touches only the spacetime components.
    """
    grid = h5.grid
    u = np.asarray(u, dtype=float)
    if kind == "scalar":
        out = np.zeros(grid.shape + (10,))
        for mu, slot in enumerate(E_SLOTS):
            out[..., slot] = partial_derivative(u, mu, grid)
        return out
    if kind != "five-vector":
        raise ValueError(f"unsupported matter field kind {kind!r}")
    out = np.zeros(grid.shape + (10, 5))
    gamma_dot = levi_civita(metric) if e_slot_derivative == "plain" else None
    for mu, slot in enumerate(E_SLOTS):
        if e_slot_derivative == "affine":
            out[..., slot, :] = covariant_derivative(h5, u, axis=mu)
        else:
            d = partial_derivative(u, mu, grid)
            d[..., :4] += np.einsum(
                "...ab,...b->...a", gamma_dot.gamma[..., mu], u[..., :4]
            )
            out[..., slot, :] = d
    for slot, pair in enumerate(ADJ_PAIRS):
        if slot in E_SLOTS:
            continue
        m4 = m_matrix_4(pair, metric.g)
        out[..., slot, :4] = np.einsum("...ab,...b->...a", m4, u[..., :4])
    return out


def stress_tensor_components(
    l_value: NDArray,
    panel: list[tuple[NDArray, NDArray, str]],
    h5: FiveConnection,
    metric: MetricField,
    e_slot_derivative: str = "affine",
) -> NDArray[np.float64]:
    """Canonical matter current M^A_{CD}, shape ``(..., 5, 10)``.

    ``panel`` lists (momentum, field, kind) triples: scalar momenta
    have shape ``(..., 5)``; five-vector momenta ``(..., 5, 5)``
    indexed (derivative direction, field component).  The projection
    table carries the scalar ``l_value``; each entry subtracts its
    momentum contracted with the field's adjoint-direction
    derivatives.  ``e_slot_derivative`` picks the transport used on
    the fifth-direction slots: "affine" (full five-connection) or
    "plain" (torsion-free part only); the two agree on scalars.
    """
    if e_slot_derivative not in ("affine", "plain"):
        raise ValueError(f"unknown e_slot_derivative {e_slot_derivative!r}")
    l_value = np.asarray(l_value, dtype=float)
    out = np.zeros(h5.grid.shape + (5, 10))
    out += delta_tensor() * l_value[..., None, None]
    for pi, u, kind in panel:
        pi = np.asarray(pi, dtype=float)
        dbar = _dbar_slots(u, h5, metric, kind, e_slot_derivative)
        if kind == "scalar":
            if pi.shape[-1:] != (5,):
                raise ValueError(f"scalar momentum must end in axis 5, got {pi.shape}")
            out -= pi[..., :, None] * dbar[..., None, :]
        else:
            if pi.shape[-2:] != (5, 5):
                raise ValueError(f"five-vector momentum must end in (5, 5), got {pi.shape}")
            out -= np.einsum("...ab,...sb->...as", pi, dbar)
    return out


def extended_k_contraction(m_field: NDArray, kfull: NDArray) -> NDArray[np.float64]:
    """Source side of the conservation law, shape ``(..., 10)``.

    Only the fifth-direction rows are nonzero; each is the restricted
    pair sum M^A_{|ST|} K^{ST}_{m A}.
    """
    m_field = np.asarray(m_field, dtype=float)
    kfull = np.asarray(kfull, dtype=float)
    if m_field.shape[-2:] != (5, 10):
        raise ValueError(f"current must end in (5, 10), got {m_field.shape}")
    k_restr = np.stack([kfull[..., s, t, :4, :] for s, t in ADJ_PAIRS], axis=-3)
    rows = np.einsum("...as,...sma->...m", m_field, k_restr)
    out = np.zeros(m_field.shape[:-2] + (10,))
    out[..., list(E_SLOTS)] = rows
    return out


def conservation_residual(
    m_field: NDArray,
    h5: FiveConnection,
    metric: MetricField,
) -> NDArray[np.float64]:
    """Torsion-corrected divergence of the current minus its curvature
    source term, in canonical adjoint components."""
    t5 = five_torsion(h5)
    lhs = modified_divergence(m_field, h5, t5)
    kfull = k_tensor(five_curvature(h5), metric)
    return lhs - extended_k_contraction(m_field, kfull)


def star_divergence_4(
    x_field: NDArray,
    conn: Connection4,
    torsion: NDArray,
    indices: str,
) -> NDArray[np.float64]:
    """Torsion-corrected divergence over the first (raised) tensor axis.

    Returns sum_a (D_a X)^a_... - 2 T_a X^a_... where T_a is the
    torsion trace.  ``indices`` describes every tensor axis of
    ``x_field``, divergence axis included (it must be first and "u").
    """
    x_field = np.asarray(x_field, dtype=float)
    if not indices.startswith("u"):
        raise ValueError("divergence axis must be the first tensor axis, raised")
    lead = x_field.ndim - len(indices)
    acc = np.zeros(x_field.shape[:lead] + x_field.shape[lead + 1:])
    for a in range(4):
        d = covariant_derivative(conn, x_field, axis=a, indices=indices)
        acc += np.take(d, a, axis=lead)
    trace = torsion_trace(torsion)
    moved = np.moveaxis(x_field, lead, -1)
    shaped = trace.reshape(trace.shape[:lead] + (1,) * (moved.ndim - lead - 1) + (4,))
    return acc - 2.0 * np.sum(shaped * moved, axis=-1)


def identity_tmod_divergence(
    metric: MetricField,
    s: ContorsionForm,
) -> NDArray[np.float64]:
    """Residual of: the corrected divergence of T* equals the
    antisymmetric part of the lowered Einstein tensor of the
    torsionful connection.  Shape ``(..., 4, 4)``."""
    gamma_dot = levi_civita(metric)
    ups = torsionful_connection(gamma_dot, s, metric)
    torsion = torsion_of_connection(ups)
    tmod = modified_torsion(torsion)
    lhs = star_divergence_4(tmod, ups, torsion, "udd")
    g_mixed = einstein_tensor(riemann_tensor(ups), metric)
    g_low = np.einsum("...mw,...wa->...ma", metric.g, g_mixed)
    rhs = 0.5 * (g_low - np.swapaxes(g_low, -1, -2))
    return lhs - rhs


def identity_einstein_divergence(
    metric: MetricField,
    s: ContorsionForm,
) -> NDArray[np.float64]:
    """Residual of the divergence identity for the Einstein-analog
    tensor of the torsionful connection.  Shape ``(..., 4)``.

    At zero torsion it reduces to the contracted differential identity
    of the torsion-free geometry.
    """
    gamma_dot = levi_civita(metric)
    ups = torsionful_connection(gamma_dot, s, metric)
    torsion = torsion_of_connection(ups)
    tmod = modified_torsion(torsion)
    riem = riemann_tensor(ups)
    g_mixed = einstein_tensor(riem, metric)
    lhs = star_divergence_4(g_mixed, ups, torsion, "ud")
    r_up = np.einsum("...tw,...swma->...stma", metric.inverse, riem)
    rhs = np.einsum("...stma,...ast->...m", r_up, tmod)
    rhs -= 2.0 * np.einsum("...mas,...as->...m", torsion, g_mixed)
    return lhs - rhs


def _dynamical_current(sources: MatterSources, h55: float) -> NDArray[np.float64]:
    """Canonical-slot current from the source fields, with the trace
    row of the fifth-direction slots set to zero."""
    full = np.zeros(sources.theta.shape[:-2] + (5, 5, 5))
    full[..., :4, :4, :4] = sources.spin
    full[..., :4, :4, 4] = -sources.theta
    full[..., :4, 4, :4] = sources.theta
    full[..., 4, :4, :4] = np.sqrt(h55) * sources.xi
    return np.stack([full[..., a, b] for a, b in ADJ_PAIRS], axis=-1)


def field_equation_residuals(
    metric: MetricField,
    s: ContorsionForm,
    sources: MatterSources,
    constants: Constants,
) -> dict[str, NDArray[np.float64]]:
    """Pointwise residuals of the coupled field equations.

    Keys: "stress", "spin", "s5" are the four-tensor forms;
    "y_stress", "y_spin", "y_s5" the five-tensor forms; "unified" the
    single canonical-slot equation (trace row of the current zeroed);
    "commute" the compatibility commutator of the stress and
    torsion-trace matrices; "proportionality" the torsion-trace sector
    restated through the derived proportionality constant.
    """
    k = constants.k
    h55 = constants.h55
    varrho = constants.varrho
    eps = varrho if h55 > 0 else -varrho
    root = np.sqrt(h55)

    gamma_dot = levi_civita(metric)
    ups = torsionful_connection(gamma_dot, s, metric)
    torsion = torsion_of_connection(ups)
    tmod = modified_torsion(torsion)
    g_mixed = einstein_tensor(riemann_tensor(ups), metric)
    g_low = np.einsum("...mw,...wa->...ma", metric.g, g_mixed)

    s5 = s.s_upper[..., 4]
    s_low = _s5_lowered(s5, metric, h55)
    scalar = 0.5 * np.einsum("...ab,...ab->...", s5, s_low)

    theta_low = np.einsum("...mw,...wa->...ma", metric.g, sources.theta)
    x_low = s_low / root

    stress = g_low - eps * scalar[..., None, None] * metric.g - k * theta_low
    spin = tmod + 0.5 * k * sources.spin
    s5_res = x_low + 0.5 * (k / eps) * sources.xi

    y_stress = -g_mixed + varrho * scalar[..., None, None] * np.eye(4) + k * sources.theta
    y_spin = -2.0 * tmod - k * sources.spin
    y_s5 = -2.0 * varrho * s_low - k * root * sources.xi

    lhs_full = y_tensor_closed(g_mixed, tmod) + varrho * z_tensor(s5, metric, h55)
    lhs_slots = np.stack([lhs_full[..., a, b] for a, b in ADJ_PAIRS], axis=-1)
    unified = lhs_slots - k * _dynamical_current(sources, h55)

    stress_mat = -h55 * sources.theta
    s_mixed = np.einsum("...nw,...mw->...mn", metric.g, s5)
    commute = stress_mat @ s_mixed - s_mixed @ stress_mat

    proportionality = -(varrho / k) * s_low - 0.5 * root * sources.xi

    return {
        "stress": stress,
        "spin": spin,
        "s5": s5_res,
        "y_stress": y_stress,
        "y_spin": y_spin,
        "y_s5": y_s5,
        "unified": unified,
        "commute": commute,
        "proportionality": proportionality,
    }


def kibble_sciama_residual(torsion: NDArray, spin: NDArray, k: float) -> NDArray[np.float64]:
    """Residual of the algebraic torsion-spin relation
    T*^a_{mn} + (k/2) Sigma^a_{mn}, shape ``(..., 4, 4, 4)``."""
    return modified_torsion(torsion) + 0.5 * k * np.asarray(spin, dtype=float)


def kibble_sciama_solve(spin: NDArray, k: float) -> NDArray[np.float64]:
    """Torsion solving the algebraic torsion-spin relation exactly.

    The trace-shifted map T -> T* scales the torsion trace by two, so
    it inverts in closed form: recover the trace from T* = -(k/2) Sigma
    and strip the delta terms.  Returns torsion in ``(..., m, n, a)``
    layout with the raised index last.
    """
    spin = np.asarray(spin, dtype=float)
    tmod = -0.5 * k * spin
    trace = 0.5 * np.einsum("...aan->...n", tmod)
    eye = np.eye(4)
    torsion_amn = tmod - eye[..., :, :, None] * trace[..., None, None, :]
    torsion_amn += eye[..., :, None, :] * trace[..., None, :, None]
    return np.moveaxis(torsion_amn, -3, -1)
