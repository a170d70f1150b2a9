"""Integration of adjoint-valued forms over parametrized surfaces.

Surfaces are analytic: the embedding, the transport map coefficients and
the integrand form are supplied as vectorized callables of spacetime
position, so quadrature points need not sit on any lattice.  All
integrals use midpoint quadrature (second-order accurate).

A rank-m form pairs with the wedge of the adjoint images of the m
tangent vectors; the pairing uses restricted (each slot pair once)
summation throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .connections import ContorsionForm

__all__ = [
    "ParametrizedSurface",
    "StokesReport",
    "unit_direction",
    "adjoint_tangent",
    "integral_first_kind",
    "integral_second_kind",
    "dual_form",
    "integral_first_kind_dual",
    "duality_residual",
    "coordinate_faces",
    "stokes_residual",
]

PointMap = Callable[[NDArray], NDArray]

_LETTERS_FORM = "abcd"
_LETTERS_VEC = "uvwx"


def unit_direction() -> NDArray[np.float64]:
    """The distinguished fifth-direction unit five-vector."""
    e5 = np.zeros(5)
    e5[4] = 1.0
    return e5


@dataclass(frozen=True)
class ParametrizedSurface:
    """An m-dimensional surface given by an embedding into spacetime.

    ``embed`` maps parameter points ``(..., dim)`` to spacetime points
    ``(..., 4)``; ``tangents`` returns the m tangent five-vectors
    ``(..., dim, 5)``.  Coordinate-curve tangents carry a zero fifth
    component unless the caller supplies one.
    """

    dim: int
    ranges: tuple[tuple[float, float], ...]
    embed: PointMap
    tangents: Callable[[NDArray], NDArray]

    def __post_init__(self) -> None:
        if not 1 <= self.dim <= 4:
            raise ValueError(f"surface dimension must be 1..4, got {self.dim}")
        if len(self.ranges) != self.dim:
            raise ValueError("need one parameter range per surface dimension")
        for lo, hi in self.ranges:
            if not hi > lo:
                raise ValueError(f"empty parameter range ({lo}, {hi})")

    @classmethod
    def from_embedding(
        cls,
        dim: int,
        ranges: tuple[tuple[float, float], ...],
        embed: PointMap,
        fd_step: float = 1e-3,
    ) -> "ParametrizedSurface":
        """Surface with tangents from a five-point derivative of the
        embedding; fifth components are zero."""

        def tangents(params: NDArray) -> NDArray:
            params = np.asarray(params, dtype=float)
            out = np.zeros(params.shape[:-1] + (dim, 5))
            for i in range(dim):
                shift = np.zeros(dim)
                shift[i] = fd_step
                d = (
                    -embed(params + 2 * shift)
                    + 8.0 * embed(params + shift)
                    - 8.0 * embed(params - shift)
                    + embed(params - 2 * shift)
                ) / (12.0 * fd_step)
                out[..., i, :4] = d
            return out

        return cls(dim=dim, ranges=tuple(ranges), embed=embed, tangents=tangents)

    def midpoint_rule(self, subdivisions: int) -> tuple[NDArray, float]:
        """Midpoint quadrature nodes ``(npoints, dim)`` and cell weight."""
        if subdivisions < 1:
            raise ValueError("need at least one subdivision")
        axes = []
        weight = 1.0
        for lo, hi in self.ranges:
            step = (hi - lo) / subdivisions
            axes.append(lo + (np.arange(subdivisions) + 0.5) * step)
            weight *= step
        mesh = np.meshgrid(*axes, indexing="ij")
        params = np.stack([m.reshape(-1) for m in mesh], axis=-1)
        return params, weight


def adjoint_tangent(s_upper: NDArray, u: NDArray) -> NDArray[np.float64]:
    """Adjoint image of a five-vector under the transport map.

    Rejects an identically vanishing tangent, which would collapse the
    surface element.
    """
    u = np.asarray(u, dtype=float)
    if not np.all(np.any(u != 0.0, axis=-1)):
        raise ValueError("tangent vector vanishes at some quadrature point")
    from .connections import sigma_map

    return sigma_map(ContorsionForm(s_upper), u)


def _sigma_table(s_at: PointMap, x: NDArray) -> NDArray:
    return ContorsionForm(np.asarray(s_at(x), dtype=float)).table()


def _check_form_rank(n_vals: NDArray, npts: int, rank: int) -> NDArray:
    n_vals = np.asarray(n_vals, dtype=float)
    expected = (npts,) + (10,) * rank
    if n_vals.shape != expected:
        raise ValueError(
            f"integrand form has shape {n_vals.shape}, expected rank {rank} -> {expected}"
        )
    return n_vals


def _pair_spec(rank: int) -> str:
    letters = _LETTERS_FORM[:rank]
    return "p" + letters + "," + ",".join(f"p{c}" for c in letters) + "->p"


def integral_first_kind(
    surface: ParametrizedSurface,
    n_at: PointMap,
    s_at: PointMap,
    subdivisions: int = 8,
) -> float:
    """Integral of a rank-m form against the adjoint images of the m
    surface tangents."""
    params, weight = surface.midpoint_rule(subdivisions)
    x = np.asarray(surface.embed(params), dtype=float)
    tang = np.asarray(surface.tangents(params), dtype=float)
    if not np.all(np.any(tang != 0.0, axis=-1)):
        raise ValueError("tangent vector vanishes at some quadrature point")
    table = _sigma_table(s_at, x)
    sigmas = [
        np.einsum("...ka,...a->...k", table, tang[:, i, :]) for i in range(surface.dim)
    ]
    n_vals = _check_form_rank(n_at(x), len(params), surface.dim)
    integrand = np.einsum(_pair_spec(surface.dim), n_vals, *sigmas)
    return float(weight * np.sum(integrand))


def integral_second_kind(
    surface: ParametrizedSurface,
    n_at: PointMap,
    s_at: PointMap,
    subdivisions: int = 8,
) -> float:
    """Integral of a rank-(m+1) form with the fifth-direction image in
    the first slot and the m tangent images in the rest.

    Requires the adjoint image of the fifth direction to be nonzero at
    every quadrature point.
    """
    params, weight = surface.midpoint_rule(subdivisions)
    x = np.asarray(surface.embed(params), dtype=float)
    tang = np.asarray(surface.tangents(params), dtype=float)
    table = _sigma_table(s_at, x)
    sigma_one = np.einsum("...ka,a->...k", table, unit_direction())
    if not np.all(np.any(sigma_one != 0.0, axis=-1)):
        raise ValueError(
            "the adjoint image of the fifth direction vanishes at a quadrature "
            "point; the second-kind integrand is degenerate there"
        )
    sigmas = [sigma_one] + [
        np.einsum("...ka,...a->...k", table, tang[:, i, :]) for i in range(surface.dim)
    ]
    rank = surface.dim + 1
    n_vals = _check_form_rank(n_at(x), len(params), rank)
    integrand = np.einsum(_pair_spec(rank), n_vals, *sigmas)
    return float(weight * np.sum(integrand))


def dual_form(n_vals: NDArray, table: NDArray) -> NDArray[np.float64]:
    """Five-vector-index form dual to an adjoint form.

    Every adjoint slot is converted through the transport table:
    ``out[..., A1..Am] = n[..., S1..Sm] table[..., S1, A1] ...``.
    """
    n_vals = np.asarray(n_vals, dtype=float)
    rank = n_vals.ndim - table.ndim + 2
    big = _LETTERS_FORM[:rank]
    small = _LETTERS_VEC[:rank]
    spec = (
        "..." + big + ","
        + ",".join(f"...{b}{s}" for b, s in zip(big, small))
        + "->..." + small
    )
    return np.einsum(spec, n_vals, *([table] * rank))


def integral_first_kind_dual(
    surface: ParametrizedSurface,
    n_at: PointMap,
    s_at: PointMap,
    subdivisions: int = 8,
) -> float:
    """Same integral as :func:`integral_first_kind`, computed through
    the dual five-vector-index form contracted with the raw tangents."""
    params, weight = surface.midpoint_rule(subdivisions)
    x = np.asarray(surface.embed(params), dtype=float)
    tang = np.asarray(surface.tangents(params), dtype=float)
    table = _sigma_table(s_at, x)
    n_vals = _check_form_rank(n_at(x), len(params), surface.dim)
    nd = dual_form(n_vals, table)
    small = _LETTERS_VEC[: surface.dim]
    spec = "p" + small + "," + ",".join(f"p{c}" for c in small) + "->p"
    integrand = np.einsum(spec, nd, *[tang[:, i, :] for i in range(surface.dim)])
    return float(weight * np.sum(integrand))


def duality_residual(
    surface: ParametrizedSurface,
    n_at: PointMap,
    s_at: PointMap,
    subdivisions: int = 8,
) -> float:
    """Difference between the direct and the dual-route integrals."""
    direct = integral_first_kind(surface, n_at, s_at, subdivisions)
    dual = integral_first_kind_dual(surface, n_at, s_at, subdivisions)
    return abs(direct - dual)


def _coordinate_surface(
    axis: int,
    value: float,
    box: tuple[tuple[float, float], ...],
) -> ParametrizedSurface:
    others = [d for d in range(4) if d != axis]

    def embed(params: NDArray) -> NDArray:
        params = np.asarray(params, dtype=float)
        out = np.zeros(params.shape[:-1] + (4,))
        out[..., axis] = value
        for i, d in enumerate(others):
            out[..., d] = params[..., i]
        return out

    def tangents(params: NDArray) -> NDArray:
        params = np.asarray(params, dtype=float)
        out = np.zeros(params.shape[:-1] + (3, 5))
        for i, d in enumerate(others):
            out[..., i, d] = 1.0
        return out

    return ParametrizedSurface(
        dim=3,
        ranges=tuple(box[d] for d in others),
        embed=embed,
        tangents=tangents,
    )


def coordinate_faces(
    box: tuple[tuple[float, float], ...],
) -> list[tuple[int, float, ParametrizedSurface]]:
    """The eight oriented boundary faces of a coordinate 4-box.

    Returns (axis, orientation sign, face) triples; the sign combines
    the outward side with the alternating axis factor so that the
    signed sum of face integrals matches the volume divergence.
    """
    if len(box) != 4:
        raise ValueError("need four coordinate ranges")
    faces = []
    for axis in range(4):
        lo, hi = box[axis]
        alt = -1.0 if axis % 2 else 1.0
        faces.append((axis, alt, _coordinate_surface(axis, hi, box)))
        faces.append((axis, -alt, _coordinate_surface(axis, lo, box)))
    return faces


@dataclass(frozen=True)
class StokesReport:
    boundary: float
    volume_on_form: float
    volume_on_map: float

    @property
    def volume(self) -> float:
        return self.volume_on_form + self.volume_on_map

    @property
    def residual(self) -> float:
        return abs(self.boundary - self.volume)


def _fd_axis(f: PointMap, x: NDArray, axis: int, step: float) -> NDArray:
    shift = np.zeros(4)
    shift[axis] = step
    return (
        -np.asarray(f(x + 2 * shift), dtype=float)
        + 8.0 * np.asarray(f(x + shift), dtype=float)
        - 8.0 * np.asarray(f(x - shift), dtype=float)
        + np.asarray(f(x - 2 * shift), dtype=float)
    ) / (12.0 * step)


def stokes_residual(
    box: tuple[tuple[float, float], ...],
    n_at: PointMap,
    s_at: PointMap,
    subdivisions: int = 8,
    fd_step: float = 1e-3,
) -> StokesReport:
    """Boundary-versus-volume comparison for a rank-3 form on a 4-box.

    The boundary side sums the eight oriented face integrals.  The
    volume side integrates the alternating coordinate divergence of the
    dual spacetime 3-form, split into the part where the derivative
    lands on the form and the part where it lands on the transport map.
    """
    lhs = 0.0
    for _, sign, face in coordinate_faces(box):
        lhs += sign * integral_first_kind(face, n_at, s_at, subdivisions)

    vol_surface = ParametrizedSurface(
        dim=4,
        ranges=tuple(box),
        embed=lambda p: np.asarray(p, dtype=float),
        tangents=lambda p: np.broadcast_to(
            np.eye(4, 5), np.asarray(p).shape[:-1] + (4, 5)
        ),
    )
    params, weight = vol_surface.midpoint_rule(subdivisions)
    x = params

    def table_map(pts: NDArray) -> NDArray:
        return _sigma_table(s_at, pts)

    table = table_map(x)[..., :, :4]
    n_vals = np.asarray(n_at(x), dtype=float)
    complements = [tuple(d for d in range(4) if d != axis) for axis in range(4)]

    on_form = 0.0
    on_map = 0.0
    for axis in range(4):
        alt = -1.0 if axis % 2 else 1.0
        mu, nu, rho = complements[axis]
        dn = _fd_axis(n_at, x, axis, fd_step)
        dtable = _fd_axis(table_map, x, axis, fd_step)[..., :, :4]
        s_cols = [table[..., :, d] for d in (mu, nu, rho)]
        ds_cols = [dtable[..., :, d] for d in (mu, nu, rho)]
        on_form += alt * weight * float(np.sum(np.einsum("pabc,pa,pb,pc->p", dn, *s_cols)))
        for position in range(3):
            factors = list(s_cols)
            factors[position] = ds_cols[position]
            on_map += alt * weight * float(
                np.sum(np.einsum("pabc,pa,pb,pc->p", n_vals, *factors))
            )
    return StokesReport(boundary=lhs, volume_on_form=on_form, volume_on_map=on_map)
