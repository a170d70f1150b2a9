"""Discretized four-dimensional spacetime.

Fields live on a rectangular lattice with four axes.  Component arrays
always carry the grid axes first and the tensor index axes last, so a
four-vector field has shape ``grid.shape + (4,)`` and a metric has shape
``grid.shape + (4, 4)``.  All derivatives are second-order accurate.

The metric signature is fixed to (+, -, -, -) throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "MINKOWSKI",
    "Grid4",
    "MetricField",
    "make_grid",
    "partial_derivative",
    "metric_preset",
    "volume_density",
]

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])

_MIN_POINTS = 5  # central stencil plus one-sided edge stencils must fit


@dataclass(frozen=True)
class Grid4:
    """A rectangular lattice covering one coordinate patch.

    Attributes
    ----------
    shape : tuple of 4 ints
        Points per axis, each at least 5.
    spacing : tuple of 4 floats
        Coordinate step per axis, strictly positive.
    periodic : tuple of 4 bools
        Whether each axis wraps around.
    """

    shape: tuple[int, int, int, int]
    spacing: tuple[float, float, float, float]
    periodic: tuple[bool, bool, bool, bool]

    def __post_init__(self) -> None:
        if len(self.shape) != 4 or len(self.spacing) != 4 or len(self.periodic) != 4:
            raise ValueError("Grid4 needs exactly four axes")
        if any(n < _MIN_POINTS for n in self.shape):
            raise ValueError(f"every axis needs at least {_MIN_POINTS} points, got {self.shape}")
        if any(h <= 0 for h in self.spacing):
            raise ValueError(f"spacings must be positive, got {self.spacing}")

    @property
    def npoints(self) -> int:
        return int(np.prod(self.shape))

    def axis_coordinates(self, axis: int) -> NDArray[np.float64]:
        """Coordinate values along one axis, starting at 0."""
        return np.arange(self.shape[axis]) * self.spacing[axis]

    def coordinates(self) -> NDArray[np.float64]:
        """Coordinates of every point, shape ``shape + (4,)``."""
        axes = [self.axis_coordinates(a) for a in range(4)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def lengths(self) -> tuple[float, float, float, float]:
        """Box extents; for periodic axes this is the period."""
        return tuple(n * h for n, h in zip(self.shape, self.spacing))


@dataclass(frozen=True)
class MetricField:
    """Symmetric four-metric of signature (+, -, -, -) on a grid."""

    g: NDArray[np.float64]  # shape grid.shape + (4, 4)
    grid: Grid4
    name: str = "custom"
    inverse: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        expected = self.grid.shape + (4, 4)
        if self.g.shape != expected:
            raise ValueError(f"metric shape {self.g.shape} does not match grid {expected}")
        if not np.array_equal(self.g, np.swapaxes(self.g, -1, -2)):
            raise ValueError("metric must be exactly symmetric")
        det = np.linalg.det(self.g)
        if np.any(det >= 0):
            raise ValueError("metric determinant must be negative everywhere")
        object.__setattr__(self, "inverse", np.linalg.inv(self.g))


def make_grid(
    shape: tuple[int, int, int, int],
    spacing: float | tuple[float, float, float, float] = 1.0,
    periodic: bool | tuple[bool, bool, bool, bool] = True,
) -> Grid4:
    """Build a :class:`Grid4`, broadcasting scalar spacing/periodicity."""
    if isinstance(spacing, (int, float)):
        spacing = (float(spacing),) * 4
    if isinstance(periodic, bool):
        periodic = (periodic,) * 4
    return Grid4(tuple(int(n) for n in shape), tuple(float(h) for h in spacing), tuple(periodic))


def periodic_box_grid(n: int, length: float = 2.0 * np.pi) -> Grid4:
    """Uniform periodic grid with n points per axis covering [0, length)."""
    return make_grid((n, n, n, n), spacing=length / n, periodic=True)


def partial_derivative(f: NDArray, axis: int, grid: Grid4) -> NDArray:
    """Second-order finite-difference ``d f / d x^axis``.

    Central differences in the interior; periodic axes wrap around, while
    non-periodic axes fall back to one-sided second-order stencils at the
    two edges.  The result is exact for fields affine in the coordinate.
    Trailing component axes of ``f`` are differentiated elementwise.
    """
    if not 0 <= axis <= 3:
        raise ValueError(f"axis must be in 0..3, got {axis}")
    f = np.asarray(f, dtype=float)
    if f.shape[:4] != grid.shape:
        raise ValueError(f"field grid axes {f.shape[:4]} do not match grid {grid.shape}")
    h = grid.spacing[axis]
    if grid.periodic[axis]:
        return (np.roll(f, -1, axis=axis) - np.roll(f, 1, axis=axis)) / (2.0 * h)
    return np.gradient(f, h, axis=axis, edge_order=2)


def metric_preset(name: str, grid: Grid4, **params) -> MetricField:
    """Analytic test metrics.

    flat
        Minkowski everywhere; no parameters.
    conformal
        g = Omega^2 * diag(1,-1,-1,-1) with Omega = 1 + amplitude * sin(k . x).
        Parameters: ``amplitude`` (default 0.05) and ``wave`` (four integer
        mode numbers, default (1, 0, 0, 0); converted to an angular wave
        vector commensurate with the box so periodic wrap stays smooth).
    diagonal-wave
        Diagonal metric whose entries are flat values scaled by
        (1 + a_mu * sin(k . x + phase_mu)); amplitudes must stay below 0.1.
        Parameters: ``amplitudes`` (default (0.05, 0.04, 0.03, 0.02)),
        ``wave`` (default (1, 1, 0, 0)).
    """
    x = grid.coordinates()
    if name == "flat":
        g = np.broadcast_to(MINKOWSKI, grid.shape + (4, 4)).copy()
        return MetricField(g, grid, name="flat")

    wave = params.get("wave", (1, 0, 0, 0) if name == "conformal" else (1, 1, 0, 0))
    kvec = np.array([2.0 * np.pi * m / L for m, L in zip(wave, grid.lengths())])
    phase = np.tensordot(x, kvec, axes=([-1], [0]))

    if name == "conformal":
        amplitude = float(params.get("amplitude", 0.05))
        omega = 1.0 + amplitude * np.sin(phase)
        g = omega[..., None, None] ** 2 * MINKOWSKI
        return MetricField(g, grid, name="conformal")

    if name == "diagonal-wave":
        amplitudes = params.get("amplitudes", (0.05, 0.04, 0.03, 0.02))
        if any(abs(a) >= 0.1 for a in amplitudes):
            raise ValueError("diagonal-wave amplitudes must stay below 0.1")
        g = np.zeros(grid.shape + (4, 4))
        phases = (0.0, np.pi / 3, 2 * np.pi / 3, np.pi / 2)
        for mu in range(4):
            profile = 1.0 + amplitudes[mu] * np.sin(phase + phases[mu])
            g[..., mu, mu] = MINKOWSKI[mu, mu] * profile
        return MetricField(g, grid, name="diagonal-wave")

    raise ValueError(f"unknown metric preset {name!r}")


def volume_density(metric: MetricField) -> NDArray[np.float64]:
    """sqrt(-det g), the natural volume weight; 1 for the flat preset."""
    det = np.linalg.det(metric.g)
    if np.any(det >= 0):
        raise ValueError("metric determinant must be negative everywhere")
    return np.sqrt(-det)
