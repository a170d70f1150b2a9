"""Shared fixtures and lattice helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from fivevec import lattice

COARSE_POINTS = 5
BOX_LENGTH = 2.0 * np.pi


def plane_grid(
    n: int,
    axes: tuple[int, ...] = (0, 1),
    coarse: int = COARSE_POINTS,
    length: float = BOX_LENGTH,
) -> lattice.Grid4:
    """Periodic box refined along ``axes`` only.

    Test fields vary only along the refined axes, so convergence orders
    reflect the refined spacing without the cost of a full 4D lattice.
    """
    shape = [coarse] * 4
    spacing = [length / coarse] * 4
    for ax in axes:
        shape[ax] = n
        spacing[ax] = length / n
    return lattice.make_grid(tuple(shape), tuple(spacing), periodic=True)


def grid_pair(n: int, axes: tuple[int, ...] = (0, 1)) -> tuple[lattice.Grid4, lattice.Grid4]:
    """Two refinement levels (n and 2n points along the active axes)."""
    return plane_grid(n, axes), plane_grid(2 * n, axes)


def antisymmetrize(arr: np.ndarray, ax1: int = -2, ax2: int = -1) -> np.ndarray:
    return arr - np.swapaxes(arr, ax1, ax2)


def wave_field(
    rng: np.random.Generator,
    tail: tuple[int, ...],
    amplitude: float,
    axes: tuple[int, ...] = (0, 1),
):
    """Callable analytic field built from random unit-mode sine waves.

    Evaluating on a grid (or on raw points in a 2*pi box) gives values
    independent of the resolution, so the same field can be sampled on
    every refinement level.
    """
    waves = rng.integers(-1, 2, size=tail + (4,)).astype(float)
    mask = np.zeros(4)
    mask[list(axes)] = 1.0
    waves *= mask
    phases = rng.uniform(0.0, 2.0 * np.pi, size=tail)
    amps = amplitude * rng.uniform(0.5, 1.0, size=tail)

    def at(grid_or_points) -> np.ndarray:
        if isinstance(grid_or_points, lattice.Grid4):
            x = grid_or_points.coordinates()
            lengths = grid_or_points.lengths()
        else:
            x = np.asarray(grid_or_points, dtype=float)
            lengths = (BOX_LENGTH,) * 4
        scale = np.array([2.0 * np.pi / L for L in lengths])
        theta = np.tensordot(x, waves * scale, axes=([-1], [-1]))
        return amps * np.sin(theta + phases)

    return at


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260825)


# --- acceptance reporting -------------------------------------------------------

_ACCEPTANCE_LINES: list[tuple[int, str]] = []


def record_acceptance(number: int, label: str, passed: bool, detail: str) -> None:
    """Collect one pass/fail line per acceptance criterion for the summary."""
    verdict = "PASS" if passed else "FAIL"
    line = f"[{verdict}] criterion {number:2d} ({label}): {detail}"
    _ACCEPTANCE_LINES.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
