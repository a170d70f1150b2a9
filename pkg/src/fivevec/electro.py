"""Coupled electromagnetic and antisymmetric tensor fields on flat space.

Covers the quadratic-invariant expansion and Lagrangian normalization,
the linear field equations with and without sources, the exact Fourier
dispersion analysis (rational arithmetic throughout), per-mode state
decomposition, and a 1+1D spectral time evolver.

Conventions: metric signature (+, -, -, -); plane waves carry the phase
omega*t - kvec.x, so the lowered wave covector is (omega, -kvec).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.typing import NDArray

from .algebra import ADJ_PAIRS, E_SLOTS, FiveMetric, Z_SLOTS, expand_bivector
from .lattice import MINKOWSKI, Grid4, partial_derivative

__all__ = [
    "EMState",
    "FourierMode",
    "LagrangianCoefficients",
    "DispersionBranch",
    "DispersionResult",
    "ModeShare",
    "ModeDecomposition",
    "EvolverState",
    "EvolutionResult",
    "Evolver1D",
    "em_strength_components",
    "scalar_invariants",
    "lagrangian_coefficients",
    "field_strength_4",
    "vacuum_residual",
    "sourced_residual",
    "dispersion_spectrum",
    "mode_decompose",
    "evolve",
    "measure_frequency",
]

_ETA = np.array([1.0, -1.0, -1.0, -1.0])

_PAIRS6 = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _pair_index(a: int, b: int) -> tuple[int, float]:
    """Canonical six-pair index and exchange sign; a == b maps to sign 0."""
    if a == b:
        return 0, 0.0
    if a < b:
        return _PAIRS6.index((a, b)), 1.0
    return _PAIRS6.index((b, a)), -1.0


def _check_antisymmetric(x: NDArray, name: str) -> None:
    if not np.array_equal(x, -np.swapaxes(x, -1, -2)):
        raise ValueError(f"{name} must be exactly antisymmetric")


@dataclass(frozen=True)
class FourierMode:
    """One plane-wave amplitude: potential and tensor components at a
    spacetime wave vector (omega, kvec)."""

    omega: float
    kvec: tuple[float, float, float]
    a: NDArray[np.complex128]
    e: NDArray[np.complex128]

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=complex)
        e = np.asarray(self.e, dtype=complex)
        if a.shape != (4,) or e.shape != (4, 4):
            raise ValueError("mode amplitudes must have shapes (4,) and (4, 4)")
        _check_antisymmetric(e, "mode tensor amplitude")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "e", e)

    @property
    def k_lower(self) -> NDArray[np.float64]:
        kx, ky, kz = self.kvec
        return np.array([self.omega, -kx, -ky, -kz])

    @property
    def mass_shell(self) -> float:
        kx, ky, kz = self.kvec
        return self.omega**2 - (kx**2 + ky**2 + kz**2)

    def strength(self) -> NDArray[np.complex128]:
        kl = self.k_lower
        return 1j * (kl[:, None] * self.a[None, :] - kl[None, :] * self.a[:, None])


@dataclass(frozen=True)
class EMState:
    """Potential/tensor state, either as lattice fields or as a list of
    Fourier amplitudes."""

    kappa: float
    a: NDArray | None = None
    e: NDArray | None = None
    grid: Grid4 | None = None
    modes: tuple[FourierMode, ...] | None = None

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        lattice = self.a is not None or self.e is not None or self.grid is not None
        if lattice == (self.modes is not None):
            raise ValueError("state needs either lattice fields or Fourier modes, not both")
        if lattice:
            if self.a is None or self.e is None or self.grid is None:
                raise ValueError("lattice state needs potential, tensor and grid together")
            a = np.asarray(self.a, dtype=float)
            e = np.asarray(self.e, dtype=float)
            if a.shape != self.grid.shape + (4,) or e.shape != self.grid.shape + (4, 4):
                raise ValueError("lattice field shapes must be grid + (4,) and grid + (4, 4)")
            _check_antisymmetric(e, "tensor field")
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "e", e)
        else:
            object.__setattr__(self, "modes", tuple(self.modes))

    @property
    def is_lattice(self) -> bool:
        return self.modes is None


def field_strength_4(a: NDArray, grid: Grid4) -> NDArray[np.float64]:
    """F_{ma} = d_m a_a - d_a a_m on the lattice."""
    da = np.stack([partial_derivative(a, m, grid) for m in range(4)], axis=-2)
    return da - np.swapaxes(da, -1, -2)


def em_strength_components(a: NDArray, e: NDArray, grid: Grid4) -> NDArray[np.float64]:
    """Field strength over canonical slot pairs, shape ``(..., 10, 10)``.

    Fifth-fifth block: ordinary strength of the potential; mixed block:
    lattice gradient of the tensor field; spacetime-spacetime block: the
    algebraic metric-tensor combination.  Flat metric throughout.
    """
    a = np.asarray(a, dtype=float)
    e = np.asarray(e, dtype=float)
    _check_antisymmetric(e, "tensor field")
    f4 = field_strength_4(a, grid)
    de = [partial_derivative(e, m, grid) for m in range(4)]
    out = np.zeros(grid.shape + (10, 10))
    for mu, slot_a in enumerate(E_SLOTS):
        for al, slot_b in enumerate(E_SLOTS):
            out[..., slot_a, slot_b] = f4[..., mu, al]
        for slot_b in Z_SLOTS:
            i, j = ADJ_PAIRS[slot_b]
            out[..., slot_a, slot_b] = de[mu][..., i, j]
            out[..., slot_b, slot_a] = -de[mu][..., i, j]
    eta = MINKOWSKI
    for slot_a in Z_SLOTS:
        m, n = ADJ_PAIRS[slot_a]
        for slot_b in Z_SLOTS:
            al, be = ADJ_PAIRS[slot_b]
            out[..., slot_a, slot_b] = (
                -eta[m, al] * e[..., n, be]
                + eta[n, al] * e[..., m, be]
                + eta[m, be] * e[..., n, al]
                - eta[n, be] * e[..., m, al]
            )
    return out


def _expand_double(f_slots: NDArray) -> NDArray:
    """Slot-pair array to the four-five-index form ``(..., a, b, c, d)``."""
    g1 = expand_bivector(np.asarray(f_slots))
    g2 = np.moveaxis(g1, -3, -1)
    g3 = expand_bivector(g2)
    return np.moveaxis(g3, (-2, -1), (-4, -3))


def scalar_invariants(f_slots: NDArray, fg: FiveMetric) -> tuple[NDArray, NDArray]:
    """The two independent quadratic scalars of the field strength."""
    full = _expand_double(f_slots)
    h = fg.raised()
    up = np.einsum(
        "...aw,...bx,...cy,...dz,...wxyz->...abcd", h, h, h, h, full, optimize=True
    )
    i1 = np.einsum("...abcd,...abcd->...", up, full)
    x_mixed = np.einsum("...aw,...cx,...wxad->...cd", h, h, full, optimize=True)
    i2 = np.einsum("...cd,...dc->...", x_mixed, x_mixed)
    return i1, i2


@dataclass(frozen=True)
class LagrangianCoefficients:
    """Normalized coefficients of the quadratic Lagrangian, plus the
    intermediate normalization record.

    The five coefficients multiply, in order: the squared potential
    strength, the squared tensor gradient, the squared tensor
    divergence, the strength-tensor cross term, and the squared tensor.
    """

    c_ff: float
    c_dede: float
    c_dive: float
    c_fe: float
    c_ee: float
    a: float
    d: float
    epsilon: int
    epsilon_sq: int
    rescale: float

    @property
    def third_term_constraint(self) -> float:
        return -0.5 * (self.epsilon_sq + 1)


def lagrangian_coefficients(kappa: float) -> LagrangianCoefficients:
    """Normalization pipeline for the quadratic invariant combination.

    Fixing the canonical strength and gradient terms determines the
    invariant weights a = kappa^4/16 and b = epsilon*kappa^4*d with
    d = 1/2, forces epsilon^2 = 1 through the divergence term, and
    yields the remaining coefficients exactly.
    """
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    a = kappa**4 / 16.0
    d = 0.5
    epsilon = 1
    rescale = 1.0 / kappa
    return LagrangianCoefficients(
        c_ff=-0.25,
        c_dede=0.25,
        c_dive=-1.0,
        c_fe=2.0 * kappa,
        c_ee=-1.5 * kappa**2,
        a=a,
        d=d,
        epsilon=epsilon,
        epsilon_sq=epsilon * epsilon,
        rescale=rescale,
    )


def _divergence(e: NDArray, grid: Grid4) -> NDArray[np.float64]:
    """C_b = d^a e_{ab} with flat-metric raising."""
    out = np.zeros(e.shape[:-2] + (4,))
    for al in range(4):
        out += _ETA[al] * partial_derivative(e, al, grid)[..., al, :]
    return out


def _box(x: NDArray, grid: Grid4) -> NDArray[np.float64]:
    out = np.zeros(x.shape)
    for mu in range(4):
        out += _ETA[mu] * partial_derivative(partial_derivative(x, mu, grid), mu, grid)
    return out


def vacuum_residual(state: EMState) -> tuple[NDArray, NDArray]:
    """Residuals of the two coupled linear field equations on a lattice
    state: the sourced-free strength equation and the tensor equation."""
    if not state.is_lattice:
        raise ValueError("vacuum residual needs a lattice state")
    a, e, grid, kappa = state.a, state.e, state.grid, state.kappa
    f4 = field_strength_4(a, grid)
    div_e = _divergence(e, grid)
    div_f = _divergence(f4, grid)
    res_f = div_f - 4.0 * kappa * div_e
    dc = [partial_derivative(div_e, al, grid) for al in range(4)]
    curl_c = np.stack(
        [np.stack([dc[al][..., be] for be in range(4)], axis=-1) for al in range(4)],
        axis=-2,
    )
    curl_c = curl_c - np.swapaxes(curl_c, -1, -2)
    res_e = _box(e, grid) - 2.0 * curl_c + 6.0 * kappa**2 * e - 4.0 * kappa * f4
    return res_f, res_e


def sourced_residual(
    state: EMState,
    j_vector: NDArray,
    j_tensor: NDArray,
) -> tuple[NDArray, NDArray]:
    """Field-equation residuals in the presence of matter currents
    (a four-current and an antisymmetric tensor current)."""
    j_vector = np.asarray(j_vector, dtype=float)
    j_tensor = np.asarray(j_tensor, dtype=float)
    _check_antisymmetric(j_tensor, "tensor current")
    res_f, res_e = vacuum_residual(state)
    return res_f - j_vector, res_e - j_tensor / state.kappa


# --- exact Fourier dispersion ------------------------------------------------


def _fraction_det(mat: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-enough Gaussian elimination."""
    m = [row[:] for row in mat]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if m[row][col] != 0:
                pivot = row
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for row in range(col + 1, n):
            if m[row][col] == 0:
                continue
            factor = m[row][col] * inv
            for k in range(col, n):
                m[row][k] -= factor * m[col][k]
    return det


def _poly_eval(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _lagrange_poly(points: list[tuple[Fraction, Fraction]]) -> list[Fraction]:
    """Exact interpolating polynomial, ascending coefficients."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            # multiply basis by (x - xj)
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        scale = yi / denom
        for k, c in enumerate(basis):
            coeffs[k] += scale * c
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _rational_roots(coeffs: list[Fraction]) -> dict[Fraction, int]:
    """All roots of an exactly factorable polynomial with multiplicity.

    Raises if any factor resists rational-root extraction.
    """
    work = coeffs[:]
    roots: dict[Fraction, int] = {}
    while len(work) > 1 and work[0] == 0:
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
        work = work[1:]
    while len(work) > 1:
        denom_lcm = 1
        for c in work:
            denom_lcm = denom_lcm * c.denominator // np.gcd(denom_lcm, c.denominator)
        ints = [int(c * denom_lcm) for c in work]
        lead, const = ints[-1], ints[0]

        def divisors(v: int) -> list[int]:
            v = abs(v)
            out = [d for d in range(1, int(v**0.5) + 1) if v % d == 0]
            return out + [v // d for d in out]

        found = None
        for p in divisors(const):
            for q in divisors(lead):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if _poly_eval(work, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise RuntimeError("dispersion determinant does not factor over the rationals")
        # deflate by (x - found)
        new = [Fraction(0)] * (len(work) - 1)
        carry = work[-1]
        for k in range(len(work) - 2, -1, -1):
            new[k] = carry
            carry = work[k] + found * carry
        if carry != 0:
            raise RuntimeError("exact deflation failed")
        roots[found] = roots.get(found, 0) + 1
        work = new
    return roots


def _nullspace(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact nullspace basis via reduced row echelon form."""
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = None
        for row in range(r, rows):
            if m[row][c] != 0:
                pivot = row
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for row in range(rows):
            if row != r and m[row][c] != 0:
                factor = m[row][c]
                m[row] = [a - factor * b for a, b in zip(m[row], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for prow, pc in enumerate(pivots):
            vec[pc] = -m[prow][fc]
        basis.append(vec)
    return basis


def _dispersion_matrix(x: Fraction, kap: Fraction) -> list[list[Fraction]]:
    """Exact mode matrix at zero spatial wavenumber.

    Variable order: four time-scaled potential components, then the six
    tensor pairs.  ``x`` is the squared frequency.
    """
    k2 = kap * kap
    mat = [[Fraction(0)] * 10 for _ in range(10)]
    mat[0][0] = x
    for i in (1, 2, 3):
        p = 4 + _PAIRS6.index((0, i))
        mat[i][i] = x
        mat[i][p] = -4 * kap * x
        mat[p][i] = -4 * kap
        mat[p][p] = x + 6 * k2
    for pair in ((1, 2), (1, 3), (2, 3)):
        p = 4 + _PAIRS6.index(pair)
        mat[p][p] = 6 * k2 - x
    return mat


@dataclass(frozen=True)
class DispersionBranch:
    mass_squared: float
    multiplicity: int
    amplitude_ratio: float | None


@dataclass(frozen=True)
class DispersionResult:
    """Exact branch decomposition of the Fourier-space linear system."""

    kappa: float
    branches: tuple[DispersionBranch, ...]
    det_leading: float

    @property
    def total_multiplicity(self) -> int:
        return sum(b.multiplicity for b in self.branches)

    def omega_squared(self, kvec: tuple[float, float, float]) -> list[float]:
        k2 = sum(v * v for v in kvec)
        return [b.mass_squared + k2 for b in self.branches]


def dispersion_spectrum(kappa: float) -> DispersionResult:
    """Branch masses and amplitude ratios of the coupled linear system.

    Works entirely in rational arithmetic: the determinant of the mode
    matrix is interpolated exactly, factored over the rationals, and the
    amplitude ratios are read from exact nullspaces.  Branch masses are
    exact multiples of kappa squared.
    """
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    kap = Fraction(kappa)
    points = []
    for i in range(11):
        x = Fraction(i)
        points.append((x, _fraction_det(_dispersion_matrix(x, kap))))
    coeffs = _lagrange_poly(points)
    leading = coeffs[-1]
    monic = [c / leading for c in coeffs]
    roots = _rational_roots(monic)
    if sum(roots.values()) != 10:
        raise RuntimeError("dispersion branch multiplicities do not sum to the mode count")
    branches = []
    for root, mult in sorted(roots.items()):
        basis = _nullspace(_dispersion_matrix(root, kap))
        ratio: Fraction | None = None
        for vec in basis:
            for i in (1, 2, 3):
                if vec[i] != 0:
                    cand = vec[4 + _PAIRS6.index((0, i))] / vec[i]
                    if ratio is not None and cand != ratio:
                        raise RuntimeError("inconsistent amplitude ratio on a branch")
                    ratio = cand
        branches.append(
            DispersionBranch(
                mass_squared=float(root),
                multiplicity=mult,
                amplitude_ratio=None if ratio is None else float(ratio),
            )
        )
    return DispersionResult(kappa=kappa, branches=tuple(branches), det_leading=float(leading))


# --- mode decomposition -------------------------------------------------------


@dataclass(frozen=True)
class ModeShare:
    """Branch content of one plane-wave mode."""

    omega: float
    kvec: tuple[float, float, float]
    f1: NDArray[np.complex128]
    f2: NDArray[np.complex128]
    e1: NDArray[np.complex128]
    e2: NDArray[np.complex128]
    e3: NDArray[np.complex128]


@dataclass(frozen=True)
class ModeDecomposition:
    kappa: float
    shares: tuple[ModeShare, ...]

    def c_sector_residual(self) -> float:
        """Max residual of the divergence-sector mass equation over modes."""
        worst = 0.0
        for s in self.shares:
            k2 = sum(v * v for v in s.kvec)
            u = s.omega**2 - k2
            e_total = s.e1 + s.e2 + s.e3
            k_up = np.array([s.omega, *s.kvec])
            c = 1j * np.einsum("a,ab->b", k_up, e_total)
            worst = max(worst, float(np.max(np.abs((10.0 * self.kappa**2 - u) * c))))
        return worst


def _decompose_mode(mode: FourierMode, kappa: float, rel_tol: float) -> ModeShare:
    u = mode.mass_shell
    scale = max(float(np.max(np.abs(mode.a))), float(np.max(np.abs(mode.e))), 1e-300)
    utol = rel_tol * (1.0 + abs(u) + 10.0 * kappa**2)
    fhat = mode.strength()
    zero = np.zeros((4, 4), dtype=complex)
    targets = (0.0, 10.0 * kappa**2, 6.0 * kappa**2)
    dists = [abs(u - t) for t in targets]
    branch = int(np.argmin(dists))
    if dists[branch] > utol:
        raise ValueError(f"mode at mass shell {u:.6g} does not sit on a vacuum branch")
    if branch == 0:
        e1 = (2.0 / (3.0 * kappa)) * fhat
        if np.max(np.abs(mode.e - e1)) > rel_tol * max(scale, 1.0):
            raise ValueError("massless mode with tensor content off the vacuum branch")
        return ModeShare(mode.omega, mode.kvec, fhat, zero, e1, zero, zero)
    if branch == 1:
        e2 = (1.0 / (4.0 * kappa)) * fhat
        if np.max(np.abs(mode.e - e2)) > rel_tol * max(scale, 1.0):
            raise ValueError("massive mode with tensor content off the vacuum branch")
        return ModeShare(mode.omega, mode.kvec, zero, fhat, zero, e2, zero)
    if np.max(np.abs(fhat)) > rel_tol * max(scale, 1.0):
        raise ValueError("tensor-branch mode with strength content is not a vacuum state")
    k_up = np.array([mode.omega, *mode.kvec])
    div = np.einsum("a,ab->b", k_up, mode.e)
    if np.max(np.abs(div)) > rel_tol * max(scale, 1.0):
        raise ValueError("tensor-branch mode is not divergence-free")
    return ModeShare(mode.omega, mode.kvec, zero, zero, zero, zero, mode.e)


def _modes_from_lattice(state: EMState, threshold: float) -> list[FourierMode]:
    grid = state.grid
    npts = grid.npoints
    amps_a = np.fft.fftn(state.a, axes=(0, 1, 2, 3)) / npts
    amps_e = np.fft.fftn(state.e, axes=(0, 1, 2, 3)) / npts
    mag = np.max(np.abs(amps_a), axis=(-1,)) + np.max(np.abs(amps_e), axis=(-2, -1))
    cut = threshold * float(np.max(mag)) if np.max(mag) > 0 else np.inf
    freqs = [
        2.0 * np.pi * np.fft.fftfreq(grid.shape[ax], d=grid.spacing[ax]) for ax in range(4)
    ]
    modes = []
    for idx in np.argwhere(mag > cut):
        i0, i1, i2, i3 = (int(v) for v in idx)
        nu = [freqs[ax][i] for ax, i in enumerate((i0, i1, i2, i3))]
        modes.append(
            FourierMode(
                omega=nu[0],
                kvec=(-nu[1], -nu[2], -nu[3]),
                a=amps_a[i0, i1, i2, i3],
                e=amps_e[i0, i1, i2, i3],
            )
        )
    return modes


def mode_decompose(
    state: EMState,
    rel_tol: float = 1e-6,
    lattice_threshold: float = 1e-9,
) -> ModeDecomposition:
    """Split a vacuum state into its three dispersion branches per mode.

    Fourier-amplitude states decompose exactly; lattice states pass
    through a spacetime transform first.  Modes that do not lie on a
    vacuum branch (within ``rel_tol``) are rejected.
    """
    if state.is_lattice:
        modes = _modes_from_lattice(state, lattice_threshold)
    else:
        modes = list(state.modes)
    shares = [_decompose_mode(m, state.kappa, rel_tol) for m in modes]
    return ModeDecomposition(kappa=state.kappa, shares=tuple(shares))


# --- 1+1D evolver --------------------------------------------------------------


@dataclass(frozen=True)
class EvolverState:
    """Initial data on a periodic line: fields depend on (t, z) with z
    sampled on ``npoints`` sites; time derivatives included."""

    a: NDArray[np.float64]
    e: NDArray[np.float64]
    a_t: NDArray[np.float64]
    e_t: NDArray[np.float64]
    kappa: float
    length: float = 2.0 * np.pi

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=float)
        n = a.shape[0]
        for name, arr, shape in (
            ("a", a, (n, 4)),
            ("e", np.asarray(self.e, dtype=float), (n, 4, 4)),
            ("a_t", np.asarray(self.a_t, dtype=float), (n, 4)),
            ("e_t", np.asarray(self.e_t, dtype=float), (n, 4, 4)),
        ):
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
            object.__setattr__(self, name, arr)
        _check_antisymmetric(self.e, "tensor initial data")
        _check_antisymmetric(self.e_t, "tensor time derivative")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")

    @property
    def npoints(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class EvolutionResult:
    times: NDArray[np.float64]
    probe_series: dict[int, NDArray[np.complex128]]
    energy: NDArray[np.float64]
    dt: float
    wavenumbers: NDArray[np.float64]


class Evolver1D:
    """Spectral-in-space, second-order-in-time integrator of the coupled
    linear system reduced to fields of (t, z).

    Per spatial mode the ten components (four potential, six tensor
    pairs) obey M2 v'' + M1 v' + M0 v = 0; the step scheme is a central
    second-order two-step update.
    """

    def __init__(self, npoints: int = 256, length: float = 2.0 * np.pi, kappa: float = 1.0):
        if npoints < 8:
            raise ValueError("need at least 8 spatial points")
        if not kappa > 0:
            raise ValueError(f"kappa must be positive, got {kappa}")
        self.npoints = npoints
        self.length = length
        self.kappa = kappa
        self.spacing = length / npoints
        self.wavenumbers = 2.0 * np.pi * np.fft.fftfreq(npoints, d=self.spacing)
        self.m2, self.m1, self.m0 = self._mode_matrices(self.wavenumbers, kappa)

    @staticmethod
    def _mode_matrices(qs: NDArray, kappa: float):
        n = len(qs)
        m2 = np.zeros((n, 10, 10), dtype=complex)
        m1 = np.zeros((n, 10, 10), dtype=complex)
        m0 = np.zeros((n, 10, 10), dtype=complex)
        k = kappa
        for w, q in enumerate(qs):
            # potential rows
            for be in range(4):
                m2[w, be, be] = 1.0
                m0[w, be, be] = q * q
                if be != 0:
                    idx, sgn = _pair_index(0, be)
                    m1[w, be, 4 + idx] = -4.0 * k * sgn
                if be != 3:
                    idx, sgn = _pair_index(3, be)
                    m0[w, be, 4 + idx] += 4.0 * k * 1j * q * sgn
            # tensor rows
            for p, (al, be) in enumerate(_PAIRS6):
                r = 4 + p
                m2[w, r, r] = 1.0
                m0[w, r, r] = q * q + 6.0 * k * k
                if al == 0:
                    m2[w, r, r] += -2.0
                    if be != 3:
                        idx, sgn = _pair_index(be, 3)
                        m1[w, r, 4 + idx] = -2.0 * 1j * q * sgn
                    else:
                        m0[w, r, r] += -2.0 * q * q
                    m1[w, r, be] = -4.0 * k
                    if be == 3:
                        m0[w, r, 0] = 4.0 * k * 1j * q
                elif be == 3:
                    idx, sgn = _pair_index(0, al)
                    m1[w, r, 4 + idx] = 2.0 * 1j * q * sgn
                    m0[w, r, r] += -2.0 * q * q
                    m0[w, r, al] = 4.0 * k * 1j * q
        return m2, m1, m0

    def pack(self, a: NDArray, e: NDArray) -> NDArray[np.complex128]:
        """Lattice fields to spectral component vectors (nmodes, 10)."""
        ah = np.fft.fft(a, axis=0)
        eh = np.fft.fft(e, axis=0)
        v = np.zeros((self.npoints, 10), dtype=complex)
        v[:, :4] = ah
        for p, (al, be) in enumerate(_PAIRS6):
            v[:, 4 + p] = eh[:, al, be]
        return v

    def unpack(self, v: NDArray) -> tuple[NDArray, NDArray]:
        a = np.fft.ifft(v[:, :4], axis=0).real
        e = np.zeros((self.npoints, 4, 4))
        for p, (al, be) in enumerate(_PAIRS6):
            comp = np.fft.ifft(v[:, 4 + p], axis=0).real
            e[:, al, be] = comp
            e[:, be, al] = -comp
        return a, e

    def run(
        self,
        state: EvolverState,
        dt: float,
        steps: int,
        probe_modes: tuple[int, ...] = (0,),
    ) -> EvolutionResult:
        if state.npoints != self.npoints or state.kappa != self.kappa:
            raise ValueError("initial data does not match this evolver")
        if dt >= self.spacing:
            raise ValueError(
                f"time step {dt} violates the stability bound (needs dt < {self.spacing})"
            )
        v0 = self.pack(state.a, state.e)
        vdot0 = self.pack(state.a_t, state.e_t)
        rhs0 = -np.einsum("wij,wj->wi", self.m1, vdot0) - np.einsum("wij,wj->wi", self.m0, v0)
        acc0 = np.linalg.solve(self.m2, rhs0[..., None])[..., 0]
        v1 = v0 + dt * vdot0 + 0.5 * dt * dt * acc0
        lhs = self.m2 / dt**2 + self.m1 / (2.0 * dt)
        lhs_inv = np.linalg.inv(lhs)
        rhs_cur = 2.0 * self.m2 / dt**2 - self.m0
        rhs_old = -self.m2 / dt**2 + self.m1 / (2.0 * dt)

        eig_data = {}
        for w in probe_modes:
            smat = np.zeros((20, 20), dtype=complex)
            smat[:10, 10:] = np.eye(10)
            m2inv = np.linalg.inv(self.m2[w])
            smat[10:, :10] = -m2inv @ self.m0[w]
            smat[10:, 10:] = -m2inv @ self.m1[w]
            vals, vecs = np.linalg.eig(smat)
            eig_data[w] = (vals, np.linalg.pinv(vecs))

        series = {w: np.zeros((steps + 1, 10), dtype=complex) for w in probe_modes}
        energy = np.zeros(steps + 1)
        times = np.arange(steps + 1) * dt

        def record(n: int, v: NDArray, vdot: NDArray) -> None:
            for w in probe_modes:
                series[w][n] = v[w]
                vals, vinv = eig_data[w]
                c = vinv @ np.concatenate([v[w], vdot[w]])
                osc = np.abs(vals) > 1e-9
                energy[n] += float(np.sum(np.abs(vals[osc] * c[osc]) ** 2))

        record(0, v0, vdot0)
        prev, cur = v0, v1
        for n in range(1, steps + 1):
            nxt = np.einsum(
                "wij,wj->wi", lhs_inv,
                np.einsum("wij,wj->wi", rhs_cur, cur)
                + np.einsum("wij,wj->wi", rhs_old, prev),
            )
            vdot = (nxt - prev) / (2.0 * dt)
            record(n, cur, vdot)
            prev, cur = cur, nxt
        return EvolutionResult(
            times=times,
            probe_series=series,
            energy=energy,
            dt=dt,
            wavenumbers=self.wavenumbers,
        )


def evolve(
    state: EvolverState,
    dt: float,
    steps: int,
    probe_modes: tuple[int, ...] = (0,),
) -> EvolutionResult:
    """Integrate the 1+1D reduction of the coupled linear system."""
    ev = Evolver1D(npoints=state.npoints, length=state.length, kappa=state.kappa)
    return ev.run(state, dt, steps, probe_modes)


def measure_frequency(series: NDArray, dt: float) -> float:
    """Dominant oscillation frequency of a (possibly complex) series.

    Hann-windowed transform with parabolic peak refinement; returns the
    angular frequency magnitude.
    """
    series = np.asarray(series)
    n = len(series)
    window = np.hanning(n)
    spec = np.abs(np.fft.fft((series - np.mean(series)) * window))
    freqs = 2.0 * np.pi * np.fft.fftfreq(n, d=dt)
    peak = int(np.argmax(spec))
    y0 = spec[(peak - 1) % n]
    y1 = spec[peak]
    y2 = spec[(peak + 1) % n]
    denom = y0 - 2.0 * y1 + y2
    shift = 0.0 if denom == 0 else 0.5 * (y0 - y2) / denom
    step = freqs[1] - freqs[0]
    return float(abs(freqs[peak] + shift * step))
