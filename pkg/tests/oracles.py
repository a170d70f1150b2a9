"""Independent reference computations backing the test suite.

Every quantity here is produced by a route deliberately different from the
library implementation: symbolic differentiation instead of lattice finite
differences, explicit index loops instead of vectorized contractions,
direct root-finding on a freshly assembled linear system instead of the
library's dispersion pipeline.  Agreement between the two routes is then
evidence rather than tautology.  Expected values frozen into the tests were
generated with these helpers.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import sympy as sp

# --- convergence measurement ---------------------------------------------------

ROUNDOFF_FLOOR = 1e-13
"""Residuals below this are indistinguishable from double-precision noise."""


def convergence_order(coarse: float, fine: float, refine: float = 2.0) -> float:
    """Observed order p assuming error(h) = C * h**p between two levels."""
    return math.log(coarse / fine) / math.log(refine)


def order_or_exact(coarse: float, fine: float, refine: float = 2.0) -> tuple[float, bool]:
    """(order, exact): ``exact`` when both levels already sit at roundoff."""
    if coarse < ROUNDOFF_FLOOR and fine < ROUNDOFF_FLOOR:
        return float("inf"), True
    return convergence_order(coarse, fine, refine), False


# --- symbolic Lorentzian geometry ----------------------------------------------

MINKOWSKI_DIAG = (1, -1, -1, -1)


def symbolic_coordinates() -> tuple[sp.Symbol, ...]:
    return sp.symbols("x0 x1 x2 x3", real=True)


def symbolic_metric(name: str, lengths=None, **params):
    """Exact sympy mirror of the analytic metric families.

    Returns ``(g, xs)`` with ``g`` a 4x4 sympy matrix in the coordinate
    symbols ``xs``.  ``lengths`` are the box lengths fixing the angular
    wave vector (default: 2*pi per axis, making unit mode numbers exact).
    """
    if lengths is None:
        lengths = (2 * sp.pi,) * 4
    xs = symbolic_coordinates()
    eta = sp.diag(*MINKOWSKI_DIAG)
    if name == "flat":
        return eta, xs
    if name == "conformal":
        wave = params.get("wave", (1, 0, 0, 0))
        amplitude = params.get("amplitude", sp.Rational(1, 20))
        phase = sum(2 * sp.pi * m / L * x for m, L, x in zip(wave, lengths, xs))
        omega = 1 + amplitude * sp.sin(phase)
        return omega**2 * eta, xs
    if name == "diagonal-wave":
        wave = params.get("wave", (1, 1, 0, 0))
        amplitudes = params.get(
            "amplitudes",
            (
                sp.Rational(1, 20),
                sp.Rational(1, 25),
                sp.Rational(3, 100),
                sp.Rational(1, 50),
            ),
        )
        offsets = (sp.S.Zero, sp.pi / 3, 2 * sp.pi / 3, sp.pi / 2)
        phase = sum(2 * sp.pi * m / L * x for m, L, x in zip(wave, lengths, xs))
        entries = [
            MINKOWSKI_DIAG[mu] * (1 + amplitudes[mu] * sp.sin(phase + offsets[mu]))
            for mu in range(4)
        ]
        return sp.diag(*entries), xs
    raise ValueError(f"unknown symbolic metric {name!r}")


def christoffel_exprs(g: sp.Matrix, xs) -> list:
    """Levi-Civita coefficients Gamma^a_{bc} as nested lists of expressions."""
    ginv = g.inv()
    gamma = [[[sp.S.Zero] * 4 for _ in range(4)] for _ in range(4)]
    for a in range(4):
        for b in range(4):
            for c in range(4):
                acc = sp.S.Zero
                for d in range(4):
                    acc += ginv[a, d] * (
                        sp.diff(g[d, b], xs[c])
                        + sp.diff(g[d, c], xs[b])
                        - sp.diff(g[b, c], xs[d])
                    )
                gamma[a][b][c] = sp.together(acc / 2)
    return gamma


def riemann_exprs(g: sp.Matrix, xs) -> list:
    """Curvature R^a_{bmn} = d_m Gamma^a_{bn} - d_n Gamma^a_{bm} + quadratic terms."""
    gamma = christoffel_exprs(g, xs)
    riem = [
        [[[sp.S.Zero] * 4 for _ in range(4)] for _ in range(4)] for _ in range(4)
    ]
    for a in range(4):
        for b in range(4):
            for m in range(4):
                for n in range(m + 1, 4):
                    expr = sp.diff(gamma[a][b][n], xs[m]) - sp.diff(gamma[a][b][m], xs[n])
                    for w in range(4):
                        expr += gamma[a][w][m] * gamma[w][b][n]
                        expr -= gamma[a][w][n] * gamma[w][b][m]
                    riem[a][b][m][n] = expr
                    riem[a][b][n][m] = -expr
    return riem


def einstein_exprs(g: sp.Matrix, xs) -> list:
    """Mixed Einstein tensor G^m_a from the symbolic curvature."""
    riem = riemann_exprs(g, xs)
    ginv = g.inv()
    ricci = [[sp.S.Zero] * 4 for _ in range(4)]
    for b in range(4):
        for n in range(4):
            ricci[b][n] = sum(riem[a][b][a][n] for a in range(4))
    mixed = [
        [sum(ginv[m, b] * ricci[b][a] for b in range(4)) for a in range(4)]
        for m in range(4)
    ]
    scalar = sum(mixed[a][a] for a in range(4))
    return [
        [mixed[m][a] - sp.Rational(1, 2) * scalar * (1 if m == a else 0) for a in range(4)]
        for m in range(4)
    ]


def evaluate_exprs(components, xs, coords: np.ndarray) -> np.ndarray:
    """Evaluate a nested list of expressions on lattice coordinates.

    ``coords[..., i]`` feeds symbol ``xs[i]``; the component axes are
    appended to the point axes of the result.
    """
    comp = np.array(components, dtype=object)
    coords = np.asarray(coords, dtype=float)
    out = np.zeros(coords.shape[:-1] + comp.shape)
    args = [coords[..., i] for i in range(4)]
    for idx in np.ndindex(comp.shape):
        fn = sp.lambdify(xs, comp[idx], modules="numpy")
        out[(...,) + idx] = fn(*args)
    return out


# --- brute-force strength invariants -------------------------------------------

PAIRS10 = ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


def expand_slot_pairs(f_slots: np.ndarray) -> np.ndarray:
    """(10, 10) canonical-pair components to the full antisymmetric (5,5,5,5)."""
    f_slots = np.asarray(f_slots, dtype=float)
    full = np.zeros((5, 5, 5, 5))
    for sa, (a, b) in enumerate(PAIRS10):
        for sb, (c, d) in enumerate(PAIRS10):
            v = f_slots[sa, sb]
            for i, j, si in ((a, b, 1.0), (b, a, -1.0)):
                for k, l, sj in ((c, d, 1.0), (d, c, -1.0)):
                    full[i, j, k, l] = si * sj * v
    return full


def brute_force_invariants(f_slots: np.ndarray, kappa: float) -> tuple[float, float]:
    """The two quadratic scalars of a rank-four strength by explicit loops.

    First: full contraction of the raised tensor with itself.  Second:
    the trace-within-trace contraction of the half-raised tensor.
    """
    h = [1.0, -1.0, -1.0, -1.0, 1.0 / kappa**2]
    full = expand_slot_pairs(f_slots)
    i1 = 0.0
    for a in range(5):
        for b in range(5):
            for c in range(5):
                for d in range(5):
                    i1 += h[a] * h[b] * h[c] * h[d] * full[a, b, c, d] ** 2
    x = np.zeros((5, 5))
    for c in range(5):
        for d in range(5):
            x[c, d] = sum(h[a] * h[c] * full[a, c, a, d] for a in range(5))
    i2 = sum(x[c, d] * x[d, c] for c in range(5) for d in range(5))
    return float(i1), float(i2)


# --- dispersion of the coupled linear system ------------------------------------

_SPATIAL_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def dispersion_mass_oracle(kappa) -> dict[float, int]:
    """Re-derive the vacuum branch masses at zero spatial wavenumber.

    Plane modes exp(-i*omega*t) in Lorenz gauge are substituted into the
    two coupled field equations assembled here from scratch; the
    determinant of the resulting 10x10 system is factored exactly and the
    roots are rebinned as mass-squared multiplicities.
    """
    kap = sp.nsimplify(kappa)
    om, t = sp.symbols("omega t")
    a_sym = sp.symbols("a0:4")
    e_sym = sp.symbols("e0:6")
    wave = sp.exp(-sp.I * om * t)

    emat = sp.zeros(4, 4)
    for idx, (i, j) in enumerate(_SPATIAL_PAIRS):
        emat[i, j] = e_sym[idx]
        emat[j, i] = -e_sym[idx]

    a_fields = [a_sym[b] * wave for b in range(4)]
    e_fields = emat * wave

    def dt(expr):
        return sp.diff(expr, t)

    # At zero spatial wavenumber only time derivatives survive; the
    # divergence of the tensor field keeps its single raised-time term.
    eqs = []
    for be in range(4):
        eqs.append(dt(dt(a_fields[be])) - 4 * kap * dt(e_fields[0, be]))
    c_field = [dt(e_fields[0, nu]) for nu in range(4)]
    for mu, nu in _SPATIAL_PAIRS:
        curl = (dt(c_field[nu]) if mu == 0 else sp.S.Zero) - (
            dt(c_field[mu]) if nu == 0 else sp.S.Zero
        )
        strength = (dt(a_fields[nu]) if mu == 0 else sp.S.Zero) - (
            dt(a_fields[mu]) if nu == 0 else sp.S.Zero
        )
        eqs.append(
            dt(dt(e_fields[mu, nu]))
            - 2 * curl
            + 6 * kap**2 * e_fields[mu, nu]
            - 4 * kap * strength
        )

    unknowns = list(a_sym) + list(e_sym)
    reduced = [sp.expand(eq / wave) for eq in eqs]
    mat, rhs = sp.linear_eq_to_matrix(reduced, unknowns)
    assert rhs == sp.zeros(10, 1)
    det = sp.factor(mat.det())
    poly = sp.Poly(det, om)
    roots = sp.roots(poly)
    assert sum(roots.values()) == poly.degree()

    masses: dict[float, int] = {}
    for root, mult in roots.items():
        if root == 0:
            # omega = 0 carries double multiplicity per mass-squared root
            assert mult % 2 == 0
            masses[0.0] = masses.get(0.0, 0) + mult // 2
        elif sp.im(root) == 0 and root > 0:
            masses[float(root**2)] = masses.get(float(root**2), 0) + mult
    return masses


def branch_ratio_oracle() -> tuple[Fraction, Fraction]:
    """Tensor-to-strength amplitude ratios on the two coupled branches.

    Returned as exact fractions of 1/kappa.  Massless branch: a null
    transverse wave with tensor field proportional to the strength is
    substituted into the tensor equation and the proportionality solved
    for.  Massive branch: the zero-wavenumber 2x2 sector is solved on
    shell and the strength recomputed from the surviving potential.
    """
    kap, r = sp.symbols("kappa r", positive=True)
    om, k, t, z = sp.symbols("omega k t z", positive=True)

    # Massless: A_1 = exp(i k (z - t)), F from A, E = r F.
    a1 = sp.exp(sp.I * k * (z - t))
    f01 = sp.diff(a1, t)  # F_{01} = d_0 A_1
    f31 = sp.diff(a1, z)  # F_{31} = d_3 A_1
    e01 = r * f01
    e31 = r * f31
    # Tensor equation, (0,1) component: box E - 2 curl(div E) + 6 kap^2 E - 4 kap F.
    box_e01 = sp.diff(e01, t, 2) - sp.diff(e01, z, 2)
    div_e1 = sp.diff(e01, t) - sp.diff(e31, z)  # d^0 E_{01} + d^3 E_{31}
    eq = box_e01 - 2 * sp.diff(div_e1, t) + 6 * kap**2 * e01 - 4 * kap * f01
    sols = sp.solve(sp.simplify(eq / a1), r)
    assert len(sols) == 1
    massless = sp.simplify(sols[0] * kap)
    assert massless == sp.Rational(2, 3)

    # Massive: at zero wavenumber the potential equation ties the potential
    # to the mixed tensor component; the strength follows from the potential.
    aj, e0j = sp.symbols("aj e0j")
    eq_pot = -(om**2) * aj + 4 * sp.I * kap * om * e0j
    aj_val = sp.solve(eq_pot, aj)[0]
    f0j = -sp.I * om * aj_val  # F_{0j} of the plane mode
    massive = sp.simplify((e0j / f0j) * kap)
    assert massive == sp.Rational(1, 4)

    return Fraction(2, 3), Fraction(1, 4)


# --- canonical stress-energy of a scalar field ----------------------------------


def canonical_scalar_stress(grad_phi: np.ndarray, l_density: np.ndarray | None = None) -> np.ndarray:
    """T^a_m = delta^a_m L - d^a phi d_m phi for L = (1/2) (d phi)^2.

    ``grad_phi[..., m]`` holds the lowered analytic gradient; raising uses
    the flat diagonal metric.
    """
    grad_phi = np.asarray(grad_phi, dtype=float)
    eta = np.array(MINKOWSKI_DIAG, dtype=float)
    grad_up = eta * grad_phi
    if l_density is None:
        l_density = 0.5 * np.einsum("...a,...a->...", grad_up, grad_phi)
    return l_density[..., None, None] * np.eye(4) - np.einsum(
        "...a,...m->...am", grad_up, grad_phi
    )
