"""Command-line verification harness.

Subcommands
-----------
verify
    Run the configured check suites on analytic scenarios, print a
    result table, and write machine-readable JSON/CSV reports.  The JSON
    report is canonical (sorted keys, no whitespace, no timing data), so
    repeated runs of the same scenario are byte-identical.
dispersion
    Print the exact branch decomposition of the coupled linear system.
evolve
    Run the 1+1D evolver on a single branch and compare the measured
    oscillation frequency with the predicted one.
report
    Re-render the result table from a previously written JSON report.

Exit codes: 0 all checks pass, 1 at least one check fails, 2 bad usage
or configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass, asdict
from itertools import permutations
from pathlib import Path

import numpy as np

from . import algebra, connections, curvature, electro, gauge, gravity, integration, lattice

__all__ = ["main", "ConfigError", "ScenarioConfig", "CheckRecord", "SUITE_NAMES"]


class ConfigError(Exception):
    """Raised for malformed or unknown configuration content."""


# --- configuration -----------------------------------------------------------

_SCHEMA: dict[str, dict[str, tuple[type, ...]]] = {
    "grid": {"points": (int,), "length": (int, float), "refinements": (int,)},
    "metric": {"preset": (str,), "amplitude": (int, float)},
    "torsion": {"amplitude": (int, float)},
    "constants": {"kappa": (int, float), "k": (int, float), "varrho": (int, float)},
    "run": {"suites": (list,), "seed": (int,)},
    "output": {"json": (str,), "csv": (str,)},
}

_METRIC_PRESETS = ("flat", "conformal", "diagonal-wave")


@dataclass
class ScenarioConfig:
    points: int = 32
    length: float = 2.0 * math.pi
    refinements: int = 2
    preset: str = "conformal"
    amplitude: float = 0.05
    torsion_amplitude: float = 0.03
    kappa: float = 1.0
    k: float = 1.0
    varrho: float = 1.0
    suites: tuple[str, ...] = ()
    seed: int = 12345
    json_path: str = "results.json"
    csv_path: str = "results.csv"

    def __post_init__(self) -> None:
        if not self.suites:
            self.suites = tuple(SUITE_NAMES)
        if self.points < 4:
            raise ConfigError("grid.points must be at least 4")
        if self.refinements < 1:
            raise ConfigError("grid.refinements must be at least 1")
        if self.preset not in _METRIC_PRESETS:
            raise ConfigError(f"metric.preset must be one of {_METRIC_PRESETS}")
        if not self.kappa > 0:
            raise ConfigError("constants.kappa must be positive")
        for name in self.suites:
            if name not in SUITE_NAMES:
                raise ConfigError(
                    f"unknown suite {name!r}; available: {', '.join(SUITE_NAMES)}"
                )

    @property
    def grid_levels(self) -> tuple[int, ...]:
        return tuple(self.points * 2**i for i in range(self.refinements))

    @classmethod
    def from_mapping(cls, data: dict) -> "ScenarioConfig":
        _reject_unknown(data, _SCHEMA)
        grid = data.get("grid", {})
        metric = data.get("metric", {})
        torsion = data.get("torsion", {})
        constants = data.get("constants", {})
        run = data.get("run", {})
        output = data.get("output", {})
        kwargs = {}
        if "points" in grid:
            kwargs["points"] = grid["points"]
        if "length" in grid:
            kwargs["length"] = float(grid["length"])
        if "refinements" in grid:
            kwargs["refinements"] = grid["refinements"]
        if "preset" in metric:
            kwargs["preset"] = metric["preset"]
        if "amplitude" in metric:
            kwargs["amplitude"] = float(metric["amplitude"])
        if "amplitude" in torsion:
            kwargs["torsion_amplitude"] = float(torsion["amplitude"])
        for key in ("kappa", "k", "varrho"):
            if key in constants:
                kwargs[key] = float(constants[key])
        if "suites" in run:
            suites = run["suites"]
            if not all(isinstance(s, str) for s in suites):
                raise ConfigError("run.suites must be a list of strings")
            kwargs["suites"] = tuple(suites)
        if "seed" in run:
            kwargs["seed"] = run["seed"]
        if "json" in output:
            kwargs["json_path"] = output["json"]
        if "csv" in output:
            kwargs["csv_path"] = output["csv"]
        return cls(**kwargs)


def _reject_unknown(data: dict, schema: dict, prefix: str = "") -> None:
    if not isinstance(data, dict):
        raise ConfigError(f"section {prefix or '<root>'} must be a table/object")
    for key, value in data.items():
        path = f"{prefix}.{key}" if prefix else key
        if key not in schema:
            raise ConfigError(f"unknown configuration key: {path}")
        spec = schema[key]
        if isinstance(spec, dict):
            _reject_unknown(value, spec, path)
        else:
            if isinstance(value, bool) or not isinstance(value, spec):
                names = "/".join(t.__name__ for t in spec)
                raise ConfigError(f"key {path} must have type {names}")


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"configuration file not found: {path}")
    text = path.read_bytes()
    if path.suffix == ".toml":
        try:
            import tomllib  # type: ignore[import-not-found]
        except ModuleNotFoundError:  # pragma: no cover - python < 3.11
            import tomli as tomllib  # type: ignore[import-not-found]
        try:
            data = tomllib.loads(text.decode("utf-8"))
        except Exception as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    elif path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    else:
        raise ConfigError(f"unsupported config extension {path.suffix!r} (use .toml or .json)")
    return ScenarioConfig.from_mapping(data)


# --- check records ------------------------------------------------------------


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    criterion: str  # "max-residual" | "order-at-least" | "order-below"
    tolerance: float
    levels: list[dict]
    order: float | None
    passed: bool
    wall_time: float = 0.0

    def public_dict(self) -> dict:
        d = asdict(self)
        d.pop("wall_time")
        return d


_ORDER_FLOOR = 1e-13


def _convergence_order(coarse: float, fine: float) -> float | None:
    if coarse < _ORDER_FLOOR and fine < _ORDER_FLOOR:
        return None
    if fine <= 0.0:
        return None
    return math.log2(coarse / fine)


def _finish(
    check_id: str,
    anchor: str,
    criterion: str,
    tolerance: float,
    levels: list[dict],
) -> CheckRecord:
    residuals = [lv["residual"] for lv in levels]
    order = None
    if len(residuals) >= 2:
        order = _convergence_order(residuals[0], residuals[-1])
        if order is not None:
            order /= max(1, len(residuals) - 1)
    if criterion == "max-residual":
        passed = max(residuals) <= tolerance
    elif criterion == "order-at-least":
        passed = order is None and max(residuals) <= _ORDER_FLOOR or (
            order is not None and order >= tolerance
        )
    elif criterion == "order-below":
        passed = order is not None and order < tolerance
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    return CheckRecord(check_id, anchor, criterion, tolerance, levels, order, passed)


# --- deterministic smooth test fields -----------------------------------------


def _smooth_field(
    rng: np.random.Generator,
    tail: tuple[int, ...],
    amplitude: float,
    axes: tuple[int, ...] | None = None,
):
    """A reusable analytic field: grid-independent random waves/phases.

    The returned callable accepts either a grid (evaluating on its
    coordinate mesh) or an explicit array of points ``(..., 4)``.  When
    ``axes`` is given the field varies only along those coordinate axes,
    so refinement studies can concentrate resolution there.
    """
    waves = rng.integers(-1, 2, size=tail + (4,))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=tail)
    amps = amplitude * rng.uniform(0.5, 1.0, size=tail)
    if axes is not None:
        mask = np.zeros(4)
        mask[list(axes)] = 1.0
        waves = waves * mask

    def at(grid_or_points) -> np.ndarray:
        if isinstance(grid_or_points, lattice.Grid4):
            x = grid_or_points.coordinates()
            lengths = grid_or_points.lengths()
        else:
            x = np.asarray(grid_or_points, dtype=float)
            lengths = (2.0 * np.pi,) * 4
        scale = np.array([2.0 * np.pi / L for L in lengths])
        theta = np.tensordot(x, waves * scale, axes=([-1], [-1]))
        return amps * np.sin(theta + phases)

    return at


def _antisym_pair(arr: np.ndarray, ax1: int, ax2: int) -> np.ndarray:
    return arr - np.swapaxes(arr, ax1, ax2)


def _smooth_contorsion(
    rng: np.random.Generator,
    amplitude: float,
    with_fifth: bool,
    axes: tuple[int, ...] | None = None,
):
    base = _smooth_field(rng, (4, 4, 5), amplitude, axes=axes)

    def at(grid: lattice.Grid4) -> connections.ContorsionForm:
        s = _antisym_pair(base(grid), -3, -2)
        if not with_fifth:
            s[..., 4] = 0.0
        return connections.ContorsionForm(s)

    return at


def _metric_at(cfg: ScenarioConfig, grid: lattice.Grid4) -> lattice.MetricField:
    if cfg.preset == "flat":
        return lattice.metric_preset("flat", grid)
    if cfg.preset == "conformal":
        return lattice.metric_preset("conformal", grid, amplitude=cfg.amplitude)
    return lattice.metric_preset("diagonal-wave", grid)


_COARSE_POINTS = 5


def _grids(cfg: ScenarioConfig, active: tuple[int, int] = (0, 1)) -> list[lattice.Grid4]:
    """Refinement ladder of plane grids.

    Each level refines the two ``active`` axes while the remaining axes
    keep a fixed coarse count; the analytic scenario fields vary only
    along the active axes, so the measured convergence order reflects
    the refined spacing without the cost of a full 4D lattice.
    """
    grids = []
    for n in cfg.grid_levels:
        shape = [_COARSE_POINTS] * 4
        spacing = [cfg.length / _COARSE_POINTS] * 4
        for ax in active:
            shape[ax] = n
            spacing[ax] = cfg.length / n
        grids.append(lattice.make_grid(tuple(shape), tuple(spacing), periodic=True))
    return grids


# --- suites -------------------------------------------------------------------


def _suite_torsion(cfg: ScenarioConfig) -> list[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 1)
    n = 1000
    sym = rng.uniform(-1.0, 1.0, size=(n, 4, 4))
    g = lattice.MINKOWSKI + 0.05 * (sym + np.swapaxes(sym, -1, -2))
    torsion = 0.1 * _antisym_pair(rng.uniform(-1.0, 1.0, size=(n, 4, 4, 4)), -3, -2)

    s = connections.contorsion_from_torsion(torsion, g)
    back = connections.torsion_from_contorsion(s, g)
    r1 = float(np.max(np.abs(back - torsion)))

    s_upper = 0.1 * _antisym_pair(rng.uniform(-1.0, 1.0, size=(n, 4, 4, 5)), -3, -2)
    s_upper[..., 4] = 0.0
    form = connections.ContorsionForm(s_upper)
    t_mid = connections.torsion_from_contorsion(form, g)
    s_back = connections.contorsion_from_torsion(t_mid, g)
    r2 = float(np.max(np.abs(s_back.s_upper - form.s_upper)))

    return [
        _finish(
            "torsion.roundtrip.from-torsion",
            "torsion -> contorsion -> torsion is the identity",
            "max-residual",
            1e-12,
            [{"points": n, "residual": r1}],
        ),
        _finish(
            "torsion.roundtrip.from-contorsion",
            "contorsion -> torsion -> contorsion is the identity",
            "max-residual",
            1e-12,
            [{"points": n, "residual": r2}],
        ),
    ]


def _suite_poincare(cfg: ScenarioConfig) -> list[CheckRecord]:
    fg = algebra.FiveMetric(lattice.MINKOWSKI, cfg.kappa)
    records = []
    for convention in ("with-translation", "rotation-only"):
        gens = algebra.poincare_generators(fg, convention)
        worst = algebra.poincare_algebra_check(gens, fg)
        records.append(
            _finish(
                f"poincare.closure.{convention}",
                "commutators close on the metric combination at a flat point",
                "max-residual",
                1e-12,
                [{"points": 100, "residual": worst}],
            )
        )
    return records


def _suite_curvature(cfg: ScenarioConfig) -> list[CheckRecord]:
    e0, e1 = algebra.E_SLOTS[0], algebra.E_SLOTS[1]
    z01 = algebra.slot_index((0, 1))
    z12 = algebra.slot_index((1, 2))
    mixed, zz, zz_bare, riem, bottom_alg, bottom_zero = [], [], [], [], [], []
    for grid in _grids(cfg):
        metric = _metric_at(cfg, grid)
        gamma = connections.levi_civita(metric)
        conn = connections.bivector_connection_G(metric, gamma, "with-translation")
        npts = grid.shape[0]
        g = metric.g

        blk = curvature.curvature_pair(conn, metric, gamma, z01, e0, "halved")
        mixed.append(
            {"points": npts, "residual": float(np.max(np.abs(blk[..., :4, :4])))}
        )

        blk = curvature.curvature_pair(conn, metric, gamma, z01, z12, "halved")
        zz.append({"points": npts, "residual": float(np.max(np.abs(blk)))})

        bare_zz = curvature.curvature_pair(conn, metric, gamma, z01, z12, None)
        m = {
            pair: algebra.m_matrix_4(pair, g)
            for pair in ((1, 2), (0, 2), (1, 1), (0, 1))
        }
        combo = (
            g[..., 0, 1, None, None] * m[(1, 2)]
            - g[..., 1, 1, None, None] * m[(0, 2)]
            - g[..., 0, 2, None, None] * m[(1, 1)]
            + g[..., 1, 2, None, None] * m[(0, 1)]
        )
        zz_bare.append(
            {
                "points": npts,
                "residual": float(np.max(np.abs(bare_zz[..., :4, :4] - combo))),
            }
        )

        blk = curvature.curvature_pair(conn, metric, gamma, e0, e1, "halved")
        rie = curvature.riemann_tensor(gamma)[..., :, :, 0, 1]
        riem.append(
            {"points": npts, "residual": float(np.max(np.abs(blk[..., :4, :4] - rie)))}
        )

        blk = curvature.curvature_pair(conn, metric, gamma, e0, z01, "halved")
        kap, mu, nu = 0, 0, 1
        display = (
            g[..., kap, mu, None] * g[..., nu, :]
            - g[..., kap, nu, None] * g[..., mu, :]
        )
        bottom_alg.append(
            {"points": npts, "residual": float(np.max(np.abs(blk[..., 4, :4] - display)))}
        )

        bare_ee = curvature.curvature_pair(conn, metric, gamma, e0, e1, None)
        bottom_zero.append(
            {"points": npts, "residual": float(np.max(np.abs(bare_ee[..., 4, :4])))}
        )

    return [
        _finish(
            "curvature.mixed-block.vanishes",
            "mixed direction pairs carry no curvature on four-vector components",
            "max-residual",
            1e-10,
            mixed,
        ),
        _finish(
            "curvature.rotation-block.halved-zero",
            "rotation-rotation curvature vanishes in the halved convention",
            "max-residual",
            1e-10,
            zz,
        ),
        _finish(
            "curvature.rotation-block.bare-display",
            "bare rotation-rotation curvature equals the generator commutator combination",
            "max-residual",
            1e-10,
            zz_bare,
        ),
        _finish(
            "curvature.transport-block.riemann",
            "transport-transport curvature reproduces the Riemann tensor",
            "max-residual",
            1e-10,
            riem,
        ),
        _finish(
            "curvature.bottom-row.metric-display",
            "mixed-block bottom row equals the metric product display",
            "max-residual",
            1e-12,
            bottom_alg,
        ),
        _finish(
            "curvature.bottom-row.transport-zero",
            "bare transport-block bottom row vanishes identically",
            "max-residual",
            1e-12,
            bottom_zero,
        ),
    ]


def _suite_jacobi(cfg: ScenarioConfig) -> list[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 3)
    fields = [_smooth_field(rng, (10,), 0.08, axes=(0, 1)) for _ in range(4)]
    with_defect, without_defect, bianchi = [], [], []
    for grid in _grids(cfg):
        metric = _metric_at(cfg, grid)
        gamma = connections.levi_civita(metric)
        conn = connections.bivector_connection_G(metric, gamma, "with-translation")
        npts = grid.shape[0]
        a, b, c, u = (f(grid) for f in fields)

        # the defect term is additive, so one cyclic sum serves both checks
        cyc = curvature.jacobi_residual(a, b, c, conn, gamma, "halved", include_defect=False)
        defect = curvature.jacobi_defect(a, b, c, curvature.riemann_tensor(gamma))
        with_defect.append({"points": npts, "residual": float(np.max(np.abs(cyc + defect)))})
        without_defect.append({"points": npts, "residual": float(np.max(np.abs(cyc)))})

        res = curvature.bianchi_residual(a, b, c, u, conn, gamma, "halved")
        bianchi.append({"points": npts, "residual": float(np.max(np.abs(res)))})

    flat_grid = _grids(cfg)[0]
    flat_metric = lattice.metric_preset("flat", flat_grid)
    flat_gamma = connections.levi_civita(flat_metric)
    flat_conn = connections.bivector_connection_G(flat_metric, flat_gamma, "with-translation")
    shape = flat_grid.shape + (10,)
    const = [np.broadcast_to(v, shape).copy() for v in np.eye(10)[:4]]
    res = curvature.bianchi_residual(
        const[0], const[1], const[2], const[3], flat_conn, flat_gamma, "halved"
    )
    flat_exact = [{"points": flat_grid.shape[0], "residual": float(np.max(np.abs(res)))}]

    return [
        _finish(
            "jacobi.with-defect.converges",
            "double-commutator cycle plus curvature defect vanishes in refinement",
            "order-at-least",
            1.9,
            with_defect,
        ),
        _finish(
            "jacobi.without-defect.stalls",
            "dropping the defect term destroys convergence (negative control)",
            "order-below",
            1.0,
            without_defect,
        ),
        _finish(
            "bianchi.probe.converges",
            "differential curvature identity on a probe field refines away",
            "order-at-least",
            1.9,
            bianchi,
        ),
        _finish(
            "bianchi.flat.exact",
            "flat constant-direction probe is exactly zero",
            "max-residual",
            1e-11,
            flat_exact,
        ),
    ]


def _suite_gravity(cfg: ScenarioConfig) -> list[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 4)
    s_at = _smooth_contorsion(rng, cfg.torsion_amplitude, with_fifth=True, axes=(0, 1))
    tmod_div, einstein_div, zero_torsion = [], [], []
    for grid in _grids(cfg):
        metric = _metric_at(cfg, grid)
        npts = grid.shape[0]
        s = s_at(grid)

        res = gravity.identity_tmod_divergence(metric, s)
        tmod_div.append({"points": npts, "residual": float(np.max(np.abs(res)))})

        res = gravity.identity_einstein_divergence(metric, s)
        einstein_div.append({"points": npts, "residual": float(np.max(np.abs(res)))})

        s0 = connections.ContorsionForm.zeros(grid.shape)
        res = gravity.identity_einstein_divergence(metric, s0)
        zero_torsion.append({"points": npts, "residual": float(np.max(np.abs(res)))})

    return [
        _finish(
            "gravity.modified-torsion-divergence",
            "starred divergence of modified torsion matches the mixed-tensor antisymmetrization",
            "max-residual",
            1e-12,
            tmod_div,
        ),
        _finish(
            "gravity.einstein-divergence",
            "starred divergence of the mixed tensor matches its curvature-torsion source",
            "order-at-least",
            1.9,
            einstein_div,
        ),
        _finish(
            "gravity.zero-torsion.contracted-bianchi",
            "with zero torsion the identity reduces to the contracted differential identity",
            "order-at-least",
            1.9,
            zero_torsion,
        ),
    ]


def _suite_fieldeq(cfg: ScenarioConfig) -> list[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 5)
    s_at = _smooth_contorsion(rng, cfg.torsion_amplitude, with_fifth=True)
    constants = gravity.Constants(k=cfg.k, kappa=cfg.kappa, varrho=cfg.varrho)
    grid = _grids(cfg)[0]
    metric = _metric_at(cfg, grid)
    s = s_at(grid)

    zero = gravity.MatterSources(
        theta=np.zeros(grid.shape + (4, 4)),
        spin=np.zeros(grid.shape + (4, 4, 4)),
        xi=np.zeros(grid.shape + (4, 4)),
    )
    base = gravity.field_equation_residuals(metric, s, zero, constants)
    h55 = constants.h55
    theta = -base["y_stress"] / constants.k
    spin = base["y_spin"] / constants.k
    xi = base["y_s5"] / (constants.k * math.sqrt(h55))
    xi = 0.5 * _antisym_pair(xi, -1, -2)
    sources = gravity.MatterSources(
        theta=theta, spin=spin, xi=xi
    )
    res = gravity.field_equation_residuals(metric, s, sources, constants)
    worst = max(
        float(np.max(np.abs(res[key])))
        for key in ("stress", "spin", "s5", "y_stress", "y_spin", "y_s5", "unified")
    )
    manufactured = [{"points": grid.shape[0], "residual": worst}]

    n = 400
    spin_r = 0.1 * _antisym_pair(rng.uniform(-1.0, 1.0, size=(n, 4, 4, 4)), -1, -2)
    torsion = gravity.kibble_sciama_solve(spin_r, cfg.k)
    ks_res = gravity.kibble_sciama_residual(torsion, spin_r, cfg.k)
    roundtrip = [{"points": n, "residual": float(np.max(np.abs(ks_res)))}]

    return [
        _finish(
            "fieldeq.manufactured.exact",
            "sources built from the geometry satisfy every field equation",
            "max-residual",
            1e-12,
            manufactured,
        ),
        _finish(
            "fieldeq.spin-torsion.closed-form",
            "closed-form torsion from spin satisfies the algebraic spin equation",
            "max-residual",
            1e-12,
            roundtrip,
        ),
    ]


def _suite_gauge(cfg: ScenarioConfig) -> list[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 6)
    c_at = _smooth_field(rng, (2, 2, 10), 0.1, axes=(0, 1))
    lam_at = _smooth_field(rng, (2, 2), 0.2, axes=(0, 1))
    psi_at = _smooth_field(rng, (2,), 0.5, axes=(0, 1))
    dirs = [_smooth_field(rng, (5,), 0.3, axes=(0, 1)) for _ in range(3)]
    psi1_at = _smooth_field(rng, (1,), 0.5, axes=(0, 1))
    b1_at = _smooth_field(rng, (1, 1, 5), 0.2, axes=(0, 1))
    covariance, df_ab, df_nonab = [], [], []
    for grid in _grids(cfg):
        metric = lattice.metric_preset("flat", grid)
        gamma = connections.levi_civita(metric)
        npts = grid.shape[0]

        conn = gauge.GaugeConnection(c_at(grid), grid)
        lam = np.broadcast_to(np.eye(2), grid.shape + (2, 2)) + lam_at(grid)
        transformed = gauge.gauge_transform(conn, lam)
        f_orig = gauge.gauge_field_strength(conn, metric, gamma)
        f_new = gauge.gauge_field_strength(transformed, metric, gamma)
        lam_inv = np.linalg.inv(lam)
        conjugated = np.einsum("...ik,...ABkl,...lj->...ABij", lam_inv, f_orig, lam)
        covariance.append(
            {"points": npts, "residual": float(np.max(np.abs(f_new - conjugated)))}
        )

        u, v, w = (d(grid) for d in dirs)
        res = gauge.df_zero_check(psi1_at(grid), u, v, w, b1_at(grid), grid)
        df_ab.append({"points": npts, "residual": float(np.max(np.abs(res)))})

        b2 = gauge.five_gauge_from_bivector(conn, _smooth_contorsion_for_gauge(grid))
        res = gauge.df_zero_check(psi_at(grid), u, v, w, b2, grid)
        df_nonab.append({"points": npts, "residual": float(np.max(np.abs(res)))})

    return [
        _finish(
            "gauge.strength.covariance",
            "field strength conjugates under bundle transformations",
            "order-at-least",
            1.9,
            covariance,
        ),
        _finish(
            "gauge.closure.abelian",
            "cyclic derivative probe of the strength vanishes in refinement (one-dimensional bundle)",
            "order-at-least",
            1.9,
            df_ab,
        ),
        _finish(
            "gauge.closure.nonabelian",
            "cyclic derivative probe of the strength vanishes in refinement (two-dimensional bundle)",
            "order-at-least",
            1.9,
            df_nonab,
        ),
    ]


def _smooth_contorsion_for_gauge(grid):
    s_at = _smooth_contorsion(
        np.random.default_rng(777), 0.05, with_fifth=True, axes=(0, 1)
    )
    return s_at(grid)


def _suite_electro(cfg: ScenarioConfig) -> list[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 7)
    kappa = cfg.kappa
    records = []

    spec = electro.dispersion_spectrum(kappa)
    masses = [b.mass_squared for b in spec.branches]
    target_masses = sorted([0.0, 10.0 * kappa**2, 6.0 * kappa**2])
    worst = max(abs(m - t) for m, t in zip(masses, target_masses))
    by_mass = {round(b.mass_squared / kappa**2): b for b in spec.branches}
    worst = max(worst, abs(by_mass[0].amplitude_ratio - 2.0 / (3.0 * kappa)))
    worst = max(worst, abs(by_mass[10].amplitude_ratio - 1.0 / (4.0 * kappa)))
    if by_mass[6].amplitude_ratio is not None:
        worst = max(worst, 1.0)
    if spec.total_multiplicity != 10:
        worst = max(worst, 1.0)
    records.append(
        _finish(
            "ed.dispersion.branches",
            "exact branch masses, multiplicities and amplitude ratios",
            "max-residual",
            1e-12,
            [{"points": 10, "residual": worst}],
        )
    )

    a_at = _smooth_field(rng, (4,), 0.2)
    e_at = _smooth_field(rng, (4, 4), 0.2)
    expansion = []
    # the decomposition is algebraic in the lattice values, so one grid
    # exercises it fully
    for grid in _grids(cfg)[:1]:
        a = a_at(grid)
        e = _antisym_pair(e_at(grid), -1, -2)
        res = _invariant_expansion_residual(a, e, grid, kappa)
        expansion.append({"points": grid.shape[0], "residual": res})
    records.append(
        _finish(
            "ed.invariants.expansion",
            "quadratic invariants decompose into the five canonical scalars",
            "max-residual",
            1e-9,
            expansion,
        )
    )

    plane = []
    for grid in _grids(cfg, active=(0, 3)):
        n = grid.shape[0]
        x = grid.coordinates()
        # lattice-commensurate null wave: the discrete second differences
        # along the two equally spaced axes cancel exactly, and the mass
        # terms cancel algebraically, so the residual is pure roundoff
        wavenum = 2.0 * np.pi / cfg.length
        phase = wavenum * (x[..., 0] - x[..., 3])
        amp = 0.1
        a = np.zeros(grid.shape + (4,))
        a[..., 1] = amp * np.cos(phase)
        f = electro.field_strength_4(a, grid)
        e = (2.0 / (3.0 * kappa)) * f
        state = electro.EMState(kappa=kappa, a=a, e=e, grid=grid)
        res_f, res_e = electro.vacuum_residual(state)
        worst = max(float(np.max(np.abs(res_f))), float(np.max(np.abs(res_e))))
        plane.append({"points": n, "residual": worst / amp})
    records.append(
        _finish(
            "ed.vacuum.massless-wave",
            "a massless travelling wave satisfies both equations to roundoff",
            "max-residual",
            1e-10,
            plane,
        )
    )

    npoints = 64
    ev = electro.Evolver1D(npoints=npoints, length=cfg.length, kappa=kappa)
    target = math.sqrt(10.0) * kappa
    a0 = np.zeros((npoints, 4))
    e0 = np.zeros((npoints, 4, 4))
    at0 = np.zeros((npoints, 4))
    et0 = np.zeros((npoints, 4, 4))
    e0[:, 0, 1] = 1.0
    e0[:, 1, 0] = -1.0
    at0[:, 1] = 4.0 * kappa
    state = electro.EvolverState(a=a0, e=e0, a_t=at0, e_t=et0, kappa=kappa, length=cfg.length)
    dt = 0.8 * ev.spacing
    period = 2.0 * np.pi / target
    steps = int(40 * period / dt)
    result = ev.run(state, dt, steps, probe_modes=(0,))
    measured = electro.measure_frequency(result.probe_series[0][:, 4], result.dt)
    rel = abs(measured - target) / target
    records.append(
        _finish(
            "ed.evolver.massive-frequency",
            "measured oscillation frequency matches the massive branch within 1%",
            "max-residual",
            1e-2,
            [{"points": npoints, "residual": rel}],
        )
    )
    return records


def _invariant_expansion_residual(a, e, grid, kappa):
    f_slots = electro.em_strength_components(a, e, grid)
    fg = algebra.FiveMetric(lattice.MINKOWSKI, kappa)
    i1, i2 = electro.scalar_invariants(f_slots, fg)

    eta = lattice.MINKOWSKI
    f4 = electro.field_strength_4(a, grid)
    de = np.stack([lattice.partial_derivative(e, m, grid) for m in range(4)], axis=-3)
    c_div = np.einsum("aw,...wab->...b", np.diag([1.0, -1.0, -1.0, -1.0]), de)

    def sq2(x):
        return np.einsum("...ab,aw,bv,...wv->...", x, eta, eta, x)

    ff = sq2(f4)
    ee = sq2(e)
    fe = np.einsum("...ab,aw,bv,...wv->...", f4, eta, eta, e)
    dede = np.einsum(
        "...mab,mu,aw,bv,...uwv->...", de, eta, eta, eta, de, optimize=True
    )
    cc = np.einsum("...a,ab,...b->...", c_div, eta, c_div)

    ki = 1.0 / kappa**2
    lhs1 = 4.0 * ki * ki * ff + 4.0 * ki * dede + 8.0 * ee
    lhs2 = -ki * ki * ff - 2.0 * ki * cc + 4.0 * ki * fe - 4.0 * ee
    scale = max(1.0, float(np.max(np.abs(i1))), float(np.max(np.abs(i2))))
    return float(
        max(np.max(np.abs(i1 - lhs1)), np.max(np.abs(i2 - lhs2))) / scale
    )


def _suite_integration(cfg: ScenarioConfig) -> list[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 8)
    s_comp = _smooth_field(rng, (4, 4, 5), 0.1)
    n1_at = _smooth_field(rng, (10,), 0.5)
    n3_comp = _smooth_field(rng, (10, 10, 10), 0.3)

    def s_at(x):
        return _antisym_pair(s_comp(x), -3, -2)

    def n3_at(x):
        return _antisym_last3(n3_comp(x))

    def embed(lam):
        lam = np.asarray(lam, dtype=float)[..., 0]
        out = np.empty(lam.shape + (4,))
        out[..., 0] = lam
        out[..., 1] = 0.3 * np.sin(lam)
        out[..., 2] = 0.2 * np.cos(lam)
        out[..., 3] = 0.1 * lam
        return out

    curve = integration.ParametrizedSurface.from_embedding(1, ((0.0, 1.0),), embed)

    def embed_shift(lam):
        lam = np.asarray(lam, dtype=float)
        return embed(2.0 * lam - 0.5)

    curve2 = integration.ParametrizedSurface.from_embedding(1, ((0.25, 0.75),), embed_shift)

    i_a = integration.integral_first_kind(curve, n1_at, s_at, subdivisions=64)
    i_b = integration.integral_first_kind(curve2, n1_at, s_at, subdivisions=64)
    reparam = [{"points": 64, "residual": abs(i_a - i_b) / max(1.0, abs(i_a))}]

    dual = [
        {
            "points": 64,
            "residual": integration.duality_residual(curve, n1_at, s_at, subdivisions=64),
        }
    ]

    box = ((0.0, 0.8),) * 4
    stokes = []
    for sub in (4, 8):
        report = integration.stokes_residual(box, n3_at, s_at, subdivisions=sub)
        stokes.append({"points": sub, "residual": report.residual})

    return [
        _finish(
            "integration.reparametrization",
            "affine reparametrization leaves the first-kind integral unchanged",
            "max-residual",
            1e-10,
            reparam,
        ),
        _finish(
            "integration.duality",
            "the dual-route integral matches the direct pairing",
            "max-residual",
            1e-10,
            dual,
        ),
        _finish(
            "integration.stokes",
            "boundary sum matches the volume divergence under quadrature refinement",
            "order-at-least",
            1.9,
            stokes,
        ),
    ]


def _antisym_last3(arr: np.ndarray) -> np.ndarray:
    """Total antisymmetrization over the last three axes."""
    out = np.zeros_like(arr)
    base = list(range(arr.ndim))
    for perm in permutations((0, 1, 2)):
        sign = 1.0 if perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1.0
        axes = base[:-3] + [base[-3 + p] for p in perm]
        out += sign * np.transpose(arr, axes)
    return out / 6.0


SUITES = {
    "torsion-bijection": _suite_torsion,
    "poincare-algebra": _suite_poincare,
    "curvature-family": _suite_curvature,
    "jacobi-bianchi": _suite_jacobi,
    "gravity-identities": _suite_gravity,
    "field-equations": _suite_fieldeq,
    "gauge": _suite_gauge,
    "electrodynamics": _suite_electro,
    "adjoint-integration": _suite_integration,
}

SUITE_NAMES = tuple(SUITES)


# --- runners and rendering ------------------------------------------------------


def run_suites(cfg: ScenarioConfig) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    for name in cfg.suites:
        for record in _timed_suite(name, cfg):
            records.append(record)
    return records


def _timed_suite(name: str, cfg: ScenarioConfig) -> list[CheckRecord]:
    start = time.perf_counter()
    records = SUITES[name](cfg)
    elapsed = time.perf_counter() - start
    share = elapsed / max(1, len(records))
    for record in records:
        record.wall_time = share
    return records


def render_table(records: list[CheckRecord], file=None) -> None:
    out = file or sys.stdout
    width = max((len(r.check_id) for r in records), default=10) + 2
    for r in records:
        worst = max(lv["residual"] for lv in r.levels)
        order = "-" if r.order is None else f"{r.order:5.2f}"
        status = "PASS" if r.passed else "FAIL"
        print(
            f"[{status}] {r.check_id:<{width}} worst={worst:10.3e}  order={order}"
            f"  ({r.wall_time:6.2f}s)  {r.anchor}",
            file=out,
        )
    total = len(records)
    passed = sum(r.passed for r in records)
    print(f"{passed}/{total} checks passed", file=out)


def write_json(records: list[CheckRecord], cfg: ScenarioConfig, path: str | Path) -> None:
    payload = {
        "scenario": {
            "points": cfg.points,
            "length": cfg.length,
            "refinements": cfg.refinements,
            "preset": cfg.preset,
            "amplitude": cfg.amplitude,
            "torsion_amplitude": cfg.torsion_amplitude,
            "kappa": cfg.kappa,
            "k": cfg.k,
            "varrho": cfg.varrho,
            "seed": cfg.seed,
            "suites": list(cfg.suites),
        },
        "checks": [r.public_dict() for r in records],
        "summary": {
            "total": len(records),
            "passed": sum(r.passed for r in records),
            "failed": sum(not r.passed for r in records),
        },
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def write_csv(records: list[CheckRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["check_id", "anchor", "level", "points", "residual", "order", "tolerance", "passed"]
        )
        for r in records:
            for level, lv in enumerate(r.levels):
                writer.writerow(
                    [
                        r.check_id,
                        r.anchor,
                        level,
                        lv["points"],
                        f"{lv['residual']:.16e}",
                        "" if r.order is None else f"{r.order:.6f}",
                        f"{r.tolerance:g}",
                        "true" if r.passed else "false",
                    ]
                )


# --- subcommands -----------------------------------------------------------------


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = ScenarioConfig()
    if args.suite:
        for name in args.suite:
            if name not in SUITE_NAMES:
                raise ConfigError(
                    f"unknown suite {name!r}; available: {', '.join(SUITE_NAMES)}"
                )
        cfg.suites = tuple(args.suite)
    records = run_suites(cfg)
    render_table(records)
    json_path = args.json if args.json else cfg.json_path
    csv_path = args.csv if args.csv else cfg.csv_path
    if json_path:
        write_json(records, cfg, json_path)
    if csv_path:
        write_csv(records, csv_path)
    return 0 if all(r.passed for r in records) else 1


def _cmd_dispersion(args: argparse.Namespace) -> int:
    spec = electro.dispersion_spectrum(args.kappa)
    print(f"kappa = {args.kappa:g}; determinant leading sign {spec.det_leading:+g}")
    print(f"{'mass^2':>12}  {'multiplicity':>12}  {'ratio':>12}")
    for b in spec.branches:
        ratio = "-" if b.amplitude_ratio is None else f"{b.amplitude_ratio:12.6g}"
        print(f"{b.mass_squared:12.6g}  {b.multiplicity:12d}  {ratio}")
    if args.kvec is not None:
        k2 = sum(v * v for v in args.kvec)
        omegas = spec.omega_squared(tuple(args.kvec))
        print(f"with |k|^2 = {k2:g}: omega^2 = " + ", ".join(f"{w:g}" for w in omegas))
    if args.json:
        payload = {
            "kappa": args.kappa,
            "branches": [
                {
                    "mass_squared": b.mass_squared,
                    "multiplicity": b.multiplicity,
                    "amplitude_ratio": b.amplitude_ratio,
                }
                for b in spec.branches
            ],
        }
        Path(args.json).write_text(
            json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n",
            encoding="utf-8",
        )
    return 0


_BRANCH_SETUPS = {
    "massive": {"target": lambda kappa: math.sqrt(10.0) * kappa, "component": 4},
    "tensor": {"target": lambda kappa: math.sqrt(6.0) * kappa, "component": 7},
}


def _cmd_evolve(args: argparse.Namespace) -> int:
    kappa = args.kappa
    npoints = args.points
    setup = _BRANCH_SETUPS[args.branch]
    a0 = np.zeros((npoints, 4))
    e0 = np.zeros((npoints, 4, 4))
    at0 = np.zeros((npoints, 4))
    et0 = np.zeros((npoints, 4, 4))
    if args.branch == "massive":
        e0[:, 0, 1] = 1.0
        e0[:, 1, 0] = -1.0
        at0[:, 1] = 4.0 * kappa
    else:
        e0[:, 1, 2] = 1.0
        e0[:, 2, 1] = -1.0
    state = electro.EvolverState(
        a=a0, e=e0, a_t=at0, e_t=et0, kappa=kappa, length=2.0 * math.pi
    )
    ev = electro.Evolver1D(npoints=npoints, length=2.0 * math.pi, kappa=kappa)
    dt = args.dt if args.dt else 0.8 * ev.spacing
    target = setup["target"](kappa)
    steps = args.steps if args.steps else int(40.0 * (2.0 * np.pi / target) / dt)
    result = ev.run(state, dt, steps, probe_modes=(0,))
    series = result.probe_series[0][:, setup["component"]]
    measured = electro.measure_frequency(series, result.dt)
    rel = abs(measured - target) / target
    drift = float(np.max(np.abs(result.energy - result.energy[0]))) / max(
        1e-300, abs(result.energy[0])
    )
    print(f"branch {args.branch}: predicted omega = {target:.9g}")
    print(f"measured omega = {measured:.9g} (relative error {rel:.3e})")
    print(f"oscillator-energy drift over the run: {drift:.3e}")
    ok = rel <= 0.01
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_report(args: argparse.Namespace) -> int:
    path = Path(args.input)
    if not path.exists():
        raise ConfigError(f"report input not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON report: {exc}") from exc
    records = [
        CheckRecord(
            check_id=c["check_id"],
            anchor=c["anchor"],
            criterion=c["criterion"],
            tolerance=c["tolerance"],
            levels=c["levels"],
            order=c["order"],
            passed=c["passed"],
        )
        for c in payload.get("checks", [])
    ]
    if not records:
        raise ConfigError("report contains no checks")
    render_table(records)
    return 0 if all(r.passed for r in records) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fivevec",
        description="verification harness for the five-vector field toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run check suites against analytic scenarios")
    p_verify.add_argument("--config", help="TOML or JSON scenario file")
    p_verify.add_argument(
        "--suite",
        action="append",
        help="run only this suite (repeatable); default: all",
    )
    p_verify.add_argument("--json", help="override the JSON report path")
    p_verify.add_argument("--csv", help="override the CSV report path")
    p_verify.set_defaults(func=_cmd_verify)

    p_disp = sub.add_parser("dispersion", help="print the exact mode spectrum")
    p_disp.add_argument("--kappa", type=float, default=1.0)
    p_disp.add_argument(
        "--kvec", type=float, nargs=3, metavar=("KX", "KY", "KZ"), default=None
    )
    p_disp.add_argument("--json", help="also write the spectrum as JSON")
    p_disp.set_defaults(func=_cmd_dispersion)

    p_ev = sub.add_parser("evolve", help="run the 1+1D evolver on one branch")
    p_ev.add_argument("--branch", choices=tuple(_BRANCH_SETUPS), default="massive")
    p_ev.add_argument("--points", type=int, default=256)
    p_ev.add_argument("--kappa", type=float, default=1.0)
    p_ev.add_argument("--dt", type=float, default=None)
    p_ev.add_argument("--steps", type=int, default=None)
    p_ev.set_defaults(func=_cmd_evolve)

    p_rep = sub.add_parser("report", help="render a previously written JSON report")
    p_rep.add_argument("--input", required=True)
    p_rep.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
