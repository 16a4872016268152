"""
Experiment runners behind the ``hqdisk`` command.

Each ``cmd_*`` function runs one experiment end to end and returns an
ExperimentReport holding its records, the checks it asserted and the
artifacts it wrote. Reports serialize to CSV (records) and JSON (records,
summary, checks and the echoed configuration); neither carries timestamps, so
identical configurations produce identical bytes.
"""

import json
import logging
import math
import os
import re
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config.lift_catalog import LiftCatalog, lift_catalog
from hqdisk.boundary_maps import (
    TAU,
    Verdict,
    check_membership,
    convex_combination,
    example3_unit,
    make_example3,
    uniform_angles,
)
from hqdisk.cantor import cantor_oracle, phi_cantor, phi_n, smoothstep_iterate, sup_distance_to_cantor
from hqdisk.errors import DomainError
from hqdisk.hilbert import Kernel, PVConfig, hilbert_at, kernel_gap, sample_points
from hqdisk.poisson import HarmonicExtension, QuadratureConfig, extend, grid_sup_distance, sup_distance
from hqdisk.qc_analysis import density_witness, dilatation_field, distortion_grows, pavlovic_verdict
from hqdisk.render import Panel, SvgFigure

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.15g"
RATIO_BAND = (0.4, 0.6)
SUP_TOLERANCE = 1e-6
LIPSCHITZ_SLACK = 1e-9
RANGE_TOLERANCE = 1e-6

DEFAULT_GENERATORS = ("identity", "phi_n:0", "phi_n:1", "phi_n:2", "phi_n:3", "phi_n:4", "mobius:0.3")
RENDER_SAMPLES = 256
RENDER_RAYS = 24
RENDER_GRID_LINES = 21


def _jsonable(value):
    """Plain-JSON copy of a report value; non-finite floats become strings or null"""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, complex):
        return [_jsonable(value.real), _jsonable(value.imag)]
    return value


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    # findings are reported but do not decide the exit status
    required: bool = True


@dataclass
class ExperimentReport:
    experiment: str
    parameters: dict
    records: List[dict] = field(default_factory=list)
    columns: Optional[List[str]] = None
    summary: dict = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    artifacts: List[str] = field(default_factory=list)
    table: Optional[pd.DataFrame] = None

    def check(self, name: str, passed, detail: str = "", required: bool = True) -> bool:
        passed = bool(passed)
        self.checks.append(Check(name, passed, detail, required))
        log = logger.info if passed or not required else logger.warning
        log(f"[{self.experiment}] {name}: {'PASS' if passed else 'FAIL'} {detail}".rstrip())
        return passed

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.required)

    @property
    def failed_checks(self) -> List[Check]:
        return [c for c in self.checks if c.required and not c.passed]

    def to_frame(self) -> pd.DataFrame:
        if self.table is not None:
            return self.table
        return pd.DataFrame(self.records, columns=self.columns)

    def to_dict(self) -> dict:
        return _jsonable({
            "experiment": self.experiment,
            "parameters": self.parameters,
            "records": self.records,
            "summary": self.summary,
            "checks": [asdict(c) for c in self.checks],
            "passed": self.passed,
            "artifacts": [os.path.basename(p) for p in self.artifacts],
        })

    def write(self, out_dir: str, fmt: str = "csv") -> List[str]:
        """Write <experiment>.json, plus <experiment>.csv for the csv format"""
        os.makedirs(out_dir, exist_ok=True)
        stem = os.path.join(out_dir, self.experiment)
        report_files = {f"{self.experiment}.csv", f"{self.experiment}.json"}
        # Figures stay; report files from an earlier write are replaced
        self.artifacts = [p for p in self.artifacts if os.path.basename(p) not in report_files]
        written = []
        if fmt == "csv":
            csv_path = f"{stem}.csv"
            self.to_frame().to_csv(csv_path, index=False, float_format=CSV_FLOAT_FORMAT)
            written.append(csv_path)
        json_path = f"{stem}.json"
        written.append(json_path)
        self.artifacts.extend(written)
        with open(json_path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True, allow_nan=False)
            f.write("\n")
        logger.info(f"Wrote {', '.join(written)}")
        return written


def config_echo(cfg: QuadratureConfig, pv: Optional[PVConfig] = None, **extra) -> dict:
    echo = {"quadrature": asdict(cfg)}
    if pv is not None:
        echo["pv"] = asdict(pv)
    echo.update(extra)
    return _jsonable(echo)


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.+-]", "_", name)


def _in_band(ratio: float, band=RATIO_BAND) -> bool:
    return band[0] <= ratio <= band[1]


# ---------------------------------------------------------------------------
# render
# ---------------------------------------------------------------------------

def render_curves(r_max: float, samples: int = RENDER_SAMPLES) -> List[dict]:
    """Concentric circles, radial rays and a Euclidean grid clipped to |z| <= r_max"""
    curves = []
    theta = TAU * np.arange(samples + 1) / samples
    for k in range(1, 10):
        radius = 0.1 * k
        if radius <= r_max:
            curves.append({"family": "circle", "index": k, "parameter": radius, "z": radius * np.exp(1j * theta)})
    radial = np.linspace(0.0, r_max, samples)
    for k in range(RENDER_RAYS):
        angle = TAU * k / RENDER_RAYS
        curves.append({"family": "ray", "index": k, "parameter": angle, "z": radial * np.exp(1j * angle)})
    for k in range(RENDER_GRID_LINES):
        c = -1.0 + 2.0 * k / (RENDER_GRID_LINES - 1)
        half = math.sqrt(max(r_max ** 2 - c ** 2, 0.0))
        if half <= 0.0:
            continue
        s = np.linspace(-half, half, samples)
        curves.append({"family": "grid_vertical", "index": k, "parameter": c, "z": c + 1j * s})
        curves.append({"family": "grid_horizontal", "index": k, "parameter": c, "z": s + 1j * c})
    return curves


def cmd_render(boundary: str, out: str, cfg: Optional[QuadratureConfig] = None,
               catalog: Optional[LiftCatalog] = None) -> ExperimentReport:
    """Images under PT[γ] of circles, rays and a grid, drawn next to their preimages"""
    cfg = cfg or QuadratureConfig()
    catalog = catalog or lift_catalog
    lift = catalog.build(boundary)
    h = HarmonicExtension.of(lift, cfg)
    report = ExperimentReport(f"render_{_slug(boundary)}", config_echo(cfg, boundary=boundary),
                              columns=["family", "index", "parameter", "samples", "max_abs_w", "radial_deviation"])

    curves = render_curves(cfg.r_max)
    sizes = [len(c["z"]) for c in curves]
    images = np.split(extend(h, np.concatenate([c["z"] for c in curves])), np.cumsum(sizes)[:-1])

    preimage = Panel("preimage")
    image = Panel(f"image under PT[{boundary}]")
    css = {"circle": "circle", "ray": "ray", "grid_vertical": "grid", "grid_horizontal": "grid"}
    max_abs = 0.0
    identity_deviation = 0.0
    for curve, w in zip(curves, images):
        modulus = np.abs(w)
        deviation = float(modulus.max() - modulus.min())
        max_abs = max(max_abs, float(modulus.max()))
        if curve["family"] == "circle":
            identity_deviation = max(identity_deviation, float(np.max(np.abs(modulus - curve["parameter"]))))
        report.records.append({
            "family": curve["family"], "index": curve["index"], "parameter": float(curve["parameter"]),
            "samples": len(w), "max_abs_w": float(modulus.max()), "radial_deviation": deviation,
        })
        preimage.add_curve(curve["z"], css[curve["family"]])
        image.add_curve(w, css[curve["family"]])

    report.check("range_confinement", max_abs <= 1.0 + RANGE_TOLERANCE, f"max |w| = {max_abs:.12g}")
    if boundary == "identity":
        report.check("circles_to_circles", identity_deviation <= RANGE_TOLERANCE,
                     f"max radial deviation {identity_deviation:.3g}")
    report.summary["max_abs_w"] = max_abs
    report.summary["polylines"] = len(curves)

    svg_path = os.path.join(out, f"{report.experiment}.svg")
    SvgFigure([preimage, image]).write(svg_path)
    report.artifacts.append(svg_path)
    return report


# ---------------------------------------------------------------------------
# incompleteness
# ---------------------------------------------------------------------------

def cmd_incompleteness(n_max: int = 6, cfg: Optional[QuadratureConfig] = None, pv: Optional[PVConfig] = None,
                       mesh: int = 4096, radius: float = 0.95, angles: int = 1024,
                       progress_callback: Optional[Callable[[int, int], None]] = None) -> ExperimentReport:
    """φ_n → φ_C: members converging uniformly to a non-member"""
    if int(n_max) != n_max or not 0 <= n_max <= 12:
        raise DomainError(f"n_max must be an integer in [0, 12], got {n_max}")
    n_max = int(n_max)
    cfg = cfg or QuadratureConfig()
    pv = pv or PVConfig()
    report = ExperimentReport("incompleteness",
                              config_echo(cfg, pv, n_max=n_max, mesh=mesh, radius=radius, angles=angles),
                              columns=["n", "lift_dist", "sup_dist", "K_max", "verdict"])

    limit = phi_cantor()
    h_limit = HarmonicExtension.of(limit, cfg)
    t = uniform_angles(mesh)
    limit_values = limit(t)
    total = n_max + 1
    for n in range(total):
        logger.info(f"Processing phi_n:{n} ({n + 1} of {total})")
        lift = phi_n(n)
        h = HarmonicExtension.of(lift, cfg)
        lift_dist = float(np.max(np.abs(lift(t) - limit_values)))
        sup_dist = sup_distance(h, h_limit, samples=mesh).chord
        membership = check_membership(lift, cfg, pv)
        k_max = dilatation_field(h, [radius], angles).K_max
        report.records.append({"n": n, "lift_dist": lift_dist, "sup_dist": sup_dist,
                               "K_max": k_max, "verdict": membership.verdict.value})
        if progress_callback:
            progress_callback(n + 1, total)

    rows = report.records
    report.check("sup_dist_bounded_by_lift_dist",
                 all(r["sup_dist"] <= r["lift_dist"] + SUP_TOLERANCE for r in rows))
    report.check("all_members", all(r["verdict"] == Verdict.MEMBER.value for r in rows),
                 ", ".join(f"{r['n']}:{r['verdict']}" for r in rows))
    lift_ratios = [b["lift_dist"] / a["lift_dist"] for a, b in zip(rows, rows[1:])]
    sup_ratios = [b["sup_dist"] / a["sup_dist"] for a, b in zip(rows, rows[1:])]
    report.check("lift_dist_contraction", all(_in_band(q) for q in lift_ratios),
                 " ".join(f"{q:.4f}" for q in lift_ratios))
    report.check("sup_dist_contraction", all(_in_band(q) for q in sup_ratios),
                 " ".join(f"{q:.4f}" for q in sup_ratios))
    k_values = [r["K_max"] for r in rows]
    report.check("K_max_increasing", all(b > a for a, b in zip(k_values, k_values[1:])),
                 " ".join(f"{k:.4g}" for k in k_values), required=False)
    if n_max > 0:
        growth = k_values[-1] / k_values[0]
        report.check("K_max_growth", growth >= 2.0, f"K_max({n_max})/K_max(0) = {growth:.4g}", required=False)
    report.summary.update({"lift_ratios": lift_ratios, "sup_ratios": sup_ratios})
    return report


# ---------------------------------------------------------------------------
# example3
# ---------------------------------------------------------------------------

def cmd_example3(cfg: Optional[QuadratureConfig] = None, pv: Optional[PVConfig] = None,
                 radii: Sequence[float] = (0.5, 0.9, 0.99), angles: int = 1024) -> ExperimentReport:
    """The weak homeomorphism with a flat arc: non-member with growing distortion"""
    cfg = cfg or QuadratureConfig()
    pv = pv or PVConfig()
    radii = [r for r in radii if r <= cfg.r_max]
    if len(radii) < 2:
        raise DomainError(f"need at least two radii within r_max = {cfg.r_max}")
    report = ExperimentReport("example3", config_echo(cfg, pv, radii=radii, angles=angles))

    lift = make_example3()
    membership = check_membership(lift, cfg, pv)
    field_ = dilatation_field(HarmonicExtension.of(lift, cfg), radii, angles)
    report.table = field_.to_frame()
    report.records = field_.summary()
    report.summary["membership"] = membership.to_dict()
    report.summary["unit_values"] = {"1/3": example3_unit(1.0 / 3.0), "3/4": example3_unit(0.75),
                                     "1": example3_unit(1.0)}

    report.check("non_member", membership.verdict is Verdict.NON_MEMBER, "; ".join(membership.reasons))
    report.check("flat_segment", membership.bilipschitz_lower == 0.0,
                 f"L- = {membership.bilipschitz_lower:.3g}")
    report.check("plateau_values",
                 abs(example3_unit(1.0 / 3.0) - 2.0 / 3.0) <= 1e-15 and abs(example3_unit(0.75) - 2.0 / 3.0) <= 1e-15)
    profile = field_.max_mu_by_radius()
    report.check("distortion_growth", distortion_grows(field_),
                 " ".join(f"{r}:{m:.4f}" for r, m in zip(radii, profile)))
    return report


# ---------------------------------------------------------------------------
# convexity
# ---------------------------------------------------------------------------

def cmd_convexity(trials: int = 100, seed: int = 42, cfg: Optional[QuadratureConfig] = None,
                  pv: Optional[PVConfig] = None, catalog: Optional[LiftCatalog] = None,
                  grid_radii: Sequence[float] = (0.25, 0.5, 0.75, 0.9), grid_angles: int = 64,
                  progress_callback: Optional[Callable[[int, int], None]] = None) -> ExperimentReport:
    """Random convex combinations of members stay members; Λ is 1-Lipschitz"""
    if int(trials) != trials or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials}")
    trials = int(trials)
    cfg = cfg or QuadratureConfig()
    pv = pv or PVConfig()
    catalog = catalog or lift_catalog
    names = catalog.get_names_in_group("convexity_generators") or list(DEFAULT_GENERATORS)
    grid_radii = [r for r in grid_radii if r <= cfg.r_max]
    report = ExperimentReport("convexity",
                              config_echo(cfg, pv, trials=trials, seed=seed, generators=names,
                                          grid_radii=grid_radii, grid_angles=grid_angles),
                              columns=["trial", "first", "second", "lam", "verdict", "L_upper",
                                       "L_upper_bound", "grid_sup", "lift_sup"])

    lifts = [catalog.build(name) for name in names]
    extensions = [HarmonicExtension.of(lift, cfg) for lift in lifts]
    memberships: Dict[int, object] = {}
    t = uniform_angles(cfg.mesh)

    def membership_of(index: int):
        if index not in memberships:
            memberships[index] = check_membership(lifts[index], cfg, pv)
        return memberships[index]

    rng = np.random.default_rng(seed)
    for trial in range(trials):
        i, j = (int(k) for k in rng.integers(len(lifts), size=2))
        lam = float(rng.uniform())
        combination = convex_combination(lifts[i], lifts[j], lam)
        combined = check_membership(combination, cfg, pv)
        bound = max(membership_of(i).bilipschitz_upper, membership_of(j).bilipschitz_upper) + LIPSCHITZ_SLACK
        report.records.append({
            "trial": trial, "first": names[i], "second": names[j], "lam": lam,
            "verdict": combined.verdict.value, "L_upper": combined.bilipschitz_upper, "L_upper_bound": bound,
            "grid_sup": grid_sup_distance(extensions[i], extensions[j], grid_radii, grid_angles),
            "lift_sup": float(np.max(np.abs(lifts[i](t) - lifts[j](t)))),
        })
        if progress_callback:
            progress_callback(trial + 1, trials)

    rows = report.records
    report.check("generators_are_members", all(membership_of(i).is_member for i in memberships))
    report.check("combinations_are_members", all(r["verdict"] == Verdict.MEMBER.value for r in rows),
                 f"{sum(r['verdict'] == Verdict.MEMBER.value for r in rows)} of {len(rows)}")
    report.check("lipschitz_constant_bound", all(r["L_upper"] <= r["L_upper_bound"] for r in rows))
    report.check("poisson_contraction", all(r["grid_sup"] <= r["lift_sup"] + SUP_TOLERANCE for r in rows))
    return report


# ---------------------------------------------------------------------------
# hilbert-demo
# ---------------------------------------------------------------------------

def cmd_hilbert_demo(pv: Optional[PVConfig] = None, samples: int = 64, point: float = 0.7) -> ExperimentReport:
    """Conjugate pairs, linearity and the tan-vs-t kernel difference"""
    pv = pv or PVConfig()
    report = ExperimentReport("hilbert_demo", _jsonable({"pv": asdict(pv), "samples": samples, "point": point}),
                              columns=["n", "cos_error", "sin_error"])
    x = sample_points(samples)
    for n in range(1, 9):
        cos_error = float(np.max(np.abs(hilbert_at(lambda s: np.cos(n * s), x, pv) - np.sin(n * x))))
        sin_error = float(np.max(np.abs(hilbert_at(lambda s: np.sin(n * s), x, pv) + np.cos(n * x))))
        report.records.append({"n": n, "cos_error": cos_error, "sin_error": sin_error})
    worst = max(max(r["cos_error"], r["sin_error"]) for r in report.records)
    report.check("conjugate_pairs", worst <= 1e-5, f"max error {worst:.3g}")

    point_value = hilbert_at(np.cos, point, pv)
    report.check("cos_at_point", abs(point_value - math.sin(point)) <= 1e-5,
                 f"H(cos)({point}) = {point_value:.12g}")

    constant = float(np.max(np.abs(hilbert_at(lambda s: np.full_like(s, 2.5), x, pv))))
    report.check("constant_vanishes", constant <= 1e-12, f"{constant:.3g}")

    lam = 0.37

    def g1(s):
        return np.sin(s) + 0.3 * np.cos(3.0 * s)

    def g2(s):
        return np.exp(np.cos(s))

    mixed = hilbert_at(lambda s: lam * g1(s) + (1.0 - lam) * g2(s), x, pv)
    split = lam * hilbert_at(g1, x, pv) + (1.0 - lam) * hilbert_at(g2, x, pv)
    linearity = float(np.max(np.abs(mixed - split)))
    report.check("linearity", linearity <= 1e-9, f"residual {linearity:.3g}")

    gap = kernel_gap(np.cos, point, pv)
    gap_half = kernel_gap(np.cos, point, pv.with_epsilon(0.5 * pv.epsilon))
    change = abs(gap_half - gap) / max(abs(gap), 1e-300)
    report.check("kernel_difference_stable", math.isfinite(gap) and change < 0.01,
                 f"gap {gap:.6g}, relative change {change:.3g} under epsilon halving")
    report.summary.update({"point_value": point_value, "constant": constant, "linearity_residual": linearity,
                           "kernel_gap": gap, "kernel_gap_half_epsilon": gap_half,
                           "canonical_kernel": Kernel.TAN.value})
    return report


# ---------------------------------------------------------------------------
# cantor-plot
# ---------------------------------------------------------------------------

def cmd_cantor_plot(n_values: Sequence[int] = (1, 2, 3, 15), out: Optional[str] = None,
                    samples: int = 1024) -> ExperimentReport:
    """Graphs of ψ_n over [0, 1] together with the Cantor function"""
    report = ExperimentReport("cantor_plot", {"n_values": list(n_values), "samples": samples},
                              columns=["n", "samples", "sup_dist_to_cantor", "monotone"])
    x = np.linspace(0.0, 1.0, samples)
    panel = Panel("psi_n and the Cantor function", bounds=(-0.05, 1.05, -0.05, 1.05), unit_circle=False)
    endpoints_fixed = True
    for n in n_values:
        psi = smoothstep_iterate(n)
        y = psi(x)
        monotone = bool(np.all(np.diff(y) >= -1e-15))
        endpoints_fixed &= abs(psi(0.0)) <= 1e-15 and abs(psi(1.0) - 1.0) <= 1e-15
        report.records.append({"n": int(n), "samples": samples,
                               "sup_dist_to_cantor": sup_distance_to_cantor(psi), "monotone": monotone})
        panel.add_curve(x + 1j * y, "graph")
    panel.add_curve(x + 1j * cantor_oracle(x), "circle")
    report.check("endpoints_fixed", endpoints_fixed)
    report.check("monotone", all(r["monotone"] for r in report.records))
    if out is not None:
        svg_path = os.path.join(out, f"{report.experiment}.svg")
        SvgFigure([panel]).write(svg_path)
        report.artifacts.append(svg_path)
    return report


# ---------------------------------------------------------------------------
# verdict
# ---------------------------------------------------------------------------

def cmd_verdict(boundary: str, cfg: Optional[QuadratureConfig] = None, pv: Optional[PVConfig] = None,
                catalog: Optional[LiftCatalog] = None, radii: Optional[Sequence[float]] = None,
                angles: Optional[int] = None) -> ExperimentReport:
    """Membership and dilatation channels for one named lift"""
    cfg = cfg or QuadratureConfig()
    pv = pv or PVConfig()
    catalog = catalog or lift_catalog
    lift = catalog.build(boundary)
    result = pavlovic_verdict(lift, cfg, pv, radii, angles)
    report = ExperimentReport(f"verdict_{_slug(boundary)}", config_echo(cfg, pv, boundary=boundary),
                              columns=["r", "max_mu", "K_max"])
    report.records = result.dilatation
    report.summary["pavlovic"] = result.to_dict()
    witness = density_witness(lift, [0.5, 0.25, 0.125, 0.0625, 0.03125])
    report.summary["density_witness"] = [{"a": a, "distance": d} for a, d in witness]
    report.check("channels_agree", result.agrees, "; ".join(result.notes))
    distances = [d for _, d in witness]
    report.check("automorphism_orbit_accumulates", all(b < a for a, b in zip(distances, distances[1:])),
                 " ".join(f"{d:.3g}" for d in distances), required=False)
    return report
