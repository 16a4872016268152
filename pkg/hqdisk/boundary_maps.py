"""
Angular lifts of circle maps.

A lift is a nondecreasing function on [0, 2π] gaining exactly 2π over the
interval; it is extended to the real line by φ(t + 2kπ) = φ(t) + 2kπ and
induces the circle map e^{it} ↦ e^{iφ(t)}. This module builds the lifts used
throughout hqdisk, combines them, and checks them against the harmonic
quasiconformality criterion (strict increase, bi-Lipschitz, total increase 2π,
essentially bounded Hilbert transformation of the derivative).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, TYPE_CHECKING

import numpy as np

from hqdisk.errors import DomainError
from hqdisk.hilbert import PVConfig, hilbert_sup

if TYPE_CHECKING:
    from hqdisk.poisson import QuadratureConfig

logger = logging.getLogger(__name__)

TAU = 2.0 * np.pi

# Acceptance band for φ(2π) - φ(0) = 2π
TOTAL_INCREASE_TOL = 1e-9

# Relative change allowed between a sampled quantity and its refined resample
STABILITY_TOL = 0.1

# Numerical differentiation: relative disagreement between the two step sizes
# above which the derivative is reported as too noisy to use
DERIVATIVE_NOISE_TOL = 1e-3
NUMERICAL_DERIVATIVE_STEP = 1e-5

ArrayFn = Callable[[np.ndarray], np.ndarray]


def uniform_angles(n: int) -> np.ndarray:
    """n equispaced angles 2πk/n, k = 0..n-1"""
    return TAU * np.arange(n) / n


def _scalar_or_array(value: np.ndarray, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


@dataclass(frozen=True, eq=False)
class LiftFunction:
    """Angular lift given by closed-form evaluators on [0, 2π]"""

    base: ArrayFn
    base_derivative: Optional[ArrayFn] = None
    breakpoints: Tuple[float, ...] = ()
    name: str = "lift"
    weak_only: bool = False

    def eval(self, t):
        return lift_extend(self, t)

    __call__ = eval

    @property
    def has_derivative(self) -> bool:
        return self.base_derivative is not None

    def derivative_eval(self, t):
        """Periodic derivative φ̃′(t); only available for piecewise-differentiable constructions"""
        if self.base_derivative is None:
            raise DomainError(f"lift {self.name!r} carries no closed-form derivative")
        t_arr = np.asarray(t, dtype=float)
        s = np.mod(t_arr, TAU)
        return _scalar_or_array(np.asarray(self.base_derivative(s), dtype=float), t)

    def total_increase(self) -> float:
        ends = np.asarray(self.base(np.array([0.0, TAU])), dtype=float)
        return float(ends[1] - ends[0])


@dataclass(frozen=True, eq=False)
class BoundaryMap:
    """The circle map γ(e^{it}) = e^{iφ(t)}"""

    lift: LiftFunction
    weak_only: bool = False

    @classmethod
    def from_lift(cls, lift: LiftFunction) -> "BoundaryMap":
        return cls(lift=lift, weak_only=lift.weak_only)

    def __call__(self, t):
        return np.exp(1j * np.asarray(self.lift(t)))

    @property
    def name(self) -> str:
        return self.lift.name


def lift_extend(lift: LiftFunction, t):
    """Evaluate the canonical extension φ(t - 2kπ) + 2kπ with t - 2kπ in [0, 2π)"""
    t_arr = np.asarray(t, dtype=float)
    k = np.floor(t_arr / TAU)
    s = np.clip(t_arr - k * TAU, 0.0, TAU)
    value = np.asarray(lift.base(s), dtype=float) + k * TAU
    return _scalar_or_array(value, t)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def make_identity() -> LiftFunction:
    return LiftFunction(
        base=lambda t: np.asarray(t, dtype=float),
        base_derivative=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        name="identity",
    )


def shift(lift: LiftFunction, alpha: float, name: Optional[str] = None) -> LiftFunction:
    """φ + α: the boundary map followed by a rotation through α"""
    alpha = float(alpha)
    return LiftFunction(
        base=lambda t: np.asarray(lift.base(t), dtype=float) + alpha,
        base_derivative=lift.base_derivative,
        breakpoints=lift.breakpoints,
        name=name or f"{lift.name}+{alpha:g}",
        weak_only=lift.weak_only,
    )


def make_rotation(alpha: float) -> LiftFunction:
    return shift(make_identity(), alpha, name=f"rotation:{float(alpha):g}")


def example3_unit(x):
    """Unit-interval boundary function: 2x, then flat at 2/3, then (4/3)x - 1/3"""
    x_arr = np.asarray(x, dtype=float)
    value = np.where(
        x_arr <= 1.0 / 3.0,
        2.0 * x_arr,
        np.where(x_arr <= 0.75, 2.0 / 3.0, (4.0 / 3.0) * x_arr - 1.0 / 3.0),
    )
    return _scalar_or_array(value, x)


def _example3_unit_derivative(x):
    x_arr = np.asarray(x, dtype=float)
    return np.where(x_arr <= 1.0 / 3.0, 2.0, np.where(x_arr <= 0.75, 0.0, 4.0 / 3.0))


def make_example3() -> LiftFunction:
    """Weak homeomorphism whose harmonic extension is a non-quasiconformal homeomorphism"""
    return LiftFunction(
        base=lambda t: TAU * example3_unit(np.asarray(t, dtype=float) / TAU),
        base_derivative=lambda t: _example3_unit_derivative(np.asarray(t, dtype=float) / TAU),
        breakpoints=(TAU / 3.0, TAU * 0.75),
        name="example3",
        weak_only=True,
    )


def smoothstep(x):
    """ψ₀(x) = 6x⁵ - 15x⁴ + 10x³"""
    x_arr = np.asarray(x, dtype=float)
    return _scalar_or_array(x_arr ** 3 * (x_arr * (6.0 * x_arr - 15.0) + 10.0), x)


def smoothstep_derivative(x):
    """ψ₀′(x) = 30x²(1 - x)²"""
    x_arr = np.asarray(x, dtype=float)
    return _scalar_or_array(30.0 * x_arr ** 2 * (1.0 - x_arr) ** 2, x)


def smoothstep_second_derivative(x):
    """ψ₀″(x) = 60x(2x - 1)(x - 1)"""
    x_arr = np.asarray(x, dtype=float)
    return _scalar_or_array(60.0 * x_arr * (2.0 * x_arr - 1.0) * (x_arr - 1.0), x)


def transfer_unit_map(psi: ArrayFn, psi_derivative: Optional[ArrayFn] = None,
                      name: str = "transfer", breakpoints: Sequence[float] = ()) -> LiftFunction:
    """Lift t ↦ π(ψ(t/2π) + t/2π) of a self-map ψ of [0, 1]"""

    def base(t):
        x = np.clip(np.asarray(t, dtype=float) / TAU, 0.0, 1.0)
        return np.pi * (np.asarray(psi(x), dtype=float) + x)

    derivative = None
    if psi_derivative is not None:
        def derivative(t):
            x = np.clip(np.asarray(t, dtype=float) / TAU, 0.0, 1.0)
            return 0.5 * (np.asarray(psi_derivative(x), dtype=float) + 1.0)

    return LiftFunction(base=base, base_derivative=derivative,
                        breakpoints=tuple(TAU * float(b) for b in breakpoints), name=name)


def make_smoothstep() -> LiftFunction:
    """The lift φ₀ of the quintic smoothstep ψ₀"""
    return transfer_unit_map(smoothstep, smoothstep_derivative, name="smoothstep")


def make_mobius(a: complex) -> LiftFunction:
    """Lift of the boundary trace of the disk automorphism z ↦ (z - a)/(1 - āz)"""
    a = complex(a)
    if not abs(a) < 1.0:
        raise DomainError(f"Möbius parameter must satisfy |a| < 1, got {a}")
    modulus = 1.0 - abs(a) ** 2

    def base(t):
        t = np.asarray(t, dtype=float)
        return t + 2.0 * np.angle(1.0 - a * np.exp(-1j * t))

    def derivative(t):
        t = np.asarray(t, dtype=float)
        return modulus / np.abs(np.exp(1j * t) - a) ** 2

    return LiftFunction(base=base, base_derivative=derivative, name=f"mobius:{a:g}")


def compose(outer: LiftFunction, inner: LiftFunction) -> LiftFunction:
    """Lift of the composed circle map γ_outer ∘ γ_inner"""

    def base(t):
        return np.asarray(lift_extend(outer, lift_extend(inner, np.asarray(t, dtype=float))), dtype=float)

    derivative = None
    if outer.has_derivative and inner.has_derivative:
        def derivative(t):
            t = np.asarray(t, dtype=float)
            return outer.derivative_eval(lift_extend(inner, t)) * inner.derivative_eval(t)

    return LiftFunction(base=base, base_derivative=derivative,
                        name=f"{outer.name}∘{inner.name}",
                        weak_only=outer.weak_only or inner.weak_only)


def convex_combination(phi1: LiftFunction, phi2: LiftFunction, lam: float) -> LiftFunction:
    """λφ₁ + (1 - λ)φ₂"""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"convex weight must lie in [0, 1], got {lam}")
    mu = 1.0 - lam

    def base(t):
        return lam * np.asarray(phi1.base(t), dtype=float) + mu * np.asarray(phi2.base(t), dtype=float)

    derivative = None
    if phi1.has_derivative and phi2.has_derivative:
        def derivative(t):
            return lam * np.asarray(phi1.base_derivative(t), dtype=float) \
                + mu * np.asarray(phi2.base_derivative(t), dtype=float)

    weighted = [lift for lift, weight in ((phi1, lam), (phi2, mu)) if weight > 0.0]
    return LiftFunction(
        base=base,
        base_derivative=derivative,
        breakpoints=tuple(sorted(set(phi1.breakpoints) | set(phi2.breakpoints))),
        name=f"{lam:.6g}*{phi1.name}+{mu:.6g}*{phi2.name}",
        weak_only=all(lift.weak_only for lift in weighted),
    )


# ---------------------------------------------------------------------------
# Sampled estimates
# ---------------------------------------------------------------------------

class BiLipschitzEstimate(NamedTuple):
    upper: float
    lower: float


def lift_mesh(mesh: int, breakpoints: Sequence[float] = ()) -> np.ndarray:
    """Uniform mesh on [0, 2π] refined once around every breakpoint"""
    if mesh < 16:
        raise DomainError(f"mesh must be at least 16, got {mesh}")
    step = TAU / mesh
    points = [TAU * np.arange(mesh + 1) / mesh]
    for b in breakpoints:
        points.append(np.clip(b + step * np.linspace(-1.0, 1.0, 17), 0.0, TAU))
    merged = np.unique(np.concatenate(points))
    # drop near-duplicates produced by breakpoints landing on mesh points
    keep = np.concatenate([[True], np.diff(merged) > step * 1e-6])
    return merged[keep]


def difference_quotients(lift: LiftFunction, mesh: int,
                         breakpoints: Optional[Sequence[float]] = None) -> np.ndarray:
    """Signed quotients (φ(t_{i+1}) - φ(t_i)) / (t_{i+1} - t_i) over the refined mesh"""
    t = lift_mesh(mesh, lift.breakpoints if breakpoints is None else breakpoints)
    values = np.asarray(lift.base(t), dtype=float)
    return np.diff(values) / np.diff(t)


def estimate_bilipschitz(lift: LiftFunction, mesh: int,
                         breakpoints: Optional[Sequence[float]] = None) -> BiLipschitzEstimate:
    """(L⁺, L⁻): largest and smallest difference quotient magnitude"""
    quotients = np.abs(difference_quotients(lift, mesh, breakpoints))
    return BiLipschitzEstimate(upper=float(quotients.max()), lower=float(quotients.min()))


def _relative_change(coarse: float, fine: float, floor: float = 1e-9) -> float:
    scale = max(abs(coarse), abs(fine))
    if scale <= floor:
        return 0.0
    return abs(fine - coarse) / scale


def numerical_derivative(lift: LiftFunction, step: float = NUMERICAL_DERIVATIVE_STEP) -> ArrayFn:
    """Central-difference derivative of the extended lift"""

    def derivative(t):
        t = np.asarray(t, dtype=float)
        return (np.asarray(lift_extend(lift, t + step)) - np.asarray(lift_extend(lift, t - step))) / (2.0 * step)

    return derivative


def derivative_noise(lift: LiftFunction, mesh: int) -> float:
    """Relative disagreement of central differences at the mesh step and half of it"""
    t = uniform_angles(mesh)
    step = TAU / mesh
    coarse = numerical_derivative(lift, step)(t)
    fine = numerical_derivative(lift, 0.5 * step)(t)
    scale = max(1.0, float(np.max(np.abs(coarse))))
    return float(np.max(np.abs(coarse - fine)) / scale)


# ---------------------------------------------------------------------------
# Membership criterion
# ---------------------------------------------------------------------------

class Verdict(str, Enum):
    MEMBER = "member"
    NON_MEMBER = "non_member"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MembershipReport:
    name: str
    strictly_increasing: bool
    min_quotient: float
    bilipschitz_upper: float
    bilipschitz_upper_refined: float
    bilipschitz_lower: float
    total_increase: float
    hilbert_sup: Optional[float]
    hilbert_sup_refined: Optional[float]
    verdict: Verdict
    reasons: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def is_member(self) -> bool:
        return self.verdict is Verdict.MEMBER

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "strictly_increasing": self.strictly_increasing,
            "min_quotient": self.min_quotient,
            "bilipschitz_upper": self.bilipschitz_upper,
            "bilipschitz_upper_refined": self.bilipschitz_upper_refined,
            "bilipschitz_lower": self.bilipschitz_lower,
            "total_increase": self.total_increase,
            "hilbert_sup": self.hilbert_sup,
            "hilbert_sup_refined": self.hilbert_sup_refined,
            "verdict": self.verdict.value,
            "reasons": list(self.reasons),
        }


def check_membership(lift: LiftFunction, cfg: Optional["QuadratureConfig"] = None,
                     pv: Optional[PVConfig] = None) -> MembershipReport:
    """Sampled check of the harmonic quasiconformality criterion for a lift"""
    if cfg is None:
        from hqdisk.poisson import QuadratureConfig
        cfg = QuadratureConfig()
    pv = pv or PVConfig()
    reasons: List[str] = []

    total = lift.total_increase()
    if abs(total - TAU) > TOTAL_INCREASE_TOL:
        reasons.append(f"total increase {total:.15g} differs from 2π")

    quotients = difference_quotients(lift, cfg.mesh)
    min_quotient = float(quotients.min())
    upper = float(np.abs(quotients).max())
    lower = float(np.abs(quotients).min())
    strictly_increasing = min_quotient > 0.0
    if not strictly_increasing:
        reasons.append(f"not strictly increasing at mesh resolution (min quotient {min_quotient:.6g})")
    if lower <= cfg.flatness_floor:
        reasons.append(f"lower Lipschitz bound {lower:.6g} at or below flatness floor {cfg.flatness_floor:g}")

    upper_refined = float(np.abs(difference_quotients(lift, 4 * cfg.mesh)).max())
    if _relative_change(upper, upper_refined) >= STABILITY_TOL:
        reasons.append(f"upper Lipschitz estimate unstable under refinement ({upper:.6g} -> {upper_refined:.6g})")
    criterion_failed = bool(reasons)

    derivative: Optional[ArrayFn] = None
    noisy = False
    if lift.has_derivative:
        derivative = lift.derivative_eval
    else:
        noise = derivative_noise(lift, cfg.mesh)
        if noise > DERIVATIVE_NOISE_TOL:
            noisy = True
            reasons.append(f"no closed-form derivative and numerical differentiation too noisy ({noise:.3g})")
        else:
            derivative = numerical_derivative(lift)

    sup = sup_refined = None
    if derivative is not None:
        sup = hilbert_sup(derivative, cfg.hilbert_samples, pv, exclude=lift.breakpoints)
        sup_refined = hilbert_sup(derivative, cfg.hilbert_samples, pv.refined(), exclude=lift.breakpoints)
        if not (np.isfinite(sup) and np.isfinite(sup_refined)):
            reasons.append("Hilbert transformation of the derivative is not finite on the sample")
            criterion_failed = True
        elif _relative_change(sup, sup_refined) >= STABILITY_TOL:
            reasons.append(f"Hilbert sup unstable under node doubling ({sup:.6g} -> {sup_refined:.6g})")
            criterion_failed = True

    if criterion_failed:
        verdict = Verdict.NON_MEMBER
    elif noisy:
        verdict = Verdict.INCONCLUSIVE
        logger.warning(f"Membership of {lift.name} inconclusive: {reasons[-1]}")
    else:
        verdict = Verdict.MEMBER

    logger.info(f"Membership check for {lift.name}: {verdict.value}")
    return MembershipReport(
        name=lift.name,
        strictly_increasing=strictly_increasing,
        min_quotient=min_quotient,
        bilipschitz_upper=upper,
        bilipschitz_upper_refined=upper_refined,
        bilipschitz_lower=lower,
        total_increase=total,
        hilbert_sup=None if sup is None else float(sup),
        hilbert_sup_refined=None if sup_refined is None else float(sup_refined),
        verdict=verdict,
        reasons=tuple(reasons),
    )
