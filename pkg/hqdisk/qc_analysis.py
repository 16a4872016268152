"""
Quasiconformality diagnostics for harmonic extensions.

The complex dilatation μ = f_z̄ / f_z and the distortion K = (1 + |μ|)/(1 - |μ|)
are sampled over polar grids. A map is quasiconformal when |μ| stays bounded
away from 1; on a finite grid that can only be observed as K staying flat as
the radius approaches 1, which is what the dilatation channel reports next to
the membership criterion.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from hqdisk.boundary_maps import (
    LiftFunction,
    MembershipReport,
    Verdict,
    check_membership,
    compose,
    make_mobius,
    uniform_angles,
)
from hqdisk.errors import DomainError, FieldError
from hqdisk.hilbert import PVConfig
from hqdisk.poisson import (
    HarmonicExtension,
    QuadratureConfig,
    RADIUS_SLACK,
    WirtingerMode,
    polar_grid,
    wirtinger,
)

logger = logging.getLogger(__name__)

DEFAULT_RADII = (0.5, 0.75, 0.9, 0.95, 0.99)
DEFAULT_ANGLES = 1024
DEGENERACY_FLOOR = 1e-12
GROWTH_SLACK = 1e-3


@dataclass(frozen=True, eq=False)
class DilatationField:
    """Complex dilatation sampled on a polar grid; rows are radii, columns angles"""

    radii: np.ndarray
    angles: int
    z: np.ndarray
    f_z: np.ndarray
    f_zbar: np.ndarray
    mu: np.ndarray
    K: np.ndarray
    degenerate: np.ndarray
    flagged: np.ndarray

    @property
    def usable(self) -> np.ndarray:
        return ~self.degenerate & ~self.flagged

    @property
    def K_max(self) -> float:
        if self.flagged.any():
            return float("inf")
        return max(1.0, float(np.max(self.K[self.usable])))

    @property
    def mu_abs(self) -> np.ndarray:
        return np.abs(self.mu)

    @property
    def jacobian(self) -> np.ndarray:
        """|f_z|² - |f_z̄|²; positive where the extension preserves orientation"""
        return np.abs(self.f_z) ** 2 - np.abs(self.f_zbar) ** 2

    @property
    def orientation_preserving(self) -> bool:
        return bool(np.all(self.jacobian[~self.degenerate] > 0.0))

    def max_mu_by_radius(self) -> np.ndarray:
        mu_abs = np.where(self.degenerate, 0.0, self.mu_abs)
        return mu_abs.max(axis=1)

    def K_max_by_radius(self) -> np.ndarray:
        K = np.where(self.degenerate, 1.0, self.K)
        return K.max(axis=1)

    def summary(self) -> List[dict]:
        return [
            {"r": float(r), "max_mu": float(m), "K_max": float(k)}
            for r, m, k in zip(self.radii, self.max_mu_by_radius(), self.K_max_by_radius())
        ]

    def to_frame(self) -> pd.DataFrame:
        radius = np.broadcast_to(self.radii[:, None], self.z.shape)
        theta = np.broadcast_to(uniform_angles(self.angles)[None, :], self.z.shape)
        return pd.DataFrame({
            "r": radius.ravel(),
            "theta": theta.ravel(),
            "re": self.mu.real.ravel(),
            "im": self.mu.imag.ravel(),
            "mu_abs": self.mu_abs.ravel(),
            "K": self.K.ravel(),
        })


def dilatation_field(h: HarmonicExtension, radii: Optional[Sequence[float]] = None,
                     angles: Optional[int] = None) -> DilatationField:
    """Sample μ and K of PT[γ] over radii × angles with analytic Wirtinger derivatives"""
    radii = np.asarray(DEFAULT_RADII if radii is None else radii, dtype=float)
    angles = DEFAULT_ANGLES if angles is None else int(angles)
    if radii.size == 0 or np.any(radii <= 0.0) or np.any(radii > h.cfg.r_max + RADIUS_SLACK):
        raise DomainError(f"radii must lie in (0, {h.cfg.r_max}], got {radii.tolist()}")
    if angles < 8:
        raise DomainError(f"angles must be at least 8, got {angles}")

    _, _, z = polar_grid(radii, angles)
    f_z, f_zbar = wirtinger(h, z, WirtingerMode.ANALYTIC)
    degenerate = np.abs(f_z) < DEGENERACY_FLOOR
    if degenerate.all():
        raise FieldError(f"every grid point of {h.boundary.name} has |f_z| < {DEGENERACY_FLOOR:g}")

    with np.errstate(divide="ignore", invalid="ignore"):
        mu = np.where(degenerate, np.nan + 0j, f_zbar / np.where(degenerate, 1.0, f_z))
        mu_abs = np.abs(mu)
        flagged = ~degenerate & (mu_abs >= 1.0)
        K = np.where(flagged, np.inf, (1.0 + mu_abs) / (1.0 - mu_abs))
    if flagged.any():
        logger.warning(f"{int(flagged.sum())} grid points of {h.boundary.name} have |mu| >= 1")

    return DilatationField(radii=radii, angles=angles, z=z, f_z=f_z, f_zbar=f_zbar,
                           mu=mu, K=K, degenerate=degenerate, flagged=flagged)


def distortion_grows(field_: DilatationField, slack: float = GROWTH_SLACK) -> bool:
    """max|μ| nondecreasing in r (up to slack) and larger at the outermost radius"""
    profile = field_.max_mu_by_radius()
    order = np.argsort(field_.radii)
    profile = profile[order]
    return bool(np.all(np.diff(profile) >= -slack) and profile[-1] > profile[0])


@dataclass(frozen=True)
class PavlovicReport:
    membership: MembershipReport
    dilatation: List[dict]
    K_max: float
    dilatation_bounded: bool
    distortion_growing: bool
    agrees: bool
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def verdict(self) -> Verdict:
        return self.membership.verdict

    def to_dict(self) -> dict:
        return {
            "membership": self.membership.to_dict(),
            "dilatation": self.dilatation,
            "K_max": self.K_max,
            "dilatation_bounded": self.dilatation_bounded,
            "distortion_growing": self.distortion_growing,
            "agrees": self.agrees,
            "notes": list(self.notes),
        }


def pavlovic_verdict(lift: LiftFunction, cfg: Optional[QuadratureConfig] = None,
                     pv: Optional[PVConfig] = None, radii: Optional[Sequence[float]] = None,
                     angles: Optional[int] = None) -> PavlovicReport:
    """Membership criterion and dilatation sweep side by side, with their agreement"""
    cfg = cfg or QuadratureConfig()
    pv = pv or PVConfig()
    membership = check_membership(lift, cfg, pv)
    if radii is None:
        radii = [r for r in DEFAULT_RADII if r <= cfg.r_max]
    field_ = dilatation_field(HarmonicExtension.of(lift, cfg), radii, angles)

    bounded = not field_.flagged.any() and bool(np.isfinite(field_.K_max))
    growing = distortion_grows(field_)
    notes = []
    if membership.verdict is Verdict.MEMBER:
        agrees = bounded
        if not bounded:
            notes.append("member lift with |mu| >= 1 on the sampled grid")
    elif membership.verdict is Verdict.NON_MEMBER:
        agrees = growing
        if not growing:
            notes.append("non-member lift whose distortion does not grow toward the boundary")
    else:
        agrees = True
        notes.append("membership inconclusive; dilatation channel reported without comparison")

    if not agrees:
        logger.warning(f"Verdict channels disagree for {lift.name}: {notes[-1]}")
    logger.info(f"Pavlovic verdict for {lift.name}: {membership.verdict.value}, K_max {field_.K_max:.6g}")
    return PavlovicReport(
        membership=membership,
        dilatation=field_.summary(),
        K_max=field_.K_max,
        dilatation_bounded=bounded,
        distortion_growing=growing,
        agrees=agrees,
        notes=tuple(notes),
    )


def choquet_deny(alpha: complex, beta: complex, gamma_c: complex, delta: complex, z):
    """α(βz + 2i Arg(γ - e^{-βz})) + δ with the principal Arg"""
    alpha, beta, gamma_c, delta = complex(alpha), complex(beta), complex(gamma_c), complex(delta)
    if alpha * beta * gamma_c == 0:
        raise DomainError("Choquet-Deny parameters need alpha*beta*gamma != 0")
    z_arr = np.asarray(z, dtype=complex)
    exponential = np.exp(-beta * z_arr)
    if np.any(np.abs(exponential) >= abs(gamma_c)):
        raise DomainError("Choquet-Deny domain condition |exp(-beta*z)| < |gamma| fails at the given z")
    value = alpha * (beta * z_arr + 2j * np.angle(gamma_c - exponential)) + delta
    if np.ndim(z) == 0:
        return complex(value)
    return value


def density_witness(lift: LiftFunction, a_values: Sequence[complex], samples: int = 4096) -> List[Tuple[float, float]]:
    """Boundary sup |γ∘M_a - γ| for automorphisms M_a approaching the identity"""
    t = uniform_angles(samples)
    gamma = np.exp(1j * np.asarray(lift(t)))
    rows = []
    for a in a_values:
        moved = compose(lift, make_mobius(a))
        distance = float(np.max(np.abs(np.exp(1j * np.asarray(moved(t))) - gamma)))
        rows.append((abs(complex(a)), distance))
    return rows
