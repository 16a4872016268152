"""
Poisson transformation of circle maps.

PT[γ](z) is evaluated with the periodic trapezoid rule on ``nodes``
equispaced boundary angles, which for periodic data reduces to the mean of
P(z, e^{it_k})·γ(e^{it_k}). Accuracy degrades as |z| → 1 because the kernel
peaks; the evaluator refuses |z| > r_max and warns when the node count falls
below 64/(1 - r_max).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from hqdisk.boundary_maps import BoundaryMap, LiftFunction, TAU, uniform_angles
from hqdisk.errors import DomainError, EvaluationError, RadiusError

logger = logging.getLogger(__name__)

CHUNK_SAMPLES = 1 << 21

# |z| may exceed r_max by rounding alone, e.g. 0.99·e^{iθ}
RADIUS_SLACK = 1e-12
FINITE_DIFFERENCE_MARGIN = 1e-6


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class QuadratureConfig:
    """Boundary quadrature and sampling settings shared by the evaluators"""

    nodes: int = 8192
    r_max: float = 0.99
    flatness_floor: float = 1e-6
    mesh: int = 32768
    hilbert_samples: int = 128

    def __post_init__(self):
        if int(self.nodes) != self.nodes or self.nodes < 128 or not _is_power_of_two(int(self.nodes)):
            raise DomainError(f"nodes must be a power of two >= 128, got {self.nodes}")
        if not 0.0 < self.r_max < 1.0:
            raise DomainError(f"r_max must lie in (0, 1), got {self.r_max}")
        if not self.flatness_floor > 0.0:
            raise DomainError(f"flatness_floor must be positive, got {self.flatness_floor}")
        if self.mesh < 16:
            raise DomainError(f"mesh must be at least 16, got {self.mesh}")
        if self.hilbert_samples < 32:
            raise DomainError(f"hilbert_samples must be at least 32, got {self.hilbert_samples}")
        object.__setattr__(self, "nodes", int(self.nodes))
        if self.nodes < 64.0 / (1.0 - self.r_max):
            logger.warning(f"{self.nodes} nodes is below 64/(1 - r_max) = {64.0 / (1.0 - self.r_max):.0f}; "
                           f"extension values near |z| = {self.r_max} lose accuracy")

    @classmethod
    def from_config(cls, config: dict) -> "QuadratureConfig":
        return cls(
            nodes=int(config["nodes"]),
            r_max=float(config["r_max"]),
            flatness_floor=float(config["flatness_floor"]),
            mesh=int(config["lipschitz_mesh"]),
            hilbert_samples=int(config["hilbert_samples"]),
        )


class WirtingerMode(str, Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite_difference"


def poisson_kernel(r, theta):
    """(1 - r²)/(1 - 2r cos θ + r²) for 0 <= r < 1"""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr >= 1.0) or np.any(r_arr < 0.0):
        raise DomainError(f"Poisson kernel needs 0 <= r < 1, got r = {r}")
    theta_arr = np.asarray(theta, dtype=float)
    value = (1.0 - r_arr ** 2) / (1.0 - 2.0 * r_arr * np.cos(theta_arr) + r_arr ** 2)
    if np.ndim(value) == 0:
        return float(value)
    return value


@dataclass(frozen=True, eq=False)
class HarmonicExtension:
    """PT[γ] bound to a quadrature configuration"""

    boundary: BoundaryMap
    cfg: QuadratureConfig = field(default_factory=QuadratureConfig)

    @classmethod
    def of(cls, lift: LiftFunction, cfg: Optional[QuadratureConfig] = None) -> "HarmonicExtension":
        return cls(BoundaryMap.from_lift(lift), cfg or QuadratureConfig())

    @cached_property
    def angles(self) -> np.ndarray:
        return uniform_angles(self.cfg.nodes)

    @cached_property
    def zeta(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    @cached_property
    def boundary_values(self) -> np.ndarray:
        logger.debug(f"Sampling boundary map {self.boundary.name} at {self.cfg.nodes} nodes")
        values = np.asarray(self.boundary(self.angles), dtype=complex)
        finite = np.isfinite(values)
        if not finite.all():
            raise EvaluationError(float(self.angles[np.argmin(finite)]))
        return values

    def __call__(self, z):
        return extend(self, z)


def _guard_radius(z: np.ndarray, limit: float):
    if z.size == 0:
        return
    radius = float(np.max(np.abs(z)))
    if radius > limit + RADIUS_SLACK:
        raise RadiusError(radius, limit)


def _kernel_quadrature(h: HarmonicExtension, z, weights: Callable[[np.ndarray, np.ndarray], np.ndarray]):
    """mean_k weights(ζ_k, z)·γ(ζ_k), chunked over z"""
    z_arr = np.asarray(z, dtype=complex)
    flat = z_arr.ravel()
    _guard_radius(flat, h.cfg.r_max)
    zeta = h.zeta[None, :]
    gamma = h.boundary_values
    rows = max(1, CHUNK_SAMPLES // h.cfg.nodes)
    out = np.empty(flat.shape[0], dtype=complex)
    for start in range(0, flat.shape[0], rows):
        zc = flat[start:start + rows, None]
        out[start:start + rows] = weights(zeta, zc) @ gamma / h.cfg.nodes
    if np.ndim(z) == 0:
        return complex(out[0])
    return out.reshape(z_arr.shape)


def _poisson_weights(zeta, z):
    return (1.0 - np.abs(z) ** 2) / np.abs(zeta - z) ** 2


def _dz_weights(zeta, z):
    return zeta / (zeta - z) ** 2


def _dzbar_weights(zeta, z):
    return np.conj(zeta) / np.conj(zeta - z) ** 2


def extend(h: HarmonicExtension, z):
    """PT[γ](z) for |z| <= r_max"""
    return _kernel_quadrature(h, z, _poisson_weights)


def wirtinger_fd(f: Callable, z, step) -> Tuple[np.ndarray, np.ndarray]:
    """Central-difference Wirtinger pair (f_z, f_z̄) of an arbitrary complex function"""
    z = np.asarray(z, dtype=complex)
    step = np.asarray(step, dtype=float)
    stencil = np.stack([z + step, z - step, z + 1j * step, z - 1j * step])
    values = np.asarray(f(stencil), dtype=complex)
    f_x = (values[0] - values[1]) / (2.0 * step)
    f_y = (values[2] - values[3]) / (2.0 * step)
    return 0.5 * (f_x - 1j * f_y), 0.5 * (f_x + 1j * f_y)


def wirtinger(h: HarmonicExtension, z, mode: WirtingerMode = WirtingerMode.ANALYTIC):
    """Wirtinger derivatives (f_z, f_z̄) of PT[γ] at z"""
    mode = WirtingerMode(mode)
    if mode is WirtingerMode.ANALYTIC:
        return _kernel_quadrature(h, z, _dz_weights), _kernel_quadrature(h, z, _dzbar_weights)

    z_arr = np.asarray(z, dtype=complex)
    _guard_radius(z_arr.ravel(), h.cfg.r_max - FINITE_DIFFERENCE_MARGIN)
    step = 1e-5 * (1.0 - np.abs(z_arr))
    f_z, f_zbar = wirtinger_fd(lambda w: extend(h, w), z_arr, step)
    if np.ndim(z) == 0:
        return complex(f_z), complex(f_zbar)
    return f_z, f_zbar


def five_point_laplacian(f: Callable, z, step: float):
    """Discrete Laplacian (f(z±s) + f(z±is) - 4f(z))/s² of a complex function"""
    z = np.asarray(z, dtype=complex)
    stencil = np.stack([z, z + step, z - step, z + 1j * step, z - 1j * step])
    values = np.asarray(f(stencil), dtype=complex)
    return (values[1] + values[2] + values[3] + values[4] - 4.0 * values[0]) / step ** 2


def laplacian_residual(h: HarmonicExtension, z, step: float):
    """|Δ PT[γ](z)| by the five-point stencil"""
    z_arr = np.asarray(z, dtype=complex)
    if z_arr.size and float(np.max(np.abs(z_arr))) + 2.0 * step > h.cfg.r_max + RADIUS_SLACK:
        raise RadiusError(float(np.max(np.abs(z_arr))) + 2.0 * step, h.cfg.r_max,
                          f"stencil |z| + 2·step exceeds r_max = {h.cfg.r_max}")
    residual = np.abs(five_point_laplacian(lambda w: extend(h, w), z_arr, step))
    if np.ndim(z) == 0:
        return float(residual)
    return residual


class SupDistance(NamedTuple):
    chord: float
    lift_bound: float


def sup_distance(h1: HarmonicExtension, h2: HarmonicExtension, samples: Optional[int] = None) -> SupDistance:
    """Boundary sup of |γ₁ - γ₂|, which bounds the interior sup by the maximum principle"""
    if h1.cfg != h2.cfg:
        raise DomainError("sup_distance needs both extensions on the same quadrature configuration")
    samples = samples or max(4096, h1.cfg.nodes)
    t = uniform_angles(samples)
    phi1 = np.asarray(h1.boundary.lift(t))
    phi2 = np.asarray(h2.boundary.lift(t))
    chord = float(np.max(np.abs(np.exp(1j * phi1) - np.exp(1j * phi2))))
    return SupDistance(chord=chord, lift_bound=float(np.max(np.abs(phi1 - phi2))))


def polar_grid(radii: Sequence[float], angles: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(R, Θ, Z) arrays of shape (len(radii), angles)"""
    theta = uniform_angles(angles)
    r_grid, theta_grid = np.meshgrid(np.asarray(radii, dtype=float), theta, indexing="ij")
    return r_grid, theta_grid, r_grid * np.exp(1j * theta_grid)


def grid_sup_distance(h1: HarmonicExtension, h2: HarmonicExtension,
                      radii: Sequence[float], angles: int) -> float:
    """Interior sup of |PT₁ - PT₂| over a polar grid"""
    _, _, z = polar_grid(radii, angles)
    return float(np.max(np.abs(extend(h1, z) - extend(h2, z))))
