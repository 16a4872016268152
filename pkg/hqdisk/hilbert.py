"""
Periodic Hilbert transformation by principal-value quadrature.

    (ℌg)(x) = -(1/π) lim_{ε→0} ∫_ε^π (g(x + t) - g(x - t)) / (2 tan(t/2)) dt

The integral over [ε, π] is evaluated with the composite midpoint rule. The
``t`` kernel variant replaces 2 tan(t/2) by t; the two differ by a bounded
kernel and agree on every existence question.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from hqdisk.errors import DomainError, EvaluationError

logger = logging.getLogger(__name__)

# Upper bound on the number of integrand samples held in memory per chunk
CHUNK_SAMPLES = 1 << 20


class Kernel(str, Enum):
    TAN = "tan"
    T = "t"


@dataclass(frozen=True)
class PVConfig:
    """Principal-value quadrature settings"""

    epsilon: float = 1e-6
    nodes: int = 8192
    variant: Kernel = Kernel.TAN

    def __post_init__(self):
        if not 0.0 < self.epsilon < np.pi / 4:
            raise DomainError(f"PV exclusion half-width must lie in (0, π/4), got {self.epsilon}")
        if int(self.nodes) != self.nodes or self.nodes < 64:
            raise DomainError(f"PV quadrature needs at least 64 nodes, got {self.nodes}")
        try:
            object.__setattr__(self, "variant", Kernel(self.variant))
        except ValueError:
            raise DomainError(f"unknown kernel variant {self.variant!r}; expected 'tan' or 't'")
        object.__setattr__(self, "nodes", int(self.nodes))

    @classmethod
    def from_config(cls, config: dict) -> "PVConfig":
        return cls(epsilon=float(config["eps"]), nodes=int(config["pv_nodes"]),
                   variant=config.get("kernel", Kernel.TAN.value))

    def refined(self) -> "PVConfig":
        """Same exclusion with twice the quadrature nodes"""
        return replace(self, nodes=2 * self.nodes)

    def with_epsilon(self, epsilon: float) -> "PVConfig":
        return replace(self, epsilon=epsilon)

    def with_variant(self, variant) -> "PVConfig":
        return replace(self, variant=Kernel(variant))


def quadrature_nodes(cfg: PVConfig):
    """Midpoint nodes on [ε, π], their common width and the kernel weights"""
    width = (np.pi - cfg.epsilon) / cfg.nodes
    t = cfg.epsilon + (np.arange(cfg.nodes) + 0.5) * width
    if cfg.variant is Kernel.TAN:
        kernel = 1.0 / (2.0 * np.tan(0.5 * t))
    else:
        kernel = 1.0 / t
    return t, width, kernel


def _require_finite(values: np.ndarray, points: np.ndarray):
    finite = np.isfinite(values)
    if not finite.all():
        bad = tuple(np.argwhere(~finite)[0])
        angle = float(points[bad])
        logger.error(f"Non-finite integrand sample at t = {angle!r}")
        raise EvaluationError(angle)


def hilbert_at(g: Callable[[np.ndarray], np.ndarray], x, cfg: Optional[PVConfig] = None):
    """ℌg at x (scalar or array) with the configured PV quadrature"""
    cfg = cfg or PVConfig()
    x_arr = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    t, width, kernel = quadrature_nodes(cfg)
    rows = max(1, CHUNK_SAMPLES // cfg.nodes)
    out = np.empty(x_arr.shape[0])
    for start in range(0, x_arr.shape[0], rows):
        xc = x_arr[start:start + rows, None]
        forward = xc + t[None, :]
        backward = xc - t[None, :]
        plus = np.asarray(g(forward), dtype=float)
        minus = np.asarray(g(backward), dtype=float)
        _require_finite(plus, forward)
        _require_finite(minus, backward)
        out[start:start + rows] = (plus - minus) @ kernel
    out *= -width / np.pi
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(np.shape(x))


def sample_points(sample_count: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(sample_count) / sample_count


def hilbert_sup(g: Callable[[np.ndarray], np.ndarray], sample_count: int,
                cfg: Optional[PVConfig] = None, exclude: Sequence[float] = ()) -> float:
    """Max of |ℌg| over a uniform sample of one period, skipping points within ε of ``exclude``"""
    if sample_count < 32:
        raise DomainError(f"sample_count must be at least 32, got {sample_count}")
    cfg = cfg or PVConfig()
    x = sample_points(sample_count)
    if len(exclude):
        gap = np.abs(x[:, None] - np.asarray(exclude, dtype=float)[None, :])
        gap = np.minimum(gap, 2.0 * np.pi - gap)
        x = x[(gap > cfg.epsilon).all(axis=1)]
    if x.size == 0:
        raise DomainError("every sample point lies within epsilon of an excluded point")
    values = hilbert_at(g, x, cfg)
    return float(np.max(np.abs(values)))


def pv_limit_gap(g: Callable[[np.ndarray], np.ndarray], x, cfg: Optional[PVConfig] = None):
    """|ℌ_ε g(x) - ℌ_{ε/2} g(x)|: how far the principal value is from settling"""
    cfg = cfg or PVConfig()
    coarse = hilbert_at(g, x, cfg)
    fine = hilbert_at(g, x, cfg.with_epsilon(0.5 * cfg.epsilon))
    return np.abs(np.asarray(fine) - np.asarray(coarse)) if np.ndim(x) else abs(fine - coarse)


def kernel_gap(g: Callable[[np.ndarray], np.ndarray], x, cfg: Optional[PVConfig] = None):
    """Difference between the tan-kernel and t-kernel results at x"""
    cfg = cfg or PVConfig()
    tan_value = hilbert_at(g, x, cfg.with_variant(Kernel.TAN))
    t_value = hilbert_at(g, x, cfg.with_variant(Kernel.T))
    return np.asarray(tan_value) - np.asarray(t_value) if np.ndim(x) else tan_value - t_value
