"""
Cantor function and its three-branch fixed-point iteration.

    ψ_{n+1}(x) = ½ψ_n(3x)           0 <= x <= 1/3
                 ½                   1/3 < x < 2/3
                 ½ + ½ψ_n(3x - 2)    2/3 <= x <= 1

ψ_n is evaluated top-down: each point descends n levels of the branch
structure, collecting the affine offsets, and then calls the base map once.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from hqdisk.boundary_maps import LiftFunction, smoothstep, smoothstep_derivative, transfer_unit_map
from hqdisk.errors import DomainError

logger = logging.getLogger(__name__)

ORACLE_DIGITS = 64
ONE_THIRD = 1.0 / 3.0
TWO_THIRDS = 2.0 / 3.0

UnitMap = Callable[[np.ndarray], np.ndarray]


def _unit_interval(x) -> np.ndarray:
    x_arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x_arr)) or np.any(x_arr < 0.0) or np.any(x_arr > 1.0):
        raise DomainError(f"expected values in [0, 1], got {x}")
    return x_arr


def cantor_oracle(x):
    """Cantor function by ternary expansion: stop at the first digit 1, read 2s as binary 1s"""
    x_arr = _unit_interval(x)
    y = x_arr.ravel().copy()
    result = np.zeros_like(y)
    active = np.ones(y.shape, dtype=bool)
    weight = 0.5
    for _ in range(ORACLE_DIGITS):
        if not active.any():
            break
        scaled = 3.0 * y
        digit = np.minimum(np.floor(scaled), 2.0)
        y = scaled - digit
        result += np.where(active & (digit >= 1.0), weight, 0.0)
        active &= digit != 1.0
        weight *= 0.5
    result[x_arr.ravel() == 1.0] = 1.0
    if np.ndim(x) == 0:
        return float(result[0])
    return result.reshape(x_arr.shape)


@dataclass(frozen=True, eq=False)
class CantorApproximant:
    """ψ_n: n steps of the Cantor recursion applied to a base self-map of [0, 1]"""

    n: int
    base: UnitMap
    base_derivative: Optional[UnitMap] = None

    def _descend(self, x):
        x_arr = np.asarray(x, dtype=float)
        y = np.clip(x_arr.ravel(), 0.0, 1.0)
        offset = np.zeros_like(y)
        scale = np.ones_like(y)
        slope = np.ones_like(y)
        gap = np.zeros(y.shape, dtype=bool)
        for _ in range(self.n):
            left = ~gap & (y <= ONE_THIRD)
            right = ~gap & (y >= TWO_THIRDS)
            middle = ~gap & ~left & ~right
            offset[middle | right] += 0.5 * scale[middle | right]
            gap |= middle
            y[left] = 3.0 * y[left]
            y[right] = 3.0 * y[right] - 2.0
            branch = left | right
            scale[branch] *= 0.5
            slope[branch] *= 1.5
        return np.clip(y, 0.0, 1.0), offset, scale, slope, gap, x_arr.shape

    def eval(self, x):
        y, offset, scale, _, gap, shape = self._descend(x)
        value = offset + np.where(gap, 0.0, scale * np.asarray(self.base(y), dtype=float))
        if np.ndim(x) == 0:
            return float(value[0])
        return value.reshape(shape)

    __call__ = eval

    def derivative(self, x):
        """ψ_n′: (3/2)^n ψ₀′ on the level-n copies, 0 on the gaps"""
        if self.base_derivative is None:
            raise DomainError("base map carries no derivative")
        y, _, _, slope, gap, shape = self._descend(x)
        value = np.where(gap, 0.0, slope * np.asarray(self.base_derivative(y), dtype=float))
        if np.ndim(x) == 0:
            return float(value[0])
        return value.reshape(shape)


def cantor_iterate(base: UnitMap, n: int, base_derivative: Optional[UnitMap] = None) -> CantorApproximant:
    if int(n) != n or n < 0:
        raise DomainError(f"iteration index must be a nonnegative integer, got {n}")
    return CantorApproximant(n=int(n), base=base, base_derivative=base_derivative)


def smoothstep_iterate(n: int) -> CantorApproximant:
    """ψ_n started from the quintic smoothstep ψ₀"""
    return cantor_iterate(smoothstep, n, smoothstep_derivative)


def phi_n(n: int) -> LiftFunction:
    """Lift t ↦ π(ψ_n(t/2π) + t/2π) of the n-th smoothstep approximant"""
    psi = smoothstep_iterate(n)
    logger.debug(f"Building lift phi_n:{n}")
    return transfer_unit_map(psi.eval, psi.derivative, name=f"phi_n:{psi.n}")


def phi_cantor() -> LiftFunction:
    """Lift t ↦ π(C(t/2π) + t/2π) of the Cantor function; no derivative"""
    return transfer_unit_map(cantor_oracle, None, name="phi_cantor")


def sup_distance_to_cantor(psi: CantorApproximant, mesh: int = 4096) -> float:
    """max over a uniform mesh of |ψ_n - C|"""
    x = np.linspace(0.0, 1.0, mesh)
    return float(np.max(np.abs(psi.eval(x) - cantor_oracle(x))))
