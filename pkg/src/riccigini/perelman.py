"""Scalar surrogate of Perelman's W-entropy.

    W = volume * (tau * (R + |grad f|^2) + f - n) * (4 pi tau)^(-n/2) * exp(-f)

The integral over the economic space collapses to a scalar ``volume``.
Either factor after the core can be replaced by a fixed number (an
*override*); the result records which factors were overridden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

FORMULA = "formula"
OVERRIDE = "override"


def _finite(*values):
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"expected finite input, got {v!r}")


def w_core(tau, ricci_scalar, grad_f_sq, f_potential, n_dim) -> float:
    """``tau * (R + |grad f|^2) + f - n``."""
    _finite(tau, ricci_scalar, grad_f_sq, f_potential, n_dim)
    return tau * (ricci_scalar + grad_f_sq) + f_potential - n_dim


def w_normalization(tau, n_dim) -> float:
    """Heat-kernel normalization ``(4 pi tau)^(-n/2)``."""
    _finite(tau, n_dim)
    if tau <= 0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    return (4.0 * math.pi * tau) ** (-n_dim / 2.0)


def w_weight(f_potential) -> float:
    """Weighting factor ``exp(-f)``."""
    _finite(f_potential)
    return math.exp(-f_potential)


def rd_potential(base, rate, t) -> float:
    """Exponential R&D investment potential ``base * exp(rate * t)``."""
    _finite(base, rate, t)
    return base * math.exp(rate * t)


@dataclass(frozen=True)
class WParams:
    """Inputs to :func:`evaluate_w`.

    ``normalization`` / ``weight`` left as ``None`` are computed from the
    formulas; a number substitutes that factor verbatim.
    """

    tau: float
    ricci_scalar: float
    grad_f_sq: float = 0.0
    f_potential: float = 0.0
    n_dim: int = 1
    volume: float = 1.0
    normalization: float | None = None
    weight: float | None = None

    def __post_init__(self):
        _finite(self.tau, self.ricci_scalar, self.grad_f_sq, self.f_potential, self.volume)
        if self.tau <= 0:
            raise DomainError("tau must be positive")
        if int(self.n_dim) != self.n_dim or self.n_dim < 1:
            raise DomainError("n_dim must be a positive integer")
        if self.grad_f_sq < 0:
            raise DomainError("grad_f_sq must be nonnegative")
        if self.volume <= 0:
            raise DomainError("volume must be positive")
        for name in ("normalization", "weight"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} override must be finite and positive")

    @property
    def norm_mode(self) -> str:
        return FORMULA if self.normalization is None else OVERRIDE

    @property
    def weight_mode(self) -> str:
        return FORMULA if self.weight is None else OVERRIDE


@dataclass(frozen=True)
class WResult:
    core: float
    normalization: float
    weight: float
    volume: float
    w_value: float
    norm_mode: str
    weight_mode: str

    def as_dict(self) -> dict:
        return {
            "core": self.core,
            "normalization": self.normalization,
            "weight": self.weight,
            "volume": self.volume,
            "w_value": self.w_value,
            "norm_mode": self.norm_mode,
            "weight_mode": self.weight_mode,
        }


def evaluate_w(p: WParams) -> WResult:
    core = w_core(p.tau, p.ricci_scalar, p.grad_f_sq, p.f_potential, p.n_dim)
    norm = w_normalization(p.tau, p.n_dim) if p.normalization is None else p.normalization
    weight = w_weight(p.f_potential) if p.weight is None else p.weight
    return WResult(
        core=core,
        normalization=norm,
        weight=weight,
        volume=p.volume,
        w_value=core * norm * weight * p.volume,
        norm_mode=p.norm_mode,
        weight_mode=p.weight_mode,
    )


def preset_w_params(preset, reproduce: bool = True, ricci_scalar: float | None = None) -> WParams:
    """W inputs from the preset.

    Reproduce mode uses the printed Ricci sum and the printed weight with
    a unit normalization. Faithful mode evaluates both factors from their
    formulas and uses ``ricci_scalar`` (the recomputed sum) when given.
    """
    if reproduce:
        return WParams(
            tau=preset.tau,
            ricci_scalar=preset.ricci_sum_reported,
            grad_f_sq=preset.grad_f_sq,
            f_potential=preset.f_potential,
            n_dim=preset.n_dim,
            normalization=preset.normalization_binding,
            weight=preset.weight_reported,
        )
    return WParams(
        tau=preset.tau,
        ricci_scalar=preset.ricci_sum_reported if ricci_scalar is None else ricci_scalar,
        grad_f_sq=preset.grad_f_sq,
        f_potential=preset.f_potential,
        n_dim=preset.n_dim,
    )
