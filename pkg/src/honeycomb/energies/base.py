from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import _core


class KernelNotAdmissible(ValueError):
    pass


_FAMILIES = {
    "exp": ("exponential", _core.EXPONENTIAL),
    "exponential": ("exponential", _core.EXPONENTIAL),
    "power": ("riesz-power", _core.RIESZ_POWER),
    "riesz-power": ("riesz-power", _core.RIESZ_POWER),
    "frac": ("fractional", _core.FRACTIONAL),
    "fractional": ("fractional", _core.FRACTIONAL),
}


@dataclass(frozen=True)
class KernelSpec:
    """Radial kernel K(r).

    exponential(beta):  K = exp(-beta r)      integrable at 0, integrable tail
    riesz-power(alpha): K = r^(alpha - 2)     integrable at 0 for alpha in (0, 2)
    fractional(s):      K = r^(-2 - s)        integrable tail for s in (0, 1)
    """

    family: str
    param: float

    def __post_init__(self):
        if self.family not in ("exponential", "riesz-power", "fractional"):
            raise KernelNotAdmissible(f"unknown kernel family {self.family!r}")
        p = float(self.param)
        ok = {
            "exponential": p > 0,
            "riesz-power": 0 < p < 2,
            "fractional": 0 < p < 1,
        }[self.family]
        if not ok or not math.isfinite(p):
            raise KernelNotAdmissible(f"parameter {p} outside the admissible range for {self.family}")
        object.__setattr__(self, "param", p)

    @classmethod
    def exponential(cls, beta: float) -> "KernelSpec":
        return cls("exponential", beta)

    @classmethod
    def riesz_power(cls, alpha: float) -> "KernelSpec":
        return cls("riesz-power", alpha)

    @classmethod
    def fractional(cls, s: float) -> "KernelSpec":
        return cls("fractional", s)

    @classmethod
    def parse(cls, text: str) -> "KernelSpec":
        """``exp:1``, ``power:1`` or ``frac:0.5``."""
        try:
            name, value = text.split(":")
            family = _FAMILIES[name.strip().lower()][0]
            return cls(family, float(value))
        except (ValueError, KeyError) as exc:
            raise KernelNotAdmissible(f"cannot parse kernel {text!r}") from exc

    @property
    def code(self) -> int:
        return _FAMILIES[self.family][1]

    @property
    def integrable_at_origin(self) -> bool:
        return self.family != "fractional"

    @property
    def tail_integrable(self) -> bool:
        return self.family != "riesz-power"

    @property
    def strictly_decreasing(self) -> bool:
        return True

    @property
    def total_mass(self) -> float:
        """Integral of K over the plane (inf when divergent)."""
        if self.family == "exponential":
            return 2.0 * math.pi / self.param**2
        return math.inf

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.family == "exponential":
            return np.exp(-self.param * r)
        if self.family == "riesz-power":
            return r ** (self.param - 2.0)
        return r ** (-2.0 - self.param)

    def label(self) -> str:
        short = {"exponential": "exp", "riesz-power": "power", "fractional": "frac"}[self.family]
        return f"{short}:{self.param:g}"


@dataclass
class EnergyResult:
    value: float
    error_estimate: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.error_estimate) or self.error_estimate < 0:
            raise ValueError("error estimate must be finite and nonnegative")

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "error_estimate": float(self.error_estimate),
            "diagnostics": self.diagnostics,
        }


def float_floor(value: float) -> float:
    """Rounding allowance added to every error estimate."""
    return 64.0 * np.finfo(float).eps * abs(value)
