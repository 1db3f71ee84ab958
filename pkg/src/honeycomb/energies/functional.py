"""Shape functionals minimized by the honeycomb among unit-area tiles."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from ..geometry import ConvexPolygon, perimeter
from .base import EnergyResult, KernelNotAdmissible, KernelSpec
from .cheeger import cheeger_constant
from .fem import dirichlet_lambda1
from .logcap import DEFAULT_PANELS, log_capacity
from .potentials import (
    ANGULAR_ORDER,
    DEFAULT_LEVELS,
    DEFAULT_ORDER,
    nonlocal_perimeter,
    riesz_energy,
)


class Kind(enum.Enum):
    PERIMETER = "perimeter"
    NONLOCAL_PERIMETER = "nonlocal-perimeter"
    RIESZ_ENERGY = "riesz"
    LOG_CAPACITY = "logcap"
    DIRICHLET_LAMBDA1 = "lambda1"
    CHEEGER = "cheeger"


# slack added on top of reported error estimates when comparing values
EPSILON = {
    Kind.PERIMETER: 1e-12,
    Kind.NONLOCAL_PERIMETER: 1e-10,
    Kind.RIESZ_ENERGY: 1e-10,
    Kind.LOG_CAPACITY: 1e-9,
    Kind.DIRICHLET_LAMBDA1: 1e-9,
    Kind.CHEEGER: 1e-10,
}


@dataclass(frozen=True)
class FunctionalSpec:
    kind: Kind
    kernel: KernelSpec | None = None
    angular_order: int = ANGULAR_ORDER
    triangle_order: int = DEFAULT_ORDER
    levels: int = DEFAULT_LEVELS
    h: float = 0.05
    panels: int = DEFAULT_PANELS

    def __post_init__(self):
        for name in ("angular_order", "triangle_order", "levels", "panels"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.kind in (Kind.NONLOCAL_PERIMETER, Kind.RIESZ_ENERGY):
            if self.kernel is None:
                raise ValueError(f"{self.kind.value} needs a kernel")
            if self.kind is Kind.NONLOCAL_PERIMETER and not self.kernel.tail_integrable:
                raise KernelNotAdmissible(f"{self.kernel.label()} has no integrable tail")
            if self.kind is Kind.RIESZ_ENERGY and not self.kernel.integrable_at_origin:
                raise KernelNotAdmissible(f"{self.kernel.label()} is not integrable at the origin")
        elif self.kernel is not None:
            raise ValueError(f"{self.kind.value} takes no kernel")

    @classmethod
    def parse(cls, text: str) -> "FunctionalSpec":
        """``perimeter``, ``cheeger``, ``logcap``, ``lambda1``, ``riesz:exp:1``,
        ``nonlocal-perimeter:frac:0.5``."""
        name, _, rest = text.strip().partition(":")
        try:
            kind = Kind(name.lower())
        except ValueError as exc:
            raise ValueError(f"unknown functional {name!r}") from exc
        kernel = KernelSpec.parse(rest) if rest else None
        return cls(kind, kernel)

    def with_options(self, **kw) -> "FunctionalSpec":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    @property
    def epsilon(self) -> float:
        return EPSILON[self.kind]

    @property
    def strictly_monotone(self) -> bool:
        return self.kernel is not None and self.kernel.strictly_decreasing

    def label(self) -> str:
        return self.kind.value + (f":{self.kernel.label()}" if self.kernel else "")


def evaluate(P: ConvexPolygon, F: FunctionalSpec) -> EnergyResult:
    if F.kind is Kind.PERIMETER:
        return EnergyResult(perimeter(P), 0.0, {})
    if F.kind is Kind.NONLOCAL_PERIMETER:
        return nonlocal_perimeter(P, F.kernel, F.levels, F.triangle_order, F.angular_order)
    if F.kind is Kind.RIESZ_ENERGY:
        return riesz_energy(P, F.kernel, F.levels, F.triangle_order, F.angular_order)
    if F.kind is Kind.LOG_CAPACITY:
        return log_capacity(P, F.panels)
    if F.kind is Kind.DIRICHLET_LAMBDA1:
        return dirichlet_lambda1(P, F.h)
    return cheeger_constant(P)
