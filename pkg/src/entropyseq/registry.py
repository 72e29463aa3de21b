"""Named Weierstrass data for the standard examples.

Parameters are substituted into the expression text before parsing, so an
integer ``k`` produces a literal power such as ``z^3``.
"""

import math
from dataclasses import dataclass, field

from .differentials import WeierstrassData


def _num(x):
    if float(x) == int(x):
        return str(int(x))
    return "%.17g" % x


@dataclass(frozen=True)
class SurfaceRegistryEntry:
    name: str
    gauss: str
    eta: str
    params: dict = field(default_factory=dict)
    base: complex = 0j
    rect: tuple = (-1.0, -1.0, 1.0, 1.0)
    theta: float = 0.0
    derive: object = None
    x_base: object = None
    description: str = ""

    def resolve(self, overrides=None):
        """Parameter values with overrides applied (unknown names are rejected)."""
        values = dict(self.params)
        for key, val in (overrides or {}).items():
            if key not in values:
                raise ValueError(f"surface {self.name!r} has no parameter {key!r}")
            values[key] = val
        if "k" in values:
            if float(values["k"]) != int(values["k"]) or int(values["k"]) < 1:
                raise ValueError("parameter k must be a positive integer")
            values["k"] = int(values["k"])
        if "t" in values and not float(values["t"]) > 0:
            raise ValueError("parameter t must be positive")
        return values

    def data(self, overrides=None):
        values = self.resolve(overrides)
        subs = dict(values)
        if self.derive is not None:
            subs.update(self.derive(values))
        subs = {k: _num(v) for k, v in subs.items()}
        label = self.name + "".join(f" {k}={_num(v)}" for k, v in sorted(values.items()))
        return WeierstrassData.from_text(self.gauss.format(**subs), self.eta.format(**subs), label)

    def base_value(self, overrides=None):
        """Position X(base) used when sampling (the closed-form value where one is known)."""
        if self.x_base is None:
            return (0.0, 0.0, 0.0)
        return self.x_base(self.resolve(overrides))


SURFACES = {
    e.name: e
    for e in [
        SurfaceRegistryEntry("enneper", "z", "z", description="degree 2"),
        SurfaceRegistryEntry("helicoid", "exp(z)", "i", rect=(-1.0, -math.pi, 1.0, math.pi),
                             description="degree 3"),
        SurfaceRegistryEntry("catenoid", "exp(z)", "-1", rect=(-1.0, -math.pi, 1.0, math.pi),
                             description="degree 3, associate of the helicoid"),
        SurfaceRegistryEntry("enneper-k", "z^{k}", "z^{k}", params={"k": 2},
                             description="degree 4, umbilic of order k-1 at 0"),
        SurfaceRegistryEntry(
            "limit", "{inv_t}*exp(-z)", "{two_t}*exp(z)", params={"t": 1.0},
            rect=(-2.0, -math.pi, 0.5, math.pi), theta=math.pi,
            derive=lambda v: {"inv_t": 1 / v["t"], "two_t": 2 * v["t"]},
            x_base=lambda v: (-0.5 * v["t"] ** 2, 0.0, -2.0 * v["t"]),
            description="degree 4 limit family, singly periodic"),
        SurfaceRegistryEntry("scherk", "z", "i*z/(z^4-1)", rect=(-0.5, -0.5, 0.5, 0.5),
                             description="degree 5, doubly periodic"),
        SurfaceRegistryEntry("schwarz", "z", "z/sqrt(z^8-14*z^4+1)", rect=(-0.3, -0.3, 0.3, 0.3),
                             description="degree 5, triply periodic"),
        SurfaceRegistryEntry("knoid", "z^{k1}", "z^{k1}/(z^{k}-1)^2", params={"k": 3},
                             rect=(-0.5, -0.5, 0.5, 0.5), derive=lambda v: {"k1": v["k"] - 1},
                             description="degree 7 for k = 3, 4, 5"),
    ]
}


def get_surface(name):
    try:
        return SURFACES[name]
    except KeyError:
        raise ValueError(f"unknown surface {name!r}; choose from {', '.join(SURFACES)}") from None
