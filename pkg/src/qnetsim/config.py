"""Parameter set describing one network model instance."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

from .channel import FiberParams, SatelliteParams
from .errors import InvalidParameterError

MODELS = ("SBQI", "OFBQI", "ER", "BA")
GEOMETRIC_MODELS = ("SBQI", "OFBQI")


@dataclass(frozen=True)
class NetworkConfig:
    """Full parameter set for one model.

    Exactly one of ``radius`` (km) or ``rho`` (nodes/km^2) is stored as given;
    the other is derived through ``rho = n / (pi radius^2)`` by
    :attr:`disk_radius` and :attr:`density`. ER and BA models carry no
    geometry and may leave both unset.
    """

    model: str
    n: int
    radius: float | None = None
    rho: float | None = None
    n_p: int = 50
    sat: SatelliteParams = field(default_factory=SatelliteParams)
    fiber: FiberParams = field(default_factory=FiberParams)
    er_mean_degree: float | None = None
    ba_m: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidParameterError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.n < 2:
            raise InvalidParameterError(f"n must be >= 2, got {self.n}")
        if self.radius is not None and self.rho is not None:
            raise InvalidParameterError("give exactly one of radius and rho, not both")
        if self.model in GEOMETRIC_MODELS and self.radius is None and self.rho is None:
            raise InvalidParameterError(f"{self.model} needs radius or rho")
        if self.radius is not None and not self.radius > 0:
            raise InvalidParameterError(f"radius must be > 0, got {self.radius}")
        if self.rho is not None and not self.rho > 0:
            raise InvalidParameterError(f"rho must be > 0, got {self.rho}")
        if self.n_p < 1:
            raise InvalidParameterError(f"n_p must be >= 1, got {self.n_p}")
        if self.model == "ER":
            k = self.er_mean_degree
            if k is None:
                raise InvalidParameterError("ER model needs er_mean_degree")
            if k < 0 or k > self.n - 1:
                raise InvalidParameterError(
                    f"er_mean_degree must lie in [0, n-1] = [0, {self.n - 1}], got {k}")
        if self.model == "BA":
            if self.ba_m is None:
                raise InvalidParameterError("BA model needs ba_m")
            if not 1 <= self.ba_m < self.n:
                raise InvalidParameterError(f"ba_m must satisfy 1 <= ba_m < n, got {self.ba_m}")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidParameterError("seed must be an unsigned 64-bit integer")

    @property
    def disk_radius(self):
        if self.radius is not None:
            return self.radius
        if self.rho is not None:
            return math.sqrt(self.n / (math.pi * self.rho))
        return None

    @property
    def density(self):
        if self.rho is not None:
            return self.rho
        if self.radius is not None:
            return self.n / (math.pi * self.radius ** 2)
        return None

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def to_dict(self):
        d = asdict(self)
        for key in ("radius", "rho", "er_mean_degree", "ba_m"):
            if d[key] is None:
                del d[key]
        return d
