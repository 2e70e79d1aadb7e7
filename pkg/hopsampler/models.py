"""
Shared configuration models and enums
"""
import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

DEFAULT_SKETCH_FLOOR = 10


class SamplingMethod(str, Enum):
    L0 = "l0"
    L1 = "l1"
    L2 = "l2"
    RW = "rw"

    @property
    def uses_sketch(self) -> bool:
        return self in (SamplingMethod.L1, SamplingMethod.L2)


class FallbackPolicy(str, Enum):
    HEAVIEST = "heaviest"
    EMPTY = "empty"


class CellStatus(int, Enum):
    SAMPLED = 0
    FALLBACK = 1
    EMPTY = 2


def default_sketch_size(node_count: int) -> int:
    """max(10, ceil(2 log2 n) + 1)"""
    if node_count <= 1:
        return DEFAULT_SKETCH_FLOOR
    return max(DEFAULT_SKETCH_FLOOR, math.ceil(2 * math.log2(node_count)) + 1)


class SamplerConfig(BaseModel):
    """Parameters of one embedding build"""
    model_config = ConfigDict(frozen=True)

    method: SamplingMethod
    depth: int = Field(ge=0)
    dimensions: int = Field(ge=1)
    sketch_size: Optional[int] = Field(default=None, ge=1)
    norm_epsilon: float = Field(default=0.1, gt=0, lt=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    attribute_mode: bool = False
    fallback_policy: FallbackPolicy = FallbackPolicy.HEAVIEST
    norm_sketch_depth: int = Field(default=5, ge=1)
    norm_sketch_width_factor: float = Field(default=6.0, gt=0)
    block_size: int = Field(default=64, ge=1)

    @model_validator(mode="after")
    def _check_method_fields(self) -> "SamplerConfig":
        if not self.method.uses_sketch and self.sketch_size is not None:
            raise ValueError(f"sketch_size does not apply to method {self.method.value}")
        return self

    def resolved_sketch_size(self, node_count: int) -> int:
        return self.sketch_size if self.sketch_size is not None else default_sketch_size(node_count)

    def header_fields(self, node_count: int) -> dict:
        """Values echoed into output headers and manifests"""
        fields = {
            "method": self.method.value,
            "k": self.depth,
            "d": self.dimensions,
            "sketch": self.resolved_sketch_size(node_count) if self.method.uses_sketch else "-",
            "epsilon": self.norm_epsilon if self.method == SamplingMethod.L2 else "-",
            "seed": self.seed,
            "attributes": str(self.attribute_mode).lower(),
            "fallback": self.fallback_policy.value,
        }
        return fields
