from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from ..config.settings import settings
from ..shared.utils.exceptions import InvalidSpec

DEFAULT_DECAY = {"decaying_geometric": 0.5, "decaying_polynomial": 1.0}


class SyntheticKind(str, Enum):
    RANK_K = "rank_k"
    DECAYING_GEOMETRIC = "decaying_geometric"
    DECAYING_POLYNOMIAL = "decaying_polynomial"
    IDENTITY_LIKE = "identity_like"


class SyntheticSpec(BaseModel):
    """
    Recipe for a deterministic test matrix.

    Text form: ``kind:MxN[:key=value...]`` with keys ``k``, ``decay`` and ``seed``,
    e.g. ``rank_k:20x15:k=5:seed=7`` or ``decaying_geometric:100x80:decay=0.5``.
    """

    kind: SyntheticKind
    m: int
    n: int
    k: Optional[int] = Field(default=None, description="Rank, rank_k only")
    decay: Optional[float] = Field(default=None, description="Ratio (geometric) or exponent (polynomial)")
    seed: int = Field(default_factory=lambda: settings.SEED, description="64-bit RNG seed")

    @model_validator(mode="after")
    def _validate(self):
        if self.m < 1 or self.n < 1:
            raise InvalidSpec(f"dimensions must be at least 1, got {self.m}x{self.n}")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec(f"seed must fit in 64 bits, got {self.seed}")
        if self.kind == SyntheticKind.RANK_K:
            if self.k is None:
                raise InvalidSpec("rank_k needs k=<rank>")
            if not 1 <= self.k <= min(self.m, self.n):
                raise InvalidSpec(f"k must be in [1, {min(self.m, self.n)}], got {self.k}")
        elif self.k is not None:
            raise InvalidSpec(f"k only applies to rank_k, not {self.kind.value}")

        if self.kind in (SyntheticKind.DECAYING_GEOMETRIC, SyntheticKind.DECAYING_POLYNOMIAL):
            if self.decay is None:
                self.decay = DEFAULT_DECAY[self.kind.value]
            if self.kind == SyntheticKind.DECAYING_GEOMETRIC and not 0 < self.decay < 1:
                raise InvalidSpec(f"geometric decay must lie in (0, 1), got {self.decay}")
            if self.kind == SyntheticKind.DECAYING_POLYNOMIAL and not self.decay > 0:
                raise InvalidSpec(f"polynomial decay must be positive, got {self.decay}")
        elif self.decay is not None:
            raise InvalidSpec(f"decay only applies to decaying kinds, not {self.kind.value}")
        return self

    @classmethod
    def parse(cls, text: str) -> "SyntheticSpec":
        """Parse ``kind:MxN[:key=value...]``."""
        parts = [part.strip() for part in text.strip().split(":")]
        if len(parts) < 2:
            raise InvalidSpec(f"expected kind:MxN[:key=value...], got {text!r}")
        try:
            kind = SyntheticKind(parts[0])
        except ValueError as exc:
            kinds = ", ".join(k.value for k in SyntheticKind)
            raise InvalidSpec(f"unknown synthetic kind {parts[0]!r}; expected one of {kinds}") from exc

        dims = parts[1].lower().split("x")
        if len(dims) != 2:
            raise InvalidSpec(f"dimensions must look like MxN, got {parts[1]!r}")
        fields = {"kind": kind, "m": _parse_int(dims[0], "m"), "n": _parse_int(dims[1], "n")}

        for item in parts[2:]:
            key, sep, value = item.partition("=")
            if not sep:
                raise InvalidSpec(f"expected key=value, got {item!r}")
            if key in fields:
                raise InvalidSpec(f"duplicate key {key!r}")
            if key in ("k", "seed"):
                fields[key] = _parse_int(value, key)
            elif key == "decay":
                try:
                    fields[key] = float(value)
                except ValueError as exc:
                    raise InvalidSpec(f"decay must be a number, got {value!r}") from exc
            else:
                raise InvalidSpec(f"unknown key {key!r}; expected k, decay or seed")
        return cls(**fields)

    def describe(self) -> str:
        """Canonical text form, accepted by ``parse``."""
        text = f"{self.kind.value}:{self.m}x{self.n}"
        if self.k is not None:
            text += f":k={self.k}"
        if self.decay is not None:
            text += f":decay={self.decay!r}"
        return f"{text}:seed={self.seed}"


def _parse_int(value: str, name: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise InvalidSpec(f"{name} must be an integer, got {value!r}") from exc
