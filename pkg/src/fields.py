import math
from typing import Union

__all__ = ["PExponent"]


class PExponent(float):
    """Exponent of an L_p norm: a real p >= 1 or infinity"""

    def __new__(cls, value: Union[str, float, int] = 2.0):
        return super().__new__(cls, cls._coerce(value))

    @staticmethod
    def _coerce(value) -> float:
        if isinstance(value, str):
            text = value.strip().lower()
            value = math.inf if text in ("inf", "infinity", "max") else float(text)
        value = float(value)
        if math.isnan(value) or value < 1:
            raise ValueError("p must be >= 1 or inf")
        return value

    @classmethod
    def __get_validators__(cls):
        """Get validators for PExponent"""
        yield cls.validate

    @classmethod
    def validate(cls, v):
        """validate entered value is a usable exponent"""
        if isinstance(v, cls):
            return v
        return cls(v)

    @classmethod
    def __modify_schema__(cls, field_schema):
        field_schema.update(type="number", minimum=1)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self)

    def norm(self, values) -> float:
        """(sum v^p)^(1/p) over non-negative values, max for infinity"""
        values = [abs(float(v)) for v in values]
        if not values:
            return 0.0
        if self.is_infinite:
            return max(values)
        top = max(values)
        if top == 0:
            return 0.0
        # scaled to keep large p from overflowing
        return top * sum((v / top) ** float(self) for v in values) ** (1.0 / float(self))

    def __repr__(self):
        return "PExponent(inf)" if self.is_infinite else f"PExponent({float(self)!r})"

    def __str__(self):
        return "inf" if self.is_infinite else repr(float(self))
