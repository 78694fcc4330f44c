"""Integers extended by -inf and +inf.

Handle indices may be -inf (a collar), and connectivity or Cartesian-ness
bounds may be +inf (an equivalence, a Cartesian cube).
"""
from __future__ import annotations

import math
from functools import total_ordering
from typing import Union

from .errors import InvalidArgument

__all__ = ["ExtInt", "INF", "NEG_INF", "ext", "ext_min", "ExtLike"]


@total_ordering
class ExtInt:
    __slots__ = ("_v",)

    def __init__(self, value: Union[int, float, "ExtInt", str]):
        if isinstance(value, ExtInt):
            self._v = value._v
            return
        if isinstance(value, str):
            value = _parse(value)
        if isinstance(value, bool):
            raise InvalidArgument(f"not an extended integer: {value!r}")
        if isinstance(value, int):
            self._v = value
        elif isinstance(value, float) and math.isinf(value):
            self._v = value
        elif isinstance(value, float) and value.is_integer():
            self._v = int(value)
        else:
            raise InvalidArgument(f"not an extended integer: {value!r}")

    @property
    def is_finite(self) -> bool:
        return isinstance(self._v, int)

    @property
    def is_pos_inf(self) -> bool:
        return self._v == math.inf

    @property
    def is_neg_inf(self) -> bool:
        return self._v == -math.inf

    def __int__(self) -> int:
        if not self.is_finite:
            raise OverflowError(f"{self} has no integer value")
        return self._v

    def __index__(self) -> int:
        return int(self)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExtInt):
            return self._v == other._v
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            return self._v == other
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, ExtInt):
            return self._v < other._v
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            return self._v < other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._v)

    def __add__(self, other: ExtLike) -> ExtInt:
        o = ext(other)._v
        if {self._v, o} == {math.inf, -math.inf}:
            raise InvalidArgument("(-inf) + (+inf) is undefined")
        return ExtInt(self._v + o)

    __radd__ = __add__

    def __neg__(self) -> ExtInt:
        return ExtInt(-self._v)

    def __sub__(self, other: ExtLike) -> ExtInt:
        return self + (-ext(other))

    def __rsub__(self, other: ExtLike) -> ExtInt:
        return ext(other) + (-self)

    def __mul__(self, other: int) -> ExtInt:
        # scaling by an ordinary integer; 0 * (+-inf) is taken to be 0
        if isinstance(other, ExtInt):
            if not other.is_finite:
                raise InvalidArgument("cannot multiply two extended integers")
            other = other._v
        if not isinstance(other, int) or isinstance(other, bool):
            return NotImplemented
        if other == 0:
            return ExtInt(0)
        return ExtInt(self._v * other)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"ExtInt({self})"

    def __str__(self) -> str:
        if self.is_pos_inf:
            return "+inf"
        if self.is_neg_inf:
            return "-inf"
        return str(self._v)

    def to_json(self) -> int | str:
        """Finite values as JSON integers, infinities as the strings "+inf"/"-inf"."""
        return self._v if self.is_finite else str(self)


ExtLike = Union[int, ExtInt, str]

INF = ExtInt(math.inf)
NEG_INF = ExtInt(-math.inf)


def _parse(text: str) -> int | float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity", "+infinity", "∞", "+∞"):
        return math.inf
    if t in ("-inf", "-infinity", "-∞", "−∞"):
        return -math.inf
    try:
        return int(t)
    except ValueError:
        raise InvalidArgument(f"not an extended integer: {text!r}") from None


def ext(value: ExtLike) -> ExtInt:
    return value if isinstance(value, ExtInt) else ExtInt(value)


def ext_min(*values: ExtLike) -> ExtInt:
    return min(ext(v) for v in values)
