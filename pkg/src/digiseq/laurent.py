"""Truncated formal Laurent series in ``t^{-1}`` over F_b."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .finite_field import FieldError, check_prime

__all__ = ["LaurentSeries", "PrecisionError"]


class PrecisionError(ValueError):
    """A computation needs more digits than were stored."""


@dataclass(frozen=True)
class LaurentSeries:
    """``sum_{i=w}^{w+K} g_i t^{-i}``, coefficients known up to ``t^{-(w+K)}``.

    ``coeffs[k]`` is the coefficient of ``t^{-(start + k)}``.  Coefficients
    past the stored tail are *unknown*, not zero; operations that would need
    them raise :class:`PrecisionError`.
    """

    base: int
    start: int
    coeffs: tuple

    def __post_init__(self):
        check_prime(self.base)
        for c in self.coeffs:
            if not 0 <= c < self.base:
                raise FieldError(f"coefficient {c} is not a residue mod {self.base}")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], base: int, start: int = 1) -> "LaurentSeries":
        return cls(base, start, tuple(int(c) % base for c in coeffs))

    @classmethod
    def random(cls, base: int, length: int, rng: np.random.Generator) -> "LaurentSeries":
        """i.i.d. uniform coefficients of ``t^{-1}, ..., t^{-length}``."""
        return cls(base, 1, tuple(int(v) for v in rng.integers(0, base, size=length)))

    @property
    def last(self) -> int:
        """Largest exponent index i with g_i stored."""
        return self.start + len(self.coeffs) - 1

    def coefficient(self, i: int) -> int:
        """g_i, the coefficient of ``t^{-i}``."""
        if i < self.start:
            return 0
        if i > self.last:
            raise PrecisionError(f"coefficient of t^-{i} not stored (known up to t^-{self.last})")
        return self.coeffs[i - self.start]

    def mul_poly(self, poly: Sequence[int]) -> "LaurentSeries":
        """Product with ``poly[0] + poly[1] t + ...`` (exact on the known part)."""
        b = self.base
        deg = max((r for r, c in enumerate(poly) if c % b), default=-1)
        if deg < 0:
            return LaurentSeries(b, self.start, (0,) * len(self.coeffs))
        # t^r * t^{-i} = t^{-(i-r)}; known exponents shrink by deg at the tail
        start = self.start - deg
        last = self.last
        out = []
        for k in range(start, last - deg + 1):
            acc = 0
            for r in range(deg + 1):
                i = k + r
                if i >= self.start:
                    acc += poly[r] * self.coeffs[i - self.start]
            out.append(acc % b)
        return LaurentSeries(b, start, tuple(out))

    def fractional_part(self) -> "LaurentSeries":
        """``{g}``: drop every term with a nonnegative power of t."""
        if self.start >= 1:
            return self
        cut = 1 - self.start
        return LaurentSeries(self.base, 1, self.coeffs[cut:])

    def evaluate_digits(self, m: int) -> int:
        """Numerator over ``b^m`` of ``{g}`` at ``t = b``, truncated to m digits."""
        g = self.fractional_part()
        acc = 0
        for k in range(1, m + 1):
            acc = acc * self.base + g.coefficient(k)
        return acc
