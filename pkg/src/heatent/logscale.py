"""Split-exponent floating point: a number stored as mantissa * exp(log_scale).

Several quantities in this package carry an exp(kappa^2 t / 2) factor whose
exponent reaches a few hundred in the parameter sweeps we care about.  Keeping
that factor as a separate exponent-of-e lets products and sums be formed
without ever materialising the huge (or vanishing) scale factor; it only gets
folded in at the very end, where it usually cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Renormalise lazily: as long as the mantissa stays inside this window the
# representation is left untouched, which keeps common arithmetic exact.
_MANTISSA_MAX = 1e150
_MANTISSA_MIN = 1e-150


@dataclass(frozen=True)
class LogScaled:
    """Value represented as ``mantissa * exp(log_scale)``."""

    mantissa: float
    log_scale: float = 0.0

    @staticmethod
    def from_float(x: float) -> "LogScaled":
        return LogScaled(float(x), 0.0)

    def _normalized(self) -> "LogScaled":
        m = self.mantissa
        if m == 0.0:
            return LogScaled(0.0, 0.0)
        a = abs(m)
        if _MANTISSA_MIN < a < _MANTISSA_MAX:
            return self
        shift = math.log(a)
        return LogScaled(m / math.exp(shift), self.log_scale + shift)

    @property
    def sign(self) -> int:
        if self.mantissa > 0.0:
            return 1
        if self.mantissa < 0.0:
            return -1
        return 0

    def value(self) -> float:
        """Collapse to a plain float; may overflow to inf for huge scales."""
        if self.mantissa == 0.0:
            return 0.0
        total = self.log_scale + math.log(abs(self.mantissa))
        if total > 709.0:
            return math.copysign(math.inf, self.mantissa)
        return math.copysign(math.exp(total), self.mantissa)

    def __neg__(self) -> "LogScaled":
        return LogScaled(-self.mantissa, self.log_scale)

    def __mul__(self, other) -> "LogScaled":
        # Normalise the inputs first so extreme mantissas cannot overflow
        # inside the product.
        a = self._normalized()
        if isinstance(other, LogScaled):
            b = other._normalized()
            out = LogScaled(a.mantissa * b.mantissa, a.log_scale + b.log_scale)
        else:
            out = LogScaled(a.mantissa * float(other), a.log_scale)
        return out._normalized()

    __rmul__ = __mul__

    def __add__(self, other) -> "LogScaled":
        if not isinstance(other, LogScaled):
            other = LogScaled.from_float(other)
        if self.mantissa == 0.0:
            return other
        if other.mantissa == 0.0:
            return self
        a = self._normalized()
        b = other._normalized()
        # Rescale onto the larger exponent so the correction factor is <= 1.
        if a.log_scale >= b.log_scale:
            hi, lo = a, b
        else:
            hi, lo = b, a
        m = hi.mantissa + lo.mantissa * math.exp(lo.log_scale - hi.log_scale)
        return LogScaled(m, hi.log_scale)._normalized()

    __radd__ = __add__

    def __sub__(self, other) -> "LogScaled":
        if not isinstance(other, LogScaled):
            other = LogScaled.from_float(other)
        return self + (-other)

    def _cmp(self, other) -> float:
        if not isinstance(other, LogScaled):
            other = LogScaled.from_float(other)
        return (self - other).mantissa

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0.0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0.0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0.0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0.0
