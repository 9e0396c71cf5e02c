"""Exact arithmetic on finite-precision base-b digit expansions.

A value here is a congruence class modulo base**precision, stored as a
little-endian digit tuple (digit 0 is the units digit).  Precision is
data, never an error: every operation states how many digits of its
result are known.  Nothing is rounded, and equality is only ever
asserted at a stated precision.

All objects are immutable and all functions are pure, so everything in
this module is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "PadicApprox",
    "PadicScalar",
    "base_multiplicity",
    "digit_string",
    "padic_from_integer",
    "padic_from_rational",
    "valuation_and_norm",
]


def _check_base(base: int) -> None:
    if base < 2:
        raise ValueError(f"base must be at least 2, got {base}")


def _check_precision(precision: int) -> None:
    if precision < 1:
        raise ValueError(f"precision must be at least 1, got {precision}")


def base_multiplicity(m: int, base: int) -> int | float:
    """Largest t such that base**t divides m (math.inf for m = 0)."""
    _check_base(base)
    if m == 0:
        return math.inf
    t = 0
    while m % base == 0:
        m //= base
        t += 1
    return t


def _digits_of(value: int, base: int, precision: int) -> tuple[int, ...]:
    value %= base**precision
    out = []
    for _ in range(precision):
        value, d = divmod(value, base)
        out.append(d)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class PadicApprox:
    """A number known modulo base**precision.

    ``digits[i]`` is the coefficient of base**i, so the represented
    class is ``sum(d * base**i) mod base**len(digits)``.

    Equality is precision-aware: two approximations with the same base
    compare equal iff they agree on their first ``min(precision)``
    digits.  This relation is deliberately not transitive across
    precisions, and instances are therefore unhashable.
    """

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_base(self.base)
        object.__setattr__(self, "digits", tuple(self.digits))
        _check_precision(len(self.digits))
        if any(d < 0 or d >= self.base for d in self.digits):
            raise ValueError("digits must lie in [0, base)")

    @classmethod
    def from_residue(cls, value: int, base: int, precision: int) -> PadicApprox:
        """Digit expansion of ``value mod base**precision``."""
        _check_base(base)
        _check_precision(precision)
        return cls(base, _digits_of(value, base, precision))

    @property
    def precision(self) -> int:
        return len(self.digits)

    def modulus(self) -> int:
        return self.base**self.precision

    def residue(self) -> int:
        """The represented integer residue in [0, base**precision)."""
        acc = 0
        for d in reversed(self.digits):
            acc = acc * self.base + d
        return acc

    def valuation(self) -> int | float:
        """Index of the lowest nonzero digit; math.inf if all are zero.

        math.inf means "indistinguishable from zero at this precision",
        not that the underlying number is zero.
        """
        for i, d in enumerate(self.digits):
            if d:
                return i
        return math.inf

    def truncate(self, precision: int) -> PadicApprox:
        """Forget digits beyond ``precision`` (must not exceed what is known)."""
        _check_precision(precision)
        if precision > self.precision:
            raise ValueError(
                f"cannot extend precision {self.precision} to {precision}"
            )
        return PadicApprox(self.base, self.digits[:precision])

    def _binop(self, other: PadicApprox, op) -> PadicApprox:
        if not isinstance(other, PadicApprox):
            return NotImplemented
        if other.base != self.base:
            raise ValueError(f"base mismatch: {self.base} vs {other.base}")
        prec = min(self.precision, other.precision)
        return PadicApprox.from_residue(
            op(self.residue(), other.residue()), self.base, prec
        )

    def __add__(self, other: PadicApprox) -> PadicApprox:
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other: PadicApprox) -> PadicApprox:
        return self._binop(other, lambda a, b: a - b)

    def __mul__(self, other: PadicApprox) -> PadicApprox:
        return self._binop(other, lambda a, b: a * b)

    def invert(self) -> PadicApprox:
        """Multiplicative inverse modulo base**precision.

        Requires the units digit to be coprime to the base (for a prime
        base: nonzero).
        """
        low = self.digits[0]
        if math.gcd(low, self.base) != 1:
            raise ValueError(
                f"lowest digit {low} shares a factor with base {self.base}"
            )
        return PadicApprox.from_residue(
            pow(self.residue(), -1, self.modulus()), self.base, self.precision
        )

    def shift(self, t: int) -> PadicApprox:
        """Multiply by base**t.

        For t >= 0 the precision is unchanged (low zeros are prepended
        and high digits fall off).  For t < 0 the lowest -t digits must
        all be zero and the result loses -t digits of precision.
        """
        if t >= 0:
            if t >= self.precision:
                return PadicApprox(self.base, (0,) * self.precision)
            return PadicApprox(
                self.base, (0,) * t + self.digits[: self.precision - t]
            )
        k = -t
        if k >= self.precision:
            raise ValueError(f"shift by {t} leaves no digits")
        if any(self.digits[:k]):
            raise ValueError(
                f"value is not divisible by {self.base}**{k}: low digits "
                f"{self.digits[:k]} are not all zero"
            )
        return PadicApprox(self.base, self.digits[k:])

    def digit_string(self) -> str:
        """Digits as text, lowest-order first.  Bases above 10 have no
        single-character digits; use ``digits`` directly instead."""
        if self.base > 10:
            raise ValueError("digit_string requires base <= 10")
        return "".join(str(d) for d in self.digits)

    def to_record(self) -> dict:
        v = self.valuation()
        return {
            "base": self.base,
            "precision": self.precision,
            "valuation": None if v == math.inf else v,
            "digits": list(self.digits),
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PadicApprox):
            return NotImplemented
        if self.base != other.base:
            return False
        n = min(self.precision, other.precision)
        return self.digits[:n] == other.digits[:n]

    __hash__ = None  # equality is precision-relative

    def __repr__(self) -> str:
        if self.base <= 10:
            body = repr("".join(str(d) for d in self.digits))
        else:
            body = list(self.digits)
        return f"PadicApprox(base={self.base}, digits={body})"


@dataclass(frozen=True, eq=False)
class PadicScalar:
    """base**valuation times a unit, or the distinguished zero.

    For nonzero values ``valuation`` is an integer of either sign and
    ``unit`` is a PadicApprox whose units digit is nonzero; the value is
    then known modulo base**(valuation + unit.precision).  The zero
    value has ``valuation is None`` and an all-zero unit that only
    carries base and precision.
    """

    valuation: int | None
    unit: PadicApprox

    def __post_init__(self) -> None:
        if self.valuation is None:
            if any(self.unit.digits):
                raise ValueError("zero scalar must have an all-zero unit")
        elif self.unit.digits[0] == 0:
            raise ValueError("unit part must have a nonzero units digit")

    @classmethod
    def zero(cls, base: int, precision: int) -> PadicScalar:
        return cls(None, PadicApprox.from_residue(0, base, precision))

    @classmethod
    def from_residue(cls, value: int, base: int, precision: int) -> PadicScalar:
        """Split ``value mod base**precision`` into base-power and unit.

        A residue that is 0 at this precision yields the zero scalar.
        """
        _check_base(base)
        _check_precision(precision)
        value %= base**precision
        if value == 0:
            return cls.zero(base, precision)
        t = base_multiplicity(value, base)
        unit = PadicApprox.from_residue(
            value // base**t, base, precision - t
        )
        return cls(t, unit)

    @property
    def base(self) -> int:
        return self.unit.base

    @property
    def precision(self) -> int:
        """Digits known of the unit part."""
        return self.unit.precision

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    def known_to(self) -> int:
        """Number of digits of the value (not the unit) that are known."""
        if self.is_zero:
            return self.unit.precision
        return self.valuation + self.unit.precision

    def norm(self) -> Fraction:
        """base**(-valuation); 0 for the zero value."""
        if self.is_zero:
            return Fraction(0)
        if self.valuation >= 0:
            return Fraction(1, self.base**self.valuation)
        return Fraction(self.base ** (-self.valuation))

    def to_approx(self, precision: int | None = None) -> PadicApprox:
        """The value as a plain digit expansion modulo base**precision.

        Only defined for valuation >= 0 (otherwise the value is not an
        integer residue).  ``precision`` defaults to everything known
        and may not exceed it.
        """
        t = self.known_to() if precision is None else precision
        if t > self.known_to():
            raise ValueError(f"value is only known to {self.known_to()} digits")
        if self.is_zero:
            return PadicApprox.from_residue(0, self.base, t)
        if self.valuation < 0:
            raise ValueError("negative valuation: not an integer residue")
        return PadicApprox.from_residue(
            self.unit.residue() * self.base**self.valuation, self.base, t
        )

    def digit_string(self) -> str:
        v = "inf" if self.is_zero else str(self.valuation)
        return f"v={v} {self.unit.digit_string()}"

    def to_record(self) -> dict:
        return {
            "base": self.base,
            "precision": self.precision,
            "valuation": self.valuation,
            "digits": list(self.unit.digits),
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PadicScalar):
            return NotImplemented
        if self.base != other.base:
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self.valuation == other.valuation and self.unit == other.unit

    __hash__ = None

    def __repr__(self) -> str:
        v = "inf" if self.is_zero else self.valuation
        return f"PadicScalar(valuation={v}, unit={self.unit!r})"


def padic_from_integer(m: int, base: int, precision: int) -> PadicApprox:
    """Digit expansion of ``m mod base**precision``.

    Negative integers are represented by their residue, so e.g. -1 in
    base 2 is all ones at any precision.
    """
    return PadicApprox.from_residue(m, base, precision)


def padic_from_rational(
    num: int, den: int, base: int, precision: int
) -> PadicScalar:
    """num/den as a scalar: valuation plus unit known to ``precision`` digits.

    The valuation is the multiplicity of ``base`` in num minus that in
    den; the unit is (reduced num) times the inverse of (reduced den)
    modulo base**precision.  For a prime base the reduced denominator is
    always invertible; for a composite base it must be coprime to the
    base.
    """
    _check_base(base)
    _check_precision(precision)
    if den == 0:
        raise ValueError("denominator must be nonzero")
    if num == 0:
        return PadicScalar.zero(base, precision)
    tn = base_multiplicity(num, base)
    td = base_multiplicity(den, base)
    nred = num // base**tn
    dred = den // base**td
    if math.gcd(dred, base) != 1:
        raise ValueError(
            f"reduced denominator {dred} is not invertible modulo "
            f"{base}**{precision}"
        )
    unit_value = nred * pow(dred, -1, base**precision)
    return PadicScalar(
        tn - td, PadicApprox.from_residue(unit_value, base, precision)
    )


def valuation_and_norm(
    x: PadicScalar | int | Fraction, base: int | None = None
) -> tuple[int | float, Fraction]:
    """(valuation, base**(-valuation)) of a scalar or exact rational.

    Zero reports (math.inf, 0).  ``base`` is required for rational
    input and ignored for PadicScalar input.
    """
    if isinstance(x, PadicScalar):
        if x.is_zero:
            return math.inf, Fraction(0)
        return x.valuation, x.norm()
    if base is None:
        raise ValueError("base is required for rational input")
    _check_base(base)
    f = Fraction(x)
    if f == 0:
        return math.inf, Fraction(0)
    v = base_multiplicity(f.numerator, base) - base_multiplicity(
        f.denominator, base
    )
    norm = Fraction(1, base**v) if v >= 0 else Fraction(base ** (-v))
    return v, norm


def digit_string(x: PadicApprox | PadicScalar) -> str:
    """Text form of either value kind (see the methods for the format)."""
    return x.digit_string()
