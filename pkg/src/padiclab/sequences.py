"""Integer-sequence term generators reduced modulo prime powers.

Power towers k**(q**n), Fibonacci, Catalan, Motzkin, Bell, and the odd
part of factorials, behind a uniform ``SequenceSpec`` front end with a
small text grammar::

    <family>[:<k>,<p>]@[<c>*]<q>^n[/<b>^<a>]

e.g. ``power:3,2@2^n/2^600``, ``catalan@2^n/2^8``, ``bell@2*4^n``.

Families whose cost grows with the index carry configurable index caps;
exceeding a cap raises BudgetExceeded rather than silently truncating.
The environment variable PADICLAB_BUDGET overrides every cap at once.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass

import numpy as np

from .analysis import euler_phi_prime_power, is_prime
from .core import PadicApprox

__all__ = [
    "BudgetExceeded",
    "DEFAULT_INDEX_CAPS",
    "SequenceSpec",
    "bell_mod",
    "catalan_exact",
    "fibonacci_mod",
    "index_cap",
    "legendre_valuation",
    "motzkin_exact",
    "normalized_factorial_term",
    "odd_factorial_mod",
    "parse_sequence_spec",
    "power_tower_term",
    "sequence_term",
]


class BudgetExceeded(Exception):
    """A sequence index went past the configured cap for its family."""


# Caps on the sequence index m, not on the schedule step n.  None means
# the generator is cheap at any index (log-time algorithms).
DEFAULT_INDEX_CAPS: dict[str, int | None] = {
    "power": None,
    "fibonacci": None,
    "catalan": 1 << 15,
    "motzkin": 1 << 13,
    "bell": 1 << 15,
    "factorial": 1 << 20,
}

_FAMILIES = tuple(DEFAULT_INDEX_CAPS)
_FAMILY_ALIASES = {"power-tower": "power", "normalized-factorial": "factorial"}

_ENV_BUDGET = "PADICLAB_BUDGET"


def index_cap(family: str, override: int | None = None) -> int | None:
    """Effective index cap for a family (override > env > default)."""
    if override is not None:
        return override
    env = os.environ.get(_ENV_BUDGET)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(
                f"{_ENV_BUDGET} must be an integer, got {env!r}"
            ) from None
    return DEFAULT_INDEX_CAPS[family]


def _check_budget(family: str, m: int, override: int | None = None) -> None:
    cap = index_cap(family, override)
    if cap is not None and m > cap:
        raise BudgetExceeded(
            f"{family} index {m} exceeds the configured budget {cap}"
        )


def power_term(k: int, p: int, m: int, a: int) -> int:
    """k**m mod p**a, reducing the exponent through the unit group when
    gcd(k, p) = 1.  Bit-exact with the direct definition."""
    if a < 1:
        raise ValueError(f"precision must be at least 1, got {a}")
    modulus = p**a
    if math.gcd(k, p) == 1:
        m = m % euler_phi_prime_power(p, a)
    return pow(k, m, modulus)


def power_tower_term(k: int, p: int, n: int, a: int) -> PadicApprox:
    """k**(p**n) mod p**a.  Coprime k is the interesting case; other k
    are accepted so grids of their digits can still be drawn."""
    if not is_prime(p):
        raise ValueError(f"base {p} must be prime")
    if n < 0:
        raise ValueError(f"tower height must be nonnegative, got {n}")
    return PadicApprox.from_residue(power_term(k, p, p**n, a), p, a)


def fibonacci_mod(m: int, modulus: int) -> int:
    """F_m mod modulus by fast doubling (F_0 = 0, F_1 = 1)."""
    if m < 0:
        raise ValueError(f"index must be nonnegative, got {m}")
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    a, b = 0, 1  # (F_j, F_{j+1}) for the prefix j of m's bits
    for bit in bin(m)[2:]:
        c = (a * (2 * b - a)) % modulus
        d = (a * a + b * b) % modulus
        if bit == "1":
            a, b = d, (c + d) % modulus
        else:
            a, b = c, d
    return a


def catalan_exact(m: int, budget: int | None = None) -> int:
    """The m-th Catalan number as an exact integer.

    The recurrence multiplies by 2(2m-1) and divides by (m+1); the
    division is always exact, which is checked rather than assumed.
    """
    if m < 0:
        raise ValueError(f"index must be nonnegative, got {m}")
    _check_budget("catalan", m, budget)
    c = 1
    for i in range(1, m + 1):
        q, r = divmod(c * 2 * (2 * i - 1), i + 1)
        if r:
            raise ArithmeticError(f"Catalan recurrence inexact at {i}")
        c = q
    return c


def motzkin_exact(m: int, budget: int | None = None) -> int:
    """The m-th Motzkin number as an exact integer."""
    if m < 0:
        raise ValueError(f"index must be nonnegative, got {m}")
    _check_budget("motzkin", m, budget)
    if m == 0:
        return 1
    prev, cur = 1, 1  # M_0, M_1
    for i in range(2, m + 1):
        q, r = divmod((2 * i + 1) * cur + 3 * (i - 1) * prev, i + 2)
        if r:
            raise ArithmeticError(f"Motzkin recurrence inexact at {i}")
        prev, cur = cur, q
    return cur


def _bell_mod_rows(m: int, modulus: int) -> int:
    row = [1 % modulus]
    for _ in range(m):
        new = [row[-1]]
        acc = row[-1]
        for x in row:
            acc = (acc + x) % modulus
            new.append(acc)
        row = new
    return row[0]


def _bell_mod_vectorized(m: int, modulus: int) -> int:
    # Safe in int64: row entries stay below modulus, so a cumulative sum
    # is bounded by modulus * (m + 2), which the caller has checked.
    row = np.array([1 % modulus], dtype=np.int64)
    for _ in range(m):
        new = np.empty(len(row) + 1, dtype=np.int64)
        new[0] = row[-1]
        np.cumsum(row, out=new[1:])
        new[1:] += row[-1]
        new %= modulus
        row = new
    return int(row[0])


def bell_mod(m: int, modulus: int, budget: int | None = None) -> int:
    """B_m mod modulus via the Bell triangle, one row retained.

    Additions only, so any modulus is sound; small moduli take a
    vectorized path.
    """
    if m < 0:
        raise ValueError(f"index must be nonnegative, got {m}")
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    _check_budget("bell", m, budget)
    if m >= 32 and modulus * (m + 2) < 1 << 62:
        return _bell_mod_vectorized(m, modulus)
    return _bell_mod_rows(m, modulus)


def legendre_valuation(m: int, p: int) -> int:
    """v_p(m!), computed two ways and cross-checked.

    The floor sum over p-power divisors must equal (m - digitsum_p(m))
    divided by (p - 1).
    """
    if m < 0:
        raise ValueError(f"index must be nonnegative, got {m}")
    if not is_prime(p):
        raise ValueError(f"base {p} must be prime")
    total = 0
    q = m
    while q:
        q //= p
        total += q
    digit_sum = 0
    q = m
    while q:
        q, r = divmod(q, p)
        digit_sum += r
    if total * (p - 1) != m - digit_sum:
        raise ArithmeticError(
            f"valuation formulas disagree at m={m}, p={p}"
        )
    return total


def odd_factorial_mod(m: int, a: int, budget: int | None = None) -> int:
    """The odd part of m! reduced mod 2**a, without forming m!.

    oddpart(m!) = oddpart((m//2)!) * (product of odd j <= m), so the
    whole computation is O(m) modular multiplications.
    """
    if m < 0:
        raise ValueError(f"index must be nonnegative, got {m}")
    if a < 1:
        raise ValueError(f"precision must be at least 1, got {a}")
    _check_budget("factorial", m, budget)
    modulus = 1 << a
    acc = 1
    mm = m
    while mm > 1:
        for j in range(1, mm + 1, 2):
            acc = acc * j % modulus
        mm >>= 1
    return acc


def normalized_factorial_term(
    n: int, a: int, budget: int | None = None
) -> PadicApprox:
    """(2**n)! divided by its full power of 2, reduced mod 2**a."""
    if n < 0:
        raise ValueError(f"index must be nonnegative, got {n}")
    return PadicApprox.from_residue(
        odd_factorial_mod(1 << n, a, budget), 2, a
    )


@dataclass(frozen=True)
class SequenceSpec:
    """Which sequence to sample, along which index schedule.

    The schedule maps n to mult * sbase**n, which covers every schedule
    used here (2^n, 4^n, 2*4^n, (p-1)*p^n, ...).  ``base`` is the
    reduction base; it defaults to p for power towers and to 2
    otherwise.  ``precision`` is an optional default digit count that
    callers may override per evaluation.
    """

    family: str
    k: int | None = None
    p: int | None = None
    mult: int = 1
    sbase: int = 2
    base: int | None = None
    precision: int | None = None

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}; expected one of {_FAMILIES}"
            )
        if self.family == "power":
            if self.k is None or self.p is None:
                raise ValueError("power towers need k and p parameters")
            if not is_prime(self.p):
                raise ValueError(f"tower base {self.p} must be prime")
            if self.base is not None and self.base != self.p:
                raise ValueError("power towers reduce modulo their own p")
        elif self.k is not None or self.p is not None:
            raise ValueError(f"family {self.family!r} takes no k,p parameters")
        if self.mult < 1:
            raise ValueError(f"schedule multiplier must be >= 1, got {self.mult}")
        if self.sbase < 2:
            raise ValueError(
                f"schedule base must be >= 2 for a strictly increasing "
                f"schedule, got {self.sbase}"
            )
        if self.family == "factorial" and self.reduction_base != 2:
            raise ValueError("the normalized factorial is 2-adic only")
        if self.base is not None and self.base < 2:
            raise ValueError(f"reduction base must be >= 2, got {self.base}")
        if self.precision is not None and self.precision < 1:
            raise ValueError("default precision must be >= 1")

    @property
    def reduction_base(self) -> int:
        if self.base is not None:
            return self.base
        return self.p if self.family == "power" else 2

    def index(self, n: int) -> int:
        """Sequence index sampled at schedule step n."""
        if n < 0:
            raise ValueError(f"schedule step must be nonnegative, got {n}")
        return self.mult * self.sbase**n

    def to_text(self) -> str:
        head = self.family
        if self.family == "power":
            head += f":{self.k},{self.p}"
        sched = f"{self.mult}*" if self.mult != 1 else ""
        sched += f"{self.sbase}^n"
        tail = f"/{self.base}^{self.precision}" if self.precision else ""
        return f"{head}@{sched}{tail}"


_SPEC_RE = re.compile(
    r"^(?P<family>[a-z][a-z-]*)"
    r"(?::(?P<k>\d+),(?P<p>\d+))?"
    r"@(?:(?P<mult>\d+)\*)?(?P<sbase>\d+)\^n"
    r"(?:/(?P<base>\d+)\^(?P<prec>\d+))?$"
)


def parse_sequence_spec(text: str) -> SequenceSpec:
    """Parse the ``family[:k,p]@[c*]q^n[/b^a]`` text form."""
    m = _SPEC_RE.match(text.strip())
    if m is None:
        raise ValueError(f"cannot parse sequence spec {text!r}")
    family = _FAMILY_ALIASES.get(m["family"], m["family"])
    return SequenceSpec(
        family=family,
        k=int(m["k"]) if m["k"] else None,
        p=int(m["p"]) if m["p"] else None,
        mult=int(m["mult"]) if m["mult"] else 1,
        sbase=int(m["sbase"]),
        base=int(m["base"]) if m["base"] else None,
        precision=int(m["prec"]) if m["prec"] else None,
    )


def sequence_term(
    spec: SequenceSpec,
    n: int,
    precision: int | None = None,
    budget: int | None = None,
) -> PadicApprox:
    """Evaluate the family at schedule step n, reduced mod base**precision."""
    a = precision if precision is not None else spec.precision
    if a is None:
        raise ValueError("no precision given (neither argument nor spec)")
    b = spec.reduction_base
    m = spec.index(n)
    if spec.family == "power":
        value = power_term(spec.k, spec.p, m, a)
    elif spec.family == "fibonacci":
        value = fibonacci_mod(m, b**a)
    elif spec.family == "catalan":
        value = catalan_exact(m, budget)
    elif spec.family == "motzkin":
        value = motzkin_exact(m, budget)
    elif spec.family == "bell":
        value = bell_mod(m, b**a, budget)
    else:
        value = odd_factorial_mod(m, a, budget)
    return PadicApprox.from_residue(value, b, a)
