"""Acceptance checks behind ``padiclab verify`` and tests/test_acceptance.py.

Every check is a pure function that raises CheckFailure with a specific
message; the runner times them and reports one line per check.  Random
sampling is seeded, so results are reproducible run to run.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

from .analysis import multiplicative_order, padic_log, teichmuller
from .core import (
    base_multiplicity,
    padic_from_rational,
    valuation_and_norm,
)
from .grids import figure_grid
from .sequences import (
    fibonacci_mod,
    legendre_valuation,
    normalized_factorial_term,
    odd_factorial_mod,
    parse_sequence_spec,
    power_tower_term,
)
from .shear import extract_coefficients, limit_detect

__all__ = ["CHECKS", "CheckFailure", "run_checks"]


class CheckFailure(Exception):
    """An acceptance check did not hold."""


def _ensure(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailure(message)


# 32 displayed digits of the first three detected tower coefficients,
# lowest-order first (base 2).
COEFF_DIGITS_1 = (0, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 1,
                  0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0)
COEFF_DIGITS_2 = (0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 1,
                  1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 1)
COEFF_DIGITS_3 = (0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 1,
                  1, 1, 0, 1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0)

_EXTRACT_ARGS = (3, 2, 4, 40, 192)


def check_rational_expansions() -> None:
    third = padic_from_rational(1, 3, 2, 16)
    _ensure(
        third.unit.digit_string() == "1101010101010101",
        f"1/3 digits wrong: {third.unit.digit_string()}",
    )
    ninth = padic_from_rational(1, 9, 2, 18)
    _ensure(
        ninth.unit.digit_string() == "100111000111000111",
        f"1/9 digits wrong: {ninth.unit.digit_string()}",
    )


def check_norms() -> None:
    _ensure(
        valuation_and_norm(64, 2) == (6, Fraction(1, 64)),
        "norm of 64 must be 1/64",
    )
    _ensure(
        valuation_and_norm(Fraction(-691, 2730), 2) == (-1, Fraction(2)),
        "norm of -691/2730 must be 2",
    )
    v, nm = valuation_and_norm(0, 2)
    _ensure(v == math.inf and nm == 0, "zero must report (inf, 0)")
    _ensure(
        valuation_and_norm(4, 4) == (1, Fraction(1, 4)),
        "norm of 4 in base 4 must be 1/4",
    )
    two = valuation_and_norm(2, 4)[1]
    _ensure(
        two * two == 1 and two * two != Fraction(1, 4),
        "base-4 norm must fail multiplicativity on 2*2",
    )
    rng = random.Random(0x4E4F524D)
    for _ in range(500):
        x = Fraction(rng.randint(-10**6, 10**6) or 1, rng.randint(1, 10**4))
        y = Fraction(rng.randint(-10**6, 10**6) or 1, rng.randint(1, 10**4))
        _ensure(
            valuation_and_norm(x * y, 2)[1]
            == valuation_and_norm(x, 2)[1] * valuation_and_norm(y, 2)[1],
            f"norm multiplicativity failed for {x}, {y}",
        )


def check_euler_order() -> None:
    for n in range(21):
        _ensure(
            power_tower_term(3, 2, n, n + 1).residue() == 1,
            f"3**(2**{n}) is not 1 mod 2**{n + 1}",
        )
    for a in range(3, 21):
        got = multiplicative_order(3, 2, a)
        _ensure(
            got == 1 << (a - 2),
            f"order of 3 mod 2**{a} is {got}, expected {1 << (a - 2)}",
        )


def check_tower_grid() -> None:
    grid = figure_grid(3)
    _ensure(
        grid.height == 256 and grid.width == 600,
        f"tower grid is {grid.height}x{grid.width}, expected 256x600",
    )
    modulus = 1 << 600
    for n, row in enumerate(grid.rows):
        # Oracle: exact exponent, no group-order reduction, bitwise digits.
        value = pow(3, 2**n, modulus)
        digits = []
        for _ in range(600):
            value, d = divmod(value, 2)
            digits.append(d)
        _ensure(tuple(digits) == row, f"tower grid row {n} mismatches oracle")


def check_coefficients() -> None:
    cs = extract_coefficients(*_EXTRACT_ARGS)
    _ensure(cs[0].residue() == 1, f"c0 must be 1, got {cs[0].residue()}")
    c1 = cs[1]
    _ensure(
        c1.residue() % (1 << 12) == 2292,
        f"c1 mod 2**12 is {c1.residue() % (1 << 12)}, expected 2292",
    )
    log3 = padic_log(3, 2, 40)
    t = min(40, c1.precision)
    _ensure(t >= 24, f"c1 achieved only {c1.precision} digits, need >= 24")
    _ensure(
        c1.residue() % (1 << t) == log3.to_approx(t).residue(),
        "extracted c1 disagrees with the logarithm route",
    )
    r1 = c1.residue()
    t2 = min(cs[2].precision, c1.precision)
    _ensure(t2 >= 12, f"c2 achieved only {cs[2].precision} digits, need >= 12")
    square = (r1 * r1) % (1 << (t2 + 1))
    _ensure(
        cs[2].residue() % (1 << t2) == (square // 2) % (1 << t2),
        "extracted c2 is not c1**2 / 2",
    )
    t3 = min(cs[3].precision, c1.precision, 40)
    _ensure(t3 >= 12, f"c3 achieved only {cs[3].precision} digits, need >= 12")
    cube = pow(r1, 3, 1 << (t3 + 2)) * pow(3, -1, 1 << (t3 + 2)) % (1 << (t3 + 2))
    _ensure(cube % 2 == 0, "c1**3 / 3 lost its parity")
    _ensure(
        cs[3].residue() % (1 << t3) == (cube // 2) % (1 << t3),
        "extracted c3 is not c1**3 / 6",
    )
    for j, expected in ((1, COEFF_DIGITS_1), (2, COEFF_DIGITS_2), (3, COEFF_DIGITS_3)):
        _ensure(
            cs[j].precision >= 32,
            f"c{j} achieved {cs[j].precision} digits; 32 needed for display",
        )
        _ensure(
            cs[j].digits[:32] == expected,
            f"c{j} digit prefix {cs[j].digits[:32]} != printed {expected}",
        )


def check_residual_decay() -> None:
    cs = extract_coefficients(*_EXTRACT_ARGS)
    for n in range(4, 13):
        bound = 4 * n - 8
        modulus = 1 << bound
        total = sum(cs[j].residue() << (j * n) for j in range(4)) % modulus
        residual = (pow(3, 2**n, modulus) - total) % modulus
        _ensure(
            residual == 0,
            f"residual at n={n} has valuation below {bound}",
        )


def check_teichmuller() -> None:
    modulus = 5**12
    lifts = {}
    for k in (2, 3):
        w = teichmuller(k, 5, 12).residue()
        lifts[k] = w
        _ensure(pow(w, 4, modulus) == 1, f"lift of {k} is not a 4th root of 1")
        _ensure(w % 5 == k, f"lift of {k} is not {k} mod 5")
    _ensure(
        (lifts[2] + lifts[3]) % modulus == 0,
        "lifts of 2 and 3 in base 5 must cancel",
    )
    w = teichmuller(2, 3, 12)
    _ensure(w.digits == (2,) * 12, "lift of 2 in base 3 must be -1 (all twos)")


_LIMIT_CASES = (
    ("catalan@2^n", "converged"),
    ("motzkin@2^n", "converged"),
    ("fibonacci@4^n", "converged"),
    ("fibonacci@2*4^n", "converged"),
    ("bell@4^n", "converged"),
    ("bell@2*4^n", "converged"),
    ("fibonacci@2^n", "not-converged"),
    ("bell@2^n", "not-converged"),
)


def check_sequence_limits() -> None:
    for text, expected in _LIMIT_CASES:
        report = limit_detect(parse_sequence_spec(text), 3, budget=8)
        _ensure(
            report.outcome == expected,
            f"{text}: outcome {report.outcome}, expected {expected}",
        )
        if expected == "not-converged":
            _ensure(
                report.agreement_depth[-1] < 3,
                f"{text}: interleaved residues must stay distinct mod 8",
            )
    catalan = limit_detect(parse_sequence_spec("catalan@2^n"), 3, budget=8)
    _ensure(
        catalan.stable_from == 2,
        f"catalan tail must stabilize from term 2, got {catalan.stable_from}",
    )


def check_legendre_factorial() -> None:
    for n in range(31):
        got = legendre_valuation(1 << n, 2)
        _ensure(
            got == (1 << n) - 1,
            f"v2((2**{n})!) is {got}, expected {(1 << n) - 1}",
        )
    _ensure(
        normalized_factorial_term(1, 3).residue() == 1,
        "normalized factorial term 1 must be 1 mod 8",
    )
    for n in range(2, 11):
        got = normalized_factorial_term(n, 3).residue()
        _ensure(got == 3, f"normalized factorial term {n} is {got} mod 8, not 3")
    terms = [normalized_factorial_term(n, 8).residue() for n in range(2, 14)]
    depths = []
    for a, b in zip(terms, terms[1:]):
        diff = (b - a) % 256
        depths.append(8 if diff == 0 else min(base_multiplicity(diff, 2), 8))
    _ensure(
        all(x <= y for x, y in zip(depths, depths[1:])),
        f"agreement depth must be non-decreasing, got {depths}",
    )
    for n in range(1, 7):
        exact = math.factorial(1 << n)
        exact >>= legendre_valuation(1 << n, 2)
        _ensure(exact % 2 == 1, "odd part of an exact factorial must be odd")
        _ensure(
            exact % (1 << 16) == odd_factorial_mod(1 << n, 16),
            f"odd-part recursion disagrees with the exact factorial at n={n}",
        )


def check_property_suites() -> None:
    rng = random.Random(0x1A7E57)

    def sample() -> Fraction:
        return Fraction(
            rng.randint(-10**6, 10**6), rng.randint(1, 10**4)
        )

    for _ in range(10_000):
        x, y, z = sample(), sample(), sample()
        nxy = valuation_and_norm(x - y, 2)[1]
        nyz = valuation_and_norm(y - z, 2)[1]
        nxz = valuation_and_norm(x - z, 2)[1]
        _ensure(
            nxz <= max(nxy, nyz),
            f"ultrametric inequality failed on {x}, {y}, {z}",
        )
        if nxy != nyz:
            _ensure(
                nxz == max(nxy, nyz),
                f"isosceles equality failed on {x}, {y}, {z}",
            )
    x, y, z = Fraction(20), Fraction(0), Fraction(-6)
    _ensure(
        valuation_and_norm(x - y, 2)[1] == Fraction(1, 4)
        and valuation_and_norm(y - z, 2)[1] == Fraction(1, 2)
        and valuation_and_norm(x - z, 2)[1] == Fraction(1, 2),
        "the 20/6/26 isosceles instance must hold exactly",
    )

    for _ in range(1000):
        n = rng.randint(-10**9, 10**9) or 1
        d = rng.randint(1, 10**9)
        s = padic_from_rational(n, d, 2, 32)
        rhs = Fraction(n) / Fraction(2) ** s.valuation
        _ensure(rhs.denominator == 1, "n / 2**valuation must be an integer")
        _ensure(
            (s.unit.residue() * d - rhs.numerator) % (1 << 32) == 0,
            f"round trip failed for {n}/{d}",
        )

    for modulus in (rng.randint(2, 10**6), rng.randint(2, 100)):
        a, b = 0, 1
        for m in range(10_001):
            _ensure(
                fibonacci_mod(m, modulus) == a % modulus,
                f"fast doubling disagrees with iteration at {m} mod {modulus}",
            )
            a, b = b, (a + b) % modulus


CHECKS: tuple[tuple[str, object], ...] = (
    ("rational-expansions", check_rational_expansions),
    ("norms-and-valuations", check_norms),
    ("euler-congruence-order", check_euler_order),
    ("tower-grid-oracle", check_tower_grid),
    ("coefficient-extraction", check_coefficients),
    ("residual-decay", check_residual_decay),
    ("teichmuller", check_teichmuller),
    ("sequence-limits", check_sequence_limits),
    ("legendre-factorial", check_legendre_factorial),
    ("property-suites", check_property_suites),
)


def run_checks(only: str | None = None):
    """Run (a filtered subset of) the checks.

    Returns a list of (name, passed, detail, seconds) tuples; detail is
    the failure message for failed checks and empty otherwise.
    """
    selected = [
        (name, fn) for name, fn in CHECKS if only is None or only in name
    ]
    if not selected:
        raise ValueError(f"no checks match {only!r}")
    results = []
    for name, fn in selected:
        start = time.perf_counter()
        try:
            fn()
        except CheckFailure as exc:
            results.append((name, False, str(exc), time.perf_counter() - start))
        else:
            results.append((name, True, "", time.perf_counter() - start))
    return results
