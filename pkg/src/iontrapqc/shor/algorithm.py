"""Order finding and the factoring pipeline built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from iontrapqc.shor.register import MAX_QUBITS, QubitRegister, RegisterError, hadamard_all, qft

DEFAULT_ATTEMPTS = 32
MODES = ("deferred", "literal")


class ModulusError(ValueError):
    """The modulus cannot be factored by this pipeline."""


class EvenModulusError(ModulusError):
    pass


class PrimeModulusError(ModulusError):
    pass


class PrimePowerError(ModulusError):
    pass


class NotCoprimeError(ValueError):
    """The base shares a factor with the modulus; ``divisor`` is that factor."""

    def __init__(self, base: int, modulus: int, divisor: int):
        super().__init__(f"gcd({base}, {modulus}) = {divisor}")
        self.divisor = divisor


def gcd(a: int, b: int) -> int:
    """Euclid's algorithm on non-negative integers, not both zero."""
    a, b = int(a), int(b)
    if a < 0 or b < 0:
        raise ValueError("gcd arguments must be non-negative")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a


def power_table(base: int, modulus: int, count: int) -> np.ndarray:
    """base^z mod modulus for z = 0..count-1, by repeated squaring on the bits of z."""
    z = np.arange(count, dtype=np.int64)
    out = np.ones(count, dtype=np.int64) % modulus
    square = base % modulus
    bit = 0
    while (1 << bit) < count:
        out = np.where((z >> bit) & 1, out * square % modulus, out)
        square = square * square % modulus
        bit += 1
    return out


def mod_exp(register: QubitRegister, base: int, modulus: int, left="left", right="right") -> QubitRegister:
    """|z>_left |y>_right -> |z>_left |y XOR (base^z mod modulus)>_right.

    With the right register in |0> this writes f(z) = base^z mod N. The XOR
    form keeps the map a permutation on every basis state.
    """
    divisor = gcd(base % modulus, modulus) if base % modulus else modulus
    if divisor != 1:
        raise NotCoprimeError(base, modulus, divisor)
    left_q, right_q = register.qubits(left), register.qubits(right)
    if set(left_q) & set(right_q):
        raise RegisterError("left and right segments overlap")
    if modulus > 2 ** len(right_q):
        raise RegisterError("right segment too small for the modulus")
    table = power_table(base, modulus, 2 ** len(left_q))
    f = table[register.segment_values(left_q)]
    idx = np.arange(register.amplitudes.size)
    mask = np.zeros_like(idx)
    for j, q in enumerate(right_q):
        mask |= ((f >> j) & 1) << q
    out = register.copy()
    out.amplitudes = register.amplitudes[idx ^ mask]
    return out


def extract_order(measured: int, bits: int, modulus: int, base: int) -> int | None:
    """Order candidate from a left-register reading by continued fractions.

    Walks the convergents of ``measured / 2**bits`` whose denominators do not
    exceed ``modulus`` and returns the smallest denominator ``r`` with
    ``base**r = 1 (mod modulus)``; ``None`` when none qualifies.
    """
    if not 0 <= measured < 2**bits:
        raise ValueError("measured value outside the register range")
    if measured == 0:
        return None
    for denominator in _convergent_denominators(Fraction(measured, 2**bits)):
        if denominator > modulus:
            break
        if pow(base, denominator, modulus) == 1:
            return denominator
    return None


def _convergent_denominators(value: Fraction):
    """Denominators of successive continued-fraction convergents of ``value``."""
    q_prev, q = 1, 0
    num, den = value.numerator, value.denominator
    while den:
        a, rem = divmod(num, den)
        q_prev, q = q, a * q + q_prev
        yield q
        num, den = den, rem


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def _prime_power_base(n: int) -> int | None:
    for k in range(2, n.bit_length() + 1):
        root = round(n ** (1.0 / k))
        for cand in (root - 1, root, root + 1):
            if cand > 1 and cand**k == n and is_prime(cand):
                return cand
    return None


def validate_modulus(n: int) -> None:
    if int(n) != n or n < 3:
        raise ModulusError(f"modulus must be an integer >= 3, got {n!r}")
    if n % 2 == 0:
        raise EvenModulusError(f"{n} is even; 2 is a factor")
    if is_prime(n):
        raise PrimeModulusError(f"{n} is prime")
    base = _prime_power_base(n)
    if base is not None:
        raise PrimePowerError(f"{n} is a power of the prime {base}")
    if 3 * n.bit_length() + 1 > MAX_QUBITS:
        raise ModulusError(f"{n} needs {3 * n.bit_length() + 1} qubits; the simulator cap is {MAX_QUBITS}")


def _prepared(modulus: int, base: int) -> QubitRegister:
    register = QubitRegister.for_modulus(modulus)
    register = hadamard_all(register, "left")
    return mod_exp(register, base, modulus)


@lru_cache(maxsize=64)
def _left_distribution(modulus: int, base: int) -> tuple[float, ...]:
    register = qft(_prepared(modulus, base), "left")
    return tuple(register.distribution("left"))


@lru_cache(maxsize=64)
def _right_distribution(modulus: int, base: int) -> tuple[float, ...]:
    return tuple(_prepared(modulus, base).distribution("right"))


@lru_cache(maxsize=256)
def _literal_distribution(modulus: int, base: int, right_value: int) -> tuple[float, ...]:
    register = _prepared(modulus, base)
    keep = register.segment_values("right") == right_value
    amps = np.where(keep, register.amplitudes, 0)
    register.amplitudes = amps / np.linalg.norm(amps)
    return tuple(qft(register, "left").distribution("left"))


def order_finding_distribution(modulus: int, base: int) -> np.ndarray:
    """Probability of each left-register reading after the QFT."""
    return np.array(_left_distribution(modulus, base))


def sample_left_register(modulus: int, base: int, rng: np.random.Generator, mode: str = "deferred") -> int:
    """One run of the quantum order-finding routine."""
    if mode == "deferred":
        probs = order_finding_distribution(modulus, base)
    elif mode == "literal":
        right = np.array(_right_distribution(modulus, base))
        right_value = int(rng.choice(right.size, p=right / right.sum()))
        probs = np.array(_literal_distribution(modulus, base, right_value))
    else:
        raise ValueError(f"mode must be one of {MODES}")
    return int(rng.choice(probs.size, p=probs / probs.sum()))


@dataclass
class FactoringOutcome:
    modulus: int
    base: int | None = None
    measured: int | None = None
    order: int | None = None
    candidate: int | None = None
    factors: set[int] = field(default_factory=set)
    attempts: list[dict] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return bool(self.factors)

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "base": self.base,
            "measured": self.measured,
            "order": self.order,
            "candidate": self.candidate,
            "factors": sorted(self.factors),
            "success": self.success,
            "attempts": self.attempts,
        }


def factor(modulus: int, seed: int | None = None, max_attempts: int = DEFAULT_ATTEMPTS, mode: str = "deferred") -> FactoringOutcome:
    """Find a nontrivial factorization of ``modulus`` with simulated order finding."""
    validate_modulus(modulus)
    if max_attempts < 1:
        raise ValueError("max_attempts must be positive")
    rng = np.random.default_rng(seed)
    bits = 2 * modulus.bit_length()
    outcome = FactoringOutcome(modulus)
    for attempt in range(1, max_attempts + 1):
        base = int(rng.integers(2, modulus - 1))
        entry = {"attempt": attempt, "base": base}
        outcome.attempts.append(entry)
        shared = gcd(base, modulus)
        if shared != 1:
            entry.update(result="gcd_shortcut", divisor=shared)
            outcome.base = base
            outcome.factors = {shared, modulus // shared}
            return outcome
        measured = sample_left_register(modulus, base, rng, mode)
        order = extract_order(measured, bits, modulus, base)
        entry.update(measured=measured, order=order)
        if order is None:
            entry["result"] = "no_order"
            continue
        if order % 2:
            entry["result"] = "odd_order"
            continue
        candidate = pow(base, order // 2, modulus)
        entry["candidate"] = candidate
        if candidate == modulus - 1:
            entry["result"] = "trivial_root"
            continue
        divisor = max(gcd(candidate - 1, modulus), gcd(candidate + 1, modulus))
        if divisor in (1, modulus):
            entry["result"] = "trivial_divisor"
            continue
        entry.update(result="success", divisor=divisor)
        outcome.base, outcome.measured, outcome.order, outcome.candidate = base, measured, order, candidate
        outcome.factors = {divisor, modulus // divisor}
        return outcome
    return outcome
