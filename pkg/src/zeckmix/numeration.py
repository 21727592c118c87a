"""Generalized Zeckendorf numeration over linear recurrence sequences.

A scheme pairs an integer recurrence with a digit rule.  For the built-in
families the rule is the classical one (no two adjacent ones for Fibonacci,
no three in a row for tribonacci, digit m forces a zero below it for the
metallic sequences).  All of these are instances of one criterion: every
window of `order` consecutive digits, read most-significant first and padded
with zeros past either end, must be lexicographically smaller than the
coefficient vector.  For nonincreasing positive coefficients this is exactly
the condition "each tail of the expansion stays below the next term", so the
greedy expansion is the unique valid one.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import DigitRuleError, GuardExceededError

INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class LinearRecurrence:
    """term(i) = sum(coefficients[j] * term(i-1-j)) once i >= order."""

    order: int
    coefficients: tuple[int, ...]
    initial_terms: tuple[int, ...]
    label: str = ""
    _terms: list[int] = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if len(self.coefficients) != self.order:
            raise ValueError("need exactly `order` coefficients")
        if len(self.initial_terms) != self.order:
            raise ValueError("need exactly `order` initial terms")
        if any(c < 0 for c in self.coefficients) or self.coefficients[0] < 1:
            raise ValueError("coefficients must be nonnegative with c1 >= 1")
        self._terms.extend(self.initial_terms)

    def term(self, i: int) -> int:
        """i-th sequence element; cached, with checked 64-bit arithmetic."""
        if i < 0:
            raise ValueError("index must be nonnegative")
        terms = self._terms
        while len(terms) <= i:
            nxt = 0
            for j, c in enumerate(self.coefficients):
                nxt += c * terms[-1 - j]
            if nxt > INT64_MAX:
                raise OverflowError(
                    f"term {len(terms)} of {self.label or 'recurrence'} "
                    "exceeds the 64-bit guard"
                )
            terms.append(nxt)
        return terms[i]

    def terms_up_to(self, bound: int) -> list[int]:
        """All terms with value <= bound, starting from index 0."""
        out = []
        i = 0
        while True:
            t = self.term(i)
            if t > bound:
                return out
            out.append(t)
            i += 1


def fibonacci_recurrence() -> LinearRecurrence:
    return LinearRecurrence(2, (1, 1), (1, 1), "fibonacci")


def tribonacci_recurrence() -> LinearRecurrence:
    return LinearRecurrence(3, (1, 1, 1), (0, 1, 1), "tribonacci")


def kbonacci_recurrence(k: int) -> LinearRecurrence:
    if k < 2:
        raise ValueError("k must be >= 2")
    init = (0,) * (k - 2) + (1, 1)
    return LinearRecurrence(k, (1,) * k, init, f"{k}-bonacci")


def metallic_recurrence(m: int) -> LinearRecurrence:
    if m < 1:
        raise ValueError("m must be >= 1")
    return LinearRecurrence(2, (m, 1), (1, 1), f"metallic-{m}")


def metallic_pisa_recurrence(k: int, m: int) -> LinearRecurrence:
    if k < 2 or m < 1:
        raise ValueError("need k >= 2 and m >= 1")
    init = (0,) * (k - 2) + (1, 1)
    return LinearRecurrence(k, (m,) + (1,) * (k - 1), init, f"metallic-pisa-{k}-{m}")


@dataclass(frozen=True)
class NumerationScheme:
    """A recurrence plus the digit-validity rule of its Zeckendorf theorem.

    `base_index` is the smallest term index a digit may sit on (1 for
    Fibonacci and the metallic family, k-1 for the k-term families, so 2 for
    tribonacci).  Digits below the base are implicitly zero.
    """

    recurrence: LinearRecurrence
    family: str
    params: tuple[int, ...] = ()
    base_index: int = 1

    def __post_init__(self):
        coeffs = self.recurrence.coefficients
        if any(c < 1 for c in coeffs):
            raise ValueError("scheme coefficients must all be >= 1")
        if any(a < b for a, b in zip(coeffs, coeffs[1:])):
            raise ValueError("scheme coefficients must be nonincreasing")
        if self.recurrence.term(self.base_index) != 1:
            raise ValueError("term at base_index must equal 1")

    @property
    def max_digit(self) -> int:
        c1 = self.recurrence.coefficients[0]
        return c1 if self.recurrence.order >= 2 else c1 - 1

    def term(self, i: int) -> int:
        return self.recurrence.term(i)

    def window_ok(self, window: tuple[int, ...]) -> bool:
        """Lexicographic window criterion against the coefficient vector."""
        return window < self.recurrence.coefficients

    def descriptor(self) -> str:
        names = {"kbonacci": ("k",), "metallic": ("m",),
                 "metallic-pisa": ("k", "m")}.get(self.family, ())
        parts = [f"family={self.family}"]
        parts += [f"{n}={v}" for n, v in zip(names, self.params)]
        parts.append(f"base_index={self.base_index}")
        return " ".join(parts)


def fibonacci_scheme() -> NumerationScheme:
    return NumerationScheme(fibonacci_recurrence(), "fibonacci", (), 1)


def tribonacci_scheme() -> NumerationScheme:
    return NumerationScheme(tribonacci_recurrence(), "tribonacci", (), 2)


def kbonacci_scheme(k: int) -> NumerationScheme:
    return NumerationScheme(kbonacci_recurrence(k), "kbonacci", (k,), k - 1)


def metallic_scheme(m: int) -> NumerationScheme:
    return NumerationScheme(metallic_recurrence(m), "metallic", (m,), 1)


def metallic_pisa_scheme(k: int, m: int) -> NumerationScheme:
    return NumerationScheme(
        metallic_pisa_recurrence(k, m), "metallic-pisa", (k, m), k - 1
    )


def custom_scheme(recurrence: LinearRecurrence, base_index: int) -> NumerationScheme:
    """Wrap a user recurrence; coefficients must be nonincreasing and >= 1."""
    scheme = NumerationScheme(recurrence, "custom", (), base_index)
    for i in range(base_index, base_index + 16):
        try:
            if scheme.term(i + 1) <= scheme.term(i):
                raise ValueError("terms must increase strictly above the base index")
        except OverflowError:
            break
    return scheme


@dataclass(frozen=True)
class DigitString:
    """Digits of a natural number, most-significant first; empty means 0."""

    digits: tuple[int, ...]
    scheme: NumerationScheme

    def __len__(self) -> int:
        return len(self.digits)

    def position(self, idx: int) -> int:
        """Term index carried by digits[idx]."""
        return self.scheme.base_index + len(self.digits) - 1 - idx

    def to_text(self) -> str:
        if self.scheme.max_digit <= 9:
            return "".join(str(d) for d in self.digits)
        return ",".join(str(d) for d in self.digits)

    def __str__(self) -> str:
        return self.to_text()


def digit_string_from_text(scheme: NumerationScheme, text: str) -> DigitString:
    text = text.strip()
    if not text:
        return DigitString((), scheme)
    if "," in text:
        digits = tuple(int(part) for part in text.split(","))
    else:
        digits = tuple(int(ch) for ch in text)
    if any(d < 0 for d in digits):
        raise ValueError("digits must be nonnegative")
    return DigitString(digits, scheme)


def term(scheme: NumerationScheme, i: int) -> int:
    return scheme.term(i)


def _terms_past(scheme: NumerationScheme, bound: int) -> list[int]:
    """The shared term cache, extended until the last entry exceeds bound."""
    rec = scheme.recurrence
    terms = rec._terms
    coeffs = rec.coefficients
    while terms[-1] <= bound:
        nxt = 0
        for j, c in enumerate(coeffs):
            nxt += c * terms[-1 - j]
        if nxt > INT64_MAX:
            raise OverflowError(
                f"term {len(terms)} of {rec.label or 'recurrence'} "
                "exceeds the 64-bit guard"
            )
        terms.append(nxt)
    return terms


def encode_greedy(scheme: NumerationScheme, n: int) -> DigitString:
    """Greedy expansion: repeatedly subtract the largest term <= remainder."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return DigitString((), scheme)
    base = scheme.base_index
    terms = _terms_past(scheme, n)
    top = bisect_right(terms, n, lo=base) - 1
    digits = [0] * (top - base + 1)
    rem = n
    pos = top
    while rem:
        t = terms[pos]
        if t <= rem:
            count = 0
            while rem >= t:
                count += 1
                rem -= t
            digits[top - pos] = count
        pos -= 1
    return DigitString(tuple(digits), scheme)


def decode(d: DigitString) -> int:
    """Sum of digit * term(position), aligned to the scheme's base index."""
    digits = d.digits
    if not digits:
        return 0
    if any(x < 0 for x in digits):
        raise ValueError("digits must be nonnegative")
    scheme = d.scheme
    pos = scheme.base_index + len(digits) - 1
    scheme.term(pos)
    terms = scheme.recurrence._terms
    total = 0
    for x in digits:
        if x:
            total += x * terms[pos]
        pos -= 1
    return total


def is_valid(d: DigitString) -> bool:
    """Digit-rule check: every window valid and no leading zero (empty ok)."""
    digits = d.digits
    if not digits:
        return True
    if digits[0] == 0:
        return False
    scheme = d.scheme
    order = scheme.recurrence.order
    # pad below the base index with zeros; windows above the top need no
    # check because they start with a padded zero < c1
    padded = digits + (0,) * (order - 1)
    for start in range(len(digits)):
        if not scheme.window_ok(padded[start:start + order]):
            return False
    return True


def enumerate_valid(scheme, max_len: int, guard: int = 10**7):
    """Yield every valid digit string of length <= max_len, once each,
    in length-then-lexicographic order.  The empty string (zero) comes first.
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    coeffs = scheme.recurrence.coefficients
    order = scheme.recurrence.order
    max_digit = scheme.max_digit
    yielded = 1
    yield DigitString((), scheme)

    def tail_ok(prefix: list[int]) -> bool:
        # windows running off the right end, padded with zeros
        length = len(prefix)
        padded = tuple(prefix) + (0,) * (order - 1)
        for start in range(max(0, length - order + 1), length):
            if not padded[start:start + order] < coeffs:
                return False
        return True

    def extend(prefix: list[int], remaining: int):
        nonlocal yielded
        if remaining == 0:
            if not tail_ok(prefix):
                return
            yielded += 1
            if yielded > guard:
                raise GuardExceededError(
                    f"enumerate_valid guard of {guard} strings exceeded"
                )
            yield DigitString(tuple(prefix), scheme)
            return
        lo = 1 if not prefix else 0
        for digit in range(lo, max_digit + 1):
            prefix.append(digit)
            window_start = max(0, len(prefix) - order)
            window = tuple(prefix[window_start:])
            # compare the window ending at the new digit against the
            # same-length coefficient prefix; equality is fine while
            # digits can still follow
            cmp = tuple(coeffs[:len(window)])
            if window < cmp or (window == cmp and len(window) < order):
                yield from extend(prefix, remaining - 1)
            prefix.pop()

    for length in range(1, max_len + 1):
        yield from extend([], length)


def is_complete(seq: LinearRecurrence, horizon: int) -> bool:
    """Every natural number is a sum of distinct terms, checked on a horizon:
    the first positive term must be 1 and each term may exceed the running
    sum of its predecessors by at most 1.  (Criterion from the classical
    completeness literature; not restated in the sources this library models.)
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    values = [seq.term(i) for i in range(horizon + 1)]
    if any(b < a for a, b in zip(values, values[1:])):
        raise ValueError("sequence must be nondecreasing on the horizon")
    first_positive = next((v for v in values if v > 0), None)
    if first_positive != 1:
        return False
    running = 0
    for i in range(horizon):
        running += values[i]
        if values[i + 1] > 1 + running:
            return False
    return True


def append_digit(d: DigitString, digit: int) -> DigitString:
    """Append a new least-significant digit, shifting the rest up one index."""
    if digit < 0:
        raise DigitRuleError("digit must be nonnegative")
    out = DigitString(d.digits + (digit,), d.scheme)
    if not is_valid(out):
        raise DigitRuleError(
            f"appending {digit} to '{d.to_text()}' violates the digit rule"
        )
    return out
