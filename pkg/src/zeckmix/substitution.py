"""Random substitutions: set-valued rewriting, inflation words, the
compressed inflation DAG, substitution matrices and spectral diagnostics.

Words are plain strings over single-character letters.  Applying a rule to a
word concatenates the image sets letter by letter; iterating from a single
letter produces the level-n inflation word sets.  Enumerating operations are
guarded because those sets grow super-exponentially; the DAG answers length,
counting and membership queries without enumeration.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GuardExceededError,
    NonConvergenceError,
    NonPrimitiveMatrixError,
    StructureError,
)

DEFAULT_SET_GUARD = 10**6


@dataclass(frozen=True)
class RandomSubstitution:
    alphabet: tuple[str, ...]
    rule: dict[str, tuple[str, ...]]
    uniform_length: bool
    abelian_compatible: bool
    label: str = ""

    def images(self, letter: str) -> tuple[str, ...]:
        return self.rule[letter]

    def __str__(self) -> str:
        return format_rules(self)


def make_substitution(rule, alphabet=None, label="") -> RandomSubstitution:
    """Validate and canonicalize a letter -> iterable-of-words mapping."""
    if alphabet is None:
        alphabet = tuple(rule.keys())
    else:
        alphabet = tuple(alphabet)
    if not alphabet:
        raise ValueError("alphabet must be non-empty")
    if len(set(alphabet)) != len(alphabet):
        raise ValueError("alphabet letters must be distinct")
    for a in alphabet:
        if len(a) != 1 or a == "?":
            raise ValueError(f"letters must be single non-'?' characters: {a!r}")
    letters = set(alphabet)
    canonical: dict[str, tuple[str, ...]] = {}
    for a in alphabet:
        images = tuple(sorted(set(rule.get(a, ()))))
        if not images:
            raise ValueError(f"image set of {a!r} must be non-empty")
        for w in images:
            if not w:
                raise ValueError(f"images of {a!r} must be non-empty words")
            if not set(w) <= letters:
                raise ValueError(f"image {w!r} of {a!r} leaves the alphabet")
        canonical[a] = images
    uniform = all(len({len(w) for w in canonical[a]}) == 1 for a in alphabet)
    abelian = all(
        len({tuple(w.count(b) for b in alphabet) for w in canonical[a]}) == 1
        for a in alphabet
    )
    return RandomSubstitution(alphabet, canonical, uniform, abelian, label)


def random_fibonacci() -> RandomSubstitution:
    return make_substitution({"a": ("ab", "ba"), "b": ("a",)}, label="fibonacci")


def random_tribonacci() -> RandomSubstitution:
    return make_substitution(
        {"a": ("ab", "ba"), "b": ("ac", "ca"), "c": ("a",)}, label="tribonacci"
    )


def random_kbonacci(k: int) -> RandomSubstitution:
    if not 2 <= k <= 26:
        raise ValueError("k must be between 2 and 26")
    letters = string.ascii_lowercase[:k]
    rule = {}
    for i in range(k - 1):
        rule[letters[i]] = (letters[0] + letters[i + 1], letters[i + 1] + letters[0])
    rule[letters[-1]] = (letters[0],)
    return make_substitution(rule, letters, label=f"{k}-bonacci")


def random_metallic(m: int) -> RandomSubstitution:
    if m < 1:
        raise ValueError("m must be >= 1")
    images = tuple("a" * i + "b" + "a" * (m - i) for i in range(m + 1))
    return make_substitution({"a": images, "b": ("a",)}, label=f"metallic-{m}")


def metallic_pisa(k: int, m: int) -> RandomSubstitution:
    if not 2 <= k <= 26 or m < 1:
        raise ValueError("need 2 <= k <= 26 and m >= 1")
    letters = string.ascii_lowercase[:k]
    a1 = letters[0]
    rule = {}
    for i in range(k - 1):
        rule[letters[i]] = tuple(
            a1 * j + letters[i + 1] + a1 * (m - j) for j in range(m + 1)
        )
    rule[letters[-1]] = (a1,)
    return make_substitution(rule, letters, label=f"metallic-pisa-{k}-{m}")


def apply(sub: RandomSubstitution, w: str, guard: int = DEFAULT_SET_GUARD) -> set[str]:
    """Set concatenation of the letter images of w, deduplicated."""
    if not w:
        raise ValueError("word must be non-empty")
    out = {""}
    for letter in w:
        images = sub.rule[letter]
        nxt = {prefix + img for prefix in out for img in images}
        if len(nxt) > guard:
            raise GuardExceededError(
                f"apply would exceed the {guard}-word guard at letter {letter!r}"
            )
        out = nxt
    return out


def apply_to_set(sub, words, guard: int = DEFAULT_SET_GUARD) -> set[str]:
    out: set[str] = set()
    for w in words:
        out |= apply(sub, w, guard)
        if len(out) > guard:
            raise GuardExceededError(f"apply_to_set exceeds the {guard}-word guard")
    return out


def inflation_words(sub, letter: str, n: int, guard: int = DEFAULT_SET_GUARD) -> set[str]:
    """The level-n inflation word set of `letter`, fully enumerated."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    current = {letter}
    for _ in range(n):
        current = apply_to_set(sub, current, guard)
    return current


@dataclass
class InflationDag:
    """Compressed view of all level-n inflation word sets up to max_level.

    Node (letter, n) stands for the set of level-n inflation words of
    `letter`; its alternatives are the rule images, each read as a sequence
    of level-(n-1) child nodes.  Lengths and realisation-path counts are
    computed bottom-up without enumeration.  Instances are immutable after
    construction apart from an append-only spell cache.
    """

    substitution: RandomSubstitution
    max_level: int
    _lengths: dict = field(default_factory=dict, repr=False)
    _paths: dict = field(default_factory=dict, repr=False)
    _spell_cache: dict = field(default_factory=dict, repr=False)

    def element_length(self, letter: str, level: int) -> int:
        """Common length of the node's words; StructureError if non-uniform."""
        value = self._lengths[(letter, level)]
        if value is None:
            raise StructureError(
                f"node ({letter}, {level}) has words of several lengths"
            )
        return value

    def path_count(self, letter: str, level: int) -> int:
        """Number of realisation paths (counts repeated words separately).

        Computed on demand: the counts are exact big integers whose size
        explodes with the level, so they are never built eagerly.
        """
        if level > self.max_level:
            raise ValueError(f"dag was built to level {self.max_level}")
        paths = self._paths
        for a in self.substitution.alphabet:
            paths.setdefault((a, 0), 1)
        for lvl in range(1, level + 1):
            if (letter, lvl) in paths and lvl < level:
                continue
            for a in self.substitution.alphabet:
                if (a, lvl) in paths:
                    continue
                count = 0
                for image in self.substitution.rule[a]:
                    prod = 1
                    for c in image:
                        prod *= paths[(c, lvl - 1)]
                    count += prod
                paths[(a, lvl)] = count
        return paths[(letter, level)]

    def words(self, letter: str, level: int, guard: int = 10**4) -> set[str]:
        """Enumerate the node's word set; guarded, for tests and small cases."""
        memo: dict = {}

        def rec(a, n):
            key = (a, n)
            if key in memo:
                return memo[key]
            if n == 0:
                memo[key] = {a}
                return memo[key]
            out = set()
            for image in self.substitution.rule[a]:
                parts = {""}
                for child in image:
                    parts = {p + q for p in parts for q in rec(child, n - 1)}
                    if len(parts) > guard:
                        raise GuardExceededError(
                            f"dag enumeration exceeds the {guard}-word guard"
                        )
                out |= parts
                if len(out) > guard:
                    raise GuardExceededError(
                        f"dag enumeration exceeds the {guard}-word guard"
                    )
            memo[key] = out
            return out

        return rec(letter, level)

    def spell_any(self, letter: str, level: int) -> str:
        """One concrete element of the node (first image everywhere)."""
        key = (letter, level)
        cached = self._spell_cache.get(key)
        if cached is not None:
            return cached
        if level == 0:
            word = letter
        else:
            word = "".join(
                self.spell_any(child, level - 1)
                for child in self.substitution.rule[letter][0]
            )
        self._spell_cache[key] = word
        return word

    def contains(self, word: str, letter: str, level: int) -> bool:
        """Exact membership of `word` in the node's word set, by matching."""
        n = len(word)
        memo: dict = {}

        def ends(start: int, a: str, lvl: int) -> frozenset:
            key = (start, a, lvl)
            hit = memo.get(key)
            if hit is not None:
                return hit
            if lvl == 0:
                result = frozenset({start + 1} if start < n and word[start] == a else ())
            else:
                found = set()
                for image in self.substitution.rule[a]:
                    positions = {start}
                    for child in image:
                        positions = {
                            e for p in positions for e in ends(p, child, lvl - 1)
                        }
                        if not positions:
                            break
                    found |= positions
                result = frozenset(found)
            memo[key] = result
            return result

        return n in ends(0, letter, level)


def build_dag(sub: RandomSubstitution, max_level: int) -> InflationDag:
    if max_level < 0:
        raise ValueError("max_level must be nonnegative")
    dag = InflationDag(sub, max_level)
    lengths = dag._lengths
    for a in sub.alphabet:
        lengths[(a, 0)] = 1
    for level in range(1, max_level + 1):
        for a in sub.alphabet:
            per_alt = []
            for image in sub.rule[a]:
                child_lengths = [lengths[(c, level - 1)] for c in image]
                per_alt.append(
                    None if None in child_lengths else sum(child_lengths)
                )
            uniform = per_alt[0]
            if any(v != uniform for v in per_alt):
                uniform = None
            lengths[(a, level)] = uniform
    return dag


def substitution_matrix(sub: RandomSubstitution) -> list[list[int]]:
    """Entry (i, j) counts letter i in any image of letter j; columns hold
    the image abelianisations, so length vectors evolve by left
    multiplication with row vectors.
    """
    if not sub.abelian_compatible:
        raise StructureError(
            "images of some letter disagree on letter counts; no matrix exists"
        )
    alpha = sub.alphabet
    return [
        [sub.rule[col][0].count(row) for col in alpha]
        for row in alpha
    ]


def is_primitive(matrix) -> bool:
    """Some power of the (nonnegative) matrix is strictly positive."""
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix must be square")
    if (arr < 0).any():
        raise ValueError("matrix must be nonnegative")
    size = arr.shape[0]
    boolean = arr > 0
    power = boolean.copy()
    bound = max(1, (size - 1) ** 2 + 1)
    for _ in range(bound):
        if power.all():
            return True
        power = (power @ boolean) > 0
    return bool(power.all())


def pf_eigenvalue(matrix, tol: float = 1e-12, max_iter: int = 200000) -> float:
    """Dominant eigenvalue by power iteration to relative tolerance `tol`."""
    if not is_primitive(matrix):
        raise NonPrimitiveMatrixError("matrix is not primitive")
    arr = np.asarray(matrix, dtype=float)
    vec = np.ones(arr.shape[0])
    value = 0.0
    for _ in range(max_iter):
        nxt = arr @ vec
        new_value = float(np.max(nxt))
        vec = nxt / new_value
        if abs(new_value - value) <= tol * abs(new_value):
            return new_value
        value = new_value
    raise NonConvergenceError("power iteration did not converge")


def characteristic_polynomial(matrix) -> list[int]:
    """Exact integer coefficients, leading 1, by the trace recursion."""
    arr = [[int(x) for x in row] for row in matrix]
    size = len(arr)
    coeffs = [1]
    work = [row[:] for row in arr]
    for k in range(1, size + 1):
        trace = sum(work[i][i] for i in range(size))
        assert trace % k == 0
        ck = -trace // k
        coeffs.append(ck)
        if k == size:
            break
        for i in range(size):
            work[i][i] += ck
        work = [
            [sum(arr[i][t] * work[t][j] for t in range(size)) for j in range(size)]
            for i in range(size)
        ]
    return coeffs


def is_pisot(matrix, tol: float = 1e-9) -> bool:
    """True when every characteristic root but the dominant one lies inside
    the unit disk (numeric check, not an algebraic proof).
    """
    if not is_primitive(matrix):
        raise NonPrimitiveMatrixError("matrix is not primitive")
    coeffs = characteristic_polynomial(matrix)
    try:
        roots = np.roots(coeffs)
    except np.linalg.LinAlgError as exc:
        raise NonConvergenceError("root finding failed to converge") from exc
    moduli = sorted(abs(z) for z in roots)
    return all(mod < 1 - tol for mod in moduli[:-1])


def format_rules(sub: RandomSubstitution) -> str:
    """`letter -> {image1, image2}` lines, the custom rule file format."""
    lines = [
        f"{a} -> {{{', '.join(sub.rule[a])}}}"
        for a in sub.alphabet
    ]
    return "\n".join(lines)


def parse_rules(text: str, label="custom") -> RandomSubstitution:
    rule: dict[str, tuple[str, ...]] = {}
    order = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "->" not in line:
            raise ValueError(f"cannot parse rule line: {raw!r}")
        head, _, body = line.partition("->")
        letter = head.strip()
        body = body.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"image set must be brace-delimited: {raw!r}")
        images = tuple(
            part.strip() for part in body[1:-1].split(",") if part.strip()
        )
        if letter in rule:
            raise ValueError(f"duplicate rule for letter {letter!r}")
        rule[letter] = images
        order.append(letter)
    if not rule:
        raise ValueError("no rules found")
    return make_substitution(rule, order, label=label)
