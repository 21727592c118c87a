"""Semi-mixing verification for random substitution subshifts.

Two independent routes are provided.  The empirical checker asks, for a
legal word w and each gap length n up to a horizon, whether some word u of
length n and some seed word s make w u s legal; the query runs through the
exact legality engine on the gap pattern `w ?^n s` and every witness found
is replayed as a concrete word.  The constructive route mechanizes the
inductive arguments for the Fibonacci, tribonacci and metallic families: a
certificate records an embedding of w into an inflation word, a numeration
threshold, and the realisation choices that extend a base witness digit by
digit; witnesses for every length above the threshold are then derived
(never searched), and verification replays every recorded choice against
the substitution and the independent legality engine.

Derivations keep one invariant: the running word z followed by the current
seed s is a prefix of a concrete level-L inflation word e of the letter a.
Consuming a digit d replaces e by a realisation of its image in which the
image of s is the recorded word R: the invariant survives with z' =
image(z) + R[:d] and s' = R[d : d + seed length], and |z'| tracks the
numeration value of the digits consumed so far.  The embedding supplies the
left context that turns the prefix invariant into legality of w u s.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import (
    GuardExceededError,
    IllegalWordError,
    UnsupportedFamilyError,
)
from .language import LegalityVerdict, is_legal, pattern_witness
from .numeration import (
    DigitString,
    NumerationScheme,
    decode,
    encode_greedy,
    fibonacci_scheme,
    kbonacci_scheme,
    metallic_pisa_scheme,
    metallic_scheme,
    tribonacci_scheme,
)
from .substitution import (
    RandomSubstitution,
    apply,
    build_dag,
    metallic_pisa,
    random_fibonacci,
    random_kbonacci,
    random_metallic,
    random_tribonacci,
)

HORIZON_GUARD = 200
_WITNESS_LENGTH_GUARD = 10**6


@dataclass(frozen=True)
class Family:
    """A built-in family tag: fibonacci, tribonacci, kbonacci(k),
    metallic(m) or metallic-pisa(k, m)."""

    name: str
    params: tuple[int, ...] = ()

    def __post_init__(self):
        expected = {"fibonacci": 0, "tribonacci": 0, "kbonacci": 1,
                    "metallic": 1, "metallic-pisa": 2}
        if self.name not in expected:
            raise UnsupportedFamilyError(f"unknown family {self.name!r}")
        if len(self.params) != expected[self.name]:
            raise UnsupportedFamilyError(
                f"family {self.name!r} takes {expected[self.name]} parameter(s)"
            )

    def substitution(self) -> RandomSubstitution:
        if self.name == "fibonacci":
            return random_fibonacci()
        if self.name == "tribonacci":
            return random_tribonacci()
        if self.name == "kbonacci":
            return random_kbonacci(self.params[0])
        if self.name == "metallic":
            return random_metallic(self.params[0])
        return metallic_pisa(*self.params)

    def scheme(self) -> NumerationScheme:
        if self.name == "fibonacci":
            return fibonacci_scheme()
        if self.name == "tribonacci":
            return tribonacci_scheme()
        if self.name == "kbonacci":
            return kbonacci_scheme(self.params[0])
        if self.name == "metallic":
            return metallic_scheme(self.params[0])
        return metallic_pisa_scheme(*self.params)

    def seed_words(self) -> tuple[str, ...]:
        if self.name == "fibonacci":
            return ("ab", "ba")
        if self.name == "tribonacci":
            return ("ab", "ba", "ac", "ca")
        if self.name == "kbonacci":
            k = self.params[0]
            letters = self.substitution().alphabet
            words = {letters[0] + x for x in letters} | {x + letters[0] for x in letters}
            return tuple(sorted(words))
        if self.name == "metallic":
            m = self.params[0]
            return tuple("a" * i + "b" + "a" * (m - i) for i in range(m + 1))
        k, m = self.params
        letters = self.substitution().alphabet
        words = {
            "a" * i + letters[j] + "a" * (m - i)
            for i in range(m + 1) for j in range(1, k)
        }
        return tuple(sorted(words))

    def label(self) -> str:
        if not self.params:
            return self.name
        names = {"kbonacci": ("k",), "metallic": ("m",),
                 "metallic-pisa": ("k", "m")}[self.name]
        return self.name + " " + " ".join(
            f"{n}={v}" for n, v in zip(names, self.params)
        )


def parse_family(text: str) -> Family:
    parts = text.split()
    name = parts[0]
    kv = dict(part.split("=", 1) for part in parts[1:])
    if name == "kbonacci":
        return Family(name, (int(kv["k"]),))
    if name == "metallic":
        return Family(name, (int(kv["m"]),))
    if name == "metallic-pisa":
        return Family(name, (int(kv["k"]), int(kv["m"])))
    return Family(name)


@dataclass(frozen=True)
class SeedSet:
    words: tuple[str, ...]
    length: int
    proper: bool


def make_seed_set(sub: RandomSubstitution, words) -> SeedSet:
    """Validate seed words: non-empty, equal length, legal, and a proper
    subset of the length-l language."""
    words = tuple(sorted(set(words)))
    if not words:
        raise ValueError("seed set must be non-empty")
    lengths = {len(w) for w in words}
    if lengths == {0} or len(lengths) != 1:
        raise ValueError("seed words must share one positive length")
    length = lengths.pop()
    for w in words:
        if not is_legal(sub, w, want_witness=False).legal:
            raise IllegalWordError(f"seed word {w!r} is not legal")
    from .language import language_of_length

    full = set(language_of_length(sub, length))
    if not set(words) < full:
        raise ValueError(
            f"seed set must be a proper subset of the {len(full)} legal "
            f"length-{length} words"
        )
    return SeedSet(words, length, True)


def seed_sets(family: Family, sub: RandomSubstitution | None = None) -> SeedSet:
    """The family's distinguished seed set, properness verified."""
    if sub is None:
        sub = family.substitution()
    return make_seed_set(sub, family.seed_words())


# ---------------------------------------------------------------------------
# empirical checker


@dataclass(frozen=True)
class WitnessEntry:
    n: int
    u: str
    s: str
    evidence: LegalityVerdict


@dataclass(frozen=True)
class WitnessTable:
    source: str
    horizon: int
    seeds: tuple[str, ...]
    entries: tuple[WitnessEntry | None, ...]
    threshold: int | None

    def entry(self, n: int) -> WitnessEntry | None:
        return self.entries[n]

    def witnessed(self, n: int) -> bool:
        return self.entries[n] is not None

    def to_report(self) -> str:
        lines = [
            "# zeckmix witness-table v1",
            f"source: {self.source}",
            f"horizon: {self.horizon}",
            f"seeds: {' '.join(self.seeds)}",
            "threshold_on_horizon: "
            + ("none" if self.threshold is None else str(self.threshold)),
        ]
        for n, entry in enumerate(self.entries):
            if entry is None:
                lines.append(f"n={n} witnessed=no")
            else:
                lines.append(
                    f"n={n} u={entry.u} s={entry.s} verified=yes"
                )
        return "\n".join(lines)


def check_empirical(sub: RandomSubstitution, seeds: SeedSet, w: str,
                    n_max: int, horizon_guard: int = HORIZON_GUARD) -> WitnessTable:
    """For each n in [0, n_max], find u with |u| = n and a seed s making
    w u s legal, via exact gap-pattern queries; replay every witness."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max > horizon_guard:
        raise GuardExceededError(
            f"horizon {n_max} exceeds the work guard {horizon_guard}"
        )
    if not seeds.proper:
        raise ValueError("seed set must be validated as a proper subset")
    for s in seeds.words:
        if not is_legal(sub, s, want_witness=False).legal:
            raise IllegalWordError(f"seed word {s!r} is not legal")
    if not is_legal(sub, w, want_witness=False).legal:
        raise IllegalWordError(f"source word {w!r} is not legal")
    entries: list[WitnessEntry | None] = []
    for n in range(n_max + 1):
        entry = None
        for s in seeds.words:
            hit = pattern_witness(sub, w + "?" * n + s)
            if hit is None:
                continue
            matched = hit[0]
            u = matched[len(w):len(w) + n]
            evidence = is_legal(sub, w + u + s, want_witness=False)
            if not evidence.legal:
                raise AssertionError(
                    "extracted witness failed independent replay"
                )
            entry = WitnessEntry(n, u, s, evidence)
            break
        entries.append(entry)
    threshold = None
    for n in range(n_max, -1, -1):
        if entries[n] is None:
            break
        threshold = n
    return WitnessTable(w, n_max, seeds.words, tuple(entries), threshold)


# ---------------------------------------------------------------------------
# constructive certificates


@dataclass(frozen=True)
class DerivationStep:
    kind: str                  # "base" or "step"
    digit: int
    seed_before: str | None    # step only
    chosen: str                # e0 for base, R for steps
    word: str                  # z after the step
    seed: str                  # s after the step
    element: str               # e after the step
    level: int                 # e lives in level-`level` inflation words of a


@dataclass(frozen=True)
class Certificate:
    family: Family
    source: str
    level: int                 # w occurs inside a level-`level` word of a
    w_prime: str
    x: str
    y: str
    lead_position: int         # digit index carrying the minimal leading 1
    n0: int
    threshold: int             # |y| + n0
    seeds: tuple[str, ...]
    seed_length: int
    letter_images: dict[str, str] = field(compare=False)
    base_table: dict[int, tuple[str, str, str]] = field(compare=False)
    step_table: dict[tuple[str, int], str] = field(compare=False)


def _fibonacci_tables():
    imgs = {"a": "ab", "b": "a"}
    base = {1: ("a", "ab", "aab")}
    step = {(s, d): "aba" for s in ("ab", "ba") for d in (0, 1)}
    return imgs, base, step


def _tribonacci_tables():
    imgs = {"a": "ab", "b": "ac", "c": "a"}
    base = {1: ("a", "ba", "abac")}
    chosen = {"ab": "abac", "ba": "acab", "ac": "aba", "ca": "aba"}
    step = {(s, d): chosen[s] for s in chosen for d in (0, 1)}
    return imgs, base, step


def _metallic_tables(m: int):
    imgs = {"a": "a" * m + "b", "b": "a"}
    filler = ("a" * m + "b")
    base = {}
    for j in range(1, m + 1):
        e0 = ("a" * j + "b" + "a" * (m - j)) + filler * (m - 1) + "a"
        base[j] = ("a" * j, "b" + "a" * m, e0)
    step = {}
    for i in range(m + 1):
        s = "a" * i + "b" + "a" * (m - i)
        for j in range(m + 1):
            if i >= 1:
                r = ("a" * j + "b" + "a" * (m - j)) + filler * (i - 1) \
                    + "a" + filler * (m - i)
            elif j >= 1:
                r = "a" + ("a" * (j - 1) + "b" + "a" * (m - j + 1)) \
                    + filler * (m - 1)
            else:
                r = "a" + ("b" + "a" * m) + filler * (m - 1)
            step[(s, j)] = r
    return imgs, base, step


_CONSTRUCTIVE = {"fibonacci", "tribonacci", "metallic"}


def _normalize_family(family: Family) -> Family:
    if family.name == "kbonacci":
        if family.params[0] == 2:
            return Family("fibonacci")
        if family.params[0] == 3:
            return Family("tribonacci")
    if family.name == "metallic-pisa" and family.params[0] == 2:
        return Family("metallic", (family.params[1],))
    return family


def _tables_for(family: Family):
    if family.name == "fibonacci":
        return _fibonacci_tables()
    if family.name == "tribonacci":
        return _tribonacci_tables()
    return _metallic_tables(family.params[0])


def certify(sub: RandomSubstitution, family: Family, w: str) -> Certificate:
    """Build the constructive semi-mixing certificate for a legal word."""
    normalized = _normalize_family(family)
    if normalized.name not in _CONSTRUCTIVE:
        raise UnsupportedFamilyError(
            f"constructive certificates cover fibonacci, tribonacci and "
            f"metallic families only; {family.label()} has the empirical "
            "checker"
        )
    expected = normalized.substitution()
    if sub.rule != expected.rule or sub.alphabet != expected.alphabet:
        raise UnsupportedFamilyError(
            f"substitution does not match family {family.label()}"
        )
    if not is_legal(sub, w, want_witness=False).legal:
        raise IllegalWordError(f"{w!r} is not legal for {family.label()}")
    hit = pattern_witness(sub, w, stop_letters=("a",), min_level=2)
    if hit is None:
        raise AssertionError("legal word has no level >= 2 embedding")
    _, level, _, element, start = hit
    x, y = element[:start], element[start + len(w):]
    scheme = normalized.scheme()
    lead_position = scheme.base_index + level - 2
    n0 = scheme.term(lead_position)
    imgs, base_table, step_table = _tables_for(normalized)
    seeds = normalized.seed_words()
    return Certificate(
        family=normalized,
        source=w,
        level=level,
        w_prime=element,
        x=x,
        y=y,
        lead_position=lead_position,
        n0=n0,
        threshold=len(y) + n0,
        seeds=seeds,
        seed_length=len(seeds[0]),
        letter_images=imgs,
        base_table=base_table,
        step_table=step_table,
    )


def _expand(images: dict[str, str], word: str) -> str:
    return "".join(images[c] for c in word)


def derive_witness(cert: Certificate, n: int) -> tuple[str, str, list[DerivationStep]]:
    """Replay the digit-driven construction for gap length n (n >= threshold),
    using only the certificate's recorded choices."""
    if n < cert.threshold:
        raise ValueError(f"n must be at least the threshold {cert.threshold}")
    if n > _WITNESS_LENGTH_GUARD:
        raise GuardExceededError("witness length exceeds the work guard")
    scheme = cert.family.scheme()
    value = n - len(cert.y)
    digits = encode_greedy(scheme, value).digits
    lead = digits[0]
    if lead not in cert.base_table:
        raise ValueError(f"no base-case entry for leading digit {lead}")
    z, s, e = cert.base_table[lead]
    level = 2
    steps = [DerivationStep("base", lead, None, e, z, s, e, level)]
    for digit in digits[1:]:
        r = cert.step_table[(s, digit)]
        zx = _expand(cert.letter_images, z)
        rho = e[len(z) + len(s):]
        e = zx + r + _expand(cert.letter_images, rho)
        seed_before = s
        z = zx + r[:digit]
        s = r[digit:digit + cert.seed_length]
        level += 1
        steps.append(DerivationStep("step", digit, seed_before, r, z, s, e, level))
    return cert.y + z, s, steps


def witness_for_length(cert: Certificate, n: int) -> tuple[str, str]:
    u, s, _ = derive_witness(cert, n)
    return u, s


@dataclass(frozen=True)
class VerificationOutcome:
    ok: bool
    checked: int
    counterexample: tuple[int, str] | None

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(cert: Certificate, ns, deep: bool = True) -> VerificationOutcome:
    """Replay the certificate over the given gap lengths with an engine
    independent of the construction; returns a counterexample on failure."""
    sub = cert.family.substitution()
    scheme = cert.family.scheme()
    seeds = set(cert.seeds)
    checked = 0

    def fail(n, reason):
        return VerificationOutcome(False, checked, (n, reason))

    if cert.w_prime != cert.x + cert.source + cert.y:
        return fail(-1, "embedding split does not reassemble w_prime")
    dag = build_dag(sub, cert.level)
    if not dag.contains(cert.w_prime, "a", cert.level):
        return fail(-1, f"w_prime is not a level-{cert.level} inflation word of a")
    if cert.threshold != len(cert.y) + cert.n0:
        return fail(-1, "threshold does not equal |y| + n0")
    if cert.n0 != scheme.term(cert.lead_position):
        return fail(-1, "n0 is not the recorded sequence term")
    for letter, image in cert.letter_images.items():
        if image not in sub.rule.get(letter, ()):
            return fail(-1, f"letter image {letter}->{image} is not a rule image")
    base_alternatives = {}
    for lead, (z0, s0, e0) in cert.base_table.items():
        if s0 not in seeds:
            return fail(-1, f"base seed {s0!r} is not in the seed set")
        if not e0.startswith(z0 + s0):
            return fail(-1, f"base word for digit {lead} is not a prefix of e0")
        if len(z0) != lead * scheme.term(scheme.base_index):
            return fail(-1, f"base word for digit {lead} has the wrong length")
        base_alternatives[lead] = e0
    base_dag = build_dag(sub, 2)
    for lead, e0 in base_alternatives.items():
        if not base_dag.contains(e0, "a", 2):
            return fail(-1, f"base element for digit {lead} is not level-2")
    for (s, digit), r in cert.step_table.items():
        if s not in seeds:
            return fail(-1, f"step seed {s!r} is not in the seed set")
        if r not in apply(sub, s):
            return fail(-1, f"step word {r!r} is not an image of {s!r}")
        if len(r) < digit + cert.seed_length:
            return fail(-1, f"step word {r!r} too short for digit {digit}")
        if r[digit:digit + cert.seed_length] not in seeds:
            return fail(-1, f"step ({s!r}, {digit}) yields a non-seed follower")

    for n in ns:
        try:
            u, s, steps = derive_witness(cert, n)
        except (KeyError, ValueError) as exc:
            return fail(n, f"derivation failed: {exc}")
        if len(u) != n:
            return fail(n, f"witness has length {len(u)}, expected {n}")
        if s not in seeds:
            return fail(n, f"witness seed {s!r} is not in the seed set")
        scheme_digits = encode_greedy(scheme, n - len(cert.y)).digits
        running = []
        for step in steps:
            running.append(step.digit)
            if not step.element.startswith(step.word + step.seed):
                return fail(n, f"prefix invariant broken at level {step.level}")
            expected_len = decode(DigitString(tuple(running), scheme))
            if len(step.word) != expected_len:
                return fail(n, f"digit bookkeeping broken at level {step.level}")
        if tuple(running) != scheme_digits:
            return fail(n, "derivation consumed the wrong digit string")
        if deep:
            final = steps[-1]
            final_dag = build_dag(sub, final.level)
            if not final_dag.contains(final.element, "a", final.level):
                return fail(n, "final element is not an inflation word of a")
        verdict = is_legal(sub, cert.source + u + s, want_witness=False)
        if not verdict.legal:
            return fail(n, f"context {cert.source + u + s!r} is not legal")
        checked += 1
    return VerificationOutcome(True, checked, None)


# ---------------------------------------------------------------------------
# report formats


def certificate_report(cert: Certificate) -> str:
    lines = [
        "# zeckmix certificate v1",
        f"family: {cert.family.label()}",
        f"source: {cert.source}",
        f"level: {cert.level}",
        f"w_prime: {cert.w_prime}",
        f"x: {cert.x}",
        f"y: {cert.y}",
        f"lead_position: {cert.lead_position}",
        f"n0: {cert.n0}",
        f"threshold: {cert.threshold}",
        f"seeds: {' '.join(cert.seeds)}",
    ]
    for letter in sorted(cert.letter_images):
        lines.append(f"letter_image: {letter} -> {cert.letter_images[letter]}")
    for lead in sorted(cert.base_table):
        z0, s0, e0 = cert.base_table[lead]
        lines.append(f"base: digit={lead} u={z0} s={s0} e={e0}")
    for (s, digit) in sorted(cert.step_table):
        lines.append(f"step: seed={s} digit={digit} word={cert.step_table[(s, digit)]}")
    return "\n".join(lines)


def parse_certificate(text: str) -> Certificate:
    fields: dict[str, str] = {}
    letter_images: dict[str, str] = {}
    base_table: dict[int, tuple[str, str, str]] = {}
    step_table: dict[tuple[str, int], str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "letter_image":
            letter, _, image = value.partition("->")
            letter_images[letter.strip()] = image.strip()
        elif key == "base":
            kv = dict(part.split("=", 1) for part in value.split())
            base_table[int(kv["digit"])] = (kv.get("u", ""), kv["s"], kv["e"])
        elif key == "step":
            kv = dict(part.split("=", 1) for part in value.split())
            step_table[(kv["seed"], int(kv["digit"]))] = kv["word"]
        else:
            fields[key] = value
    family = parse_family(fields["family"])
    seeds = tuple(fields["seeds"].split())
    return Certificate(
        family=family,
        source=fields["source"],
        level=int(fields["level"]),
        w_prime=fields["w_prime"],
        x=fields.get("x", ""),
        y=fields.get("y", ""),
        lead_position=int(fields["lead_position"]),
        n0=int(fields["n0"]),
        threshold=int(fields["threshold"]),
        seeds=seeds,
        seed_length=len(seeds[0]),
        letter_images=letter_images,
        base_table=base_table,
        step_table=step_table,
    )


def corrupt_step(cert: Certificate, seed: str, digit: int, word: str) -> Certificate:
    """A copy of the certificate with one step realisation overridden."""
    table = dict(cert.step_table)
    table[(seed, digit)] = word
    return replace(cert, step_table=table)
