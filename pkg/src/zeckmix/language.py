"""Deciding legality and enumerating the language of a random substitution.

A word u is legal when it occurs inside some level-k inflation word of some
letter.  The existential over k is unbounded, but for a fixed u each node
(letter, level) carries only a bounded amount of u-relevant information, its
match profile:

  * occurs           -- u sits inside some element of the node
  * suffix_prefixes  -- lengths t with u[:t] a suffix of some element
  * prefix_suffixes  -- positions p with u[p:] a prefix of some element
  * full_spans       -- slices u[i:j] equal to some full element

Profiles at level n+1 are a function of the profiles at level n alone, so
the per-level profile vector walks a finite state space.  Iterating levels
until either some node's `occurs` fires or the vector repeats therefore
decides legality exactly: once the vector revisits a state, the evolution is
periodic and `occurs` can never fire later.  Straddle matches across the
concatenation inside a realisation propagate a set of reachable match
positions left to right, which keeps the state linear in |u| per node.

Patterns may contain '?' wildcards (each matching any single letter); the
same machinery then decides whether any concrete completion of the pattern
is legal, and a witness occurrence is reconstructed from the profiles.

The empty word is treated as legal by convention; it never appears in
reported languages.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GuardExceededError
from .substitution import RandomSubstitution, apply_to_set

WILDCARD = "?"
_LEVEL_SAFETY_CAP = 4096


def is_subword(u: str, w: str) -> bool:
    """Contiguous subword relation; the empty word is a subword of anything."""
    return u in w


def _matches(pattern: str, word: str, offset: int = 0) -> bool:
    """Does `word` match pattern[offset : offset + len(word)] position-wise?"""
    if offset + len(word) > len(pattern):
        return False
    return all(
        p == WILDCARD or p == c
        for p, c in zip(pattern[offset:offset + len(word)], word)
    )


# ---------------------------------------------------------------------------
# match profiles


def _leaf_profiles(sub, pattern):
    """Level-0 profiles: each node is the single-letter word itself."""
    size = len(pattern)
    out = {}
    for x in sub.alphabet:
        match_positions = [
            i for i, p in enumerate(pattern) if p == WILDCARD or p == x
        ]
        occurs = size == 1 and bool(match_positions)
        sp = 1 << 1 if size >= 2 and 0 in match_positions else 0
        ps = 1 << size
        if match_positions and match_positions[-1] == size - 1:
            ps |= 1 << (size - 1)
        spans = [0] * (size + 1)
        for i in match_positions:
            spans[i] = 1 << (i + 1)
        out[x] = (occurs, sp, ps, tuple(spans))
    return out


def _compose_alternative(pattern_len, image, prev):
    """Profile of one realisation (a concatenation of level-(n-1) nodes)."""
    size = pattern_len
    full_bit = 1 << size
    sp_mask = (1 << size) - 2          # bits 1 .. size-1
    occurs = False

    # forward reachable-progress pass: bit q says the last q characters of
    # the concatenation so far equal pattern[:q]
    reach = 1
    for c in image:
        occ_c, sp_c, ps_c, spans_c = prev[c]
        if occ_c or (reach & ps_c):
            occurs = True
        cont = 0
        m = reach
        while m:
            low = m & -m
            cont |= spans_c[low.bit_length() - 1]
            m ^= low
        if cont & full_bit:
            occurs = True
        reach = (cont & ~full_bit) | 1 | sp_c
    sp = reach & sp_mask

    # backward pass: bit p says pattern[p:] is a prefix of the remaining
    # concatenation
    back = full_bit
    for c in reversed(image):
        ps_c, spans_c = prev[c][2], prev[c][3]
        pre = 0
        for i in range(size + 1):
            if spans_c[i] & back:
                pre |= 1 << i
        back = ps_c | pre
    ps = back

    # full-span composition: pattern[i:j] equal to a whole concatenation
    spans = list(prev[image[0]][3])
    for c in image[1:]:
        nxt_spans = prev[c][3]
        new = [0] * (size + 1)
        alive = False
        for i in range(size + 1):
            m = spans[i]
            acc = 0
            while m:
                low = m & -m
                acc |= nxt_spans[low.bit_length() - 1]
                m ^= low
            new[i] = acc
            alive = alive or acc
        spans = new
        if not alive:
            break
    return occurs, sp, ps, tuple(spans)


def _next_profiles(sub, pattern_len, prev):
    out = {}
    for a in sub.alphabet:
        occurs, sp, ps = False, 0, 0
        spans = [0] * (pattern_len + 1)
        for image in sub.rule[a]:
            o, s, p, f = _compose_alternative(pattern_len, image, prev)
            occurs = occurs or o
            sp |= s
            ps |= p
            for i in range(pattern_len + 1):
                spans[i] |= f[i]
        out[a] = (occurs, sp, ps, tuple(spans))
    return out


def _profile_state(sub, profiles):
    return tuple(profiles[a] for a in sub.alphabet)


def _pattern_search(sub, pattern, stop_letters=None, min_level=0):
    """Iterate profile levels until `occurs` fires at a stop letter or the
    profile vector repeats.  Returns (found, level, letter, profiles-per-level).
    """
    if not pattern:
        raise ValueError("pattern must be non-empty")
    if stop_letters is None:
        stop_letters = sub.alphabet
    profiles = _leaf_profiles(sub, pattern)
    history = [profiles]
    seen = {_profile_state(sub, profiles)}
    level = 0
    while True:
        if level >= min_level:
            for a in stop_letters:
                if profiles[a][0]:
                    return True, level, a, history
        nxt = _next_profiles(sub, len(pattern), profiles)
        state = _profile_state(sub, nxt)
        if state in seen and level + 1 >= min_level:
            hit = False
            for a in stop_letters:
                if nxt[a][0]:
                    hit = True
            if not hit:
                history.append(nxt)
                return False, level + 1, None, history
        seen.add(state)
        profiles = nxt
        history.append(profiles)
        level += 1
        if level > _LEVEL_SAFETY_CAP:
            raise GuardExceededError("profile iteration exceeded the level cap")


# ---------------------------------------------------------------------------
# witness extraction: reconstruct concrete inflation words realising a
# recorded profile fact, by replaying the same transitions


class _Extractor:
    def __init__(self, sub, pattern, history):
        self.sub = sub
        self.pattern = pattern
        self.size = len(pattern)
        self.history = history
        self._spell_memo: dict = {}

    def spell(self, letter, level):
        key = (letter, level)
        got = self._spell_memo.get(key)
        if got is None:
            if level == 0:
                got = letter
            else:
                got = "".join(
                    self.spell(c, level - 1)
                    for c in self.sub.rule[letter][0]
                )
            self._spell_memo[key] = got
        return got

    def exact(self, i, j, letter, level):
        """Element of (letter, level) equal to pattern[i:j]."""
        if level == 0:
            assert j == i + 1 and _matches(self.pattern, letter, i)
            return letter
        prev = self.history[level - 1]
        for image in self.sub.rule[letter]:
            path = self._exact_path(image, i, j, prev)
            if path is not None:
                return "".join(
                    self.exact(q0, q1, c, level - 1) for c, q0, q1 in path
                )
        raise AssertionError("no realisation for recorded exact span")

    def _exact_path(self, image, i, j, prev):
        dead = set()

        def walk(idx, q):
            if idx == len(image):
                return [] if q == j else None
            if (idx, q) in dead:
                return None
            spans = prev[image[idx]][3]
            m = spans[q]
            while m:
                low = m & -m
                end = low.bit_length() - 1
                m ^= low
                rest = walk(idx + 1, end)
                if rest is not None:
                    return [(image[idx], q, end)] + rest
            dead.add((idx, q))
            return None

        return walk(0, i)

    def tail(self, t, letter, level):
        """Element of (letter, level) whose last t characters match pattern[:t]."""
        if level == 0:
            assert t == 1 and _matches(self.pattern, letter, 0)
            return letter
        prev = self.history[level - 1]
        for image in self.sub.rule[letter]:
            steps = self._reach_steps(image, prev)
            if t in steps[len(image)]:
                return self._assemble_tail(image, steps, t, level)
        raise AssertionError("no realisation for recorded suffix-prefix")

    def _reach_steps(self, image, prev):
        """Forward progress sets with predecessor records, per child."""
        steps = [dict() for _ in range(len(image) + 1)]
        steps[0][0] = ("init",)
        for idx, c in enumerate(image):
            sp_c, spans_c = prev[c][1], prev[c][3]
            cur = steps[idx + 1]
            cur[0] = ("skip",)
            m = sp_c
            while m:
                low = m & -m
                tt = low.bit_length() - 1
                m ^= low
                cur.setdefault(tt, ("restart",))
            for q in steps[idx]:
                m = spans_c[q]
                while m:
                    low = m & -m
                    end = low.bit_length() - 1
                    m ^= low
                    cur.setdefault(end, ("cont", q))
        return steps

    def _assemble_tail(self, image, steps, t, level):
        """Backtrack one progress chain ending at t; return the element."""
        chunks = [None] * len(image)
        q = t
        idx = len(image)
        while idx > 0:
            how = steps[idx][q]
            idx -= 1
            c = image[idx]
            if how[0] == "cont":
                prev_q = how[1]
                chunks[idx] = self.exact(prev_q, q, c, level - 1)
                q = prev_q
            elif how[0] == "restart":
                chunks[idx] = self.tail(q, c, level - 1)
                q = None
                idx_fill = idx
                for back in range(idx_fill):
                    chunks[back] = self.spell(image[back], level - 1)
                break
            else:  # skip: nothing matched yet
                chunks[idx] = self.spell(c, level - 1)
                q = 0
        return "".join(
            chunk if chunk is not None else self.spell(image[k], level - 1)
            for k, chunk in enumerate(chunks)
        )

    def head(self, p, letter, level):
        """Element of (letter, level) starting with pattern[p:]."""
        if level == 0:
            assert p == self.size - 1 and _matches(self.pattern, letter, p)
            return letter
        prev = self.history[level - 1]
        for image in self.sub.rule[letter]:
            plan = self._head_plan(image, p, prev)
            if plan is not None:
                parts = []
                for kind, c, arg in plan:
                    if kind == "exact":
                        parts.append(self.exact(arg[0], arg[1], c, level - 1))
                    elif kind == "head":
                        parts.append(self.head(arg, c, level - 1))
                    else:
                        parts.append(self.spell(c, level - 1))
                return "".join(parts)
        raise AssertionError("no realisation for recorded prefix-suffix")

    def _head_plan(self, image, p, prev):
        size = self.size
        dead = set()

        def walk(idx, q):
            if q == size:
                return [("spell", image[k], None) for k in range(idx, len(image))]
            if idx == len(image):
                return None
            if (idx, q) in dead:
                return None
            c = image[idx]
            ps_c, spans_c = prev[c][2], prev[c][3]
            if q <= size - 1 and (ps_c >> q) & 1:
                rest = [("spell", image[k], None) for k in range(idx + 1, len(image))]
                return [("head", c, q)] + rest
            m = spans_c[q]
            while m:
                low = m & -m
                end = low.bit_length() - 1
                m ^= low
                rest = walk(idx + 1, end)
                if rest is not None:
                    return [("exact", c, (q, end))] + rest
            dead.add((idx, q))
            return None

        return walk(0, p)

    def occurrence(self, letter, level):
        """(element, start) with the pattern matching inside the element."""
        if level == 0:
            assert self.size == 1 and _matches(self.pattern, letter, 0)
            return letter, 0
        prev = self.history[level - 1]
        for image in self.sub.rule[letter]:
            for idx, c in enumerate(image):
                if prev[c][0]:
                    inner, inner_start = self.occurrence(c, level - 1)
                    before = "".join(self.spell(image[k], level - 1)
                                     for k in range(idx))
                    after = "".join(self.spell(image[k], level - 1)
                                    for k in range(idx + 1, len(image)))
                    return before + inner + after, len(before) + inner_start
            hit = self._straddle(image, prev, level)
            if hit is not None:
                return hit
        raise AssertionError("no realisation for recorded occurrence")

    def _straddle(self, image, prev, level):
        steps = [dict() for _ in range(len(image) + 1)]
        steps[0][0] = ("init",)
        for idx, c in enumerate(image):
            sp_c, ps_c, spans_c = prev[c][1], prev[c][2], prev[c][3]
            for q in steps[idx]:
                if q <= self.size - 1 and (ps_c >> q) & 1:
                    return self._assemble_straddle(image, steps, idx, q, level)
            cur = steps[idx + 1]
            cur[0] = ("skip",)
            m = sp_c
            while m:
                low = m & -m
                tt = low.bit_length() - 1
                m ^= low
                cur.setdefault(tt, ("restart",))
            for q in steps[idx]:
                m = spans_c[q]
                while m:
                    low = m & -m
                    end = low.bit_length() - 1
                    m ^= low
                    if end == self.size:
                        return self._assemble_straddle(
                            image, steps, idx, q, level, final_exact=end
                        )
                    cur.setdefault(end, ("cont", q))
        return None

    def _assemble_straddle(self, image, steps, idx, q, level, final_exact=None):
        """Build the element around a completion at child idx, progress q."""
        if final_exact is None:
            completion = self.head(q, image[idx], level - 1)
        else:
            completion = self.exact(q, final_exact, image[idx], level - 1)
        chunks = [None] * len(image)
        chunks[idx] = completion
        start_child, start_offset = idx, None
        pos = q
        walk = idx
        while walk > 0 and pos != 0:
            how = steps[walk][pos]
            walk -= 1
            c = image[walk]
            if how[0] == "cont":
                prev_q = how[1]
                chunks[walk] = self.exact(prev_q, pos, c, level - 1)
                pos = prev_q
                start_child = walk
            elif how[0] == "restart":
                chunks[walk] = self.tail(pos, c, level - 1)
                start_child = walk
                start_offset = len(chunks[walk]) - pos
                pos = 0
            else:
                chunks[walk] = self.spell(c, level - 1)
                pos = 0
        if pos == 0 and start_offset is None:
            # match starts exactly at the boundary of start_child
            start_offset = 0
        for k in range(len(image)):
            if chunks[k] is None:
                chunks[k] = self.spell(image[k], level - 1)
        element = "".join(chunks)
        start = sum(len(chunks[k]) for k in range(start_child)) + start_offset
        return element, start


# ---------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class LegalityVerdict:
    legal: bool
    witness: tuple[int, str, str] | None
    levels_examined: int
    stabilized: bool

    def __bool__(self) -> bool:
        return self.legal


def is_legal(sub: RandomSubstitution, u: str, want_witness: bool = True) -> LegalityVerdict:
    """Exact legality of a concrete word (no wildcards)."""
    if not u:
        raise ValueError("word must be non-empty")
    if WILDCARD in u:
        raise ValueError("wildcards are not allowed here")
    if not set(u) <= set(sub.alphabet):
        return LegalityVerdict(False, None, 0, True)
    found, level, letter, history = _pattern_search(sub, u)
    if not found:
        return LegalityVerdict(False, None, level, True)
    witness = None
    if want_witness:
        element, start = _Extractor(sub, u, history).occurrence(letter, level)
        assert element[start:start + len(u)] == u
        witness = (level, letter, element)
    return LegalityVerdict(True, witness, level, False)


def pattern_witness(sub: RandomSubstitution, pattern: str,
                    stop_letters=None, min_level: int = 0):
    """Decide whether some concrete completion of `pattern` is legal and, if
    so, extract (matched_word, level, letter, element, start).
    """
    found, level, letter, history = _pattern_search(
        sub, pattern, stop_letters=stop_letters, min_level=min_level
    )
    if not found:
        return None
    element, start = _Extractor(sub, pattern, history).occurrence(letter, level)
    matched = element[start:start + len(pattern)]
    assert _matches(pattern, matched)
    return matched, level, letter, element, start


def is_legal_bruteforce(sub: RandomSubstitution, u: str, max_level: int,
                        guard: int = 10**6) -> bool:
    """Oracle by full enumeration of every inflation word set up to max_level."""
    if not u:
        raise ValueError("word must be non-empty")
    current = {a: {a} for a in sub.alphabet}
    for a in sub.alphabet:
        if u in a:
            return True
    for _ in range(max_level):
        for a in sub.alphabet:
            current[a] = apply_to_set(sub, current[a], guard)
            if any(u in w for w in current[a]):
                return True
    return False


def language_of_length(sub: RandomSubstitution, n: int,
                       guard: int = 10**6) -> tuple[str, ...]:
    """All legal words of length n, sorted; exact via bounded-set propagation."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return tuple(sorted(a for a in sub.alphabet
                            if is_legal(sub, a, want_witness=False).legal))
    cut = n - 1
    state = {a: (frozenset(), frozenset({a}), frozenset({a}))
             for a in sub.alphabet}
    found: set[str] = set()
    seen_states = {tuple(sorted(state.items()))}
    while True:
        pref_by_len = {}
        for a in sub.alphabet:
            per = {}
            for j in range(1, n):
                per[j] = frozenset(p[:j] for p in state[a][1] if len(p) >= j)
            pref_by_len[a] = per
        new_state = {}
        for a in sub.alphabet:
            subs_a, pref_a, suff_a = set(), set(), set()
            for image in sub.rule[a]:
                boundary = {""}
                local: set[str] = set()
                for c in image:
                    subs_c = state[c][0]
                    local |= subs_c
                    tails_by_len: dict[int, set[str]] = {}
                    for b in boundary:
                        for t in range(1, len(b) + 1):
                            tails_by_len.setdefault(t, set()).add(b[-t:])
                    for t, tails in tails_by_len.items():
                        if n - t > cut:
                            continue
                        for left in tails:
                            for right in pref_by_len[c][n - t]:
                                local.add(left + right)
                    new_boundary = set()
                    for s in state[c][2]:
                        if len(s) == cut:
                            new_boundary.add(s)
                        else:
                            for b in boundary:
                                joined = b + s
                                new_boundary.add(
                                    joined[-cut:] if len(joined) > cut else joined
                                )
                    boundary = new_boundary
                suff_a |= boundary
                forward = {""}
                for c in image:
                    new_forward = set()
                    for f in forward:
                        if len(f) == cut:
                            new_forward.add(f)
                        else:
                            for p in state[c][1]:
                                joined = f + p
                                new_forward.add(
                                    joined[:cut] if len(joined) > cut else joined
                                )
                    forward = new_forward
                pref_a |= forward
                subs_a |= local
            new_state[a] = (frozenset(subs_a), frozenset(pref_a), frozenset(suff_a))
            found |= subs_a
            if len(found) > guard:
                raise GuardExceededError(
                    f"language_of_length exceeds the {guard}-word guard"
                )
        state = new_state
        key = tuple(sorted(state.items()))
        if key in seen_states:
            return tuple(sorted(found))
        seen_states.add(key)
