"""The mod p Dyer-Lashof algebra with half-integer (twisted) indices.

Operations are written in upper indexing: beta^eps Q^s with s in (1/2)Z.
Integer s acts on classes whose twist character value is +1, half-integer s
on classes with value -1.  A word is a finite composition, outermost letter
first; each letter is stored as (eps, s2) with s2 = 2s so that all index
arithmetic stays in Z.

An OpWord also carries its twist class (+1 or -1): the common character value
of the classes the word can act on.  Words whose index parities are mixed, or
do not match the twist class, are zero.

A word is admissible when every adjacent pair satisfies
p*s_{i+1} - eps_{i+1} >= s_i (doubled: p*s2_{i+1} - 2*eps_{i+1} >= s2_i) and
all indices lie in the twist parity class.  Inadmissible adjacent pairs are
rewritten by the Adem relations (adem_expand), whose output pairs are always
admissible; normalize() iterates this to reach the admissible normal form.

The same operations can be written in lower indexing Q_{m(p-1)},
beta Q_{m(p-1)} with m an integer multiplier; on a class of internal degree n
the two indexings are related by a unit constant (lower_from_upper).  The
lower-indexed Adem relations are implemented independently
(adem_expand_lower), and cross_check_composite compares the two expansion
routes for a composite of two operations.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import binom_mod_p, half_factorial, twist_power, v_const
from .errors import ContractError, ResourceError, ValidationError

Entry = tuple[int, int]  # (eps, s2) with s2 = 2s

# ---------------------------------------------------------------------------
# words


def _check_entry(entry) -> None:
    if (
        not isinstance(entry, tuple)
        or len(entry) != 2
        or entry[0] not in (0, 1)
        or not isinstance(entry[1], int)
    ):
        raise ValidationError(f"bad operation letter {entry!r}; want (eps, 2s)")


def word_degree(entries, p: int) -> int:
    """Internal degree raised by the word: sum of 2 s_i (p-1) - eps_i."""
    return sum(s2 * (p - 1) - e for e, s2 in entries)


def excess(entries, p: int):
    """2 s_1 - eps_1 - sum_{i>=2}(2 s_i (p-1) - eps_i); +inf for the empty word."""
    if not entries:
        return math.inf
    e1, s21 = entries[0]
    return s21 - e1 - word_degree(entries[1:], p)


def word_charge(entries, p: int) -> int:
    return p ** len(entries)


def _inadmissible_at(entries, i: int, p: int) -> bool:
    _, r2 = entries[i]
    e2, s2 = entries[i + 1]
    return r2 > p * s2 - 2 * e2


@dataclass(frozen=True)
class OpWord:
    """A composition of operations, outermost first, at a fixed twist class."""

    entries: tuple[Entry, ...]
    twist: int = 1

    def __post_init__(self):
        if self.twist not in (1, -1):
            raise ValidationError(f"twist must be +1 or -1, got {self.twist}")
        entries = tuple(tuple(e) for e in self.entries)
        for e in entries:
            _check_entry(e)
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def parity_ok(self) -> bool:
        want = 0 if self.twist == 1 else 1
        return all(s2 % 2 == want for _, s2 in self.entries)

    def degree(self, p: int) -> int:
        return word_degree(self.entries, p)

    def excess(self, p: int):
        return excess(self.entries, p)

    def charge(self, p: int) -> int:
        return word_charge(self.entries, p)

    def is_admissible(self, p: int) -> bool:
        return self.parity_ok and not any(
            _inadmissible_at(self.entries, i, p)
            for i in range(len(self.entries) - 1)
        )


# ---------------------------------------------------------------------------
# elements of the Dyer-Lashof algebra at a fixed twist class


class DLElement:
    """A linear combination of operation words at a common twist class."""

    __slots__ = ("p", "twist", "terms")

    def __init__(self, p: int, twist: int, terms=None):
        if twist not in (1, -1):
            raise ValidationError(f"twist must be +1 or -1, got {twist}")
        self.p = p
        self.twist = twist
        self.terms: dict[tuple[Entry, ...], int] = {}
        if terms:
            for entries, c in dict(terms).items():
                entries = tuple(tuple(e) for e in entries)
                for e in entries:
                    _check_entry(e)
                c %= p
                if c:
                    self.terms[entries] = c

    @classmethod
    def from_word(cls, word: OpWord, p: int, coeff: int = 1) -> "DLElement":
        return cls(p, word.twist, {word.entries: coeff})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "DLElement") -> "DLElement":
        if (self.p, self.twist) != (other.p, other.twist):
            raise ContractError("cannot add elements at different (p, twist)")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = (out.get(w, 0) + c) % self.p
        return DLElement(self.p, self.twist, out)

    def scale(self, k: int) -> "DLElement":
        return DLElement(self.p, self.twist, {w: c * k for w, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DLElement)
            and self.p == other.p
            and self.twist == other.twist
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return f"DLElement(p={self.p}, twist={self.twist}, terms={self.terms!r})"


# ---------------------------------------------------------------------------
# Adem relations, upper indexing

# Each inadmissible pair beta^e1 Q^r beta^e2 Q^s rewrites to a combination of
# admissible pairs.  In doubled coordinates the four cases share one shape:
# output words ((e_out, r2+s2-i2), (e_in, i2)) with coefficient
#   pref * (-1)^((r2-i2)/2) * binom((i2-s2)(p-1)/2 + t_off, (r2-(p-1)s2-i2)/2 + b_off)
# where i2 runs over the index class of r2.


def _family_terms(r2, s2, p, pref, t_off, b_off, e_out, e_in, acc):
    if pref % p == 0:
        return
    # support: bottom >= 0 and top >= bottom
    hi = r2 - (p - 1) * s2 + 2 * b_off
    lo_raw = r2 + 2 * (b_off - t_off)
    lo = -(-lo_raw // p)  # ceil division
    if (lo - r2) % 2:
        lo += 1
    for i2 in range(lo, hi + 1, 2):
        top = (i2 - s2) // 2 * (p - 1) + t_off
        bot = (r2 - (p - 1) * s2 - i2) // 2 + b_off
        c = binom_mod_p(top, bot, p)
        if not c:
            continue
        if (r2 - i2) // 2 % 2:
            c = -c
        c = c * pref % p
        if c:
            word = ((e_out, r2 + s2 - i2), (e_in, i2))
            acc[word] = (acc.get(word, 0) + c) % p


@lru_cache(maxsize=None)
def adem_expand(outer: Entry, inner: Entry, twist: int, p: int):
    """Rewrite one inadmissible pair; returns ((word, coeff), ...).

    The pair must be inadmissible (r2 > p*s2 - 2*eps_inner), otherwise
    ContractError.  If the index parities are mixed or do not match the twist
    class the word is zero and an empty tuple is returned.
    """
    (e1, r2), (e2, s2) = outer, inner
    _check_entry((e1, r2))
    _check_entry((e2, s2))
    if r2 <= p * s2 - 2 * e2:
        raise ContractError(f"pair {(outer, inner)} is admissible; nothing to expand")
    want = 0 if twist == 1 else 1
    if r2 % 2 != want or s2 % 2 != want:
        return ()
    chi_half = twist_power(twist, p)
    acc: dict = {}
    if e2 == 0:
        # beta^e1 Q^r Q^s
        _family_terms(r2, s2, p, chi_half, -1, -1, e1, 0, acc)
    elif e1 == 0:
        # Q^r beta Q^s: a beta Q . Q family and a Q . beta Q family
        _family_terms(r2, s2, p, 1, 0, 0, 1, 0, acc)
        _family_terms(r2, s2, p, -chi_half, -1, 0, 0, 1, acc)
    else:
        # beta Q^r beta Q^s
        _family_terms(r2, s2, p, -chi_half, -1, 0, 1, 1, acc)
    return tuple(sorted((w, c) for w, c in acc.items() if c))


def _find_inadmissible(entries, p: int, strategy: str):
    rng = range(len(entries) - 1)
    if strategy == "rightmost":
        rng = reversed(rng)
    for i in rng:
        if _inadmissible_at(entries, i, p):
            return i
    return None


def _heap_key(entries):
    # Every Adem output is strictly larger than its source in this key:
    # expanding the pair at junction j lowers s2_j (and leaves everything to
    # the left alone), except for the one boundary term that keeps the
    # indices and moves the beta one slot outward.  Popping in key order
    # therefore sees each word only after all contributions to it exist.
    return (
        tuple(-s2 for _, s2 in entries),
        -sum(e << i for i, (e, _) in enumerate(entries)),
    )


def normalize(elt: DLElement, strategy: str = "leftmost", budget: int = 10**6) -> DLElement:
    """Rewrite to admissible normal form.

    strategy picks which inadmissible adjacent pair of a word is expanded
    first ("leftmost" or "rightmost"); the result is independent of the
    choice.  budget caps the number of pair expansions; exceeding it raises
    ResourceError.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ContractError(f"unknown strategy {strategy!r}")
    p, twist = elt.p, elt.twist
    want = 0 if twist == 1 else 1
    result: dict = {}
    pending: dict = {}
    heap: list = []
    for w, c in elt.terms.items():
        if any(s2 % 2 != want for _, s2 in w):
            continue  # zero at this twist class
        pending[w] = c % p
        heapq.heappush(heap, (_heap_key(w), w))
    steps = 0
    while heap:
        _, w = heapq.heappop(heap)
        c = pending.pop(w, 0) % p
        if not c:
            continue
        pos = _find_inadmissible(w, p, strategy)
        if pos is None:
            result[w] = c
            continue
        steps += 1
        if steps > budget:
            raise ResourceError(f"rewriting exceeded budget of {budget} steps")
        for pair, k in adem_expand(w[pos], w[pos + 1], twist, p):
            nw = w[:pos] + pair + w[pos + 2:]
            if nw in pending:
                pending[nw] = (pending[nw] + c * k) % p
            else:
                pending[nw] = c * k % p
                heapq.heappush(heap, (_heap_key(nw), nw))
    return DLElement(p, twist, result)


# ---------------------------------------------------------------------------
# lower indexing

# On a class of internal degree n, the upper-indexed operation beta^eps Q^s
# is a unit multiple of the lower-indexed Q_{m(p-1)} (resp. beta Q_{m(p-1)})
# with multiplier m = 2s - n.  Writing hf = ((p-1)/2)! and
# v(n) = (-1)^(n(n-1)(p-1)/4) hf^n:
#   Q^s       = (-1)^s       v(n) Q_{m(p-1)}        (s integer)
#   Q^(t+1/2) = (-1)^t hf^3  v(n) Q_{m(p-1)}
# and the same constants with beta on both sides.  The lower operation is
# zero when m < 0 (eps = 0) or m <= 0 (eps = 1).


def lower_from_upper(eps: int, s2: int, n: int, p: int):
    """Return (index, coeff, is_zero) with beta^eps Q^{s2/2} = coeff * (beta^eps) Q_index.

    index = m*(p-1) for multiplier m = 2s - n = s2 - n.  is_zero reports
    whether the lower operation is the zero operation on degree-n classes.
    """
    if eps not in (0, 1):
        raise ContractError(f"eps must be 0 or 1, got {eps}")
    m = s2 - n
    is_zero = m < 0 if eps == 0 else m <= 0
    if s2 % 2 == 0:
        sign = -1 if (s2 // 2) % 2 else 1
        c = sign * v_const(n, p)
    else:
        hf = half_factorial(p)
        sign = -1 if ((s2 - 1) // 2) % 2 else 1
        c = sign * pow(hf, 3, p) * v_const(n, p)
    return m * (p - 1), c % p, is_zero


_LOWER_CASES = ("QQ", "bQQ", "QbQ", "bQbQ")


def adem_expand_lower(r: int, s: int, n: int, chi_g: int, p: int, case: str):
    """Lower-indexed Adem relation for a composite on degree-n classes.

    case names the composite: "QQ" is Q_{r(p-1)} Q_{s(p-1)}, "bQQ" puts beta
    on the outer operation, "QbQ" on the inner, "bQbQ" on both.  Requires
    r > s for (b)QQ and r >= s for (b)QbQ (otherwise the composite is already
    admissible and ContractError is raised); the inner beta Q needs s >= 1.
    Returns {((eps_out, m_out), (eps_in, m_in)): coeff} over nonzero lower
    operations; chi_g is the twist character value of the acted-on classes.
    """
    if case not in _LOWER_CASES:
        raise ContractError(f"case must be one of {_LOWER_CASES}, got {case!r}")
    inner_beta = case in ("QbQ", "bQbQ")
    outer_beta = case in ("bQQ", "bQbQ")
    if chi_g not in (1, -1):
        raise ContractError(f"chi_g must be +1 or -1, got {chi_g}")
    if inner_beta:
        if r < s:
            raise ContractError(f"need r >= s for {case}, got r={r}, s={s}")
        if s < 1:
            raise ContractError(f"inner beta Q needs s >= 1, got s={s}")
    else:
        if r <= s:
            raise ContractError(f"need r > s for {case}, got r={r}, s={s}")
        if s < 0:
            raise ContractError(f"inner Q needs s >= 0, got s={s}")
    hf = half_factorial(p)
    q_base = chi_g if n % 2 == 0 else -chi_g
    q_gns = twist_power(q_base, p) * (-1 if (s * (p - 1) // 2) % 2 else 1) % p
    out: dict = {}

    def put(eps_out, m_out, eps_in, m_in, c):
        c %= p
        if not c:
            return
        if (m_out < 0 if eps_out == 0 else m_out < 1):
            return
        if (m_in < 0 if eps_in == 0 else m_in < 1):
            return
        key = ((eps_out, m_out), (eps_in, m_in))
        nc = (out.get(key, 0) + c) % p
        if nc:
            out[key] = nc
        else:
            out.pop(key, None)

    if not inner_beta:
        # Q_r Q_s family (and its beta-on-the-left twin):
        # q_gns * sum_j (-1)^((r-j)/2) binom((j-s)(p-1)/2 - 1, (r-j)/2 - 1)
        #   applied to Q_{(r+ps-pj)(p-1)} Q_{j(p-1)}
        j0 = s - (s - r) % 2  # largest value <= s in the parity class of r
        for j in range(j0 - 2 * (p + 2), r + 1, 2):
            top = (j - s) * (p - 1) // 2 - 1
            bot = (r - j) // 2 - 1
            c = binom_mod_p(top, bot, p)
            if not c:
                continue
            if (r - j) // 2 % 2:
                c = -c
            put(1 if outer_beta else 0, r + p * s - p * j, 0, j, q_gns * c)
    elif not outer_beta:
        # Q_r beta Q_s: a beta Q . Q family with its own constant, then a
        # Q . beta Q family.  The first family's displayed coefficient is the
        # rational (j-s)(p-1)/(pj - s(p-1) - r + 1) times
        # (-1)^B binom(A-1, B) for A = (j-s)(p-1)/2, B = (r-1-j)/2, which
        # collapses to (-1)^B binom(A, B) (the value at the removable
        # singularity A = B included).
        q_r = hf * (-1 if (r * (p - 1) // 2) % 2 else 1) % p
        j0 = s - (s - (r - 1)) % 2
        for j in range(j0 - 2 * (p + 2), r + 1, 2):
            a = (j - s) * (p - 1) // 2
            b = (r - 1 - j) // 2
            c = binom_mod_p(a, b, p)
            if c:
                if b % 2:
                    c = -c
                put(1, r - 1 + p * s - p * j, 0, j, q_r * c)
            c2 = binom_mod_p(a - 1, b, p)
            if c2:
                if b % 2:
                    c2 = -c2
                put(0, r + p * s - p * j, 1, j, -q_gns * c2)
    else:
        # beta Q_r beta Q_s -> -q_gns * sum_j (-1)^B binom(A-1, B)
        #   applied to beta Q_{(r+ps-pj)(p-1)} beta Q_{j(p-1)}
        j0 = s - (s - (r - 1)) % 2
        for j in range(j0 - 2 * (p + 2), r + 1, 2):
            a = (j - s) * (p - 1) // 2
            b = (r - 1 - j) // 2
            c = binom_mod_p(a - 1, b, p)
            if not c:
                continue
            if b % 2:
                c = -c
            put(1, r + p * s - p * j, 1, j, -q_gns * c)
    return out


# ---------------------------------------------------------------------------
# cross-check between the two indexings


def _upper_pair_from_lower(eps_out, m_out, eps_in, m_in, n, p):
    """Convert a lower-indexed composite on degree-n classes to an upper word.

    Returns (word_entries, unit) with
    (beta^eo) Q_{m_out(p-1)} (beta^ei) Q_{m_in(p-1)} = unit * upper word,
    or None if either lower operation is zero.
    """
    s2_in = m_in + n
    _, c_in, z_in = lower_from_upper(eps_in, s2_in, n, p)
    if z_in:
        return None
    n_mid = p * n + m_in * (p - 1) - eps_in
    s2_out = m_out + n_mid
    _, c_out, z_out = lower_from_upper(eps_out, s2_out, n_mid, p)
    if z_out:
        return None
    unit = pow(c_out * c_in % p, p - 2, p)
    return ((eps_out, s2_out), (eps_in, s2_in)), unit


def cross_check_composite(r: int, s: int, case: str, n: int, p: int, chi_g: int):
    """Expand a lower-indexed composite two ways; both results are expressed
    in the basis of admissible upper words with excess >= n at twist chi_g.

    Route A uses the lower-indexed Adem relation and converts each output.
    Route B converts the composite to a single upper word and normalizes it
    with the upper-indexed relations.  Returns (route_a, route_b).
    """
    inner_beta = case in ("QbQ", "bQbQ")
    outer_beta = case in ("bQQ", "bQbQ")
    want = 0 if chi_g == 1 else 1

    def keep(entries):
        return (
            all(s2 % 2 == want for _, s2 in entries)
            and excess(entries, p) >= n
        )

    # the composite itself: zero operations make both routes trivially zero
    if (inner_beta and s < 1) or (s < 0) or (outer_beta and r < 1) or (r < 0):
        return {}, {}

    # route B: convert the composite, rewrite with the upper-indexed relations
    conv = _upper_pair_from_lower(
        1 if outer_beta else 0, r, 1 if inner_beta else 0, s, n, p
    )
    route_b: dict = {}
    if conv is not None:
        entries, unit = conv
        nf = normalize(DLElement(p, chi_g, {entries: unit}))
        route_b = {w: c for w, c in nf.terms.items() if keep(w)}

    # route A: lower-indexed relation, then convert each output pair
    route_a: dict = {}
    for ((eo, mo), (ei, mi)), c in adem_expand_lower(r, s, n, chi_g, p, case).items():
        conv = _upper_pair_from_lower(eo, mo, ei, mi, n, p)
        if conv is None:
            continue
        entries, unit = conv
        if not keep(entries):
            continue
        nc = (route_a.get(entries, 0) + c * unit) % p
        if nc:
            route_a[entries] = nc
        else:
            route_a.pop(entries, None)
    return route_a, route_b
