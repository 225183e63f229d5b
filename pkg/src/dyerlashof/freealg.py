"""Basis enumeration for the homology of free E-infinity algebras.

The input is a list of generators x with bidegrees (g, n) in Gamma x Z.  The
homology of the free algebra on them is the free graded-commutative algebra
on the set Q(S) of classes Q^I x, where I ranges over admissible words with
e(I) + eps_1 > n whose index parity matches chi(g).  Such a class sits in
bidegree (p^l g, n + d_Z(I)) and carries charge p^l, l the word length.

Monomials in these classes, sorted under a fixed total order and with
repetition of a factor allowed only when its degree-plus-twist parity is
even, form a basis; poincare_table counts them per (g, n, charge).

enumerate_dmodule_basis lists the larger free-module basis (weak inequality
e(I) >= n, no top-level product structure): the words excluded from Q(S) by
the strict inequality reappear in the algebra as p-th powers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dlalgebra import excess, word_degree
from .errors import ContractError, ResourceError, ValidationError
from .grading import GradingGroup, TwistCharacter, swap_sign


@dataclass(frozen=True)
class Generator:
    name: str
    g: tuple[int, ...]
    n: int

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValidationError(f"generator name must be a nonempty string")
        if not isinstance(self.n, int):
            raise ValidationError(f"generator degree must be an integer, got {self.n!r}")
        object.__setattr__(self, "g", tuple(self.g))

    @property
    def bidegree(self):
        return (self.g, self.n)


class Context:
    """A prime, a grading group with twist character, and named generators."""

    def __init__(self, p, group: GradingGroup, chi: TwistCharacter, generators,
                 max_degree=None, max_charge=None, budget: int = 10**6):
        from .arith import check_odd_prime

        check_odd_prime(p)
        if chi.group != group:
            raise ValidationError("twist character is defined on a different group")
        self.p = p
        self.group = group
        self.chi = chi
        self.generators = []
        seen = set()
        for gen in generators:
            if not isinstance(gen, Generator):
                raise ValidationError(f"expected Generator, got {gen!r}")
            if gen.name in seen:
                raise ValidationError(f"duplicate generator name {gen.name!r}")
            seen.add(gen.name)
            self.generators.append(Generator(gen.name, group.validate(gen.g), gen.n))
        self.max_degree = max_degree
        self.max_charge = max_charge
        self.budget = budget

    def generator(self, name: str) -> Generator:
        for gen in self.generators:
            if gen.name == name:
                return gen
        raise ValidationError(f"no generator named {name!r}")


@dataclass(frozen=True)
class QClass:
    """An admissible word applied to a generator: one element of Q(S)."""

    gen: Generator
    word: tuple[tuple[int, int], ...]  # (eps, s2), outermost first

    def sort_key(self):
        return (
            self.gen.name,
            len(self.word),
            tuple(s2 for _, s2 in self.word),
            tuple(e for e, _ in self.word),
        )

    def degree(self, p: int) -> int:
        return self.gen.n + word_degree(self.word, p)

    def charge(self, p: int) -> int:
        return p ** len(self.word)

    def group_element(self, ctx: Context):
        return ctx.group.scale(ctx.p ** len(self.word), self.gen.g)

    def bidegree(self, ctx: Context):
        return (self.group_element(ctx), self.degree(ctx.p))


def _op_symbol(eps, s2):
    s = str(s2 // 2) if s2 % 2 == 0 else f"{s2}/2"
    return ("bQ^{%s}" if eps else "Q^{%s}") % s


def qclass_str(qc: QClass) -> str:
    return " ".join([_op_symbol(e, s2) for e, s2 in qc.word] + [qc.gen.name])


def _enumerate_words(ctx: Context, gen: Generator, max_degree, max_charge,
                     strict: bool):
    """Admissible words over one generator, innermost letter first in the
    recursion; strict picks e(I)+eps_1 > n (Q(S)) vs e(I) >= n (free module).

    Yields (word, degree) pairs; raises ResourceError past ctx.budget nodes.
    """
    p = ctx.p
    n = gen.n
    par = ctx.chi.parity(gen.g)
    if max_charge < 1:
        return
    levels = 0
    c = 1
    while c * p <= max_charge:
        c *= p
        levels += 1
    out = []
    nodes = 0

    def minimum_final(m, remaining):
        # smallest internal degree reachable after `remaining` more letters:
        # from m >= 1 degrees never decrease; from m <= 0 the worst chain
        # multiplies by p and subtracts 1 at each level
        if m >= 1:
            return m
        for _ in range(remaining):
            m = p * m - 1
        return m

    def extend(word, m):
        # word is the already-built inner part (outermost letter first);
        # m = n + word_degree(word) is the degree of Q^word x.
        nonlocal nodes
        nodes += 1
        if nodes > ctx.budget:
            raise ResourceError(
                f"enumeration exceeded budget of {ctx.budget} nodes; "
                "lower max_degree/max_charge or raise the budget"
            )
        depth = len(word)
        if m <= max_degree:
            if strict:
                ok = excess(word, p) + word[0][0] > n if word else True
            else:
                ok = excess(word, p) >= n if word else True
            if ok:
                out.append((word, m))
        if depth == levels:
            return
        lo = m if not strict else m + 1
        if (lo - par) % 2:
            lo += 1
        if word:
            e_h, s2_h = word[0]
            hi_adm = p * s2_h - 2 * e_h
        else:
            hi_adm = None
        rem = levels - depth - 1
        for eps in (0, 1):
            # degree viability: the smallest reachable final degree from
            # m' = m + s2(p-1) - eps must not exceed max_degree
            hi = (max(max_degree, -1) - m + eps) // (p - 1)
            if hi_adm is not None:
                hi = min(hi, hi_adm)
            s2 = lo
            while s2 <= hi:
                m2 = m + s2 * (p - 1) - eps
                if minimum_final(m2, rem) <= max_degree:
                    extend(((eps, s2),) + word, m2)
                s2 += 2

    extend((), n)
    return out


def enumerate_qset(gens, max_degree, max_charge, ctx: Context):
    """All Q^I x with internal degree <= max_degree and charge <= max_charge."""
    out = []
    for gen in gens:
        for word, _ in _enumerate_words(ctx, gen, max_degree, max_charge, True):
            out.append(QClass(gen, word))
    out.sort(key=QClass.sort_key)
    return out


def enumerate_dmodule_basis(gen: Generator, max_degree, ctx: Context,
                            max_charge=None):
    """Free-module basis over one generator: admissible words with e(I) >= n.

    In degrees n <= 0 the weak inequality admits words of every length (for
    instance iterated Q^{n/2}), so a charge cutoff is always applied; when
    max_charge is None the context's cutoff is used.
    """
    if max_charge is None:
        max_charge = ctx.max_charge
    if max_charge is None:
        raise ContractError("enumerate_dmodule_basis needs a charge cutoff")
    out = [
        QClass(gen, word)
        for word, _ in _enumerate_words(ctx, gen, max_degree, max_charge, False)
    ]
    out.sort(key=QClass.sort_key)
    return out


# ---------------------------------------------------------------------------
# monomials and the free commutative algebra


def _repeatable(qc: QClass, ctx: Context) -> bool:
    g, n = qc.bidegree(ctx)
    return (n + ctx.chi.parity(g)) % 2 == 0


def monomial_bidegree(factors, ctx: Context):
    g = ctx.group.zero()
    n = 0
    for qc in factors:
        qg, qn = qc.bidegree(ctx)
        g = ctx.group.add(g, qg)
        n += qn
    return (g, n)


def monomial_charge(factors, ctx: Context) -> int:
    return sum(qc.charge(ctx.p) for qc in factors)


def monomial_str(factors) -> str:
    """Render a monomial, collapsing repeated factors into a power."""
    if not factors:
        return "1"
    parts = []
    i = 0
    while i < len(factors):
        j = i
        while j < len(factors) and factors[j] == factors[i]:
            j += 1
        base = qclass_str(factors[i])
        parts.append(base if j - i == 1 else f"{base}^{j - i}")
        i = j
    return " * ".join(parts)


class AlgebraElement:
    """A linear combination of sorted monomials in QClasses."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms=None):
        self.ctx = ctx
        self.terms: dict[tuple[QClass, ...], int] = {}
        if terms:
            for mono, c in dict(terms).items():
                c %= ctx.p
                if c:
                    self.terms[tuple(mono)] = c

    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    @classmethod
    def unit(cls, ctx):
        return cls(ctx, {(): 1})

    @classmethod
    def from_monomial(cls, ctx, factors, coeff=1):
        return cls(ctx, {tuple(factors): coeff})

    @property
    def is_zero(self):
        return not self.terms

    def add(self, other: "AlgebraElement") -> "AlgebraElement":
        if other.ctx is not self.ctx:
            raise ContractError("elements belong to different contexts")
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = (out.get(m, 0) + c) % self.ctx.p
        return AlgebraElement(self.ctx, out)

    def scale(self, k: int) -> "AlgebraElement":
        return AlgebraElement(self.ctx, {m: c * k for m, c in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.ctx is other.ctx
            and self.terms == other.terms
        )

    def __repr__(self):
        if self.is_zero:
            return "AlgebraElement(0)"
        bits = [f"{c}*{monomial_str(m)}" for m, c in sorted(
            self.terms.items(), key=lambda kv: tuple(q.sort_key() for q in kv[0]))]
        return "AlgebraElement(" + " + ".join(bits) + ")"


def _merge_monomials(a, b, ctx: Context):
    """Merge two sorted factor tuples; returns (sorted tuple, sign) or None
    when a repeated odd-parity factor kills the product."""
    sign = 1
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if b[j].sort_key() < a[i].sort_key():
            # b[j] moves past the remaining factors of a
            for k in range(i, len(a)):
                sign *= swap_sign(ctx.chi, a[k].bidegree(ctx), b[j].bidegree(ctx))
            out.append(b[j])
            j += 1
        else:
            out.append(a[i])
            i += 1
    out.extend(a[i:])
    out.extend(b[j:])
    for t in range(len(out) - 1):
        if out[t] == out[t + 1] and not _repeatable(out[t], ctx):
            return None
    return tuple(out), sign


def multiply(a: AlgebraElement, b: AlgebraElement, ctx: Context) -> AlgebraElement:
    if a.ctx is not ctx or b.ctx is not ctx:
        raise ContractError("elements belong to different contexts")
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            merged = _merge_monomials(ma, mb, ctx)
            if merged is None:
                continue
            mono, sign = merged
            c = (out.get(mono, 0) + sign * ca * cb) % ctx.p
            if c:
                out[mono] = c
            else:
                out.pop(mono, None)
    return AlgebraElement(ctx, out)


# ---------------------------------------------------------------------------
# basis enumeration per bidegree and Poincare tables


def _min_qclass_degree(ctx: Context, max_charge) -> int:
    """Lower bound for the internal degree of any QClass (degree law:
    d >= p^l n, so negative generator degrees set the floor)."""
    floor = 0
    levels = 0
    c = 1
    while c * ctx.p <= max_charge:
        c *= ctx.p
        levels += 1
    for gen in ctx.generators:
        floor = min(floor, gen.n if gen.n >= 0 else gen.n * ctx.p**levels)
    return floor


def _enumerate_monomials(ctx: Context, max_degree, max_charge):
    """Yield (factors, g, n, charge) for every monomial with n <= max_degree
    and charge <= max_charge (the empty monomial included)."""
    mu = _min_qclass_degree(ctx, max_charge)
    deg_cap = max_degree + max(0, -mu) * (max_charge - 1) if max_charge >= 1 else max_degree
    cands = enumerate_qset(ctx.generators, deg_cap, max_charge, ctx)
    degs = [qc.degree(ctx.p) for qc in cands]
    # suffix minima of candidate degrees, for pruning partial products
    suffix_min = [0] * (len(cands) + 1)
    for i in range(len(cands) - 1, -1, -1):
        suffix_min[i] = min(degs[i], suffix_min[i + 1])
    results = []

    def emit(stack, g, n, charge):
        if n <= max_degree:
            results.append((tuple(stack), g, n, charge))

    def walk(i, stack, g, n, charge):
        emit(stack, g, n, charge)
        for j in range(i, len(cands)):
            qc = cands[j]
            qcharge = qc.charge(ctx.p)
            if charge + qcharge > max_charge:
                continue
            # degree floor: everything still addable has degree >= suffix_min[j]
            if n + degs[j] + 0 > max_degree and degs[j] >= 0 and suffix_min[j] >= 0:
                continue
            qg, qn = qc.bidegree(ctx)
            reps = [1]
            if _repeatable(qc, ctx):
                r, tot = 2, charge + 2 * qcharge
                while tot <= max_charge:
                    reps.append(r)
                    r += 1
                    tot += qcharge
            for r in reps:
                if charge + r * qcharge > max_charge:
                    break
                g2, n2, c2 = g, n, charge
                for _ in range(r):
                    g2 = ctx.group.add(g2, qg)
                n2 += r * qn
                c2 += r * qcharge
                walk(j + 1, stack + [qc] * r, g2, n2, c2)

    walk(0, [], ctx.group.zero(), 0, 0)
    return results


def basis(bidegree, max_charge, ctx: Context):
    """All monomials of the requested bidegree (g, n) with charge <= max_charge."""
    g_want, n_want = ctx.group.validate(bidegree[0]), bidegree[1]
    out = [
        factors
        for factors, g, n, _ in _enumerate_monomials(ctx, n_want, max_charge)
        if g == g_want and n == n_want
    ]
    out.sort(key=lambda fs: tuple(q.sort_key() for q in fs))
    return out


def poincare_table(ctx: Context, max_degree, max_charge):
    """Dimensions of the free-algebra homology per (g, n, charge)."""
    table: dict = {}
    for _, g, n, charge in _enumerate_monomials(ctx, max_degree, max_charge):
        key = (g, n, charge)
        table[key] = table.get(key, 0) + 1
    return table
