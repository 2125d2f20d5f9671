"""Buchberger's algorithm for submodules of R^s, normal forms, syzygies,
and submodule membership/equality.

Syzygies and membership certificates share one mechanism: the generators
are augmented with tag components (generator i carries the extra unit
vector e_{s+i}) and a position-over-term order ranks every original
component above every tag component.  Basis elements whose original block
vanishes are syzygies; reducing an element against the augmented basis,
touching only original-block terms, leaves the cofactors in the tag block.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rings import (
    DEFAULT_ORDER,
    ModuleElement,
    MonomialOrder,
    Polynomial,
    RingError,
    mono_div,
    mono_lcm,
    mono_mul,
)


class PairBudgetExceeded(RuntimeError):
    """Raised when Buchberger processes more S-pairs than allowed."""


DEFAULT_PAIR_BUDGET = 10**6


@dataclass(frozen=True)
class GroebnerBasis:
    elements: tuple[ModuleElement, ...]
    order: MonomialOrder
    reduced: bool = True

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def _reduce_terms(m, basis, lts, order, restrict_comp=None):
    """Full normal form of m against basis elements with leading terms lts.

    If restrict_comp is given, only terms with component < restrict_comp are
    reduced (and only basis elements whose leading component is < it are
    used); remaining terms are carried along untouched.  Among several
    divisors the basis element of smallest index wins.
    """
    work = m
    # Terms already known irreducible; avoids rescanning on every pass.
    done: set = set()
    while True:
        candidates = [
            t
            for t in work.terms
            if t not in done and (restrict_comp is None or t[0] < restrict_comp)
        ]
        if not candidates:
            return work
        t = max(candidates, key=order.term_key)
        comp, mono = t
        coeff = work.terms[t]
        hit = False
        for idx, (g, (lc_comp, lc_mono, lc_coeff)) in enumerate(zip(basis, lts)):
            if lc_comp != comp:
                continue
            if restrict_comp is not None and lc_comp >= restrict_comp:
                continue
            q = mono_div(mono, lc_mono)
            if q is None:
                continue
            work = work - g.scale(q, coeff / lc_coeff)
            hit = True
            break
        if not hit:
            done.add(t)


def normal_form(m: ModuleElement, basis, order: MonomialOrder = DEFAULT_ORDER) -> ModuleElement:
    """Remainder of m on division by the given basis elements.

    The result has no term divisible by any leading term of the basis and
    differs from m by an element of the generated submodule.
    """
    if isinstance(basis, GroebnerBasis):
        order = basis.order
        basis = list(basis.elements)
    basis = [g for g in basis if not g.is_zero()]
    lts = [g.leading_term(order) for g in basis]
    return _reduce_terms(m, basis, lts, order)


def _spair(f, g, lt_f, lt_g):
    cf, mf, af = lt_f
    cg, mg, ag = lt_g
    lcm = mono_lcm(mf, mg)
    uf = mono_div(lcm, mf)
    ug = mono_div(lcm, mg)
    return f.scale(uf, Fraction(1) / af) - g.scale(ug, Fraction(1) / ag)


def buchberger(
    gens,
    order: MonomialOrder = DEFAULT_ORDER,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> GroebnerBasis:
    """Reduced Groebner basis of the submodule generated by gens.

    Normal pair-selection strategy (smallest lcm under the order); the
    coprime criterion is applied in the ideal case s=1 and the chain
    criterion in general.  Deterministic for a fixed input order.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerBasis((), order, True)
    basis = list(gens)
    lts = [g.leading_term(order) for g in basis]
    rank = basis[0].rank

    # S-pairs only exist between elements with equal leading component.
    pairs = {
        (i, j) for i in range(len(basis)) for j in range(i) if lts[i][0] == lts[j][0]
    }
    processed: set[tuple[int, int]] = set()
    budget = 0

    def lcm_key(pair):
        i, j = pair
        ci, mi, _ = lts[i]
        _, mj, _ = lts[j]
        return order.term_key((ci, mono_lcm(mi, mj)))

    while pairs:
        pair = min(pairs, key=lcm_key)
        pairs.discard(pair)
        processed.add(pair)
        i, j = pair
        ci, mi, _ = lts[i]
        cj, mj, _ = lts[j]

        budget += 1
        if budget > pair_budget:
            raise PairBudgetExceeded(f"S-pair budget of {pair_budget} exhausted")

        if rank == 1 and mono_lcm(mi, mj) == mono_mul(mi, mj):
            continue  # coprime leading monomials (valid for ideals)
        lcm = mono_lcm(mi, mj)
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or lts[k][0] != ci:
                continue
            if mono_div(lcm, lts[k][1]) is None:
                continue
            pik = (max(i, k), min(i, k))
            pjk = (max(j, k), min(j, k))
            if pik in processed and pjk in processed:
                skip = True
                break
        if skip:
            continue

        s = _spair(basis[i], basis[j], lts[i], lts[j])
        r = _reduce_terms(s, basis, lts, order)
        if not r.is_zero():
            basis.append(r)
            lts.append(r.leading_term(order))
            new = len(basis) - 1
            for k in range(new):
                if lts[k][0] == lts[new][0]:
                    pairs.add((new, k))

    return GroebnerBasis(tuple(interreduce(basis, order)), order, True)


def interreduce(basis, order: MonomialOrder):
    """Interreduce and normalize to the unique reduced basis form."""
    basis = [g for g in basis if not g.is_zero()]
    # Drop elements whose leading term is divisible by another leading term.
    changed = True
    while changed:
        changed = False
        lts = [g.leading_term(order) for g in basis]
        for i in range(len(basis)):
            ci, mi, _ = lts[i]
            for j in range(len(basis)):
                if i == j:
                    continue
                cj, mj, _ = lts[j]
                if ci == cj and mono_div(mi, mj) is not None:
                    del basis[i]
                    changed = True
                    break
            if changed:
                break
    # Tail-reduce each element against the others.
    out = []
    for i, g in enumerate(basis):
        others = basis[:i] + basis[i + 1 :]
        lts = [h.leading_term(order) for h in others]
        out.append(_reduce_terms(g, others, lts, order).monic(order))
    out.sort(key=lambda g: order.term_key(g.leading_term(order)[:2]), reverse=True)
    return out


def _augment(gens, rank):
    """Embed generator i of R^rank as g_i + e_{rank+i} in R^{rank+len(gens)}."""
    n = len(gens)
    ctx = gens[0].ctx
    big = rank + n
    out = []
    for i, g in enumerate(gens):
        terms = {(comp, m): c for (comp, m), c in g.terms.items()}
        terms[(rank + i, ctx.zero_mono)] = Fraction(1)
        out.append(ModuleElement(ctx, big, terms))
    return out


def _elimination_order(order: MonomialOrder) -> MonomialOrder:
    return MonomialOrder(base=order.base, module="POT", priority=None)


def syzygy_basis(
    gens,
    order: MonomialOrder = DEFAULT_ORDER,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> list[ModuleElement]:
    """Generators of the syzygy module {c in R^l : sum c_i gens_i = 0}.

    Computed by eliminating the original block from the tag-augmented
    module; every returned vector annihilates gens exactly.
    """
    gens = list(gens)
    if not gens:
        return []
    rank = gens[0].rank
    ctx = gens[0].ctx
    n = len(gens)
    aug = _augment(gens, rank)
    gb = buchberger(aug, _elimination_order(order), pair_budget)
    out = []
    for g in gb:
        if all(comp >= rank for comp, _ in g.terms):
            out.append(
                ModuleElement(ctx, n, {(comp - rank, m): c for (comp, m), c in g.terms.items()})
            )
    return out


def submodule_membership(
    m: ModuleElement,
    gens,
    order: MonomialOrder = DEFAULT_ORDER,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> tuple[bool, list[Polynomial] | None]:
    """Decide m in <gens>; on success also return cofactors c with m = sum c_i gens_i."""
    gens = [g for g in gens if not g.is_zero()]
    if m.is_zero():
        return True, [m.ctx.zero() for _ in gens]
    if not gens:
        return False, None
    rank = m.rank
    ctx = m.ctx
    n = len(gens)
    aug = _augment(gens, rank)
    elim = _elimination_order(order)
    gb = buchberger(aug, elim, pair_budget)
    useful = [g for g in gb if g.leading_term(elim)[0] < rank]
    lts = [g.leading_term(elim) for g in useful]
    m_aug = ModuleElement(ctx, rank + n, dict(m.terms))
    r = _reduce_terms(m_aug, useful, lts, elim, restrict_comp=rank)
    if any(comp < rank for comp, _ in r.terms):
        return False, None
    cofactors = []
    for i in range(n):
        terms = {m_: -c for (comp, m_), c in r.terms.items() if comp == rank + i}
        cofactors.append(Polynomial(ctx, terms))
    return True, cofactors


def module_equal(gens_a, gens_b, order: MonomialOrder = DEFAULT_ORDER) -> bool:
    """True iff both generator lists span the same submodule of R^s."""
    gb_a = buchberger(gens_a, order)
    gb_b = buchberger(gens_b, order)
    return list(gb_a.elements) == list(gb_b.elements)


def is_groebner(basis, order: MonomialOrder = DEFAULT_ORDER) -> bool:
    """Check the Buchberger criterion: every S-vector reduces to zero."""
    basis = [g for g in basis if not g.is_zero()]
    lts = [g.leading_term(order) for g in basis]
    for i in range(len(basis)):
        for j in range(i):
            if lts[i][0] != lts[j][0]:
                continue
            s = _spair(basis[i], basis[j], lts[i], lts[j])
            if not _reduce_terms(s, basis, lts, order).is_zero():
                return False
    return True
