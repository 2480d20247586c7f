"""Proof-producing tactics: the deduction theorem, substitution of
equivalents, the lemma schemata library, and conjunction assembly.

Nothing here is trusted: every exit point runs the kernel checker.  The
central tool is ProofBuilder, which accumulates steps, deduplicates lines
by formula (a sound peephole: an identical earlier line under the same
hypotheses proves the same thing), and splices existing derivations with
index re-offsetting.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .formula import (Atom, Conj, Disj, Formula, Impl, conj_chain, disj_chain,
                      subformula_at)
from .kernel import (AxiomStep, CalculusId, CheckError, Derivation, HypStep,
                     MPStep, SchemeId, StepError, instantiate_scheme, verify)
from .kernel import prune as _prune


class TacticError(ValueError):
    pass


class ProofBuilder:
    """Accumulates a step list; all methods return the index of the line
    proving the formula of interest."""

    def __init__(self, calculus: CalculusId):
        self.calculus = calculus
        self.steps: list = []
        self._by_formula: dict = {}

    def _add(self, step) -> int:
        existing = self._by_formula.get(step.formula)
        if existing is not None:
            return existing
        self.steps.append(step)
        index = len(self.steps) - 1
        self._by_formula[step.formula] = index
        return index

    def formula_at(self, index: int) -> Formula:
        return self.steps[index].formula

    def hyp(self, f: Formula) -> int:
        return self._add(HypStep(f))

    def axiom(self, scheme: SchemeId, **subst: Formula) -> int:
        f = instantiate_scheme(scheme, subst)
        return self._add(AxiomStep(scheme, f))

    def mp(self, major: int, minor: int) -> int:
        imp = self.steps[major].formula
        if not isinstance(imp, Impl) or imp.left != self.steps[minor].formula:
            raise TacticError(
                f"MP mismatch: {imp} against {self.steps[minor].formula}")
        return self._add(MPStep(major, minor, imp.right))

    def include(self, d: Derivation, hyp_map=None) -> int:
        """Splice a derivation; hyp_map routes hypothesis citations to
        already-present lines instead of HypSteps."""
        if not self.calculus.extends(d.calculus):
            raise TacticError(f"cannot splice {d.calculus} into {self.calculus}")
        hyp_map = hyp_map or {}
        mapping = {}
        for i, step in enumerate(d.steps):
            if isinstance(step, HypStep):
                if step.formula in hyp_map:
                    mapping[i] = hyp_map[step.formula]
                else:
                    mapping[i] = self.hyp(step.formula)
            elif isinstance(step, AxiomStep):
                mapping[i] = self._add(step)
            else:
                mapping[i] = self.mp(mapping[step.major], mapping[step.minor])
        return mapping[len(d.steps) - 1]

    def build(self, conclusion: int = None, hypotheses=None,
              prune: bool = False) -> Derivation:
        """Freeze into a checked derivation.  If the conclusion line is not
        last (the dedup cache can cause that), its step is repeated at the
        end.  Hypotheses default to the cited ones.  With prune=True, steps
        the conclusion does not cite are dropped before checking."""
        if conclusion is not None and conclusion != len(self.steps) - 1:
            self.steps.append(self.steps[conclusion])
        if hypotheses is None:
            hypotheses = {s.formula for s in self.steps if isinstance(s, HypStep)}
        d = Derivation(self.calculus, frozenset(hypotheses), tuple(self.steps))
        if prune:
            d = _prune(d)
        return verify(d)


def _identity(b: ProofBuilder, a: Formula) -> int:
    """The Ax1/Ax2 five-line proof of a -> a."""
    aa = Impl(a, a)
    s1 = b.axiom(SchemeId.AX2, A=a, B=aa, C=a)
    s2 = b.axiom(SchemeId.AX1, A=a, B=aa)
    s3 = b.mp(s1, s2)
    s4 = b.axiom(SchemeId.AX1, A=a, B=a)
    return b.mp(s3, s4)


def _compose(b: ProofBuilder, i_ab: int, i_bc: int) -> int:
    """From lines a -> b and b -> c, derive a -> c."""
    f_ab = b.formula_at(i_ab)
    f_bc = b.formula_at(i_bc)
    if not (isinstance(f_ab, Impl) and isinstance(f_bc, Impl)
            and f_ab.right == f_bc.left):
        raise TacticError(f"cannot compose {f_ab} with {f_bc}")
    a, mid, c = f_ab.left, f_ab.right, f_bc.right
    s1 = b.axiom(SchemeId.AX1, A=f_bc, B=a)       # (b->c) -> (a -> (b->c))
    s2 = b.mp(s1, i_bc)                            # a -> (b -> c)
    s3 = b.axiom(SchemeId.AX2, A=a, B=mid, C=c)
    return b.mp(b.mp(s3, s2), i_ab)


# ---------------------------------------------------------------------------
# the deduction theorem (proof transformer)

def deduction(d: Derivation, a: Formula) -> Derivation:
    """Discharge hypothesis a: from hyps ⊢ C produce hyps\\{a} ⊢ a -> C.

    Line-by-line: an axiom or other hypothesis b becomes b, Ax1, MP to get
    a -> b; the hypothesis a itself becomes the identity proof of a -> a;
    an MP step is simulated with Ax2.
    """
    if a not in d.hypotheses:
        raise TacticError(f"{a} is not a hypothesis of the derivation")
    verify(d)
    return _deduction_body(d, a)


def _deduction_body(d: Derivation, a: Formula) -> Derivation:
    """The line-by-line transformation, assuming d already verified and
    a in d.hypotheses (callers that just verified d skip the re-check)."""
    b = ProofBuilder(d.calculus)
    lifted = {}  # old index -> line proving a -> (old formula)
    for i, step in enumerate(d.steps):
        f = step.formula
        if isinstance(step, HypStep) and f == a:
            lifted[i] = _identity(b, a)
        elif isinstance(step, MPStep):
            minor = d.steps[step.minor].formula
            ax2 = b.axiom(SchemeId.AX2, A=a, B=minor, C=f)
            lifted[i] = b.mp(b.mp(ax2, lifted[step.major]), lifted[step.minor])
        else:
            base = b._add(step)
            ax1 = b.axiom(SchemeId.AX1, A=f, B=a)
            lifted[i] = b.mp(ax1, base)
    return b.build(conclusion=lifted[len(d.steps) - 1],
                   hypotheses=d.hypotheses - {a})


def _discharge(d: Derivation, a: Formula) -> Derivation:
    """deduction(), extended to vacuous discharge: when a is not among the
    hypotheses (degenerate template instantiations can collapse two
    intended hypotheses into one), weaken the conclusion via Ax1 instead."""
    if a in d.hypotheses:
        return deduction(d, a)
    b = ProofBuilder(d.calculus)
    base = b.include(d)
    ax1 = b.axiom(SchemeId.AX1, A=d.conclusion, B=a)
    return b.build(conclusion=b.mp(ax1, base), hypotheses=d.hypotheses)


# ---------------------------------------------------------------------------
# disjunction toolkit

def _occurs_as_disjunct(e: Formula, tree: Formula) -> bool:
    return tree == e or (isinstance(tree, Disj)
                         and (_occurs_as_disjunct(e, tree.left)
                              or _occurs_as_disjunct(e, tree.right)))


def _inject(b: ProofBuilder, e: Formula, target: Formula) -> int:
    """Line proving e -> target, where e occurs as a disjunct of target
    (leftmost occurrence; Ax4/Ax5 chains)."""
    if target == e:
        return _identity(b, e)
    if isinstance(target, Disj):
        if _occurs_as_disjunct(e, target.left):
            sub = _inject(b, e, target.left)
            step = b.axiom(SchemeId.AX4, A=target.left, B=target.right)
            return _compose(b, sub, step)
        if _occurs_as_disjunct(e, target.right):
            sub = _inject(b, e, target.right)
            step = b.axiom(SchemeId.AX5, A=target.right, B=target.left)
            return _compose(b, sub, step)
    raise TacticError(f"{e} does not occur as a disjunct of {target}")


def _elim(b: ProofBuilder, tree: Formula, leaves: dict) -> int:
    """Line proving tree -> T, given leaves mapping each designated
    disjunct e to a line proving e -> T (Ax6 recursion)."""
    if tree in leaves:
        return leaves[tree]
    if not isinstance(tree, Disj):
        raise TacticError(f"no implication available for disjunct {tree}")
    left = _elim(b, tree.left, leaves)
    right = _elim(b, tree.right, leaves)
    target = b.formula_at(left).right
    ax6 = b.axiom(SchemeId.AX6, A=tree.left, B=tree.right, C=target)
    return b.mp(b.mp(ax6, left), right)


# ---------------------------------------------------------------------------
# equivalence pairs

THESIS = "thesis"
DERIVABILITY = "derivability"


@dataclass(frozen=True)
class EquivalencePair:
    """Mutual derivability of two formulas.

    derivability mode: forward is {left} ⊢ right, backward is {right} ⊢ left.
    thesis mode: forward is ⊢ left -> right, backward is ⊢ right -> left.
    The two modes interconvert by DT and MP; only thesis mode can be packed
    into a single biconditional, and only where & is available.
    """

    forward: Derivation
    backward: Derivation
    mode: str = DERIVABILITY

    @property
    def calculus(self) -> CalculusId:
        return self.forward.calculus

    @property
    def left(self) -> Formula:
        if self.mode == THESIS:
            return self.forward.conclusion.left
        return next(iter(self.forward.hypotheses))

    @property
    def right(self) -> Formula:
        if self.mode == THESIS:
            return self.forward.conclusion.right
        return self.forward.conclusion

    def flipped(self) -> "EquivalencePair":
        return EquivalencePair(self.backward, self.forward, self.mode)


def reflexive_pair(a: Formula, calculus: CalculusId,
                   mode: str = DERIVABILITY) -> EquivalencePair:
    if mode == DERIVABILITY:
        d = verify(Derivation(calculus, frozenset([a]), (HypStep(a),)))
        return EquivalencePair(d, d, mode)
    b = ProofBuilder(calculus)
    d = b.build(conclusion=_identity(b, a), hypotheses=())
    return EquivalencePair(d, d, THESIS)


def as_derivability(p: EquivalencePair) -> EquivalencePair:
    if p.mode == DERIVABILITY:
        return p

    def one_way(thesis: Derivation) -> Derivation:
        b = ProofBuilder(thesis.calculus)
        h = b.hyp(thesis.conclusion.left)
        imp = b.include(thesis)
        return b.build(conclusion=b.mp(imp, h))

    return EquivalencePair(one_way(p.forward), one_way(p.backward), DERIVABILITY)


def as_thesis(p: EquivalencePair) -> EquivalencePair:
    if p.mode == THESIS:
        return p
    return EquivalencePair(deduction(p.forward, p.left),
                           deduction(p.backward, p.right), THESIS)


def compose_pairs(p: EquivalencePair, q: EquivalencePair) -> EquivalencePair:
    """Transitivity: from a ⇄ m and m ⇄ b, a ⇄ b."""
    p, q = as_derivability(p), as_derivability(q)
    if p.right != q.left:
        raise TacticError(f"cannot chain {p.right} with {q.left}")

    def chain(first: Derivation, second: Derivation, start: Formula) -> Derivation:
        b = ProofBuilder(first.calculus)
        h = b.hyp(start)
        mid = b.include(first, hyp_map={start: h})
        out = b.include(second, hyp_map={first.conclusion: mid})
        return b.build(conclusion=out, hypotheses={start})

    return EquivalencePair(chain(p.forward, q.forward, p.left),
                           chain(q.backward, p.backward, q.right),
                           DERIVABILITY)


def pair_to_biconditional(p: EquivalencePair) -> Derivation:
    """Pack a pair as ⊢ (A -> B) & (B -> A); needs Ax9 (IC or P)."""
    p = as_thesis(p)
    b = ProofBuilder(p.calculus)
    fwd = b.include(p.forward)
    bwd = b.include(p.backward)
    ax9 = b.axiom(SchemeId.AX9, A=b.formula_at(fwd), B=b.formula_at(bwd))
    return b.build(conclusion=b.mp(b.mp(ax9, fwd), bwd), hypotheses=())


def biconditional_to_pair(d: Derivation) -> EquivalencePair:
    """Unpack ⊢ (A -> B) & (B -> A) into a thesis-form pair via Ax7/Ax8."""
    conc = d.conclusion
    if not (isinstance(conc, Conj) and isinstance(conc.left, Impl)
            and isinstance(conc.right, Impl)):
        raise TacticError(f"not a biconditional conclusion: {conc}")

    def project(scheme: SchemeId) -> Derivation:
        b = ProofBuilder(d.calculus)
        whole = b.include(d)
        ax = b.axiom(scheme, A=conc.left, B=conc.right)
        return b.build(conclusion=b.mp(ax, whole), hypotheses=())

    return EquivalencePair(project(SchemeId.AX7), project(SchemeId.AX8), THESIS)


# ---------------------------------------------------------------------------
# conjunction assembly

def _extract_conjuncts(b: ProofBuilder, index: int, table: dict) -> None:
    """Record lines for every subtree of the conjunction proved at index."""
    f = b.formula_at(index)
    table.setdefault(f, index)
    if isinstance(f, Conj):
        ax7 = b.axiom(SchemeId.AX7, A=f.left, B=f.right)
        _extract_conjuncts(b, b.mp(ax7, index), table)
        ax8 = b.axiom(SchemeId.AX8, A=f.left, B=f.right)
        _extract_conjuncts(b, b.mp(ax8, index), table)


def _rebuild_conjunction(b: ProofBuilder, target: Formula, table: dict) -> int:
    """Derive target from the recorded conjunct lines via Ax9."""
    if target in table:
        return table[target]
    if not isinstance(target, Conj):
        raise TacticError(f"no line available for conjunct {target}")
    left = _rebuild_conjunction(b, target.left, table)
    right = _rebuild_conjunction(b, target.right, table)
    ax9 = b.axiom(SchemeId.AX9, A=target.left, B=target.right)
    return b.mp(b.mp(ax9, left), right)


def conjoin(ds) -> Derivation:
    """From closed ⊢ B1, ..., ⊢ Bn build ⊢ B1 & ... & Bn (right-associated)."""
    ds = list(ds)
    if not ds:
        raise TacticError("nothing to conjoin")
    calculus = ds[0].calculus
    if any(d.hypotheses for d in ds):
        raise TacticError("conjoin requires closed derivations")
    if SchemeId.AX9 not in calculus.schemes:
        raise TacticError(f"{calculus} has no conjunction schemes")
    b = ProofBuilder(calculus)
    table: dict = {}
    for d in ds:
        if d.calculus is not calculus:
            raise TacticError("conjoin requires a single calculus")
        table.setdefault(d.conclusion, b.include(d))
    target = conj_chain([d.conclusion for d in ds])
    return b.build(conclusion=_rebuild_conjunction(b, target, table),
                   hypotheses=())


def split_conjunction(d: Derivation, n: int) -> list:
    """From closed ⊢ B1 & ... & Bn recover closed ⊢ Bj for each j."""
    if d.hypotheses:
        raise TacticError("split requires a closed derivation")
    parts = []
    f = d.conclusion
    for _ in range(n - 1):
        if not isinstance(f, Conj):
            raise TacticError(f"conclusion is not an {n}-fold conjunction")
        parts.append(f.left)
        f = f.right
    parts.append(f)

    results = []
    for j in range(n):
        b = ProofBuilder(d.calculus)
        cur = b.include(d)
        for _ in range(j):
            g = b.formula_at(cur)
            ax = b.axiom(SchemeId.AX8, A=g.left, B=g.right)
            cur = b.mp(ax, cur)
        g = b.formula_at(cur)
        if j < n - 1:
            ax = b.axiom(SchemeId.AX7, A=g.left, B=g.right)
            cur = b.mp(ax, cur)
        results.append(b.build(conclusion=cur, hypotheses=()))
    return results


# ---------------------------------------------------------------------------
# the lemma library (each returns a kernel-checked object)

def l2_5(a: Formula, calculus=CalculusId.I) -> Derivation:
    b = ProofBuilder(calculus)
    return b.build(conclusion=_identity(b, a), hypotheses=())


def l2_6(a, bf, c, calculus=CalculusId.I) -> Derivation:
    b = ProofBuilder(calculus)
    i1 = b.hyp(Impl(a, bf))
    i2 = b.hyp(Impl(bf, c))
    return b.build(conclusion=_compose(b, i1, i2))


def l2_7(a, bf, calculus=CalculusId.I) -> Derivation:
    b = ProofBuilder(calculus)
    imp = b.hyp(Impl(a, bf))
    h = b.hyp(a)
    d = b.build(conclusion=b.mp(imp, h))
    return _discharge(_discharge(d, Impl(a, bf)), a)


def l2_8(a, bf, calculus=CalculusId.I) -> Derivation:
    b = ProofBuilder(calculus)
    b.hyp(a)
    d = b.build(hypotheses={a, Impl(bf, a)})
    return _discharge(_discharge(d, Impl(bf, a)), a)


def l2_9(a, bf, calculus=CalculusId.I) -> Derivation:
    nested = Impl(a, Impl(a, bf))
    b = ProofBuilder(calculus)
    h = b.hyp(a)
    outer = b.hyp(nested)
    d = b.build(conclusion=b.mp(b.mp(outer, h), h))
    return _discharge(_discharge(d, a), nested)


def l2_10(a, bf, c, calculus=CalculusId.I) -> Derivation:
    peirce_ish = Impl(Impl(a, bf), bf)
    b = ProofBuilder(calculus)
    h1 = b.hyp(peirce_ish)
    h2 = b.hyp(Impl(a, c))
    h3 = b.hyp(Impl(c, bf))
    ab = _compose(b, h2, h3)
    d = b.build(conclusion=b.mp(h1, ab))
    return deduction(d, Impl(c, bf))


def l2_11(a, bf, calculus=CalculusId.ID) -> Derivation:
    x = Disj(a, Impl(a, bf))
    inner = ProofBuilder(calculus)
    h = inner.hyp(Impl(x, bf))
    ax4 = inner.axiom(SchemeId.AX4, A=a, B=Impl(a, bf))
    ab = _compose(inner, ax4, h)                      # a -> b
    ax5 = inner.axiom(SchemeId.AX5, A=Impl(a, bf), B=a)
    d = deduction(inner.build(conclusion=inner.mp(ax5, ab)), Impl(x, bf))
    b = ProofBuilder(calculus)
    premise = b.include(d)
    peirce = b.axiom(SchemeId.AX3, A=x, B=bf)
    return b.build(conclusion=b.mp(peirce, premise), hypotheses=())


def l2_12(a, bf, c, df, calculus=CalculusId.ID) -> Derivation:
    target = Disj(c, df)
    b = ProofBuilder(calculus)
    h_or = b.hyp(Disj(a, bf))
    h_ac = b.hyp(Impl(a, c))
    h_bd = b.hyp(Impl(bf, df))
    a_t = _compose(b, h_ac, b.axiom(SchemeId.AX4, A=c, B=df))
    b_t = _compose(b, h_bd, b.axiom(SchemeId.AX5, A=df, B=c))
    ax6 = b.axiom(SchemeId.AX6, A=a, B=bf, C=target)
    return b.build(conclusion=b.mp(b.mp(b.mp(ax6, a_t), b_t), h_or))


def l2_13(a, bf, c, calculus=CalculusId.ID) -> Derivation:
    x = Disj(bf, Impl(a, c))
    b = ProofBuilder(calculus)
    h = b.hyp(Impl(a, bf))
    excl = b.include(l2_11(a, c, calculus))           # a v (a -> c)
    a_x = _compose(b, h, b.axiom(SchemeId.AX4, A=bf, B=Impl(a, c)))
    ac_x = b.axiom(SchemeId.AX5, A=Impl(a, c), B=bf)
    ax6 = b.axiom(SchemeId.AX6, A=a, B=Impl(a, c), C=x)
    return b.build(conclusion=b.mp(b.mp(b.mp(ax6, a_x), ac_x), excl))


def l2_14(a, bf, c, calculus=CalculusId.ID) -> Derivation:
    b = ProofBuilder(calculus)
    h = b.hyp(a)
    ax1 = b.axiom(SchemeId.AX1, A=a, B=c)
    ca = b.mp(ax1, h)
    ax5 = b.axiom(SchemeId.AX5, A=Impl(c, a), B=bf)
    return b.build(conclusion=b.mp(ax5, ca))


def l2_15(a_list, bf, calculus=CalculusId.ID) -> EquivalencePair:
    a_list = list(a_list)
    if not a_list:
        raise TacticError("2.15 needs at least one leading disjunct")
    head = disj_chain(a_list)
    left = Disj(head, bf)
    right = disj_chain(a_list + [bf])
    if left == right:  # n = 1
        return reflexive_pair(left, calculus)

    fwd = ProofBuilder(calculus)
    leaves = {e: _inject(fwd, e, right) for e in a_list}
    head_imp = _elim(fwd, head, leaves)
    b_imp = _inject(fwd, bf, right)
    ax6 = fwd.axiom(SchemeId.AX6, A=head, B=bf, C=right)
    out = fwd.mp(fwd.mp(fwd.mp(ax6, head_imp), b_imp), fwd.hyp(left))
    forward = fwd.build(conclusion=out, hypotheses={left})

    bwd = ProofBuilder(calculus)
    into_head = {e: _inject(bwd, e, head) for e in a_list}
    ax4 = bwd.axiom(SchemeId.AX4, A=head, B=bf)
    leaves2 = {e: _compose(bwd, idx, ax4) for e, idx in into_head.items()}
    leaves2[bf] = bwd.axiom(SchemeId.AX5, A=bf, B=head)
    out2 = bwd.mp(_elim(bwd, right, leaves2), bwd.hyp(right))
    backward = bwd.build(conclusion=out2, hypotheses={right})
    return EquivalencePair(forward, backward, DERIVABILITY)


def l2_16(sources, targets, calculus=CalculusId.ID) -> Derivation:
    sources, targets = list(sources), list(targets)
    missing = [e for e in sources if e not in targets]
    if missing:
        raise TacticError(f"disjunct {missing[0]} missing from the target list")
    t = disj_chain(targets)
    b = ProofBuilder(calculus)
    leaves = {e: _inject(b, e, t) for e in sources}
    src = disj_chain(sources)
    imp = _elim(b, src, leaves)
    return b.build(conclusion=b.mp(imp, b.hyp(src)), hypotheses={src})


def l2_17(a, bf, c, calculus=CalculusId.ID) -> Derivation:
    b = ProofBuilder(calculus)
    h_or = b.hyp(Disj(a, bf))
    h_ca = b.hyp(Impl(c, a))
    h_bc = b.hyp(Impl(bf, c))
    ba = _compose(b, h_bc, h_ca)
    aa = _identity(b, a)
    ax6 = b.axiom(SchemeId.AX6, A=a, B=bf, C=a)
    d = b.build(conclusion=b.mp(b.mp(b.mp(ax6, aa), ba), h_or))
    return deduction(d, Impl(bf, c))


def l2_18(a, bf, calculus=CalculusId.ID) -> Derivation:
    b = ProofBuilder(calculus)
    h_or = b.hyp(Disj(a, bf))
    h_ab = b.hyp(Impl(a, bf))
    bb = _identity(b, bf)
    ax6 = b.axiom(SchemeId.AX6, A=a, B=bf, C=bf)
    return b.build(conclusion=b.mp(b.mp(b.mp(ax6, h_ab), bb), h_or))


def l2_19(a, bf, calculus=CalculusId.ID) -> Derivation:
    x = Disj(a, bf)
    b = ProofBuilder(calculus)
    h = b.hyp(Impl(Impl(a, bf), bf))
    excl = b.include(l2_11(a, bf, calculus))          # a v (a -> b)
    ax4 = b.axiom(SchemeId.AX4, A=a, B=bf)
    ab_x = _compose(b, h, b.axiom(SchemeId.AX5, A=bf, B=a))
    ax6 = b.axiom(SchemeId.AX6, A=a, B=Impl(a, bf), C=x)
    return b.build(conclusion=b.mp(b.mp(b.mp(ax6, ax4), ab_x), excl))


def l2_21(a, bf, c, calculus=CalculusId.IC) -> EquivalencePair:
    h = Impl(a, Conj(bf, c))

    def projected(scheme: SchemeId) -> Derivation:
        b = ProofBuilder(calculus)
        bc = b.mp(b.hyp(h), b.hyp(a))
        ax = b.axiom(scheme, A=bf, B=c)
        return deduction(b.build(conclusion=b.mp(ax, bc)), a)

    b = ProofBuilder(calculus)
    ab = b.include(projected(SchemeId.AX7))
    ac = b.include(projected(SchemeId.AX8))
    ax9 = b.axiom(SchemeId.AX9, A=Impl(a, bf), B=Impl(a, c))
    fwd = deduction(b.build(conclusion=b.mp(b.mp(ax9, ab), ac)), h)

    r = Conj(Impl(a, bf), Impl(a, c))
    b2 = ProofBuilder(calculus)
    hr = b2.hyp(r)
    ha = b2.hyp(a)
    left = b2.mp(b2.mp(b2.axiom(SchemeId.AX7, A=Impl(a, bf), B=Impl(a, c)), hr), ha)
    right = b2.mp(b2.mp(b2.axiom(SchemeId.AX8, A=Impl(a, bf), B=Impl(a, c)), hr), ha)
    ax9b = b2.axiom(SchemeId.AX9, A=bf, B=c)
    inner = b2.build(conclusion=b2.mp(b2.mp(ax9b, left), right))
    bwd = _discharge(_discharge(inner, a), r)
    return EquivalencePair(fwd, bwd, THESIS)


def l2_22(a, bf, c, calculus=CalculusId.IC) -> EquivalencePair:
    curried = Impl(a, Impl(bf, c))
    packed = Impl(Conj(a, bf), c)

    b = ProofBuilder(calculus)
    hp = b.hyp(packed)
    ha, hb = b.hyp(a), b.hyp(bf)
    ax9 = b.axiom(SchemeId.AX9, A=a, B=bf)
    ab = b.mp(b.mp(ax9, ha), hb)
    fwd = _discharge(_discharge(_discharge(
        b.build(conclusion=b.mp(hp, ab)), bf), a), packed)

    b2 = ProofBuilder(calculus)
    hc = b2.hyp(curried)
    hab = b2.hyp(Conj(a, bf))
    left = b2.mp(b2.axiom(SchemeId.AX7, A=a, B=bf), hab)
    right = b2.mp(b2.axiom(SchemeId.AX8, A=a, B=bf), hab)
    bwd = _discharge(_discharge(
        b2.build(conclusion=b2.mp(b2.mp(hc, left), right)), Conj(a, bf)), curried)
    return EquivalencePair(fwd, bwd, THESIS)


def conj_reassociation(source: Formula, target: Formula,
                       calculus=CalculusId.IC) -> EquivalencePair:
    """Thesis-form pair between two conjunction trees over the same leaves
    (Ax7/Ax8 tear-down, Ax9 rebuild)."""

    def one_way(src: Formula, dst: Formula) -> Derivation:
        b = ProofBuilder(calculus)
        table: dict = {}
        _extract_conjuncts(b, b.hyp(src), table)
        out = _rebuild_conjunction(b, dst, table)
        return deduction(b.build(conclusion=out), src)

    return EquivalencePair(one_way(source, target), one_way(target, source),
                           THESIS)


def l2_23(a_list, bf, calculus=CalculusId.IC) -> EquivalencePair:
    a_list = list(a_list)
    if not a_list:
        raise TacticError("2.23 needs at least one leading conjunct")
    left = Conj(conj_chain(a_list), bf)
    right = conj_chain(a_list + [bf])
    if left == right:
        return reflexive_pair(left, calculus, THESIS)
    return conj_reassociation(left, right, calculus)


def l2_25(c, a, bf, calculus=CalculusId.P) -> EquivalencePair:
    ab = Conj(a, bf)
    left = Disj(c, ab)
    right = Conj(Disj(c, a), Disj(c, bf))

    b = ProofBuilder(calculus)
    h = b.hyp(left)

    def half(member, scheme):
        into = Disj(c, member)
        c_in = b.axiom(SchemeId.AX4, A=c, B=member)
        ab_in = _compose(b, b.axiom(scheme, A=a, B=bf),
                         b.axiom(SchemeId.AX5, A=member, B=c))
        ax6 = b.axiom(SchemeId.AX6, A=c, B=ab, C=into)
        return b.mp(b.mp(b.mp(ax6, c_in), ab_in), h)

    ca = half(a, SchemeId.AX7)
    cb = half(bf, SchemeId.AX8)
    ax9 = b.axiom(SchemeId.AX9, A=Disj(c, a), B=Disj(c, bf))
    fwd = deduction(b.build(conclusion=b.mp(b.mp(ax9, ca), cb)), left)

    b2 = ProofBuilder(calculus)
    hr = b2.hyp(right)
    s1 = b2.mp(b2.axiom(SchemeId.AX7, A=Disj(c, a), B=Disj(c, bf)), hr)  # c v a
    s2 = b2.mp(b2.axiom(SchemeId.AX8, A=Disj(c, a), B=Disj(c, bf)), hr)  # c v b

    # b -> (a -> left)
    inner = ProofBuilder(calculus)
    ib, ia = inner.hyp(bf), inner.hyp(a)
    conj = inner.mp(inner.mp(inner.axiom(SchemeId.AX9, A=a, B=bf), ia), ib)
    lift = inner.mp(inner.axiom(SchemeId.AX5, A=ab, B=c), conj)
    b_a_left = b2.include(_discharge(_discharge(
        inner.build(conclusion=lift), a), bf))

    # c -> (a -> left)
    inner2 = ProofBuilder(calculus)
    ic = inner2.hyp(c)
    lx = inner2.mp(inner2.axiom(SchemeId.AX4, A=c, B=ab), ic)
    weak = inner2.mp(inner2.axiom(SchemeId.AX1, A=left, B=a), lx)
    c_a_left = b2.include(deduction(inner2.build(conclusion=weak), c))

    ax6 = b2.axiom(SchemeId.AX6, A=c, B=bf, C=Impl(a, left))
    a_left = b2.mp(b2.mp(b2.mp(ax6, c_a_left), b_a_left), s2)
    c_left = b2.axiom(SchemeId.AX4, A=c, B=ab)
    ax6b = b2.axiom(SchemeId.AX6, A=c, B=a, C=left)
    out = b2.mp(b2.mp(b2.mp(ax6b, c_left), a_left), s1)
    bwd = deduction(b2.build(conclusion=out), right)
    return EquivalencePair(fwd, bwd, THESIS)


def l2_26(a, bf, c, calculus=CalculusId.P) -> EquivalencePair:
    ab = Conj(a, bf)
    left = Disj(ab, c)
    right = Conj(Disj(a, c), Disj(bf, c))

    b = ProofBuilder(calculus)
    h = b.hyp(left)

    def half(member, scheme):
        into = Disj(member, c)
        ab_in = _compose(b, b.axiom(scheme, A=a, B=bf),
                         b.axiom(SchemeId.AX4, A=member, B=c))
        c_in = b.axiom(SchemeId.AX5, A=c, B=member)
        ax6 = b.axiom(SchemeId.AX6, A=ab, B=c, C=into)
        return b.mp(b.mp(b.mp(ax6, ab_in), c_in), h)

    s_a = half(a, SchemeId.AX7)
    s_b = half(bf, SchemeId.AX8)
    ax9 = b.axiom(SchemeId.AX9, A=Disj(a, c), B=Disj(bf, c))
    fwd = deduction(b.build(conclusion=b.mp(b.mp(ax9, s_a), s_b)), left)

    b2 = ProofBuilder(calculus)
    hr = b2.hyp(right)
    s1 = b2.mp(b2.axiom(SchemeId.AX7, A=Disj(a, c), B=Disj(bf, c)), hr)  # a v c
    s2 = b2.mp(b2.axiom(SchemeId.AX8, A=Disj(a, c), B=Disj(bf, c)), hr)  # b v c

    # a -> (b -> left)
    inner = ProofBuilder(calculus)
    ia, ib = inner.hyp(a), inner.hyp(bf)
    conj = inner.mp(inner.mp(inner.axiom(SchemeId.AX9, A=a, B=bf), ia), ib)
    lift = inner.mp(inner.axiom(SchemeId.AX4, A=ab, B=c), conj)
    a_b_left = b2.include(_discharge(_discharge(
        inner.build(conclusion=lift), bf), a))

    # c -> (b -> left)
    inner2 = ProofBuilder(calculus)
    ic = inner2.hyp(c)
    lx = inner2.mp(inner2.axiom(SchemeId.AX5, A=c, B=ab), ic)
    weak = inner2.mp(inner2.axiom(SchemeId.AX1, A=left, B=bf), lx)
    c_b_left = b2.include(deduction(inner2.build(conclusion=weak), c))

    ax6 = b2.axiom(SchemeId.AX6, A=a, B=c, C=Impl(bf, left))
    b_left = b2.mp(b2.mp(b2.mp(ax6, a_b_left), c_b_left), s1)
    c_left = b2.axiom(SchemeId.AX5, A=c, B=ab)
    ax6b = b2.axiom(SchemeId.AX6, A=bf, B=c, C=left)
    out = b2.mp(b2.mp(b2.mp(ax6b, b_left), c_left), s2)
    bwd = deduction(b2.build(conclusion=out), right)
    return EquivalencePair(fwd, bwd, THESIS)


def l5_1(bf, c, df, calculus=CalculusId.I) -> Derivation:
    b = ProofBuilder(calculus)
    h_bd = b.hyp(Impl(bf, df))
    h_cd = b.hyp(Impl(c, df))
    h_pc = b.hyp(Impl(Impl(bf, c), c))
    dc_c = b.include(l2_10(bf, c, df, calculus),
                     hyp_map={Impl(Impl(bf, c), c): h_pc, Impl(bf, df): h_bd})
    dc_d = _compose(b, dc_c, h_cd)                    # (d -> c) -> d
    peirce = b.axiom(SchemeId.AX3, A=df, B=c)
    return b.build(conclusion=b.mp(peirce, dc_d))


# ---------------------------------------------------------------------------
# substitution of equivalents (congruence recursion along a path)

def _congruence(context: Formula, direction: str,
                pair: EquivalencePair) -> EquivalencePair:
    """Lift a ⇄ b one level: replace the child of `context` on `direction`
    (which must be pair.left) and produce the pair between the contexts."""
    pair = as_derivability(pair)
    a, bf = pair.left, pair.right
    calculus = pair.calculus
    other = context.right if direction == "left" else context.left
    ctor = type(context)
    new_context = ctor(*((bf, other) if direction == "left" else (other, bf)))

    def one_way(src: Formula, dst: Formula, inner_fwd: Derivation,
                inner_bwd: Derivation) -> Derivation:
        # inner_fwd: {old child} ⊢ new child; inner_bwd: the converse
        old_child = subformula_at(src, (direction,))
        new_sub = subformula_at(dst, (direction,))
        b = ProofBuilder(calculus)
        h = b.hyp(src)
        if ctor is Impl and direction == "right":
            hd = b.hyp(other)
            got = b.mp(h, hd)
            out = b.include(inner_fwd, hyp_map={old_child: got})
            return deduction(b.build(conclusion=out, hypotheses={src, other}),
                             other)
        if ctor is Impl and direction == "left":
            hd = b.hyp(new_sub)
            back = b.include(inner_bwd, hyp_map={new_sub: hd})
            out = b.mp(h, back)
            return deduction(b.build(conclusion=out, hypotheses={src, new_sub}),
                             new_sub)
        if ctor is Disj:
            child_imp = b.include(deduction(inner_fwd, old_child))
            if direction == "right":
                into = _compose(b, child_imp,
                                b.axiom(SchemeId.AX5, A=new_sub, B=other))
                keep = b.axiom(SchemeId.AX4, A=other, B=new_sub)
                ax6 = b.axiom(SchemeId.AX6, A=other, B=old_child, C=dst)
                return b.build(conclusion=b.mp(b.mp(b.mp(ax6, keep), into), h),
                               hypotheses={src})
            into = _compose(b, child_imp,
                            b.axiom(SchemeId.AX4, A=new_sub, B=other))
            keep = b.axiom(SchemeId.AX5, A=other, B=new_sub)
            ax6 = b.axiom(SchemeId.AX6, A=old_child, B=other, C=dst)
            return b.build(conclusion=b.mp(b.mp(b.mp(ax6, into), keep), h),
                           hypotheses={src})
        if ctor is Conj:
            first = b.mp(b.axiom(SchemeId.AX7, A=src.left, B=src.right), h)
            second = b.mp(b.axiom(SchemeId.AX8, A=src.left, B=src.right), h)
            old_line = second if direction == "right" else first
            new_line = b.include(inner_fwd, hyp_map={old_child: old_line})
            ax9 = b.axiom(SchemeId.AX9, A=dst.left, B=dst.right)
            if direction == "right":
                out = b.mp(b.mp(ax9, first), new_line)
            else:
                out = b.mp(b.mp(ax9, new_line), second)
            return b.build(conclusion=out, hypotheses={src})
        raise TacticError(f"unsupported context {context}")

    fwd = one_way(context, new_context, pair.forward, pair.backward)
    bwd = one_way(new_context, context, pair.backward, pair.forward)
    return EquivalencePair(fwd, bwd, DERIVABILITY)


def substitute_equivalents(c: Formula, path,
                           pair: EquivalencePair) -> EquivalencePair:
    """RSE: the pair between c and c with pair.left at `path` replaced by
    pair.right, built by congruence recursion along the path."""
    path = tuple(path)
    pair = as_derivability(pair)
    if subformula_at(c, path) != pair.left:
        raise TacticError(
            f"formula at path {path} is {subformula_at(c, path)}, not {pair.left}")
    current = pair
    for depth in range(len(path) - 1, -1, -1):
        context = subformula_at(c, path[:depth])
        current = _congruence(context, path[depth], current)
    return current


# ---------------------------------------------------------------------------
# the LemmaId dispatch surface

class LemmaId(Enum):
    L2_5 = "2.5"
    L2_6 = "2.6"
    L2_7 = "2.7"
    L2_8 = "2.8"
    L2_9 = "2.9"
    L2_10 = "2.10"
    L2_11 = "2.11"
    L2_12 = "2.12"
    L2_13 = "2.13"
    L2_14 = "2.14"
    L2_15 = "2.15"
    L2_16 = "2.16"
    L2_17 = "2.17"
    L2_18 = "2.18"
    L2_19 = "2.19"
    L2_20 = "2.20"
    L2_21 = "2.21"
    L2_22 = "2.22"
    L2_23 = "2.23"
    L2_24 = "2.24"
    L2_25 = "2.25"
    L2_26 = "2.26"
    L5_1 = "5.1"


_FIXED_ARITY = {
    LemmaId.L2_5: (l2_5, 1, CalculusId.I),
    LemmaId.L2_6: (l2_6, 3, CalculusId.I),
    LemmaId.L2_7: (l2_7, 2, CalculusId.I),
    LemmaId.L2_8: (l2_8, 2, CalculusId.I),
    LemmaId.L2_9: (l2_9, 2, CalculusId.I),
    LemmaId.L2_10: (l2_10, 3, CalculusId.I),
    LemmaId.L2_11: (l2_11, 2, CalculusId.ID),
    LemmaId.L2_12: (l2_12, 4, CalculusId.ID),
    LemmaId.L2_13: (l2_13, 3, CalculusId.ID),
    LemmaId.L2_14: (l2_14, 3, CalculusId.ID),
    LemmaId.L2_17: (l2_17, 3, CalculusId.ID),
    LemmaId.L2_18: (l2_18, 2, CalculusId.ID),
    LemmaId.L2_19: (l2_19, 2, CalculusId.ID),
    LemmaId.L2_21: (l2_21, 3, CalculusId.IC),
    LemmaId.L2_22: (l2_22, 3, CalculusId.IC),
    LemmaId.L2_25: (l2_25, 3, CalculusId.P),
    LemmaId.L2_26: (l2_26, 3, CalculusId.P),
    LemmaId.L5_1: (l5_1, 3, CalculusId.I),
}

_VARIADIC = {
    # args: a list of leading formulas followed by the final one
    LemmaId.L2_15: (l2_15, CalculusId.ID),
    LemmaId.L2_23: (l2_23, CalculusId.IC),
}


def lemma(lemma_id: LemmaId, args, target: CalculusId):
    """Instantiate a lemma schema in the target calculus.

    For L2_16 pass args=(sources, targets) as two sequences; for the other
    variadic ids (L2_15, L2_23) pass the leading formulas followed by the
    final one.  L2_20 and L2_24 are not schematic derivations; use
    pair_to_biconditional / biconditional_to_pair and conjoin /
    split_conjunction respectively.
    """
    if lemma_id in (LemmaId.L2_20, LemmaId.L2_24):
        raise TacticError(
            f"{lemma_id.value} is an operation, not a derivation schema; "
            "see pair_to_biconditional/biconditional_to_pair and "
            "conjoin/split_conjunction")
    if lemma_id is LemmaId.L2_16:
        _require(target, CalculusId.ID)
        sources, targets = args
        _check_fragment(list(sources) + list(targets), target)
        return l2_16(sources, targets, target)
    if lemma_id in _VARIADIC:
        ctor, minimum = _VARIADIC[lemma_id]
        _require(target, minimum)
        args = list(args)
        if len(args) < 2:
            raise TacticError(f"{lemma_id.value} needs at least two formulas")
        _check_fragment(args, target)
        return ctor(args[:-1], args[-1], target)
    ctor, arity, minimum = _FIXED_ARITY[lemma_id]
    _require(target, minimum)
    args = list(args)
    if len(args) != arity:
        raise TacticError(
            f"{lemma_id.value} takes {arity} formulas, got {len(args)}")
    _check_fragment(args, target)
    return ctor(*args, target)


def _require(target: CalculusId, minimum: CalculusId) -> None:
    if not target.extends(minimum):
        raise TacticError(f"{target} lacks the schemes needed (requires {minimum})")


def _check_fragment(args, target: CalculusId) -> None:
    for f in args:
        if not target.fragment.admits(f):
            raise CheckError([StepError(-1, "fragment-violation",
                                        f"{f} outside {target.fragment.name}")])
