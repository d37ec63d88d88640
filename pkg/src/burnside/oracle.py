"""Order-of-element oracle: a fixed cascade of sound strategies.

For a word w in a presented group the cascade tries, in order:

1. full coset enumeration of the presentation (small per-strategy
   budget): a closed table realizes the group and answers exactly;
2. Knuth-Bendix within budget, then a power trace w, w^2, ... looking
   for a reduction to the empty word; a hit proves w^d = 1, and d is the
   exact order when the system is confluent or when some cached quotient
   already exhibits an element of order d underneath w;
3. infinite-order certificates through the stage's quotient ladder (the
   torsion quotient of the abelianization first, then any quotients the
   caller supplied);
4. Unknown, carrying the budgets that were exhausted.

Every verdict carries machine-checkable evidence. Unknown is contagious
by design: callers must treat it as "stop", never as "probably finite".

StageContext caches the per-presentation artifacts (enumeration, the
completed rewriting system, abelian data, certificate machinery) so a
scan over many candidate words pays for them once. A context whose
``known_infinite`` probe already proved the whole group infinite lets
strategy 1 skip its enumeration: enumeration of an infinite group can
never close, so the skip is outcome-equivalent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from . import cosets, rewrite, subgrp
from .presentation import Presentation
from .words import Word, free_reduce


@dataclass
class OracleBudgets:
    """Knobs the oracle reads. Tower budgets duck-type this."""

    oracle_max_cosets: int = 5000
    kb_max_rules: int = rewrite.DEFAULT_MAX_RULES
    kb_max_len: int = rewrite.DEFAULT_MAX_LEN
    kb_max_steps: int = rewrite.DEFAULT_MAX_STEPS
    max_kernel_index: int = 2048


@dataclass
class OrderVerdict:
    kind: str  # "finite" | "infinite" | "unknown"
    order: Optional[int] = None
    certificate: Optional[subgrp.Certificate] = None
    evidence: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return self.kind == "finite"

    @property
    def infinite(self) -> bool:
        return self.kind == "infinite"

    def log_entry(self, word_text: str) -> dict:
        entry = {"word": word_text, "verdict": self.kind}
        if self.order is not None:
            entry["order"] = self.order
        if self.evidence:
            entry["strategy"] = self.evidence.get("strategy")
        if self.certificate is not None:
            entry["certificate"] = self.certificate.to_json_dict()
        return entry


class StageContext:
    """Cached artifacts for one presentation at fixed budgets."""

    _UNSET = object()

    def __init__(self, p: Presentation, budgets=None):
        self.presentation = p
        self.budgets = budgets if budgets is not None else OracleBudgets()
        self._enumeration = self._UNSET
        self._realization = self._UNSET
        self._kb = None
        self._abelian = None
        self._torsion_spec = None
        self._certifiers: Optional[List[Tuple[str, subgrp.KernelCertifier]]] = None
        self._extra_specs: List[Tuple[str, dict]] = []
        self._infinite = self._UNSET

    # -- extra quotients (must be added before certifiers are built) ------

    def add_quotient_spec(self, name: str, spec: dict):
        if self._certifiers is not None:
            raise RuntimeError("quotient ladder already built")
        self._extra_specs.append((name, spec))

    # -- cached artifacts --------------------------------------------------

    def enumeration(self) -> cosets.CosetTable:
        if self._enumeration is self._UNSET:
            self._enumeration = cosets.enumerate_cosets(
                self.presentation, (), self.budgets.oracle_max_cosets
            )
        return self._enumeration

    def realization(self) -> Optional[cosets.FiniteRealization]:
        if self._realization is self._UNSET:
            t = self.enumeration()
            self._realization = cosets.realize(t) if t.closed else None
        return self._realization

    def kb(self) -> rewrite.RewritingSystem:
        if self._kb is None:
            self._kb = rewrite.complete_presentation(
                self.presentation,
                max_rules=self.budgets.kb_max_rules,
                max_len=self.budgets.kb_max_len,
                max_steps=self.budgets.kb_max_steps,
            )
        return self._kb

    def abelian(self) -> subgrp.AbelianInvariants:
        if self._abelian is None:
            self._abelian = subgrp.abelian_invariants(self.presentation)
        return self._abelian

    def torsion_spec(self) -> dict:
        if self._torsion_spec is None:
            self._torsion_spec = subgrp.abelian_torsion_quotient(self.presentation)
        return self._torsion_spec

    def certifiers(self) -> List[Tuple[str, subgrp.KernelCertifier]]:
        if self._certifiers is None:
            machines: List[Tuple[str, subgrp.KernelCertifier]] = []
            specs = [("abelian-torsion", self.torsion_spec())] + self._extra_specs
            for name, spec in specs:
                size = _spec_size(spec)
                if size > self.budgets.max_kernel_index:
                    continue
                machines.append((name, subgrp.KernelCertifier(self.presentation, spec)))
            self._certifiers = machines
        return self._certifiers

    # -- whole-group infiniteness probes ----------------------------------

    @property
    def known_infinite(self) -> Optional[dict]:
        return None if self._infinite is self._UNSET else self._infinite

    def infiniteness(self) -> Optional[dict]:
        """Evidence that the whole group is infinite, or None.

        Probes, cheapest first: free rank of the abelianization; free
        rank of the abelianized kernel of the torsion quotient; for a
        confluent rewriting system, a cycle in the normal-form automaton
        (exact in that case). All three are sound outright.
        """
        if self._infinite is not self._UNSET:
            return self._infinite
        evidence = None
        ab = self.abelian()
        if ab.free_rank > 0:
            evidence = {
                "probe": "abelianization-free-rank",
                "free_rank": ab.free_rank,
            }
        if evidence is None:
            for name, certifier in self.certifiers():
                if certifier.kernel_free_rank > 0:
                    evidence = {
                        "probe": "kernel-abelianization-free-rank",
                        "quotient": name,
                        "kernel_index": certifier.action.size,
                        "free_rank": certifier.kernel_free_rank,
                    }
                    break
        if evidence is None:
            sys = self.kb()
            if sys.confluent and rewrite.language_infinite(sys):
                evidence = {
                    "probe": "normal-form-automaton-cycle",
                    "rules": len(sys.rules),
                }
        self._infinite = evidence
        return evidence

    def finite_stage_order(self) -> Optional[int]:
        """Exact group order when the confluent system has a finite
        normal-form language; None when that route cannot tell."""
        sys = self.kb()
        if not sys.confluent or rewrite.language_infinite(sys):
            return None
        max_len = 16
        while True:
            count, stabilized = rewrite.count_normal_forms(sys, max_len)
            if stabilized:
                return count
            max_len *= 2

    def prepare_for_scan(self):
        """Materialize everything candidate evaluation reads, so that a
        thread pool over candidates touches the caches read-only."""
        self.infiniteness()
        if self.known_infinite is None:
            self.enumeration()
            self.realization()
        self.kb()
        self.certifiers()


def _spec_size(spec: dict) -> int:
    if spec["kind"] == "abelian":
        return math.prod(int(d) for d in spec["moduli"]) if spec["moduli"] else 1
    return len(spec["images"][0]) if spec["images"] else 1


def _divisors(n: int) -> List[int]:
    out = []
    for d in range(1, int(math.isqrt(n)) + 1):
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
    return sorted(out)


def element_order(p: Presentation, w: Word, n_hint: int = 1,
                  budgets=None, ctx: Optional[StageContext] = None,
                  ) -> OrderVerdict:
    """Run the cascade on one word. n_hint scales the power search."""
    if ctx is None:
        ctx = StageContext(p, budgets)
    w = free_reduce(tuple(w))
    skipped = []
    if not w:
        return OrderVerdict("finite", 1, evidence={"strategy": "trivial-word"})

    # strategy 1: full enumeration
    if ctx.known_infinite is not None:
        skipped.append({
            "strategy": "coset-closure",
            "reason": "stage proved infinite; enumeration cannot close",
            "probe": ctx.known_infinite,
        })
    else:
        t = ctx.enumeration()
        if t.closed:
            r = ctx.realization()
            d = r.element_order(w)
            return OrderVerdict("finite", d, evidence={
                "strategy": "coset-closure",
                "group_order": r.order,
                "cosets_defined": t.defined_total,
            })
        skipped.append({
            "strategy": "coset-closure",
            "reason": f"budget {ctx.budgets.oracle_max_cosets} cosets exhausted",
        })

    # strategy 2: rewriting power trace
    sys = ctx.kb()
    # the power search is a bounded probe, not a proof of infiniteness,
    # so a hard cap is sound; without it asymptotic-regime exponents
    # would turn this strategy into an unbounded loop
    n_max = min(max(4 * n_hint, 4), 4096)
    d = rewrite.finite_order_by_powers(sys, w, n_max)
    if d is not None:
        if sys.confluent:
            return OrderVerdict("finite", d, evidence={
                "strategy": "kb-power",
                "exactness": "confluent-reduction",
                "rules": len(sys.rules),
            })
        # the hit proves w^d = 1; pin exactness before trusting d
        for e in _divisors(d)[:-1]:
            if sys.reduce(rewrite_power(w, e)) == ():
                d = e
                break
        image_lcm = 1
        for name, certifier in ctx.certifiers():
            image_lcm = math.lcm(image_lcm, certifier.action.order_of_image(w))
        if image_lcm == d:
            return OrderVerdict("finite", d, evidence={
                "strategy": "kb-power",
                "exactness": "quotient-match",
                "quotient_order_lcm": image_lcm,
            })
        skipped.append({
            "strategy": "kb-power",
            "reason": f"w^{d} = 1 proved but minimality unconfirmed "
                      "(system not confluent)",
        })
    else:
        skipped.append({
            "strategy": "kb-power",
            "reason": f"no power up to {n_max} reduced to 1",
            "confluent": sys.confluent,
        })

    # strategy 3: certificates via the quotient ladder
    for name, certifier in ctx.certifiers():
        cert = certifier.certify(w)
        if cert is not None:
            return OrderVerdict("infinite", None, certificate=cert, evidence={
                "strategy": "kernel-certificate",
                "quotient": name,
                "kernel_index": cert.kernel_index,
                "witness_position": cert.witness_position,
            })
    skipped.append({
        "strategy": "kernel-certificate",
        "reason": "no quotient in the ladder separated the word",
        "quotients": [name for name, _ in ctx.certifiers()],
    })

    return OrderVerdict("unknown", evidence={
        "strategy": "exhausted",
        "attempts": skipped,
    })


def rewrite_power(w: Word, e: int) -> Word:
    # plain concatenation; the rewriting system handles cancellation
    return tuple(w) * e
