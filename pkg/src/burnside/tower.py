"""Inductive construction of B(m, n) by periods of increasing rank.

Each stage group is presented by the n-th powers of the periods found so
far. The next period is the shortlex-least word of infinite order in the
current stage; the scan walks candidates in shortlex order, skips (with
a logged reason) words that provably cannot be first — conjugates that
are not cyclically reduced, and proper powers, whose primitive root has
the same order and comes strictly earlier — and asks the oracle about
the rest. A rank closes in one of three ways:

* a candidate gets an Infinite verdict: that word is the next period;
* the stage itself is proved finite and realized: the tower terminates,
  and if the realized exponent divides n the result IS B(m, n) (the
  stage surjects onto B(m, n) and satisfies all its relations, and
  finite plus both surjections forces equality);
* budgets run out or the oracle answers Unknown: the run halts with a
  resumable checkpoint. Unknown is never rounded to a verdict.

Candidate evaluation can run on a thread pool (--jobs); batches have a
fixed size and results are merged in shortlex order, so reports are
byte-identical whatever the worker count.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

from . import cosets, oracle, rewrite, subgrp
from .presentation import (
    Presentation,
    TowerStatus,
    power_relator,
    tower_presentation,
)
from .words import (
    ORDER_ID,
    Word,
    cyclic_reduce,
    format_word,
    parse_word,
    primitive_root,
    reduced_words,
    shortlex_key,
)

PAPER_REGIME_EXPONENT = 2 ** 48
_BATCH = 16

CHECKPOINT_SCHEMA = "burnside/tower-checkpoint/1"
REPORT_SCHEMA = "burnside/tower-report/1"


@dataclass
class Budgets:
    """Every knob that bounds work. All overridable via CLI flags or
    BURNSIDE_<NAME> environment variables (ints), for CI."""

    oracle_max_cosets: int = 5000
    stage_max_cosets: int = 100_000
    kb_max_rules: int = rewrite.DEFAULT_MAX_RULES
    kb_max_len: int = rewrite.DEFAULT_MAX_LEN
    kb_max_steps: int = rewrite.DEFAULT_MAX_STEPS
    max_candidates: int = 10_000
    max_kernel_index: int = 2048
    max_ranks: int = 64
    max_relator_letters: int = 1_048_576
    independence_candidates: int = 64

    @classmethod
    def from_env(cls, **overrides) -> "Budgets":
        b = cls()
        for name in b.__dataclass_fields__:
            env = os.environ.get(f"BURNSIDE_{name.upper()}")
            if env is not None:
                setattr(b, name, int(env))
        for name, value in overrides.items():
            if value is not None:
                setattr(b, name, int(value))
        return b

    def to_dict(self) -> dict:
        return asdict(self)


FILTERS = ("not-cyclically-reduced", "proper-power")


def candidate_filter_reason(w: Word) -> Optional[str]:
    """Why w cannot be the shortlex-least infinite-order word, or None.

    A non-cyclically-reduced w is conjugate to its strictly shorter core,
    which has the same order and was scanned earlier. A proper power u^k
    has infinite order iff u does, and u comes strictly earlier.
    """
    core, conj = cyclic_reduce(w)
    if conj:
        return "not-cyclically-reduced"
    _, k = primitive_root(w)
    if k > 1:
        return "proper-power"
    return None


@dataclass
class RankOutcome:
    kind: str  # "period" | "closed" | "inconclusive"
    rank: int
    stage_relators: list
    stage_probe: Optional[dict] = None
    period: Optional[Word] = None
    examined: int = 0
    log: list = field(default_factory=list)
    cursor: Optional[Word] = None
    note: Optional[str] = None
    realization: Optional[cosets.FiniteRealization] = None
    closure: Optional[dict] = None
    unknown_evidence: Optional[dict] = None

    def to_dict(self, rank_sym: int) -> dict:
        d = {
            "rank": self.rank,
            "stage_relators": self.stage_relators,
            "kind": self.kind,
            "examined": self.examined,
            "log": self.log,
        }
        if self.stage_probe is not None:
            d["stage_probe"] = self.stage_probe
        if self.period is not None:
            d["period"] = format_word(self.period, rank_sym)
        if self.closure is not None:
            d["closure"] = self.closure
        if self.note is not None:
            d["note"] = self.note
        if self.unknown_evidence is not None:
            d["unknown_evidence"] = self.unknown_evidence
        return d


def _evaluate_batch(p, batch, n, budgets, ctx, jobs):
    todo = [w for w, reason in batch if reason is None]
    if jobs > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(
                lambda w: oracle.element_order(p, w, n, budgets, ctx), todo
            ))
    else:
        verdicts = [oracle.element_order(p, w, n, budgets, ctx) for w in todo]
    return dict(zip(todo, verdicts))


def next_period(m: int, n: int, periods: Sequence[Word], budgets: Budgets,
                jobs: int = 1, cursor: Optional[Word] = None,
                prior_log: Optional[list] = None) -> RankOutcome:
    """Resolve one rank: find the next period or close the stage."""
    rank = len(periods) + 1
    for w in periods:
        if len(w) * n > budgets.max_relator_letters:
            return RankOutcome(
                kind="inconclusive", rank=rank, stage_relators=[],
                cursor=cursor,
                note=(f"relator {format_word(w, m)}^{n} exceeds the "
                      f"materialization budget ({budgets.max_relator_letters} letters)"),
            )
    p = tower_presentation(m, n, periods)
    stage_relators = [format_word(r, m) for r in p.relators]
    ctx = oracle.StageContext(p, budgets)
    probe = ctx.infiniteness()

    if probe is None:
        # not provably infinite; try to pin the stage down as finite
        order = ctx.finite_stage_order()
        if order is not None:
            limit = min(budgets.stage_max_cosets, 20 * order + 1000)
            t = cosets.enumerate_cosets(p, (), limit)
            closure: dict
            if t.closed:
                if t.num_cosets != order:
                    raise AssertionError(
                        f"normal-form census ({order}) disagrees with "
                        f"closed enumeration ({t.num_cosets})"
                    )
                realization = cosets.realize(t)
                closure = {
                    "order": order,
                    "method": "kb-census",
                    "cross_check": "coset-closure",
                    "cosets_defined": t.defined_total,
                }
            else:
                realization = _realization_from_system(ctx.kb(), p.rank)
                if realization.order != order:
                    raise AssertionError("normal-form table has wrong order")
                closure = {
                    "order": order,
                    "method": "kb-census",
                    "cross_check": f"enumeration exhausted at {limit}",
                }
            return RankOutcome(
                kind="closed", rank=rank, stage_relators=stage_relators,
                realization=realization, closure=closure,
            )
        t = cosets.enumerate_cosets(p, (), budgets.stage_max_cosets)
        if t.closed:
            realization = cosets.realize(t)
            return RankOutcome(
                kind="closed", rank=rank, stage_relators=stage_relators,
                realization=realization,
                closure={
                    "order": realization.order,
                    "method": "coset-closure",
                    "cosets_defined": t.defined_total,
                },
            )
        # stage neither provably infinite nor realizably finite: the scan
        # below will surface Unknown verdicts and halt honestly

    ctx.prepare_for_scan()
    log: list = list(prior_log or ())
    examined = 0
    stream = reduced_words(m, after=cursor)
    last_done: Optional[Word] = cursor

    while True:
        batch: List[Tuple[Word, Optional[str]]] = []
        while len(batch) < _BATCH:
            w = next(stream)
            batch.append((w, candidate_filter_reason(w)))
        evaluated = sum(1 for _, reason in batch if reason is None)
        if examined + evaluated > budgets.max_candidates:
            return RankOutcome(
                kind="inconclusive", rank=rank, stage_relators=stage_relators,
                stage_probe=probe, examined=examined, log=log, cursor=last_done,
                note=f"candidate budget {budgets.max_candidates} exhausted",
            )
        verdicts = _evaluate_batch(p, batch, n, budgets, ctx, jobs)
        for w, reason in batch:
            text = format_word(w, m)
            if reason is not None:
                log.append({"word": text, "filtered": reason})
                last_done = w
                continue
            v = verdicts[w]
            if v.kind == "unknown":
                return RankOutcome(
                    kind="inconclusive", rank=rank,
                    stage_relators=stage_relators, stage_probe=probe,
                    examined=examined, log=log, cursor=last_done,
                    note=f"oracle returned Unknown for {text}",
                    unknown_evidence=v.evidence,
                )
            examined += 1
            log.append(v.log_entry(text))
            last_done = w
            if v.kind == "infinite":
                return RankOutcome(
                    kind="period", rank=rank, stage_relators=stage_relators,
                    stage_probe=probe, period=w, examined=examined, log=log,
                )


def _realization_from_system(system: rewrite.RewritingSystem, rank: int):
    """Closed table over the trivial subgroup built from the normal forms
    of a confluent system with finitely many of them."""
    nfs = []
    max_len = 16
    while True:
        count, stabilized = rewrite.count_normal_forms(system, max_len)
        if stabilized:
            nfs = list(rewrite.normal_forms(system, max_len))
            break
        max_len *= 2
    index = {w: i for i, w in enumerate(nfs)}
    rows = []
    for w in nfs:
        row = []
        for x in range(2 * rank):
            row.append(index[system.reduce(w + (x,))])
        rows.append(row)
    table = cosets.CosetTable(
        rank=rank, status="closed", num_cosets=len(nfs),
        defined_total=len(nfs), max_cosets=len(nfs), subgroup=(), rows=rows,
    )
    return cosets.realize(table)


def exponent_divides(r: cosets.FiniteRealization, n: int):
    """(True, None) if every element order divides n, else (False, w)
    with w the shortlex-least witness."""
    order_by_rep = sorted(range(r.order), key=lambda c: shortlex_key(r.reps[c]))
    for c in order_by_rep:
        d = r.element_order(r.reps[c])
        if n % d:
            return False, r.reps[c]
    return True, None


@dataclass
class TowerResult:
    m: int
    n: int
    status: TowerStatus
    periods: tuple
    ranks: List[RankOutcome]
    realization: Optional[cosets.FiniteRealization] = None
    order: Optional[int] = None
    exponent: Optional[int] = None
    exponent_witness: Optional[Word] = None
    notes: list = field(default_factory=list)
    checkpoint: Optional[dict] = None

    def period_texts(self) -> list:
        return [format_word(w, self.m) for w in self.periods]


def run_tower(m: int, n: int, budgets: Optional[Budgets] = None,
              jobs: int = 1, resume: Optional[dict] = None) -> TowerResult:
    if m < 1:
        raise ValueError("need at least one generator")
    if n < 1:
        raise ValueError("exponent must be >= 1")
    budgets = budgets or Budgets()
    notes: list = []
    if n >= PAPER_REGIME_EXPONENT:
        notes.append(
            f"exponent {n} is in the asymptotic regime; the construction "
            "is sound but no desk budget can realize these stages, so "
            "expect a checkpoint, not a result"
        )
    periods: List[Word] = []
    ranks: List[RankOutcome] = []
    cursor: Optional[Word] = None
    prior_log: Optional[list] = None
    if resume is not None:
        if resume.get("schema") != CHECKPOINT_SCHEMA:
            raise ValueError("not a tower checkpoint")
        if (resume["m"], resume["n"]) != (m, n):
            raise ValueError("checkpoint is for different (m, n)")
        periods = [parse_word(t, m) for t in resume["periods"]]
        cursor = (parse_word(resume["cursor"], m)
                  if resume.get("cursor") else None)
        prior_log = resume.get("partial_log") or None
        notes.append(f"resumed at rank {len(periods) + 1}")

    while True:
        outcome = next_period(m, n, periods, budgets, jobs=jobs,
                              cursor=cursor, prior_log=prior_log)
        cursor = None
        prior_log = None
        ranks.append(outcome)
        if outcome.kind == "period":
            periods.append(outcome.period)
            if len(periods) >= budgets.max_ranks:
                checkpoint = _checkpoint(m, n, budgets, periods, None, None)
                notes.append(f"rank budget {budgets.max_ranks} reached")
                return TowerResult(m, n, TowerStatus.ORACLE_INCONCLUSIVE,
                                   tuple(periods), ranks, notes=notes,
                                   checkpoint=checkpoint)
            continue
        if outcome.kind == "closed":
            r = outcome.realization
            divides, witness = exponent_divides(r, n)
            exponent = r.exponent()
            status = (TowerStatus.TERMINATED_EQUALS_BURNSIDE if divides
                      else TowerStatus.STALLED_DIVERGENT)
            if not divides:
                notes.append(
                    f"element {format_word(witness, m)} has order "
                    f"{r.element_order(witness)}, which does not divide {n}"
                )
            return TowerResult(m, n, status, tuple(periods), ranks,
                               realization=r, order=r.order,
                               exponent=exponent, exponent_witness=witness,
                               notes=notes)
        # inconclusive
        checkpoint = _checkpoint(m, n, budgets, periods, outcome.cursor,
                                 outcome.log)
        if outcome.note:
            notes.append(outcome.note)
        return TowerResult(m, n, TowerStatus.ORACLE_INCONCLUSIVE,
                           tuple(periods), ranks, notes=notes,
                           checkpoint=checkpoint)


def _checkpoint(m, n, budgets, periods, cursor, partial_log) -> dict:
    return {
        "schema": CHECKPOINT_SCHEMA,
        "order": ORDER_ID,
        "m": m,
        "n": n,
        "budgets": budgets.to_dict(),
        "periods": [format_word(w, m) for w in periods],
        "cursor": format_word(cursor, m) if cursor else None,
        "partial_log": partial_log or [],
    }


# --- verification suites ---------------------------------------------------


def verify_period_orders(result: TowerResult) -> dict:
    """Each period must have order exactly n in the realized group."""
    if result.realization is None:
        return {"status": "unavailable", "reason": "no realized group"}
    rows = []
    ok = True
    for w in result.periods:
        d = result.realization.element_order(w)
        rows.append({
            "period": format_word(w, result.m),
            "order": d,
            "expected": result.n,
            "ok": d == result.n,
        })
        ok = ok and d == result.n
    return {"status": "ok" if ok else "FAILED", "periods": rows}


def verify_independence(result: TowerResult, budgets: Budgets) -> dict:
    """Dropping any single defining relator must change the group.

    Evidence per relator: either the dropped presentation closes at a
    different order, or some word (the dropped period first) picks up an
    infinite-order certificate in the dropped presentation while the
    full group is finite. A closed enumeration at the SAME order means
    the relator was genuinely dependent, which is a failed verification,
    not an unresolved one.
    """
    if result.realization is None:
        return {"status": "unavailable", "reason": "no realized group"}
    m, n = result.m, result.n
    full_order = result.realization.order
    entries = []
    unresolved = 0
    for i, period in enumerate(result.periods):
        kept = tuple(power_relator(w, n) for j, w in enumerate(result.periods)
                     if j != i)
        dropped = Presentation(m, kept)
        entry = {
            "dropped_relator": format_word(power_relator(period, n), m),
            "dropped_period": format_word(period, m),
        }
        # a dependent relator leaves the order unchanged, so the closure
        # probe only needs headroom near the full order; genuinely
        # independent drops are usually infinite and fall through to the
        # certificate route no matter the budget
        probe = min(budgets.stage_max_cosets, 20 * full_order + 2000)
        t = cosets.enumerate_cosets(dropped, (), probe)
        if t.closed:
            entry["evidence"] = {
                "kind": "closed-enumeration",
                "dropped_order": t.num_cosets,
                "full_order": full_order,
            }
            entry["independent"] = t.num_cosets != full_order
            if t.num_cosets == full_order:
                entry["failure"] = "dropped presentation has the same order"
        else:
            specs = [("abelian-torsion", subgrp.abelian_torsion_quotient(dropped))]
            if full_order <= budgets.max_kernel_index:
                specs.append((
                    "full-realization",
                    subgrp.permutation_quotient(result.realization.table.rows, m),
                ))
            certifiers = [(name, subgrp.KernelCertifier(dropped, spec))
                          for name, spec in specs
                          if oracle._spec_size(spec) <= budgets.max_kernel_index]
            candidates = [period] + [w for j, w in enumerate(result.periods)
                                     if j != i]
            stream = reduced_words(m)
            for _ in range(budgets.independence_candidates):
                candidates.append(next(stream))
            found = None
            for w in candidates:
                for name, certifier in certifiers:
                    cert = certifier.certify(w)
                    if cert is not None:
                        ok, reason = subgrp.verify_certificate(cert)
                        found = {
                            "kind": "infinite-order-certificate",
                            "witness": format_word(w, m),
                            "quotient": name,
                            "verified": ok,
                            "verifier_reason": reason,
                            "certificate": cert.to_json_dict(),
                        }
                        break
                if found:
                    break
            if found:
                entry["evidence"] = found
                entry["independent"] = bool(found["verified"])
            else:
                entry["evidence"] = {"kind": "none"}
                entry["independent"] = None
                unresolved += 1
        entries.append(entry)
    status = "ok"
    if unresolved:
        status = "unresolved"
    elif any(e["independent"] is False for e in entries):
        status = "FAILED"
    return {"status": status, "unresolved": unresolved, "relators": entries}


CENTER_DIVERGENCE_NOTE = (
    "small-n divergence: a nontrivial center is expected at desk "
    "exponents; centers go trivial only in the asymptotic regime"
)


def center_report(result: TowerResult) -> dict:
    if result.realization is None:
        return {"status": "unavailable", "reason": "no realized group"}
    words = cosets.center(result.realization)
    report = {
        "status": "ok",
        "order": len(words),
        "elements": [format_word(w, result.m) for w in words],
    }
    if len(words) > 1:
        report["note"] = CENTER_DIVERGENCE_NOTE
    return report


# --- audit (slow re-verification of every logged verdict) ------------------


def audit_tower(result: TowerResult, budgets: Budgets) -> dict:
    """Recompute every logged verdict with fresh machinery.

    Finite(d): replay the proof that w^d = 1 (fresh completion, or fresh
    enumeration if the verdict came from a closed table) and pin
    exactness against the terminal realization, where the image of w
    must have order exactly d (order in a quotient divides order in the
    stage divides d, so equality at the bottom forces equality).
    Infinite: replay the serialized certificate. Filtered words: run the
    unfiltered oracle and require a Finite verdict.
    """
    checks = {"finite": 0, "infinite": 0, "filtered": 0}
    disagreements = []
    terminal = result.realization
    periods: List[Word] = []
    for outcome in result.ranks:
        p = tower_presentation(result.m, result.n, periods)
        fresh_sys = None
        fresh_ctx = None
        for entry in outcome.log:
            w = parse_word(entry["word"], result.m)
            if "filtered" in entry:
                checks["filtered"] += 1
                if fresh_ctx is None:
                    fresh_ctx = oracle.StageContext(p, budgets)
                    fresh_ctx.infiniteness()
                v = oracle.element_order(p, w, result.n, budgets, fresh_ctx)
                if v.kind != "finite":
                    disagreements.append({
                        "word": entry["word"],
                        "stage_rank": outcome.rank,
                        "problem": f"filtered word got {v.kind}, expected finite",
                    })
                continue
            if entry["verdict"] == "finite":
                checks["finite"] += 1
                d = entry["order"]
                proved = False
                if fresh_sys is None:
                    fresh_sys = rewrite.complete_presentation(
                        p, max_rules=budgets.kb_max_rules,
                        max_len=budgets.kb_max_len,
                        max_steps=budgets.kb_max_steps)
                if fresh_sys.reduce(tuple(w) * d) == ():
                    proved = True
                else:
                    t = cosets.enumerate_cosets(p, (), budgets.oracle_max_cosets)
                    if t.closed and cosets.realize(t).element_order(w) == d:
                        proved = True
                if not proved:
                    disagreements.append({
                        "word": entry["word"],
                        "stage_rank": outcome.rank,
                        "problem": f"could not re-prove order {d}",
                    })
                if terminal is not None and terminal.element_order(w) != d:
                    disagreements.append({
                        "word": entry["word"],
                        "stage_rank": outcome.rank,
                        "problem": "terminal realization order "
                                   f"{terminal.element_order(w)} != {d}",
                    })
            elif entry["verdict"] == "infinite":
                checks["infinite"] += 1
                cert = subgrp.Certificate.from_json_dict(entry["certificate"])
                ok, reason = subgrp.verify_certificate(cert)
                if not ok:
                    disagreements.append({
                        "word": entry["word"],
                        "stage_rank": outcome.rank,
                        "problem": f"certificate replay failed: {reason}",
                    })
        if outcome.kind == "period":
            periods.append(outcome.period)
    return {
        "checks": checks,
        "disagreements": disagreements,
        "agreement": "100%" if not disagreements else
                     f"{len(disagreements)} disagreement(s)",
    }


# --- report ----------------------------------------------------------------


def build_report(result: TowerResult, budgets: Budgets,
                 verifications: bool = True,
                 audit: Optional[dict] = None) -> dict:
    """The semantic part of a tower report (no execution block)."""
    report = {
        "schema": REPORT_SCHEMA,
        "config": {
            "m": result.m,
            "n": result.n,
            "order": ORDER_ID,
            "filters": list(FILTERS),
            "budgets": budgets.to_dict(),
        },
        "status": result.status.value,
        "periods": result.period_texts(),
        "ranks": [o.to_dict(result.m) for o in result.ranks],
        "notes": result.notes,
    }
    if result.realization is not None:
        report["result"] = {
            "order": result.order,
            "exponent": result.exponent,
            "exponent_divides_n": result.status
                                  is not TowerStatus.STALLED_DIVERGENT,
        }
        if verifications:
            report["verification"] = {
                "period_orders": verify_period_orders(result),
                "independence": verify_independence(result, budgets),
                "center": center_report(result),
            }
    if result.checkpoint is not None:
        report["checkpoint"] = result.checkpoint
    if audit is not None:
        report["audit"] = audit
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
