"""Coset enumeration (Todd-Coxeter, Felsch strategy) and what closure buys.

The enumerator defines cosets one table gap at a time and immediately
propagates every new table entry through all cyclic conjugates of the
relators (bucketed by first letter), so the table stays deduction-closed
at all times. Coincidences collapse through a union-find whose roots are
the lowest live coset numbers; coset 0 (the subgroup itself) can never
die. The run either closes, yielding the exact coset table, or exhausts
its definition budget.

Everything downstream that says "order" or "trace" sits on a closed
table: a closed table over the trivial subgroup is the regular action of
the group on itself, so element orders, centralizers, conjugacy and the
center are all plain permutation computations here.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

from .presentation import Presentation
from .words import Word, format_word, free_reduce, invert, shortlex_key

DEFAULT_MAX_COSETS = 2 * 10**6


class BudgetExhausted(Exception):
    pass


class _Enumerator:
    def __init__(self, p: Presentation, subgroup: Sequence[Word], max_cosets: int):
        self.ns = p.num_symbols
        self.max_cosets = max_cosets
        self.table: List[List[int]] = [[-1] * self.ns]
        self.p = [0]
        self.deductions: List = []
        self.defined_total = 1
        # cyclic conjugates of each relator and its inverse, by first letter
        buckets = [[] for _ in range(self.ns)]
        seen = set()
        for r in p.relators:
            for w in (r, invert(r)):
                for i in range(len(w)):
                    rot = w[i:] + w[:i]
                    if rot not in seen:
                        seen.add(rot)
                        buckets[rot[0]].append(rot)
        self.rot_buckets = buckets

    # -- union-find ------------------------------------------------------

    def rep(self, c: int) -> int:
        p = self.p
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def alive(self, c: int) -> bool:
        return self.p[c] == c

    # -- table writes ----------------------------------------------------

    def set_entry(self, a: int, x: int, b: int):
        self.table[a][x] = b
        self.table[b][x ^ 1] = a
        self.deductions.append((a, x))

    def define(self, a: int, x: int):
        if self.defined_total >= self.max_cosets:
            raise BudgetExhausted
        b = len(self.table)
        self.table.append([-1] * self.ns)
        self.p.append(b)
        self.defined_total += 1
        self.set_entry(a, x, b)

    # -- coincidences ----------------------------------------------------

    def _merge(self, a: int, b: int, queue: List[int]):
        a, b = self.rep(a), self.rep(b)
        if a != b:
            lo, hi = (a, b) if a < b else (b, a)
            self.p[hi] = lo
            queue.append(hi)

    def coincidence(self, a: int, b: int):
        queue: List[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            dead = queue[i]
            i += 1
            row = self.table[dead]
            for x in range(self.ns):
                d = row[x]
                if d == -1:
                    continue
                self.table[d][x ^ 1] = -1
                mu = self.rep(dead)
                nu = self.rep(d)
                if self.table[mu][x] != -1:
                    self._merge(nu, self.table[mu][x], queue)
                elif self.table[nu][x ^ 1] != -1:
                    self._merge(mu, self.table[nu][x ^ 1], queue)
                else:
                    self.set_entry(mu, x, nu)

    # -- scanning --------------------------------------------------------

    def scan(self, a: int, word: Word, fill: bool = False):
        """Trace the cycle a -word-> a, deducing or defining as allowed."""
        f = a
        i = 0
        b = a
        j = len(word) - 1
        table = self.table
        while True:
            while i <= j:
                d = table[f][word[i]]
                if d == -1:
                    break
                f = d
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i:
                d = table[b][word[j] ^ 1]
                if d == -1:
                    break
                b = d
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                self.set_entry(f, word[i], b)
                return
            if not fill:
                return
            self.define(f, word[i])

    def process_deductions(self):
        while self.deductions:
            a, x = self.deductions.pop()
            if self.alive(a) and self.table[a][x] != -1:
                for w in self.rot_buckets[x]:
                    if not self.alive(a):
                        break
                    self.scan(a, w)
            if not self.alive(a):
                continue
            b = self.table[a][x]
            if b != -1 and self.alive(b):
                for w in self.rot_buckets[x ^ 1]:
                    if not self.alive(b):
                        break
                    self.scan(b, w)

    def run(self):
        a = 0
        while a < len(self.table):
            if self.alive(a):
                x = 0
                while x < self.ns:
                    if not self.alive(a):
                        break
                    if self.table[a][x] == -1:
                        self.define(a, x)
                        self.process_deductions()
                    x += 1
            a += 1

    def live_count(self) -> int:
        return sum(1 for c in range(len(self.p)) if self.p[c] == c)


@dataclass
class CosetTable:
    """Result of an enumeration. rows is None unless status == "closed";
    closed rows are compacted in definition order, coset 0 first."""

    rank: int
    status: str  # "closed" | "exhausted"
    num_cosets: int
    defined_total: int
    max_cosets: int
    subgroup: tuple = ()
    rows: Optional[list] = field(default=None, repr=False)

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    def trace(self, c: int, word: Iterable[int]) -> int:
        if not self.closed:
            raise ValueError("trace needs a closed table")
        for x in word:
            c = self.rows[c][x]
        return c


def enumerate_cosets(p: Presentation, subgroup: Sequence[Word] = (),
                     max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Felsch enumeration of the cosets of <subgroup> in the presented group."""
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    subgroup = tuple(free_reduce(tuple(w)) for w in subgroup)
    enum = _Enumerator(p, subgroup, max_cosets)
    try:
        for g in subgroup:
            if g:
                enum.scan(0, g, fill=True)
                enum.process_deductions()
        enum.run()
    except BudgetExhausted:
        return CosetTable(
            rank=p.rank, status="exhausted", num_cosets=enum.live_count(),
            defined_total=enum.defined_total, max_cosets=max_cosets,
            subgroup=subgroup,
        )
    # compact live cosets in definition order
    live = [c for c in range(len(enum.p)) if enum.p[c] == c]
    renum = {c: i for i, c in enumerate(live)}
    rows = []
    for c in live:
        row = enum.table[c]
        if any(d == -1 for d in row):
            raise AssertionError("closed table has a gap")
        rows.append([renum[enum.rep(d)] for d in row])
    table = CosetTable(
        rank=p.rank, status="closed", num_cosets=len(live),
        defined_total=enum.defined_total, max_cosets=max_cosets,
        subgroup=subgroup, rows=rows,
    )
    _validate_closed(p, table)
    return table


def _validate_closed(p: Presentation, t: CosetTable):
    # soundness self-check: relators act trivially, subgroup fixes coset 0
    for c in range(t.num_cosets):
        for r in p.relators:
            if t.trace(c, r) != c:
                raise AssertionError("relator does not stabilize a coset")
    for g in t.subgroup:
        if t.trace(0, g) != 0:
            raise AssertionError("subgroup generator moves coset 0")


def export_csv(t: CosetTable) -> str:
    """Closed table as CSV: one row per coset, one column per letter."""
    if not t.closed:
        raise ValueError("only closed tables export")
    from .words import letter as mk

    buf = io.StringIO()
    headers = ["coset"]
    for i in range(1, t.rank + 1):
        headers.append(format_word((mk(i),), t.rank))
        headers.append(format_word((mk(i, True),), t.rank))
    buf.write(",".join(headers) + "\n")
    for c, row in enumerate(t.rows):
        buf.write(",".join([str(c)] + [str(d) for d in row]) + "\n")
    return buf.getvalue()


class FiniteRealization:
    """The regular action read off a closed table over the trivial subgroup.

    Cosets are group elements; tracing a word from coset 0 is evaluation.
    Element c's canonical word is the shortlex-least word reaching c
    (breadth-first over letters in order gives exactly that).
    """

    def __init__(self, table: CosetTable):
        if not table.closed:
            raise ValueError("realization needs a closed table")
        if table.subgroup:
            raise ValueError("realization needs the trivial subgroup")
        self.table = table
        self.order = table.num_cosets
        self.rank = table.rank
        self.reps: List[Word] = transversal_words(table.rows, table.rank)

    def trace(self, c: int, word: Iterable[int]) -> int:
        return self.table.trace(c, word)

    def eval_word(self, word: Iterable[int]) -> int:
        return self.table.trace(0, word)

    def element_order(self, word: Word) -> int:
        c = self.eval_word(word)
        if c == 0:
            return 1
        d = 1
        cur = c
        while cur != 0:
            cur = self.trace(cur, word)
            d += 1
        return d

    def element_row(self, word: Word) -> tuple:
        return tuple(self.trace(c, word) for c in range(self.order))

    def exponent(self) -> int:
        import math

        e = 1
        for c in range(self.order):
            e = math.lcm(e, self.element_order(self.reps[c]))
        return e

    def multiplication_table(self) -> list:
        """order x order table: entry [i][j] = index of reps[i]*reps[j]."""
        rows = []
        for i in range(self.order):
            # right-multiplying coset i by element j is tracing reps[j] from i
            rows.append([self.trace(i, self.reps[j]) for j in range(self.order)])
        return rows


def transversal_words(rows: list, rank: int) -> List[Word]:
    """Shortlex-minimal word reaching each coset from 0 (BFS, letter order)."""
    n = len(rows)
    reps: List[Optional[Word]] = [None] * n
    reps[0] = ()
    queue = [0]
    qi = 0
    while qi < len(queue):
        c = queue[qi]
        qi += 1
        for x in range(2 * rank):
            d = rows[c][x]
            if reps[d] is None:
                reps[d] = reps[c] + (x,)
                queue.append(d)
    if any(r is None for r in reps):
        raise AssertionError("coset graph is not connected")
    return reps  # type: ignore[return-value]


def realize(table: CosetTable) -> FiniteRealization:
    return FiniteRealization(table)


def conjugacy_decide(r: FiniteRealization, u: Word, v: Word):
    """Whether u and v are conjugate; returns (True, g) with g^-1 u g = v
    (so the example pair (ab, ba) gets witness g = a), else (False, None).

    Checked over the regular action: for each candidate g the rows must
    satisfy row(v) = row(g)^-1 . row(u) . row(g) pointwise.
    """
    row_u = r.element_row(u)
    row_v = r.element_row(v)
    n = r.order
    for c in range(n):
        g = r.reps[c]
        row_g = r.element_row(g)
        ok = True
        for k in range(n):
            # g^-1 u g = v  <=>  u g = g v, which needs no inverse rows
            if row_g[row_u[k]] != row_v[row_g[k]]:
                ok = False
                break
        if ok:
            return True, g
    return False, None


def center(r: FiniteRealization):
    """Words (shortlex reps) of the elements commuting with everything."""
    gens = [(x,) for x in range(0, 2 * r.rank, 2)]
    gen_rows = [r.element_row(g) for g in gens]
    out = []
    for c in range(r.order):
        w = r.reps[c]
        row_w = r.element_row(w)
        if all(
            row_w[gr[k]] == gr[row_w[k]]
            for gr in gen_rows
            for k in range(r.order)
        ):
            out.append(w)
    out.sort(key=shortlex_key)
    return out
