"""Finite group tables and subgroup embeddings into dihedral products.

The centerpiece is embed_search: decide whether a small group H embeds
in D x D x ... x D (same dihedral factor throughout, order fixed by the
spec n = 2^k * n0 handled by the caller), searching images for a
minimal generating tuple of H. Products are kept lazy above the
materialization cap so the ambient can be astronomically large while
membership tests stay cheap: an embedding is a tuple of ambient
elements, and all constraints are checked coordinatewise.
"""

from __future__ import annotations

import csv
import io
import itertools
import random
from dataclasses import dataclass
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

MAX_TABLE_CELLS = 1 << 16  # materialized tables stop at order 256


class TableError(ValueError):
    pass


class FiniteGroupTable:
    """A finite group as a multiplication table over 0..order-1 with
    identity 0. verify=True replays the group axioms; generated tables
    are correct by construction and skip it."""

    def __init__(self, rows: Sequence[Sequence[int]], name: str = "",
                 verify: bool = True):
        self.rows = [list(r) for r in rows]
        self.order = len(self.rows)
        self.name = name or f"group of order {self.order}"
        if verify:
            self._verify()
        self._inverse = [0] * self.order
        for g in range(self.order):
            row = self.rows[g]
            for h in range(self.order):
                if row[h] == 0:
                    self._inverse[g] = h
                    break
        self._order_cache: Dict[int, int] = {}

    def _verify(self) -> None:
        n = self.order
        if n == 0:
            raise TableError("empty table")
        for g, row in enumerate(self.rows):
            if len(row) != n or sorted(row) != list(range(n)):
                raise TableError(f"row {g} is not a permutation")
            if self.rows[0][g] != g or row[0] != g:
                raise TableError("0 is not an identity")
        cols = [[self.rows[g][h] for g in range(n)] for h in range(n)]
        for h, col in enumerate(cols):
            if sorted(col) != list(range(n)):
                raise TableError(f"column {h} is not a permutation")
        for g in range(n):
            for h in range(n):
                gh = self.rows[g][h]
                for k in range(n):
                    if self.rows[gh][k] != self.rows[g][self.rows[h][k]]:
                        raise TableError(
                            f"associativity fails at ({g}, {h}, {k})")

    def mul(self, g: int, h: int) -> int:
        return self.rows[g][h]

    def inverse(self, g: int) -> int:
        return self._inverse[g]

    def element_order(self, g: int) -> int:
        cached = self._order_cache.get(g)
        if cached is not None:
            return cached
        d, x = 1, g
        while x != 0:
            x = self.rows[x][g]
            d += 1
        self._order_cache[g] = d
        return d

    def exponent(self) -> int:
        e = 1
        for g in range(self.order):
            e = lcm(e, self.element_order(g))
        return e

    def order_spectrum(self) -> Dict[int, int]:
        spectrum: Dict[int, int] = {}
        for g in range(self.order):
            d = self.element_order(g)
            spectrum[d] = spectrum.get(d, 0) + 1
        return spectrum

    def closure(self, gens: Sequence[int]) -> List[int]:
        """Subgroup generated by gens, as a sorted element list."""
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = self.rows[g][s]
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        return sorted(seen)

    def is_abelian(self) -> bool:
        return all(self.rows[g][h] == self.rows[h][g]
                   for g in range(self.order) for h in range(g))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["order", self.order, "name", self.name])
        for row in self.rows:
            writer.writerow(row)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "FiniteGroupTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if len(header) < 2 or header[0] != "order":
            raise TableError("missing table header")
        order = int(header[1])
        name = header[3] if len(header) > 3 else ""
        rows = [[int(c) for c in row] for row in reader if row]
        if len(rows) != order:
            raise TableError(f"expected {order} rows, got {len(rows)}")
        return cls(rows, name=name, verify=True)


def build_dihedral(h: int) -> FiniteGroupTable:
    """Dihedral group of order 2h (symmetries of the h-gon), h >= 1.

    Elements are pairs (e, k) in C2 x C_h encoded as 2k + e, with the
    semidirect multiplication (e1, k1)(e2, k2) = (e1 + e2, k1 + (-1)^e1 k2).
    Even codes are the rotations, odd codes the reflections; (0, 0) = 0
    is the identity and every reflection squares to it.
    """
    if h < 1:
        raise ValueError("need h >= 1")
    order = 2 * h

    def enc(e: int, k: int) -> int:
        return 2 * (k % h) + (e & 1)

    rows = []
    for g in range(order):
        e1, k1 = g & 1, g >> 1
        row = []
        for x in range(order):
            e2, k2 = x & 1, x >> 1
            k = k1 + (k2 if not e1 else -k2)
            row.append(enc(e1 ^ e2, k))
        rows.append(row)
    return FiniteGroupTable(rows, name=f"D{h}", verify=False)


def build_cyclic(h: int) -> FiniteGroupTable:
    rows = [[(a + b) % h for b in range(h)] for a in range(h)]
    return FiniteGroupTable(rows, name=f"C{h}", verify=False)


def build_klein_four() -> FiniteGroupTable:
    rows = [[a ^ b for b in range(4)] for a in range(4)]
    return FiniteGroupTable(rows, name="V4", verify=False)


def build_quaternion() -> FiniteGroupTable:
    """Order-8 group with a unique involution and six order-4 elements.

    Encoded 0..7 as 1, -1, i, -i, j, -j, k, -k.
    """
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    val = {"1": (0, "1"), "-1": (1, "1"),
           "i": (0, "i"), "-i": (1, "i"),
           "j": (0, "j"), "-j": (1, "j"),
           "k": (0, "k"), "-k": (1, "k")}
    base = {
        ("1", "1"): (0, "1"), ("1", "i"): (0, "i"),
        ("1", "j"): (0, "j"), ("1", "k"): (0, "k"),
        ("i", "1"): (0, "i"), ("i", "i"): (1, "1"),
        ("i", "j"): (0, "k"), ("i", "k"): (1, "j"),
        ("j", "1"): (0, "j"), ("j", "i"): (1, "k"),
        ("j", "j"): (1, "1"), ("j", "k"): (0, "i"),
        ("k", "1"): (0, "k"), ("k", "i"): (0, "j"),
        ("k", "j"): (1, "i"), ("k", "k"): (1, "1"),
    }
    index = {n: i for i, n in enumerate(names)}
    rows = []
    for a in names:
        sa, ba = val[a]
        row = []
        for b in names:
            sb, bb = val[b]
            s, c = base[(ba, bb)]
            sign = (sa + sb + s) & 1
            row.append(index[("-" if sign else "") + c])
        rows.append(row)
    return FiniteGroupTable(rows, name="Q8", verify=True)


def direct_product(tables: Sequence[FiniteGroupTable]) -> FiniteGroupTable:
    """Materialized product table. Refuses above MAX_TABLE_CELLS cells;
    use LazyProduct beyond that."""
    if not tables:
        raise ValueError("need at least one factor")
    result = tables[0]
    for b in tables[1:]:
        a = result
        order = a.order * b.order
        if order * order > MAX_TABLE_CELLS:
            raise TableError(
                f"product of order {order} needs {order * order} cells "
                f"(cap {MAX_TABLE_CELLS}); use LazyProduct")
        rows = []
        for g in range(order):
            ga, gb = divmod(g, b.order)
            row = []
            for h in range(order):
                ha, hb = divmod(h, b.order)
                row.append(a.rows[ga][ha] * b.order + b.rows[gb][hb])
            rows.append(row)
        result = FiniteGroupTable(rows, name=f"{a.name} x {b.name}",
                                  verify=False)
    return result


class LazyProduct:
    """Direct product of finite group tables with elements as coordinate
    tuples; nothing is materialized, so the ambient order may exceed any
    table cap."""

    def __init__(self, factors: Sequence[FiniteGroupTable]):
        if not factors:
            raise ValueError("need at least one factor")
        self.factors = list(factors)
        self.order = 1
        for f in self.factors:
            self.order *= f.order
        self.name = " x ".join(f.name for f in self.factors)
        self.identity = (0,) * len(self.factors)

    def mul(self, g: Tuple[int, ...], h: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(f.rows[a][b]
                     for f, a, b in zip(self.factors, g, h))

    def inverse(self, g: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(f.inverse(a) for f, a in zip(self.factors, g))

    def element_order(self, g: Tuple[int, ...]) -> int:
        return lcm(*(f.element_order(a)
                     for f, a in zip(self.factors, g)))

    def exponent(self) -> int:
        return lcm(*(f.exponent() for f in self.factors))

    def elements_of_order(self, d: int):
        """All ambient elements of order exactly d (generator)."""
        pools = []
        for f in self.factors:
            pools.append(sorted(x for x in range(f.order)
                                if d % f.element_order(x) == 0))
        for combo in itertools.product(*pools):
            if self.element_order(combo) == d:
                yield combo


# --- minimal generating tuples ----------------------------------------------


def minimal_generating_tuple(table: FiniteGroupTable) -> List[int]:
    """Lexicographically first generating tuple of minimal size."""
    if table.order == 1:
        return []
    for size in range(1, table.order.bit_length() + 1):
        for combo in itertools.combinations(range(1, table.order), size):
            if len(table.closure(combo)) == table.order:
                return list(combo)
    raise AssertionError("a finite group always has a generating set")


# --- embedding search --------------------------------------------------------


@dataclass
class DihedralProductSpec:
    """Ambient family D(h=n) x D(h=2^k)^r where n = 2^k * n0, n0 odd.

    The lead factor has order 2n; each extra copy is the dihedral
    2-group of order 2^(k+1). r is a search parameter.
    """
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("exponent must be >= 1")
        k = 0
        n0 = self.n
        while n0 % 2 == 0:
            n0 //= 2
            k += 1
        self.k = k
        self.n0 = n0

    def ambient(self, copies: int) -> LazyProduct:
        factors = [build_dihedral(self.n)]
        factors.extend(build_dihedral(2 ** self.k) for _ in range(copies))
        return LazyProduct(factors)


@dataclass
class EmbedResult:
    status: str  # embedding | not_found_exhausted | budget_exceeded | refuted_structural
    subgroup: str
    ambient: str
    copies_tried: int
    images: Optional[List[Tuple[int, ...]]] = None
    generators: Optional[List[int]] = None
    reason: Optional[str] = None
    nodes: int = 0

    def to_json_dict(self) -> dict:
        d = {
            "status": self.status,
            "subgroup": self.subgroup,
            "ambient": self.ambient,
            "copies_tried": self.copies_tried,
            "nodes": self.nodes,
        }
        if self.images is not None:
            d["generators"] = self.generators
            d["images"] = [list(t) for t in self.images]
        if self.reason is not None:
            d["reason"] = self.reason
        return d


def _structural_obstruction(sub: FiniteGroupTable,
                            ambient: LazyProduct) -> Optional[str]:
    """Cheap necessary conditions: exponent divisibility and order
    spectrum availability (an order-d subgroup element needs an order-d
    ambient element). The lcm closure over coordinate orders ignores the
    copy count, so it can only under-refute, never over-refute."""
    amb_exp = ambient.exponent()
    ambient_orders = set()
    for f in ambient.factors:
        ambient_orders.update(f.element_order(x) for x in range(f.order))
    feasible = {1}
    for e in sorted(ambient_orders):
        feasible |= {lcm(e, f) for f in feasible}
    for d in sub.order_spectrum():
        if amb_exp % d:
            return (f"subgroup has an element of order {d} but the "
                    f"ambient exponent is {amb_exp}")
        if d not in feasible:
            return f"no ambient element can have order {d}"
    return None


def _close_partial(sub: FiniteGroupTable, gens: Sequence[int],
                   images: Sequence[Tuple[int, ...]],
                   ambient: LazyProduct):
    """Close the Cayley graph of <gens> under the assignment
    gens -> images. Returns the partial map (covering exactly the
    subgroup the listed generators span) or None on a clash or on a
    nonidentity element forced to the identity, which no extension can
    repair."""
    phi: Dict[int, Tuple[int, ...]] = {0: ambient.identity}
    frontier = [0]
    while frontier:
        nxt = []
        for g in frontier:
            for s, img in zip(gens, images):
                h = sub.rows[g][s]
                cand = ambient.mul(phi[g], img)
                known = phi.get(h)
                if known is None:
                    if h != 0 and cand == ambient.identity:
                        return None
                    phi[h] = cand
                    nxt.append(h)
                elif known != cand:
                    return None
        frontier = nxt
    return phi


def _homomorphism_extends(sub: FiniteGroupTable, gens: Sequence[int],
                          images: Sequence[Tuple[int, ...]],
                          ambient: LazyProduct):
    """The full extension: defined everywhere and injective, or None."""
    phi = _close_partial(sub, gens, images, ambient)
    if phi is None or len(phi) != sub.order:
        return None
    return phi


def _verify_embedding(sub: FiniteGroupTable, phi: Dict[int, Tuple[int, ...]],
                      ambient: LazyProduct) -> bool:
    """Full replay: multiplicative on every pair and injective."""
    if len(set(phi.values())) != sub.order:
        return False
    for g in range(sub.order):
        for h in range(sub.order):
            if ambient.mul(phi[g], phi[h]) != phi[sub.rows[g][h]]:
                return False
    return True


def embed_search(sub: FiniteGroupTable, spec: DihedralProductSpec,
                 r_max: int = 4, budget: int = 5_000_000) -> EmbedResult:
    """Search for an embedding of sub into spec's ambient for r = 0..r_max.

    Backtracking over images of a minimal generating tuple. Image
    candidates for generator g are ambient elements of order exactly
    ord(g), indexed by their square: once phi(g^2) is forced by earlier
    assignments (g^2 in the span of earlier generators), only candidates
    with the matching square are even enumerated. The extension test
    closes the Cayley graph and fails fast on a clash; any found map is
    re-verified over the full table before being reported.
    """
    gens = minimal_generating_tuple(sub)
    if not gens:
        return EmbedResult(status="embedding", subgroup=sub.name,
                           ambient=spec.ambient(0).name, copies_tried=0,
                           images=[], generators=[])
    nodes = 0
    structural: List[str] = []
    for copies in range(0, r_max + 1):
        ambient = spec.ambient(copies)
        obstruction = _structural_obstruction(sub, ambient)
        if obstruction is not None:
            structural.append(obstruction)
            continue

        candidate_pool = []
        square_index: List[Dict[Tuple[int, ...], List[Tuple[int, ...]]]] = []
        for g in gens:
            pool = sorted(ambient.elements_of_order(sub.element_order(g)))
            candidate_pool.append(pool)
            by_square: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}
            for cand in pool:
                by_square.setdefault(ambient.mul(cand, cand), []).append(cand)
            square_index.append(by_square)
        squares = {g: sub.rows[g][g] for g in range(sub.order)}

        images: List[Tuple[int, ...]] = []

        def search(idx: int) -> Optional[Dict[int, Tuple[int, ...]]]:
            nonlocal nodes
            if idx == len(gens):
                return _homomorphism_extends(sub, gens, images, ambient)
            # partial closure of the earlier generators fixes the image
            # of everything they span; when it covers gens[idx]^2 only
            # the candidates with that square are tried at all
            partial = (_close_partial(sub, gens[:idx], images, ambient)
                       if idx else {0: ambient.identity})
            if partial is None:
                return None
            forced_square = partial.get(squares[gens[idx]])
            if forced_square is not None:
                source = square_index[idx].get(forced_square, [])
            else:
                source = candidate_pool[idx]
            for cand in source:
                nodes += 1
                if nodes > budget:
                    raise _BudgetStop
                images.append(cand)
                found = search(idx + 1)
                if found is not None:
                    return found
                images.pop()
            return None

        try:
            phi = search(0)
        except _BudgetStop:
            return EmbedResult(status="budget_exceeded", subgroup=sub.name,
                               ambient=ambient.name, copies_tried=copies,
                               reason=f"node budget {budget} exhausted",
                               nodes=nodes)
        if phi is not None:
            if not _verify_embedding(sub, phi, ambient):
                raise AssertionError("search produced a non-embedding")
            return EmbedResult(
                status="embedding", subgroup=sub.name, ambient=ambient.name,
                copies_tried=copies,
                images=[phi[g] for g in gens], generators=gens, nodes=nodes)
    if len(structural) == r_max + 1:
        return EmbedResult(status="refuted_structural", subgroup=sub.name,
                           ambient=f"{spec.ambient(0).name} (+ up to {r_max} copies)",
                           copies_tried=r_max, reason=structural[-1],
                           nodes=nodes)
    return EmbedResult(status="not_found_exhausted", subgroup=sub.name,
                       ambient=f"{spec.ambient(0).name} (+ up to {r_max} copies)",
                       copies_tried=r_max,
                       reason="exhaustive search at every r found no embedding",
                       nodes=nodes)


class _BudgetStop(Exception):
    pass


def sample_subgroups(table: FiniteGroupTable, count: int,
                     seed: int = 0) -> List[List[int]]:
    """Seeded random sample of distinct subgroups (as element lists),
    generated by 1-3 random elements each. Deterministic for a seed."""
    rng = random.Random(seed)
    seen = set()
    out: List[List[int]] = []
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        k = rng.randint(1, 3)
        gens = [rng.randrange(table.order) for _ in range(k)]
        sub = tuple(table.closure(gens))
        if sub not in seen:
            seen.add(sub)
            out.append(list(sub))
    return out


def subgroup_table(table: FiniteGroupTable,
                   elements: Sequence[int]) -> FiniteGroupTable:
    """Multiplication table of a subgroup, reindexed to 0..k-1 (0 stays
    the identity)."""
    elems = sorted(elements)
    if not elems or elems[0] != 0:
        raise TableError("subgroup must contain the identity 0")
    index = {g: i for i, g in enumerate(elems)}
    rows = []
    for g in elems:
        row = []
        for h in elems:
            gh = table.rows[g][h]
            if gh not in index:
                raise TableError("element list is not closed")
            row.append(index[gh])
        rows.append(row)
    return FiniteGroupTable(rows, name=f"subgroup of {table.name}",
                            verify=False)
