"""Pure-Python word kernels: the reference implementation.

burnside._speedups is the compiled twin; both must produce identical
output for identical input (the test suite cross-checks them). Keep the
algorithm here in lockstep with the .pyx file.

Reduction uses a suffix stack: letters move from the input stack to an
output stack, and after each append only suffixes ending at the new
letter can have become reducible (the output is irreducible before the
append, and any prefix of an irreducible word is irreducible). Rules are
bucketed by the last letter of their lhs so each append checks one
bucket. When a rule fires, its lhs is popped from the output and its rhs
is pushed back onto the input. Each rewrite strictly decreases the
shortlex value of output+input, so the loop terminates.
"""

from __future__ import annotations


class RuleIndex:
    __slots__ = ("num_symbols", "buckets", "num_rules")

    def __init__(self, num_symbols, buckets, num_rules):
        self.num_symbols = num_symbols
        self.buckets = buckets
        self.num_rules = num_rules


def build_index(rules, num_symbols):
    """Bucket (lhs, rhs) pairs by the last letter of lhs, in rule order."""
    buckets = [[] for _ in range(num_symbols)]
    count = 0
    for lhs, rhs in rules:
        if not lhs:
            raise ValueError("rule with empty lhs")
        # rhs is stored reversed, ready to push onto the input stack
        buckets[lhs[-1]].append((list(lhs), list(reversed(rhs))))
        count += 1
    return RuleIndex(num_symbols, buckets, count)


def reduce_word(index, word):
    buckets = index.buckets
    out = []
    pending = list(word)
    pending.reverse()
    while pending:
        x = pending.pop()
        out.append(x)
        for lhs, rhs_rev in buckets[x]:
            n = len(lhs)
            if n <= len(out) and out[-n:] == lhs:
                del out[-n:]
                pending.extend(rhs_rev)
                break
    return tuple(out)


def free_reduce_word(word):
    out = []
    for x in word:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)
