"""Finite permutations as index tuples, with cycle notation I/O.

A permutation of degree n is a tuple p of length n with p[i] = image of i.
Words of permutations are lists applied left to right (first entry acts
first), matching the generator-word convention used across the package.
"""

from __future__ import annotations

import itertools


def identity(n):
    return tuple(range(n))


def is_perm(p) -> bool:
    return sorted(p) == list(range(len(p)))


def mul(p, q):
    """Composite "p then q": (p*q)[i] = q[p[i]]."""
    return tuple(q[p[i]] for i in range(len(p)))


def inv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def word_eval(word, n):
    """Evaluate a left-to-right word of permutations of degree n."""
    acc = identity(n)
    for p in word:
        acc = mul(acc, p)
    return acc


def commutator(p, q):
    """[p, q] = p q p^-1 q^-1 as a function composite (q^-1 acts first)."""
    return mul(mul(mul(inv(q), inv(p)), q), p)


def conjugate(p, g):
    """p^g = g^-1 p g (g acts first)."""
    return mul(mul(g, p), inv(g))


def parity(p) -> int:
    """0 for even, 1 for odd."""
    seen = [False] * len(p)
    par = 0
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        par ^= (length - 1) & 1
    return par


def is_even(p) -> bool:
    return parity(p) == 0


def cycles(p):
    """Nontrivial cycles of p, each rotated to start at its least element."""
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        out.append(tuple(cyc))
    return out


def from_cycles(n, cycs):
    out = list(range(n))
    for cyc in cycs:
        for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
            out[a] = b
    p = tuple(out)
    if not is_perm(p):
        raise ValueError("cycles overlap or repeat points")
    return p


def format_cycles(p, names=None):
    names = names or [str(i) for i in range(len(p))]
    cycs = cycles(p)
    if not cycs:
        return "()"
    return "".join("(" + " ".join(names[i] for i in c) + ")" for c in cycs)


def parse_cycles(text, names):
    """Parse "(a b)(c d e)" over the given symbol names (space separated)."""
    index = {nm: i for i, nm in enumerate(names)}
    text = text.strip()
    if text in ("()", ""):
        return identity(len(names))
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"bad cycle notation: {text!r}")
    cycs = []
    for part in text[1:-1].split(")("):
        elems = part.split()
        if len(elems) < 2:
            raise ValueError(f"bad cycle: ({part})")
        try:
            cycs.append(tuple(index[e] for e in elems))
        except KeyError as exc:
            raise ValueError(f"unknown symbol {exc.args[0]!r} in cycle notation") from exc
    return from_cycles(len(names), cycs)


def all_even(n):
    """All even permutations of degree n (only sensible for small n)."""
    return [p for p in map(tuple, itertools.permutations(range(n))) if is_even(p)]


def transitive_closure(gens, n):
    """Elements of the group generated by gens (breadth first, small groups)."""
    seen = {identity(n)}
    frontier = [identity(n)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = mul(p, g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def commutator_table(group):
    """Map each commutator value [p, q] over a group to a witness pair.

    Returns {r: (p, q)} with [p, q] = r, first witness in the iteration
    order of the (sorted) group, so the table is deterministic.
    """
    table = {}
    elems = sorted(group)
    for p in elems:
        for q in elems:
            r = commutator(p, q)
            if r not in table:
                table[r] = (p, q)
    return table


def orbit(gens, point):
    """Orbit of a point under permutation generators."""
    seen = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def is_transitive(gens, n) -> bool:
    return len(orbit(gens, 0)) == n if n else True
