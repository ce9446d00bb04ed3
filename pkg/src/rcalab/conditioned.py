"""Exact normal form for words of first-track shifts and conditioned actions.

A word over {sigma_1^(+-1)} and {f_(k,E,chi)} (all chi placed at one common
offset with one common k) composes to sigma_1^s . K, where K fixes the
first track and applies, at every aligned block i in kZ, a permutation of
B^k read off a bounded first-track window around i. The pair (s, table) is
computed by one left-to-right pass, so the word problem for such words is
decided exactly at any mechanical radius. NotIdentity witnesses are
re-verified by applying the original word to a concrete configuration.

This is the decision procedure behind the SAT reduction (where the
mechanical radius of the compiled word is far beyond any dense table) and
the conditioned-action formula checks.
"""

from __future__ import annotations

import time
from itertools import product as iproduct

from . import perms

TABLE_CAP = 4_000_000


class _Kernel:
    """Table lo..hi (first-track window) -> permutation of B^k blocks."""

    def __init__(self, a_size, bk_size):
        self.a = a_size
        self.ident = perms.identity(bk_size)
        self.lo = 0
        self.hi = -1  # empty window
        self.table = {(): self.ident}

    def _grow(self, lo, hi):
        if self.hi < self.lo:
            pad_left, pad_right = 0, 0
            old_span = 0
        else:
            pad_left = self.lo - lo
            pad_right = hi - self.hi
            old_span = self.hi - self.lo + 1
        span = hi - lo + 1
        if self.a ** span > TABLE_CAP:
            raise MemoryError("conditioned window too large")
        new = {}
        for w, rho in self.table.items():
            for pre in iproduct(range(self.a), repeat=max(pad_left, 0)):
                for post in iproduct(range(self.a), repeat=max(pad_right, 0)):
                    new[pre + w + post] = rho
        if self.hi < self.lo and span > 0:
            new = {w: self.ident for w in iproduct(range(self.a), repeat=span)}
        self.table = new
        self.lo, self.hi = lo, hi

    def absorb(self, cond_words, cond_lo, cond_len, chi):
        """Post-compose with: apply chi wherever the condition matches."""
        if cond_len == 0:
            if cond_words:  # everything-set: unconditional chi
                self.table = {w: perms.mul(rho, chi) for w, rho in self.table.items()}
            return
        lo = min(self.lo, cond_lo) if self.hi >= self.lo else cond_lo
        hi = max(self.hi, cond_lo + cond_len - 1) if self.hi >= self.lo else cond_lo + cond_len - 1
        self._grow(lo, hi)
        off = cond_lo - self.lo
        out = {}
        for w, rho in self.table.items():
            if w[off:off + cond_len] in cond_words:
                out[w] = perms.mul(rho, chi)
            else:
                out[w] = rho
        self.table = out

    def nontrivial_entry(self):
        for w in sorted(self.table):
            if self.table[w] != self.ident:
                return w, self.table[w]
        return None


def analyze(f):
    """(shift, kernel, k, offset) for an eligible word, else None."""
    alphabet = f.alphabet
    if not alphabet.tracks or len(alphabet.tracks) != 2:
        return None
    k = None
    offset = None
    for prim, exp in f.letters:
        tag = prim.tag
        if not tag:
            return None
        if tag[0] == "shift":
            if tag[1] != 1:
                return None
        elif tag[0] == "conditioned":
            if k is None:
                k, offset = tag[1], tag[4]
            elif tag[1] != k or tag[4] != offset:
                return None
        else:
            return None
    if k is None:
        k, offset = 1, 0
    a_size = len(alphabet.tracks[0])
    bk = len(alphabet.tracks[1]) ** k
    kernel = _Kernel(a_size, bk)
    shift = 0
    try:
        for prim, exp in f.letters:
            tag = prim.tag
            if tag[0] == "shift":
                shift += tag[2] * exp
            else:
                _, _, condition, perm, _ = tag
                chi = perm if exp == 1 else perms.inv(perm)
                if condition.is_empty():
                    continue
                if condition.is_everything():
                    kernel.absorb(frozenset([()]), 0, 0, chi)
                else:
                    kernel.absorb(condition.words, condition.start + shift,
                                  condition.length, chi)
    except MemoryError:
        return None
    return shift, kernel, k, offset


def try_conditioned_verdict(f):
    """Exact WordProblemVerdict for an eligible word, else None."""
    from .automata import WordProblemVerdict
    from .core import PeriodicConfig

    t0 = time.perf_counter()
    res = analyze(f)
    if res is None:
        return None
    shift, kernel, k, offset = res
    evaluations = len(kernel.table)
    span_radius = max([k - 1, abs(offset), abs(offset + k - 1)] +
                      ([abs(kernel.lo), abs(kernel.hi)] if kernel.hi >= kernel.lo else [0]))
    if shift == 0 and kernel.nontrivial_entry() is None:
        return WordProblemVerdict("identity", None, evaluations, span_radius, k,
                                  (time.perf_counter() - t0) * 1000)
    witness_config = _build_witness(f, shift, kernel, k, offset)
    y = f.apply(witness_config)
    x = witness_config
    p = y.period * x.period
    xx, yy = x.expanded(p), y.expanded(p)
    moved = next(i for i in range(p) if xx.cell(i) != yy.cell(i))
    R = f.mechanical_radius()
    window = tuple(xx.cell(moved + d) for d in range(-R, R + 1))
    return WordProblemVerdict("not_identity", (moved % max(k, 1), window),
                              evaluations, span_radius, k,
                              (time.perf_counter() - t0) * 1000)


def _build_witness(f, shift, kernel, k, offset):
    """A periodic configuration the word provably moves."""
    from .core import PeriodicConfig

    alphabet = f.alphabet
    atrack, btrack = alphabet.tracks
    a, b = len(atrack), len(btrack)
    if shift != 0 and a > 1:
        # a lone marked first-track cell is displaced by the net shift
        p = k * max(2, (abs(shift) + k) // k + 1)
        word = [alphabet.index((atrack.symbol(1 if j == 0 else 0), btrack.symbol(0)))
                for j in range(p)]
        return PeriodicConfig(alphabet, word)
    entry = kernel.nontrivial_entry()
    if entry is None and shift != 0:
        # degenerate first track: shift is invisible there, move the second track
        p = k * 2
        word = [alphabet.index((atrack.symbol(0), btrack.symbol(1 if j == 0 else 0)))
                for j in range(p)]
        return PeriodicConfig(alphabet, word)
    w, rho = entry
    span = kernel.hi - kernel.lo + 1 if kernel.hi >= kernel.lo else 0
    lo = kernel.lo if span else 0
    # find a block content moved by rho
    code = next(c for c in range(len(rho)) if rho[c] != c)
    digits = []
    cc = code
    for _ in range(k):
        digits.append(cc % b)
        cc //= b
    digits.reverse()
    width = max(span + abs(lo) + k + abs(offset) + k, 2 * k)
    p = k * ((width + k - 1) // k + 1)
    track1 = [0] * p
    for j in range(span):
        track1[(lo + j) % p] = w[j]
    track2 = [0] * p
    for j in range(k):
        track2[(offset + j) % p] = digits[j]
    word = [alphabet.index((atrack.symbol(track1[j]), btrack.symbol(track2[j])))
            for j in range(p)]
    return PeriodicConfig(alphabet, word)
