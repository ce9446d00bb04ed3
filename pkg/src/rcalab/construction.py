"""Blinker automorphisms of a wrapped machine and their explicit conjugator.

Over B = {0,1}^2 | A_seg the automorphism alpha runs in three steps: the
conveyor step (blinkers cut segments and are fixed), a blink-bit flip on
every active blinker, and a flip of the first dummy bit of a head that
sits on the top track in an active state immediately right of a blinker.
beta appends a fourth step flipping the blinker's activity bit under that
same condition. Neither map moves blinkers or (in alpha's case) touches
activity bits.

For a machine that is periodic in the moving-head model the two maps are
conjugate by an involution g assembled from blinker-anchored marker-style
pieces: on each window orbit the activity adjustment u accumulates the
parity of head visits to the cell right of the blinker (active, top
track), and the blink adjustment v accumulates u. Orbits are anchored at
the cross-section representative (strictly minimal orbit element with the
head at the origin) when the head comes within reach of the blinker, and
at the least orbit element for short segments cut off by a following
blinker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct

from .core import Alphabet, PeriodicConfig, product_alphabet
from .automata import AutWord, LocalRule, PrimitiveAutomorphism
from . import machines as mch
from .machines import (MachineConfig, OneHeadMachine, WrappedMachine, belt_step,
                       seg_symbols, segment_to_slots, slots_to_segment, step)

BLINKERS = tuple(("B", a, b) for a in (0, 1) for b in (0, 1))


def is_blinker(sym) -> bool:
    return isinstance(sym, tuple) and sym[0] == "B"


def blinker_alphabet(machine: OneHeadMachine) -> Alphabet:
    """B = {0,1}^2 | A_seg; blinker bits are (activity, blink)."""
    return Alphabet(BLINKERS + tuple(seg_symbols(machine)))


def _require_wrapped(machine):
    if not isinstance(machine, WrappedMachine):
        raise ValueError("construction needs a wrapped machine (mod-4 counter + dummy bits)")


# ---------------------------------------------------------------------------
# the three/four step maps


def _blink_flip(alphabet) -> PrimitiveAutomorphism:
    def func(ph, window):
        sym = alphabet.symbol(window[0])
        if is_blinker(sym) and sym[1] == 1:
            return alphabet.index(("B", 1, 1 - sym[2]))
        return window[0]
    rule = LocalRule(alphabet, 0, func)
    return PrimitiveAutomorphism("blinkflip", rule, rule, tag=("blinkflip",))


def _head_right_of_blinker(machine, cm, c0) -> bool:
    return (is_blinker(cm) and isinstance(c0, tuple) and c0[0] == "HT"
            and machine.is_active(c0[1]))


def _dummy_flip(machine, alphabet) -> PrimitiveAutomorphism:
    def func(ph, window):
        r = (len(window) - 1) // 2
        cm, c0 = alphabet.symbol(window[r - 1]), alphabet.symbol(window[r])
        if _head_right_of_blinker(machine, cm, c0):
            return alphabet.index(("HT", WrappedMachine.flip_dummy1(c0[1]), c0[2]))
        return window[r]
    rule = LocalRule(alphabet, 1, func)
    return PrimitiveAutomorphism("dummyflip", rule, rule, tag=("dummyflip",))


def _activity_flip(machine, alphabet) -> PrimitiveAutomorphism:
    def func(ph, window):
        r = (len(window) - 1) // 2
        c0, cp = alphabet.symbol(window[r]), alphabet.symbol(window[r + 1])
        if is_blinker(c0) and _head_right_of_blinker(machine, c0, cp):
            return alphabet.index(("B", 1 - c0[1], c0[2]))
        return window[r]
    rule = LocalRule(alphabet, 1, func)
    return PrimitiveAutomorphism("activityflip", rule, rule, tag=("activityflip",))


def build_alpha(machine: WrappedMachine, alphabet=None) -> AutWord:
    """Conveyor step, then blink flips, then the dummy-bit flip."""
    _require_wrapped(machine)
    alphabet = alphabet or blinker_alphabet(machine)
    conveyor = mch.conveyor_embed(machine, alphabet)
    return AutWord(alphabet, [(conveyor, 1), (_blink_flip(alphabet), 1),
                              (_dummy_flip(machine, alphabet), 1)])


def build_beta(machine: WrappedMachine, alphabet=None) -> AutWord:
    """alpha followed by the activity flip under the same head condition."""
    _require_wrapped(machine)
    alphabet = alphabet or blinker_alphabet(machine)
    alpha = build_alpha(machine, alphabet)
    return AutWord(alphabet, alpha.letters + ((_activity_flip(machine, alphabet), 1),))


def lift_to_product(f: AutWord, first_track: Alphabet) -> AutWord:
    """id x f on (A x B)^Z: apply f on the second track, fix the first."""
    prod = product_alphabet(first_track, f.alphabet)

    def lift_rule(rule):
        def func(ph, window, rule=rule):
            r = (len(window) - 1) // 2
            bwin = tuple(prod.track_index(1, w) for w in window)
            out_b = rule(ph, bwin)
            a_sym = prod.symbol(window[r])[0]
            return prod.index((a_sym, f.alphabet.symbol(out_b)))
        return LocalRule(prod, rule.radius, func, phase=rule.phase)

    letters = []
    for prim, exp in f.letters:
        lifted = PrimitiveAutomorphism(prim.name + "''", lift_rule(prim.forward),
                                       lift_rule(prim.inverse), verify=False)
        letters.append((lifted, exp))
    return AutWord(prod, letters)


# ---------------------------------------------------------------------------
# window dynamics: a blinker followed by a complete segment of fixed length


def window_step(machine: WrappedMachine, cells):
    """One alpha step on the segment right of a blinker, as a complete belt.

    Returns (new cells, cond) where cond records whether the post-step head
    sits at the first cell, on the top track, in an active state; that is
    the condition under which both maps flip a bit (alpha the dummy, beta
    the blinker's activity). The blinker's own bits are not part of the
    segment state.
    """
    slots = segment_to_slots(cells)
    cells2 = slots_to_segment(belt_step(slots, machine))
    cond = cells2[0][0] == "HT" and machine.is_active(cells2[0][1])
    if cond:
        q, s = cells2[0][1], cells2[0][2]
        cells2[0] = ("HT", WrappedMachine.flip_dummy1(q), s)
    return tuple(cells2), cond


def head_cell_index(cells):
    for i, c in enumerate(cells):
        if c[0] in ("HT", "HB"):
            return i
    return None


def valid_segments(machine, length, head_positions=None, include_heads=True,
                   include_headless=False):
    """Well-formed segment words of the given length (arrows at the head)."""
    S = machine.tape
    pair_contents = list(iproduct(S, S))
    if include_headless:
        for contents in iproduct(pair_contents, repeat=length):
            yield tuple(("P", t, b, ">") for t, b in contents)
    if not include_heads:
        return
    heads = [("HT", q, s) for q in machine.states for s in S] + \
            [("HB", s, q) for s in S for q in machine.states]
    positions = head_positions if head_positions is not None else range(length)
    for hpos in positions:
        for h in heads:
            for contents in iproduct(pair_contents, repeat=length - 1):
                cells = []
                ci = 0
                for j in range(length):
                    if j == hpos:
                        cells.append(h)
                    else:
                        t, b = contents[ci]
                        ci += 1
                        cells.append(("P", t, b, ">" if j < hpos else "<"))
                yield tuple(cells)


# ---------------------------------------------------------------------------
# cross-section


@dataclass
class CrossSection:
    machine: WrappedMachine
    radius: int
    members: frozenset  # (state, tape window of length 2k+1, symbols)
    period: int

    def member_window(self, q, window) -> bool:
        return (q, tuple(window)) in self.members

    def member_config(self, cfg: MachineConfig) -> bool:
        k = self.radius
        win = tuple(cfg.tape.alphabet.symbol(cfg.tape.cell(cfg.pos + d)) for d in range(-k, k + 1))
        return self.member_window(cfg.state, win)


def _state_key(machine):
    order = {q: i for i, q in enumerate(machine.states)}
    return lambda q: order[q]


def _strict_min_verdict(machine, period, q, window, k):
    """True/False if (q, 0, window-determined x) is strictly minimal in its
    orbit for every extension, None if the window cannot decide."""
    skey = _state_key(machine)
    sym_order = {s: i for i, s in enumerate(machine.tape)}
    tape0 = {i - k: window[i] for i in range(2 * k + 1)}
    orbit = []
    tape = dict(tape0)
    cur_q, cur_pos = q, 0
    for _ in range(period):
        if cur_q in machine.moves:
            d, q2 = machine.moves[cur_q]
            cur_q, cur_pos = q2, cur_pos + d
        else:
            if cur_pos not in tape:
                return None  # head reads outside the window
            q2, s2 = machine.writes[(cur_q, tape[cur_pos])]
            tape = dict(tape)
            tape[cur_pos] = s2
            cur_q = q2
        orbit.append((cur_q, cur_pos, tape))
    if not (cur_q == q and cur_pos == 0 and tape == tape0):
        return None  # orbit did not close inside the window
    for (q2, h, tape2) in orbit[:-1]:
        if q2 == q and h == 0 and tape2 == tape0:
            continue  # the same configuration
        # compare (q,0,tape0) vs (q2,h,tape2) in the interleaved order
        if skey(q) != skey(q2):
            if skey(q) > skey(q2):
                return False
            continue
        decided = False
        deltas = [0]
        for j in range(1, 2 * k + 2 + abs(h)):
            deltas.extend([j, -j])
        for d in deltas:
            p1, p2 = d, h + d
            v1 = tape0.get(p1)
            v2 = tape2.get(p2) if p2 in tape2 else (tape0.get(p2) if abs(p2) <= k else None)
            if abs(p1) > k:
                v1 = None
            if v1 is None and v2 is None:
                if p1 == p2:
                    continue  # untouched identical cells
                return None  # unknown against unknown at different cells
            if v1 is None or v2 is None:
                return None
            if v1 != v2:
                decided = sym_order[v1] < sym_order[v2]
                break
        else:
            continue  # all compared cells equal and aligned: same configuration
        if not decided:
            return False
    return True


def cross_section(machine: WrappedMachine, period: int, k_cap: int = 8) -> CrossSection:
    """Clopen cross-section of the moving-tape dynamics for a periodic machine.

    Membership of (q, x) is decided by (q, x[-k, k]) once the window radius
    k stabilizes: the orbit simulation and all order comparisons use only
    in-window cells, so the verdict is extension-independent.
    """
    _require_wrapped(machine)
    for k in range(k_cap + 1):
        members = set()
        undecided = False
        for q in machine.states:
            for window in iproduct(machine.tape, repeat=2 * k + 1):
                v = _strict_min_verdict(machine, period, q, window, k)
                if v is None:
                    undecided = True
                    break
                if v:
                    members.add((q, window))
            if undecided:
                break
        if not undecided:
            return CrossSection(machine, k, frozenset(members), period)
    raise RuntimeError(f"cross-section window did not stabilize below k = {k_cap}")


# ---------------------------------------------------------------------------
# the conjugator


def _belt_c_member(cs: CrossSection, cells):
    """Whether the belt decodes into the cross-section around its head."""
    slots = segment_to_slots(cells)
    n = len(slots)
    p = next(i for i, e in enumerate(slots) if e[0] == "Q")
    q = slots[p][1]
    k = cs.radius
    win = tuple(slots[(p + 1 + d) % n][1] for d in range(-k, k + 1))
    return cs.member_window(q, win)


@dataclass
class ConjugatorSpec:
    ell: int
    cross: CrossSection
    travel: int
    long_table: dict   # segment word (len 3*ell) -> (u, v)
    short_tables: dict  # length -> {segment word -> (u, v)}
    orbit_count: int


def _solve_orbit(cycle, conds, anchor):
    """u, v along a closed orbit: u(T w) = u(w)^cond(w), v(T w) = v(w)^u(w).

    Solvable because the visit count around a closed orbit is even (each
    visit also flips the dummy bit, which must return) and consecutive
    visits are a multiple of 4 steps apart (the mod-4 counter), making the
    accumulated u-parity even as well. Anchoring at the representative
    fixes u = v = 0 there.
    """
    n = len(cycle)
    rot = cycle.index(anchor)
    cyc = cycle[rot:] + cycle[:rot]
    cds = conds[rot:] + conds[:rot]
    if sum(cds) % 2:
        raise AssertionError("odd visit parity around a closed orbit (dummy bit argument fails)")
    u = [0] * n
    for i in range(1, n):
        u[i] = u[i - 1] ^ cds[i - 1]
    if sum(u) % 2:
        raise AssertionError("odd blink parity around a closed orbit (mod-4 counter argument fails)")
    v = [0] * n
    for i in range(1, n):
        v[i] = v[i - 1] ^ u[i - 1]
    return {cyc[i]: (u[i], v[i]) for i in range(n)}


def _walk_orbit(machine, start, max_len):
    cycle = [start]
    conds = []
    w = start
    while True:
        w2, cond = window_step(machine, w)
        conds.append(cond)
        if w2 == start:
            return cycle, conds
        cycle.append(w2)
        w = w2
        if len(cycle) > max_len:
            raise AssertionError("window orbit failed to close")


def build_conjugator(machine: WrappedMachine, period: int,
                     cross: CrossSection | None = None, alphabet=None):
    """Involution g with beta = g^-1 . alpha . g, built from orbit parities.

    Returns (g, spec). g is a word of commuting blinker-bit involutions:
    one piece keyed by W (blinker + 3*ell segment cells, head within 2*ell)
    anchored at the cross-section representative, and one piece per shorter
    length keyed by a complete segment (next cell is again a blinker).
    """
    _require_wrapped(machine)
    alphabet = alphabet or blinker_alphabet(machine)
    if cross is None:
        cross = cross_section(machine, period)
    travel = mch.travel_bound(machine, period)
    ell = max(travel + 1, cross.radius + 1)
    L = 3 * ell
    orbit_cap = 64 * period * (2 * L + 2)

    long_table = {}
    orbits = 0
    seen = set()
    active_states = [q for q in machine.states if machine.is_active(q)]
    # U-anchored orbits: head within ell of the blinker and belt window in C
    for cells in valid_segments(machine, L, head_positions=range(ell)):
        if cells in seen or not _belt_c_member(cross, cells):
            continue
        cycle, conds = _walk_orbit(machine, cells, orbit_cap)
        anchors = [w for w in cycle
                   if head_cell_index(w) is not None and head_cell_index(w) < ell
                   and _belt_c_member(cross, w)]
        if len(anchors) != 1:
            raise AssertionError(f"orbit has {len(anchors)} cross-section anchors, expected 1")
        for w in cycle:
            h = head_cell_index(w)
            if h is None or h + 1 > 2 * ell:
                raise AssertionError("head escaped the 2*ell reach on a U-orbit")
        table = _solve_orbit(cycle, conds, anchors[0])
        for w, uv in table.items():
            if uv != (0, 0):
                long_table[w] = uv
        seen.update(cycle)
        orbits += 1

    short_tables = {}
    for lp in range(1, L):
        table = {}
        seen_s = set()
        for q in active_states:
            for s in machine.tape:
                head = ("HT", q, s)
                for contents in iproduct(iproduct(machine.tape, machine.tape), repeat=lp - 1):
                    cells = (head,) + tuple(("P", t, b, "<") for t, b in contents)
                    if cells in seen_s:
                        continue
                    cycle, conds = _walk_orbit(machine, cells, orbit_cap)
                    anchor = min(cycle, key=_cells_key(alphabet))
                    for w, uv in _solve_orbit(cycle, conds, anchor).items():
                        if uv != (0, 0):
                            table[w] = uv
                    seen_s.update(cycle)
                    orbits += 1
        if table:
            short_tables[lp] = table

    letters = [(_long_marker(alphabet, L, long_table), 1)]
    for lp, table in sorted(short_tables.items()):
        letters.append((_short_marker(alphabet, lp, table), 1))
    g = AutWord(alphabet, letters)
    spec = ConjugatorSpec(ell, cross, travel, long_table, short_tables, orbits)
    return g, spec


def _cells_key(alphabet):
    def key(cells):
        return tuple(alphabet.index(c) for c in cells)
    return key


def _apply_bits(blinker, uv):
    return ("B", blinker[1] ^ uv[0], blinker[2] ^ uv[1])


def _long_marker(alphabet, L, table) -> PrimitiveAutomorphism:
    """Flip blinker bits by the orbit parity of the following 3*ell segment."""
    def func(ph, window):
        r = (len(window) - 1) // 2
        sym = alphabet.symbol(window[r])
        if not is_blinker(sym):
            return window[r]
        cells = tuple(alphabet.symbol(window[r + 1 + j]) for j in range(L))
        uv = table.get(cells)
        if uv is None:
            return window[r]
        return alphabet.index(_apply_bits(sym, uv))
    rule = LocalRule(alphabet, L, func)
    return PrimitiveAutomorphism(f"conj_long(L={L})", rule, rule,
                                 tag=("conj_long", L), verify=False)


def _short_marker(alphabet, lp, table) -> PrimitiveAutomorphism:
    """As the long piece, for a complete segment of length lp (a blinker follows)."""
    def func(ph, window):
        r = (len(window) - 1) // 2
        sym = alphabet.symbol(window[r])
        if not is_blinker(sym):
            return window[r]
        after = alphabet.symbol(window[r + 1 + lp])
        if not is_blinker(after):
            return window[r]
        cells = tuple(alphabet.symbol(window[r + 1 + j]) for j in range(lp))
        uv = table.get(cells)
        if uv is None:
            return window[r]
        return alphabet.index(_apply_bits(sym, uv))
    rule = LocalRule(alphabet, lp + 1, func)
    return PrimitiveAutomorphism(f"conj_short(l={lp})", rule, rule,
                                 tag=("conj_short", lp), verify=False)


# ---------------------------------------------------------------------------
# structured configuration families for verification


def _compositions(total, max_blocks, cap):
    """Segment-length sequences whose blocks (1 + seglen each) sum to total."""
    if total == 0:
        yield ()
        return
    if max_blocks == 0:
        return
    for seglen in range(0, min(total - 1, cap) + 1):
        for rest in _compositions(total - seglen - 1, max_blocks - 1, cap):
            yield (seglen,) + rest


def structured_configs(machine, alphabet, max_period, segment_cap=None, max_blocks=2):
    """Periodic configs that concatenate [blinker + valid segment] blocks."""
    cap = segment_cap if segment_cap is not None else max_period - 1
    for period in range(1, max_period + 1):
        for shape in sorted(set(_compositions(period, max_blocks, cap))):
            seg_choices = []
            for seglen in shape:
                if seglen == 0:
                    seg_choices.append([()])
                else:
                    seg_choices.append(list(valid_segments(machine, seglen,
                                                           include_headless=True)))
            for blinkers in iproduct(BLINKERS, repeat=len(shape)):
                for segs in iproduct(*seg_choices):
                    cells = []
                    for b, seg in zip(blinkers, segs):
                        cells.append(b)
                        cells.extend(seg)
                    yield PeriodicConfig.from_symbols(alphabet, cells)


def conjugacy_holds_on(alpha: AutWord, beta: AutWord, g: AutWord, configs) -> tuple:
    """Check g(beta(x)) == alpha(g(x)) on each config; (count, first failure)."""
    n = 0
    for x in configs:
        n += 1
        if g.apply(beta.apply(x)) != alpha.apply(g.apply(x)):
            return n, x
    return n, None


# ---------------------------------------------------------------------------
# aperiodic distinguisher


def distinguish_aperiodic(machine: WrappedMachine, witness: PeriodicConfig,
                          horizon: int, alphabet=None, window_radius=2):
    """Trace evidence that beta's orbit closure shows both still and blinking
    central patterns while alpha never changes an activity bit.

    The witness must contain exactly one blinker. Bounded-horizon evidence
    only; aperiodicity itself is not decided here.
    """
    _require_wrapped(machine)
    alphabet = alphabet or blinker_alphabet(machine)
    alpha = build_alpha(machine, alphabet)
    beta = build_beta(machine, alphabet)
    blinker_pos = [i for i in range(witness.period)
                   if is_blinker(alphabet.symbol(witness.cell(i)))]
    if len(blinker_pos) != 1:
        raise ValueError("witness must contain exactly one blinker per period")
    b = blinker_pos[0]

    def trace(word):
        xs = [witness]
        for _ in range(horizon):
            xs.append(word.apply(xs[-1]))
        return xs

    beta_trace = trace(beta)
    alpha_trace = trace(alpha)

    def central(x):
        return tuple(alphabet.symbol(x.cell(b + d)) for d in range(-window_radius, window_radius + 1))

    def activity(x):
        return alphabet.symbol(x.cell(b))[1]

    beta_flips = [t for t in range(horizon) if activity(beta_trace[t + 1]) != activity(beta_trace[t])]
    alpha_flips = [t for t in range(horizon) if activity(alpha_trace[t + 1]) != activity(alpha_trace[t])]

    def find_window(xs, period_wanted):
        pats = [central(x) for x in xs]
        run = 0
        for t in range(len(pats) - period_wanted):
            if pats[t + period_wanted] == pats[t] and (period_wanted == 1 or pats[t + 1] != pats[t]):
                run += 1
                if run >= 4:
                    return (t - 3, t + period_wanted)
            else:
                run = 0
        return None

    fixed_window = find_window(beta_trace, 1)
    two_periodic_window = find_window(beta_trace, 2)
    return {
        "trace_len": horizon,
        "blinker_cell": b,
        "beta_activity_flips": beta_flips,
        "alpha_activity_flips": alpha_flips,
        "activity_flips": len(beta_flips),
        "fixed_window": fixed_window,
        "two_periodic_window": two_periodic_window,
        "beta_activity_series": [activity(x) for x in beta_trace],
        "beta_blink_series": [alphabet.symbol(x.cell(b))[2] for x in beta_trace],
        "head_cells": [head_trace_cell(alphabet, x) for x in beta_trace],
        "bounded_horizon": True,
    }


def head_trace_cell(alphabet, x: PeriodicConfig):
    for i in range(x.period):
        sym = alphabet.symbol(x.cell(i))
        if isinstance(sym, tuple) and sym[0] in ("HT", "HB"):
            return i
    return None
