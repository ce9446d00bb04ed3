"""Reversible one-head Turing machines as dynamical systems.

A machine is a triple (Q, S, T) with T split into move rules (q, d, q')
that are tape-independent and write rules (q, s, q', s') that do not move.
Validity means forward and reverse determinism and completeness: per state
either exactly one move rule or a write rule for every tape symbol, and
the same for the reversed rule set. Both the moving-head model (head walks
on the tape) and the moving-tape model (tape shifts under a fixed head)
are provided.

The conveyor-belt embedding turns a machine into a radius-1 automorphism
of a full shift over A_seg = (S^2 x {<,>}) | (Q x S) | (S x Q), plus any
extra cut symbols (blinkers). A maximal run of A_seg cells with at most
one head and all arrows pointing toward it is a segment; a segment of L
cells is a cyclic belt of 2L slots, traversed top[0..L-1] then
bottom[L-1..0]. The head occupies one slot and reads the next slot in belt
order, so move rules swap the head with a neighboring slot and write rules
rewrite the slot being read. Cells outside any head's segment are fixed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from itertools import product as iproduct

from .core import Alphabet, PeriodicConfig
from .automata import LocalRule, PrimitiveAutomorphism


class MachineError(ValueError):
    pass


class OneHeadMachine:
    def __init__(self, states, tape, moves, writes, check=True):
        self.states = tuple(states)
        self.tape = tuple(tape)
        self.moves = dict(moves)    # q -> (d, q')
        self.writes = dict(writes)  # (q, s) -> (q', s')
        if check:
            problems = self.validate()
            if problems:
                raise MachineError("; ".join(problems))

    def validate(self):
        """List of determinism/completeness violations, empty when valid."""
        problems = []
        qset, sset = set(self.states), set(self.tape)
        if len(qset) != len(self.states) or len(sset) != len(self.tape):
            problems.append("duplicate states or tape symbols")
        for q, (d, q2) in self.moves.items():
            if q not in qset or q2 not in qset or d not in (-1, 1):
                problems.append(f"bad move rule {q!r}")
        for (q, s), (q2, s2) in self.writes.items():
            if q not in qset or q2 not in qset or s not in sset or s2 not in sset:
                problems.append(f"bad write rule {(q, s)!r}")
        for q in self.states:
            has_move = q in self.moves
            covered = [s for s in self.tape if (q, s) in self.writes]
            if has_move and covered:
                problems.append(f"state {q!r} has both move and write rules")
            elif not has_move and len(covered) != len(self.tape):
                problems.append(f"state {q!r} is incomplete (writes cover {len(covered)}/{len(self.tape)})")
        # reverse determinism and completeness
        rmoves, rwrites = {}, {}
        for q, (d, q2) in self.moves.items():
            if q2 in rmoves or any(k[0] == q2 for k in rwrites):
                problems.append(f"reverse-nondeterministic at state {q2!r}")
            rmoves[q2] = (-d, q)
        for (q, s), (q2, s2) in self.writes.items():
            if q2 in rmoves:
                problems.append(f"reverse-nondeterministic at state {q2!r} (move vs write)")
            if (q2, s2) in rwrites:
                problems.append(f"reverse-nondeterministic at {(q2, s2)!r}")
            rwrites[(q2, s2)] = (q, s)
        for q in self.states:
            has_move = q in rmoves
            covered = [s for s in self.tape if (q, s) in rwrites]
            if not has_move and len(covered) != len(self.tape):
                problems.append(f"state {q!r} reverse-incomplete")
        return problems

    def reverse(self) -> "OneHeadMachine":
        rmoves = {q2: (-d, q) for q, (d, q2) in self.moves.items()}
        rwrites = {(q2, s2): (q, s) for (q, s), (q2, s2) in self.writes.items()}
        return OneHeadMachine(self.states, self.tape, rmoves, rwrites)

    def is_active(self, q) -> bool:
        """Wrapped machines override activity; plain machines are always active."""
        return True

    def __repr__(self):
        return f"OneHeadMachine(|Q|={len(self.states)}, |S|={len(self.tape)})"

    def to_json(self):
        return {
            "states": [str(q) for q in self.states],
            "tape": list(self.tape),
            "moves": [{"from": str(q), "dir": d, "to": str(q2)} for q, (d, q2) in sorted(self.moves.items(), key=str)],
            "writes": [{"from": str(q), "read": s, "to": str(q2), "write": s2}
                       for (q, s), (q2, s2) in sorted(self.writes.items(), key=str)],
        }

    @staticmethod
    def from_json(data) -> "OneHeadMachine":
        moves = {m["from"]: (m["dir"], m["to"]) for m in data.get("moves", [])}
        writes = {(w["from"], w["read"]): (w["to"], w["write"]) for w in data.get("writes", [])}
        return OneHeadMachine(data["states"], data["tape"], moves, writes)


@dataclass(frozen=True)
class MachineConfig:
    mode: str  # "moving_head" | "moving_tape"
    state: object
    tape: PeriodicConfig
    pos: int = 0  # moving_head only


def step(machine: OneHeadMachine, cfg: MachineConfig) -> MachineConfig:
    q = cfg.state
    if cfg.mode == "moving_head":
        if q in machine.moves:
            d, q2 = machine.moves[q]
            return replace(cfg, state=q2, pos=cfg.pos + d)
        s = cfg.tape.alphabet.symbol(cfg.tape.cell(cfg.pos))
        q2, s2 = machine.writes[(q, s)]
        return replace(cfg, state=q2, tape=cfg.tape.with_cell(cfg.pos, cfg.tape.alphabet.index(s2)))
    if q in machine.moves:
        d, q2 = machine.moves[q]
        return replace(cfg, state=q2, tape=cfg.tape.shifted(d))
    s = cfg.tape.alphabet.symbol(cfg.tape.cell(0))
    q2, s2 = machine.writes[(q, s)]
    return replace(cfg, state=q2, tape=cfg.tape.with_cell(0, cfg.tape.alphabet.index(s2)))


def step_back(machine: OneHeadMachine, cfg: MachineConfig) -> MachineConfig:
    return step(machine.reverse(), cfg)


# ---------------------------------------------------------------------------
# wrappers


class WrappedMachine(OneHeadMachine):
    """Machine with a mod-4 counter (active on counter 0) and two dummy bits.

    States are (q, counter, dummy1, dummy2). The counter cycles every step
    and the inner rule fires only on active steps, so any moving-head
    period of the inner machine is multiplied by exactly 4. The dummy bits
    are never read or written by the transition rules.
    """

    def __init__(self, inner: OneHeadMachine):
        self.inner = inner
        states = [(q, c, d1, d2) for q in inner.states for c in range(4)
                  for d1 in range(2) for d2 in range(2)]
        moves, writes = {}, {}
        for q in inner.states:
            for d1 in range(2):
                for d2 in range(2):
                    if q in inner.moves:
                        d, q2 = inner.moves[q]
                        moves[(q, 0, d1, d2)] = (d, (q2, 1, d1, d2))
                    else:
                        for s in inner.tape:
                            q2, s2 = inner.writes[(q, s)]
                            writes[((q, 0, d1, d2), s)] = ((q2, 1, d1, d2), s2)
                    for c in (1, 2, 3):
                        for s in inner.tape:
                            writes[((q, c, d1, d2), s)] = ((q, (c + 1) % 4, d1, d2), s)
        super().__init__(states, inner.tape, moves, writes)

    def is_active(self, q) -> bool:
        return q[1] == 0

    @staticmethod
    def flip_dummy1(q):
        return (q[0], q[1], 1 - q[2], q[3])


class DummyBitMachine(OneHeadMachine):
    """Machine with a single unread dummy bit in the state (for the 2V embedding)."""

    def __init__(self, inner: OneHeadMachine):
        self.inner = inner
        states = [(q, d) for q in inner.states for d in range(2)]
        moves, writes = {}, {}
        for q in inner.states:
            for d in range(2):
                if q in inner.moves:
                    dd, q2 = inner.moves[q]
                    moves[(q, d)] = (dd, (q2, d))
                else:
                    for s in inner.tape:
                        q2, s2 = inner.writes[(q, s)]
                        writes[((q, d), s)] = ((q2, d), s2)
        super().__init__(states, inner.tape, moves, writes)

    @staticmethod
    def flip_dummy(q):
        return (q[0], 1 - q[1])


def wrap(machine: OneHeadMachine) -> WrappedMachine:
    return WrappedMachine(machine)


# ---------------------------------------------------------------------------
# periodicity and travel


def bounded_period(machine: OneHeadMachine, t_max: int, max_tape_period: int):
    """Least T <= t_max with M^T = id on all moving-head configs over tapes
    of period <= max_tape_period, or None. Absence is not an aperiodicity proof."""
    alphabet = Alphabet(machine.tape)
    times = set()
    for p in range(1, max_tape_period + 1):
        for word in iproduct(range(len(alphabet)), repeat=p):
            tape = PeriodicConfig(alphabet, word)
            for q in machine.states:
                cfg0 = MachineConfig("moving_head", q, tape, 0)
                cfg = cfg0
                for t in range(1, t_max + 1):
                    cfg = step(machine, cfg)
                    if cfg.state == q and cfg.pos == 0 and cfg.tape == cfg0.tape:
                        times.add(t)
                        break
                else:
                    return None
    T = math.lcm(*times) if times else 1
    return T if T <= t_max else None


def travel_bound(machine: OneHeadMachine, horizon: int) -> int:
    """Max head displacement over any <= horizon steps, from any configuration.

    The tape is revealed lazily, so the cost is exponential only in the
    number of cells actually read.
    """
    best = 0

    def go(q, pos, tape, t):
        nonlocal best
        if abs(pos) > best:
            best = abs(pos)
        if t == horizon:
            return
        if q in machine.moves:
            d, q2 = machine.moves[q]
            go(q2, pos + d, tape, t + 1)
            return
        s = tape.get(pos)
        if s is None:
            for sym in machine.tape:
                tape[pos] = sym
                go(q, pos, tape, t)
                del tape[pos]
            return
        q2, s2 = machine.writes[(q, s)]
        tape[pos] = s2
        go(q2, pos, tape, t + 1)
        tape[pos] = s

    for q in machine.states:
        go(q, 0, {}, 0)
    return best


# ---------------------------------------------------------------------------
# conveyor-belt segments and slots


def seg_symbols(machine: OneHeadMachine):
    """A_seg = (S^2 x {<,>}) | (Q x S) | (S x Q) as tagged tuples."""
    out = []
    for st in machine.tape:
        for sb in machine.tape:
            for arrow in ("<", ">"):
                out.append(("P", st, sb, arrow))
    for q in machine.states:
        for s in machine.tape:
            out.append(("HT", q, s))
    for s in machine.tape:
        for q in machine.states:
            out.append(("HB", s, q))
    return out


def seg_alphabet(machine: OneHeadMachine, extra_symbols=()) -> Alphabet:
    return Alphabet(tuple(extra_symbols) + tuple(seg_symbols(machine)))


def is_seg(c) -> bool:
    return isinstance(c, tuple) and c[0] in ("P", "HT", "HB")


def is_head(c) -> bool:
    return isinstance(c, tuple) and c[0] in ("HT", "HB")


def head_state(c):
    return c[1] if c[0] == "HT" else c[2]


def _continues_right(c) -> bool:
    # the cell after a head belongs to its segment iff it points back at it
    return isinstance(c, tuple) and c[0] == "P" and c[3] == "<"


def _continues_left(c) -> bool:
    return isinstance(c, tuple) and c[0] == "P" and c[3] == ">"


def segment_to_slots(cells):
    """Belt slots of a segment: top[0..L-1] then bottom[L-1..0]."""
    tops, bots = [], []
    for c in cells:
        if c[0] == "P":
            tops.append(("S", c[1]))
            bots.append(("S", c[2]))
        elif c[0] == "HT":
            tops.append(("Q", c[1]))
            bots.append(("S", c[2]))
        else:
            tops.append(("S", c[1]))
            bots.append(("Q", c[2]))
    return tops + bots[::-1]


def slots_to_segment(slots):
    """Rebuild segment cells from belt slots, arrows pointing at the head."""
    n2 = len(slots)
    assert n2 % 2 == 0
    L = n2 // 2
    tops = slots[:L]
    bots = slots[L:][::-1]
    head_cell = None
    for j in range(L):
        if tops[j][0] == "Q" or bots[j][0] == "Q":
            head_cell = j
    cells = []
    for j in range(L):
        t, b = tops[j], bots[j]
        if t[0] == "Q":
            cells.append(("HT", t[1], b[1]))
        elif b[0] == "Q":
            cells.append(("HB", t[1], b[1]))
        else:
            arrow = ">" if (head_cell is None or j < head_cell) else "<"
            cells.append(("P", t[1], b[1], arrow))
    return cells


def belt_step(slots, machine: OneHeadMachine):
    """One machine step on a belt given as a cyclic slot list (the oracle path).

    The head occupies one slot; it reads the next slot in belt order, move
    rules swap it with the neighbor in the move direction.
    """
    slots = list(slots)
    n = len(slots)
    heads = [i for i, e in enumerate(slots) if e[0] == "Q"]
    if not heads:
        return slots
    if len(heads) > 1:
        raise ValueError("belt has more than one head")
    p = heads[0]
    q = slots[p][1]
    if q in machine.moves:
        d, q2 = machine.moves[q]
        t = (p + d) % n
        slots[p] = slots[t]
        slots[t] = ("Q", q2)
    else:
        t = (p + 1) % n
        q2, s2 = machine.writes[(q, slots[t][1])]
        slots[p] = ("Q", q2)
        slots[t] = ("S", s2)
    return slots


def conveyor_cell_update(machine: OneHeadMachine, cm, c0, cp):
    """New content of the middle cell under one conveyor step."""
    if not is_seg(c0):
        return c0
    if c0[0] == "HT":
        q, sb = c0[1], c0[2]
        if q in machine.moves:
            d, q2 = machine.moves[q]
            if d == 1:
                if _continues_right(cp):
                    return ("P", cp[1], sb, ">")
                return ("HB", sb, q2)
            if _continues_left(cm):
                return ("P", cm[1], sb, "<")
            return ("HB", sb, q2)
        if _continues_right(cp):
            q2, _ = machine.writes[(q, cp[1])]
            return ("HT", q2, sb)
        q2, s2 = machine.writes[(q, sb)]
        return ("HT", q2, s2)
    if c0[0] == "HB":
        st, q = c0[1], c0[2]
        if q in machine.moves:
            d, q2 = machine.moves[q]
            if d == 1:
                if _continues_left(cm):
                    return ("P", st, cm[2], "<")
                return ("HT", q2, st)
            if _continues_right(cp):
                return ("P", st, cp[2], ">")
            return ("HT", q2, st)
        if _continues_left(cm):
            q2, _ = machine.writes[(q, cm[2])]
            return ("HB", st, q2)
        q2, s2 = machine.writes[(q, st)]
        return ("HB", s2, q2)
    # pair cell: affected only by an adjacent head acting into it
    t, b, arrow = c0[1], c0[2], c0[3]
    if arrow == "<" and is_head(cm) and cm[0] == "HT":
        q = cm[1]
        if q in machine.moves:
            d, q2 = machine.moves[q]
            if d == 1:
                return ("HT", q2, b)
        else:
            q2, s2 = machine.writes[(q, t)]
            return ("P", s2, b, "<")
    if arrow == "<" and is_head(cm) and cm[0] == "HB":
        q = cm[2]
        if q in machine.moves:
            d, q2 = machine.moves[q]
            if d == -1:
                return ("HB", t, q2)
    if arrow == ">" and is_head(cp) and cp[0] == "HT":
        q = cp[1]
        if q in machine.moves:
            d, q2 = machine.moves[q]
            if d == -1:
                return ("HT", q2, b)
    if arrow == ">" and is_head(cp) and cp[0] == "HB":
        q = cp[2]
        if q in machine.moves:
            d, q2 = machine.moves[q]
            if d == 1:
                return ("HB", t, q2)
        else:
            q2, s2 = machine.writes[(q, b)]
            return ("P", t, s2, ">")
    return c0


def conveyor_embed(machine: OneHeadMachine, alphabet: Alphabet | None = None,
                   verify="auto") -> PrimitiveAutomorphism:
    """Radius-1 automorphism applying one machine step on every segment.

    Non-segment symbols in the alphabet (blinkers) cut segments and are
    fixed. The inverse rule is the embedding of the reverse machine.
    """
    if alphabet is None:
        alphabet = seg_alphabet(machine)
    rev = machine.reverse()

    def rule_for(mach):
        def func(ph, window):
            r = (len(window) - 1) // 2
            cm = alphabet.symbol(window[r - 1])
            c0 = alphabet.symbol(window[r])
            cp = alphabet.symbol(window[r + 1])
            return alphabet.index(conveyor_cell_update(mach, cm, c0, cp))
        return LocalRule(alphabet, 1, func)

    return PrimitiveAutomorphism(f"conveyor({len(machine.states)}x{len(machine.tape)})",
                                 rule_for(machine), rule_for(rev),
                                 tag=("conveyor", machine), verify=verify)


# ---------------------------------------------------------------------------
# fixtures


def always_right() -> OneHeadMachine:
    return OneHeadMachine(("r",), ("0",), {"r": (1, "r")}, {})


def state_swap() -> OneHeadMachine:
    return OneHeadMachine(("a", "b"), ("0",), {"a": (1, "b"), "b": (-1, "a")}, {})


def write_toggle() -> OneHeadMachine:
    return OneHeadMachine(("t",), ("0", "1"), {},
                          {("t", "0"): ("t", "1"), ("t", "1"): ("t", "0")})


def bouncer() -> OneHeadMachine:
    """Three-state cycle: right, left, then a write step that changes nothing."""
    return OneHeadMachine(
        ("a", "b", "c"), ("0", "1"),
        {"a": (1, "b"), "b": (-1, "c")},
        {("c", "0"): ("a", "0"), ("c", "1"): ("a", "1")})


FIXTURES = {
    "always_right": always_right,
    "state_swap": state_swap,
    "write_toggle": write_toggle,
    "bouncer": bouncer,
}


def load_machine(path_or_name) -> OneHeadMachine:
    if path_or_name in FIXTURES:
        return FIXTURES[path_or_name]()
    with open(path_or_name) as fh:
        return OneHeadMachine.from_json(json.load(fh))
