"""Alphabets, words, periodic configurations, clopen sets, unbordered sets.

Everything here is an immutable value; operations are pure functions. A
PeriodicConfig is the finite carrier for exact computations on bi-infinite
configurations: cell(i) = word[(i + offset) mod period]. Clopen sets are
stored uncompressed as a set of window words over an explicit window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct


class Alphabet:
    """Ordered finite list of distinct symbols, optionally a track product.

    Symbols are arbitrary hashables. For a product alphabet each symbol is
    a tuple with one entry per track, and `tracks` holds the factors.
    """

    def __init__(self, symbols, tracks=None):
        symbols = tuple(symbols)
        if not symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(symbols)) != len(symbols):
            raise ValueError("alphabet symbols must be distinct")
        self.symbols = symbols
        self._index = {s: i for i, s in enumerate(symbols)}
        self.tracks = tuple(tracks) if tracks else None
        if self.tracks:
            expected = math.prod(len(t) for t in self.tracks)
            if len(symbols) != expected:
                raise ValueError("track sizes do not multiply to alphabet size")
            for s in symbols:
                if len(s) != len(self.tracks):
                    raise ValueError(f"symbol {s!r} does not decode to one entry per track")
                for part, track in zip(s, self.tracks):
                    if part not in track._index:
                        raise ValueError(f"track entry {part!r} not in factor alphabet")

    def __len__(self):
        return len(self.symbols)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({list(self.symbols)!r})"

    def index(self, symbol):
        return self._index[symbol]

    def symbol(self, i):
        return self.symbols[i]

    def name(self, i) -> str:
        s = self.symbols[i]
        if isinstance(s, tuple):
            return ",".join(str(p) for p in s)
        return str(s)

    def names(self):
        return [self.name(i) for i in range(len(self))]

    def track_index(self, track: int, i: int) -> int:
        """Index of cell symbol i within the given factor alphabet."""
        return self.tracks[track].index(self.symbols[i][track])


def product_alphabet(*factors) -> Alphabet:
    """Product alphabet with symbols as tuples, lexicographic in the factors."""
    syms = [tuple(parts) for parts in iproduct(*(f.symbols for f in factors))]
    return Alphabet(syms, tracks=factors)


def binary_alphabet() -> Alphabet:
    return Alphabet(("0", "1"))


def int_alphabet(n: int) -> Alphabet:
    return Alphabet(tuple(str(i) for i in range(n)))


@dataclass(frozen=True)
class Word:
    alphabet: Alphabet
    indices: tuple

    def __post_init__(self):
        for i in self.indices:
            if not (0 <= i < len(self.alphabet)):
                raise ValueError(f"symbol index {i} out of range")

    def __len__(self):
        return len(self.indices)

    def symbols(self):
        return tuple(self.alphabet.symbol(i) for i in self.indices)

    def text(self) -> str:
        return ",".join(self.alphabet.name(i) for i in self.indices)

    @staticmethod
    def parse(alphabet: Alphabet, text: str) -> "Word":
        names = {alphabet.name(i): i for i in range(len(alphabet))}
        idx = tuple(names[t] for t in text.split(",")) if text else ()
        return Word(alphabet, idx)


BLANK = None


@dataclass(frozen=True)
class PartialWord:
    """Word over alphabet symbols plus the blank, stored as indices or None."""

    alphabet: Alphabet
    entries: tuple

    def __post_init__(self):
        if len(self.entries) < 1:
            raise ValueError("partial word must have length >= 1")
        for e in self.entries:
            if e is not None and not (0 <= e < len(self.alphabet)):
                raise ValueError(f"entry {e} out of range")

    def __len__(self):
        return len(self.entries)

    def support(self):
        return tuple(i for i, e in enumerate(self.entries) if e is not None)

    def text(self) -> str:
        return ",".join("_" if e is None else self.alphabet.name(e) for e in self.entries)

    @staticmethod
    def parse(alphabet: Alphabet, text: str) -> "PartialWord":
        names = {alphabet.name(i): i for i in range(len(alphabet))}
        entries = tuple(None if t == "_" else names[t] for t in text.split(","))
        return PartialWord(alphabet, entries)


class PeriodicConfig:
    """Spatially periodic bi-infinite configuration.

    cell(i) = word[(i + offset) mod period]. Two configs are equal iff they
    define the same bi-infinite point: equality folds the offset in and
    reduces to the minimal period.
    """

    __slots__ = ("alphabet", "period", "word", "offset", "_canon")

    def __init__(self, alphabet, word, offset=0):
        word = tuple(word)
        if not word:
            raise ValueError("period must be >= 1")
        for i in word:
            if not (0 <= i < len(alphabet)):
                raise ValueError(f"symbol index {i} out of range")
        self.alphabet = alphabet
        self.period = len(word)
        self.word = word
        self.offset = offset % len(word)
        self._canon = None

    @staticmethod
    def from_symbols(alphabet, symbols, offset=0):
        return PeriodicConfig(alphabet, [alphabet.index(s) for s in symbols], offset)

    def cell(self, i: int) -> int:
        return self.word[(i + self.offset) % self.period]

    def window(self, start: int, length: int):
        return tuple(self.cell(start + j) for j in range(length))

    def shifted(self, t: int) -> "PeriodicConfig":
        """The configuration sigma^t(x): cell'(i) = cell(i + t)."""
        return PeriodicConfig(self.alphabet, self.word, self.offset + t)

    def with_cell(self, i: int, symbol_index: int) -> "PeriodicConfig":
        w = list(self.word)
        w[(i + self.offset) % self.period] = symbol_index
        return PeriodicConfig(self.alphabet, w, self.offset)

    def expanded(self, new_period: int) -> "PeriodicConfig":
        if new_period % self.period:
            raise ValueError("new period must be a multiple")
        return PeriodicConfig(self.alphabet, [self.cell(j) for j in range(new_period)], 0)

    def canonical(self):
        if self._canon is None:
            folded = tuple(self.cell(j) for j in range(self.period))
            d = minimal_period(folded)
            self._canon = folded[:d]
        return self._canon

    def __eq__(self, other):
        return (
            isinstance(other, PeriodicConfig)
            and self.alphabet == other.alphabet
            and self.canonical() == other.canonical()
        )

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"PeriodicConfig({','.join(self.alphabet.name(i) for i in self.canonical())})"

    def track(self, t: int) -> "PeriodicConfig":
        """Projection of a product configuration to one track."""
        tr = self.alphabet.tracks[t]
        return PeriodicConfig(tr, [self.alphabet.track_index(t, self.cell(j)) for j in range(self.period)], 0)


def minimal_period(word) -> int:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and all(word[i] == word[i % d] for i in range(n)):
            return d
    return n


def zip_configs(alphabet, x: PeriodicConfig, y: PeriodicConfig) -> PeriodicConfig:
    """Pair two track configurations into a product configuration."""
    p = math.lcm(x.period, y.period)
    idx = [alphabet.index((x.alphabet.symbol(x.cell(j)), y.alphabet.symbol(y.cell(j)))) for j in range(p)]
    return PeriodicConfig(alphabet, idx, 0)


# ---------------------------------------------------------------------------
# mutually unbordered sets


def is_mutually_unbordered(words) -> bool:
    """No proper nonempty suffix of any w equals a prefix of any w' (w = w' allowed)."""
    words = [tuple(w) for w in words]
    if not words:
        return True
    n = len(words[0])
    if n < 1 or any(len(w) != n for w in words):
        raise ValueError("words must all have the same length >= 1")
    for w in words:
        for w2 in words:
            for s in range(1, n):
                if w[n - s:] == w2[:s]:
                    return False
    return True


@dataclass(frozen=True)
class UnborderedSet:
    alphabet: Alphabet
    length: int
    words: frozenset  # frozenset of index tuples

    def __post_init__(self):
        if not is_mutually_unbordered(self.words):
            raise ValueError("word set is not mutually unbordered")
        for w in self.words:
            if len(w) != self.length:
                raise ValueError("word length mismatch")

    def sorted_words(self):
        return sorted(self.words)


def _unbordered_against(w, chosen, n) -> bool:
    for w2 in list(chosen) + [w]:
        for s in range(1, n):
            if w[n - s:] == w2[:s] or w2[n - s:] == w[:s]:
                return False
    return True


def enumerate_unbordered_set(alphabet, n, count, max_length=None, node_budget=2_000_000):
    """Deterministic search for a mutually unbordered set of the given size.

    Scans lengths n' = n, n+1, ... and within each length runs a
    backtracking search over candidate words in descending lexicographic
    order, returning the first set found. Descending order makes the
    smallest instances come out as the conventional {10}-style words.
    """
    if len(alphabet) < 2:
        raise ValueError("need |alphabet| >= 2 for unbordered words of length >= 2")
    if count < 1:
        raise ValueError("count must be >= 1")
    if max_length is None:
        max_length = max(n, 2) + 24
    nodes = 0
    for length in range(max(n, 2), max_length + 1):
        candidates = [w for w in iproduct(range(len(alphabet) - 1, -1, -1), repeat=length)
                      if _unbordered_against(w, [], length)]

        chosen = []

        def extend(start):
            nonlocal nodes
            if len(chosen) == count:
                return True
            for ci in range(start, len(candidates)):
                nodes += 1
                if nodes > node_budget:
                    raise RuntimeError(f"unbordered-set search exceeded node budget {node_budget}")
                w = candidates[ci]
                if _unbordered_against(w, chosen, length):
                    chosen.append(w)
                    if extend(ci + 1):
                        return True
                    chosen.pop()
            return False

        if extend(0):
            return UnborderedSet(alphabet, length, frozenset(chosen))
    raise ValueError(f"no mutually unbordered set of size {count} found up to length cap {max_length}")


# ---------------------------------------------------------------------------
# clopen sets


class ClopenSet:
    """Finite union of cylinders over one window: x in C iff x[s, s+L-1] in words.

    Normal form is the unique minimal window: full columns at either end are
    dropped; the empty set and the all-words set both normalize to window
    length 0 (at start 0), with zero or one (empty) word respectively.
    """

    __slots__ = ("alphabet", "start", "length", "words")

    def __init__(self, alphabet, start, words, _normalize=True):
        words = frozenset(tuple(w) for w in words)
        lengths = {len(w) for w in words}
        if len(lengths) > 1:
            raise ValueError("window words must have equal length")
        length = lengths.pop() if lengths else 0
        self.alphabet = alphabet
        self.start = start
        self.length = length
        self.words = words
        if _normalize:
            self._normalize()

    @staticmethod
    def cylinder(alphabet, word, start=0) -> "ClopenSet":
        return ClopenSet(alphabet, start, [tuple(word)])

    @staticmethod
    def symbol_cylinder(alphabet, symbol, start=0) -> "ClopenSet":
        return ClopenSet(alphabet, start, [(alphabet.index(symbol),)])

    @staticmethod
    def everything(alphabet) -> "ClopenSet":
        return ClopenSet(alphabet, 0, [()])

    @staticmethod
    def nothing(alphabet) -> "ClopenSet":
        return ClopenSet(alphabet, 0, [])

    def is_empty(self) -> bool:
        return not self.words

    def is_everything(self) -> bool:
        return self.words == frozenset([()])

    def _normalize(self):
        a = len(self.alphabet)
        if not self.words:
            self.start, self.length = 0, 0
            return
        # drop a full first column: words factor as A x W'
        while self.length > 0:
            tails = {}
            for w in self.words:
                tails.setdefault(w[1:], set()).add(w[0])
            if all(len(heads) == a for heads in tails.values()):
                self.words = frozenset(tails)
                self.start += 1
                self.length -= 1
                continue
            heads = {}
            for w in self.words:
                heads.setdefault(w[:-1], set()).add(w[-1])
            if all(len(t) == a for t in heads.values()):
                self.words = frozenset(heads)
                self.length -= 1
                continue
            break
        if self.length == 0:
            self.start = 0

    def _lift(self, start, length):
        """Word set of this clopen set over an enclosing window."""
        if not self.words:
            return frozenset()
        a = range(len(self.alphabet))
        left = self.start - start
        right = (start + length) - (self.start + self.length)
        assert left >= 0 and right >= 0
        out = set()
        for w in self.words:
            for pre in iproduct(a, repeat=left):
                for post in iproduct(a, repeat=right):
                    out.add(pre + w + post)
        return frozenset(out)

    def _common_window(self, other):
        if self.alphabet != other.alphabet:
            raise ValueError("clopen sets over different alphabets")
        spans = [(c.start, c.start + c.length) for c in (self, other) if c.length > 0]
        if not spans:
            return 0, 0
        s = min(a for a, _ in spans)
        e = max(b for _, b in spans)
        return s, e - s

    def union(self, other) -> "ClopenSet":
        s, L = self._common_window(other)
        if self.is_everything() or other.is_everything():
            return ClopenSet.everything(self.alphabet)
        return ClopenSet(self.alphabet, s, self._lift(s, L) | other._lift(s, L))

    def intersection(self, other) -> "ClopenSet":
        s, L = self._common_window(other)
        return ClopenSet(self.alphabet, s, self._lift(s, L) & other._lift(s, L))

    def complement(self) -> "ClopenSet":
        allw = frozenset(iproduct(range(len(self.alphabet)), repeat=self.length))
        return ClopenSet(self.alphabet, self.start, allw - self.words)

    def difference(self, other) -> "ClopenSet":
        return self.intersection(other.complement())

    def shifted(self, t: int) -> "ClopenSet":
        """The image sigma^t(C); occurs at i in x iff C occurs at i + t."""
        return ClopenSet(self.alphabet, self.start - t, self.words, _normalize=False)

    def occurs_at(self, x: PeriodicConfig, i: int) -> bool:
        """Whether sigma^i(x) lies in this set."""
        if self.is_everything():
            return True
        if not self.words:
            return False
        return x.window(i + self.start, self.length) in self.words

    def contains_window(self, window, window_start) -> bool:
        """Membership test given x[window_start, ...] = window (must cover)."""
        if self.is_everything():
            return True
        if not self.words:
            return False
        lo = self.start - window_start
        if lo < 0 or lo + self.length > len(window):
            raise ValueError("window does not cover the clopen set's window")
        return tuple(window[lo:lo + self.length]) in self.words

    def is_kn_aperiodic(self, k: int, n: int) -> bool:
        """Whether sigma^i(C) & C nonempty with i in kZ \\ {0} forces |i| >= kn.

        Exact on full shifts: the intersection of two shifted cylinder
        unions is nonempty iff some pair of words agrees on the overlap.
        """
        if not self.words:
            return True
        for step in range(1, n):
            i = k * step
            # sigma^i(C) has window start self.start - i; overlap test
            for w in self.words:
                for w2 in self.words:
                    # w2 placed at start - i, w at start; cells c shared
                    lo = max(self.start, self.start - i)
                    hi = min(self.start + self.length, self.start - i + self.length)
                    if lo >= hi:
                        return False  # windows disjoint: intersection automatically nonempty
                    if all(w[c - self.start] == w2[c - self.start + i] for c in range(lo, hi)):
                        return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, ClopenSet)
            and self.alphabet == other.alphabet
            and self.start == other.start
            and self.words == other.words
        )

    def __hash__(self):
        return hash((self.start, self.words))

    def __repr__(self):
        ws = sorted(self.words)
        shown = ["".join(self.alphabet.name(i) for i in w) for w in ws[:4]]
        extra = "..." if len(ws) > 4 else ""
        return f"ClopenSet(start={self.start}, len={self.length}, words={shown}{extra})"

    def to_json(self):
        return {
            "window_start": self.start,
            "window_len": self.length,
            "words": [",".join(self.alphabet.name(i) for i in w) for w in sorted(self.words)],
        }

    @staticmethod
    def from_json(alphabet, data) -> "ClopenSet":
        words = []
        for text in data["words"]:
            if text == "":
                words.append(())
            else:
                words.append(tuple(Word.parse(alphabet, text).indices))
        c = ClopenSet(alphabet, data["window_start"], words, _normalize=False)
        if c.length != data["window_len"]:
            raise ValueError("window_len does not match word lengths")
        c._normalize()
        return c


def marker_clopen(us: UnborderedSet) -> ClopenSet:
    """[W] at offset 0 for a mutually unbordered set W."""
    return ClopenSet(us.alphabet, 0, us.words)


# ---------------------------------------------------------------------------
# Fine-Wilf-type difference counting


def finewilf_two_differences(p, q, n, x: PeriodicConfig, y: PeriodicConfig,
                             window=None) -> bool:
    """Whether the difference set P = {i : x_i != y_i} meets [-q, p] twice.

    Oracle for the two-differences lemma: for 0 < p < q < n, x of period p,
    y of period q, x != y and x_0 != y_0, the answer is always True. The
    default window is [-q, p]; the stated window [-q+1, p] admits
    counterexamples (x = 0^Z, y = (10)^Z with y_0 = 1 has its second
    difference at exactly -q), so the left endpoint is widened by one,
    which is what the marker argument needs (a second difference within
    distance < kn of the first).
    """
    if not (0 < p < q < n):
        raise ValueError("need 0 < p < q < n")
    if p % x.period != 0:
        raise ValueError("x does not have period p")
    if q % y.period != 0:
        raise ValueError("y does not have period q")
    if x == y:
        raise ValueError("x and y must differ")
    if x.cell(0) == y.cell(0):
        raise ValueError("need x_0 != y_0")
    lo, hi = window if window else (-q, p)
    count = sum(1 for i in range(lo, hi + 1) if x.cell(i) != y.cell(i))
    return count >= 2
