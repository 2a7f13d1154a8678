"""Braid words of complex energy bands, and the word algebra on them.

A word on N strands is an ordered sequence of signed generators: generator
n (1-based, n < N) twists the strands currently ranked n and n+1 by real
part. The text form is compact: lowercase ``t2`` is a positive generator,
uppercase ``T2`` its inverse, and the empty word prints ``e``.

Only free reduction (cancelling adjacent inverse pairs) is implemented;
words that differ by the full braid relations are not identified. Phase
classification therefore keys on the cyclically reduced word together with
the exponent sum and the closure permutation, which is enough to separate
the phases that occur in these lattices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateCrossing, StrandMismatch, UnresolvedCrossing

__all__ = [
    "Permutation",
    "BraidWord",
    "extract_braid_word",
    "induced_permutation",
    "concat",
    "inverse",
    "free_reduce",
    "exponent_sum",
    "cyclic_canonical",
    "words_cyclic_equal",
    "word_to_text",
    "word_from_text",
]


@dataclass(frozen=True)
class Permutation:
    """A bijection of strand labels {0, ..., N-1}; image[i] is where i goes."""

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(i) for i in self.image)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation: {img}")
        object.__setattr__(self, "image", img)

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def transposition(n: int, i: int) -> "Permutation":
        """Swap i and i+1 on n strands (0-based i)."""
        img = list(range(n))
        img[i], img[i + 1] = img[i + 1], img[i]
        return Permutation(tuple(img))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def then(self, other: "Permutation") -> "Permutation":
        """Composition: first self, then other."""
        if other.n != self.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(other.image[j] for j in self.image))

    def inverse(self) -> "Permutation":
        img = [0] * self.n
        for i, j in enumerate(self.image):
            img[j] = i
        return Permutation(tuple(img))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 0-based, each starting at its smallest element."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.image[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.image[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_str(self) -> str:
        """1-based cycle notation, e.g. ``(1 2)``; identity prints ``()``."""
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycs)

    def band_mapping_str(self) -> str:
        """Relabelling of the band tuple after one zone traversal.

        ``(E1,E2,E3)->(E3,E1,E2)`` means the slot that held E1 at the base
        point is reached by the strand that started as E3, and so on: slot p
        lists the inverse image of p.
        """
        inv = self.inverse().image
        lhs = ",".join(f"E{i + 1}" for i in range(self.n))
        rhs = ",".join(f"E{inv[p] + 1}" for p in range(self.n))
        return f"({lhs})->({rhs})"

    @staticmethod
    def from_band_tuple(labels: Sequence[int]) -> "Permutation":
        """Inverse of :meth:`band_mapping_str`: 1-based occupant labels."""
        inv = [int(x) - 1 for x in labels]
        return Permutation(tuple(inv)).inverse()


@dataclass(frozen=True)
class BraidWord:
    """letters: tuple of (generator index 1..N-1, sign +1/-1)."""

    letters: tuple[tuple[int, int], ...]
    strand_count: int

    def __post_init__(self):
        letters = tuple((int(n), int(s)) for n, s in self.letters)
        if self.strand_count < 2:
            raise ValueError("need at least two strands")
        for n, s in letters:
            if not 1 <= n < self.strand_count:
                raise ValueError(f"generator {n} out of range for {self.strand_count} strands")
            if s not in (-1, 1):
                raise ValueError(f"sign must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", letters)

    @staticmethod
    def empty(strand_count: int) -> "BraidWord":
        return BraidWord((), strand_count)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return word_to_text(self)


def word_to_text(w: BraidWord) -> str:
    """Compact text form: ``t1 t2 T1`` (uppercase = inverse); empty is ``e``."""
    if not w.letters:
        return "e"
    return " ".join((f"t{n}" if s > 0 else f"T{n}") for n, s in w.letters)


def word_from_text(text: str, strand_count: int) -> BraidWord:
    text = text.strip()
    if text in ("", "e"):
        return BraidWord.empty(strand_count)
    letters = []
    for tok in text.split():
        if not tok[0] in "tT" or not tok[1:].isdigit():
            raise ValueError(f"bad braid letter {tok!r}")
        letters.append((int(tok[1:]), 1 if tok[0] == "t" else -1))
    return BraidWord(tuple(letters), strand_count)


def exponent_sum(w: BraidWord) -> int:
    """Number of positive letters minus number of inverse letters."""
    return sum(s for _, s in w.letters)


def induced_permutation(w: BraidWord) -> Permutation:
    """Strand permutation of the word: transpositions composed in word order.

    Signs are ignored; a generator and its inverse move strands identically.
    """
    perm = Permutation.identity(w.strand_count)
    for n, _ in w.letters:
        perm = perm.then(Permutation.transposition(w.strand_count, n - 1))
    return perm


def concat(a: BraidWord, b: BraidWord) -> BraidWord:
    """Join: a's endpoints glued to b's initial points."""
    if a.strand_count != b.strand_count:
        raise StrandMismatch(f"{a.strand_count} vs {b.strand_count} strands")
    return BraidWord(a.letters + b.letters, a.strand_count)


def inverse(w: BraidWord) -> BraidWord:
    return BraidWord(tuple((n, -s) for n, s in reversed(w.letters)), w.strand_count)


def free_reduce(w: BraidWord) -> BraidWord:
    """Delete adjacent inverse pairs until none remain."""
    stack: list[tuple[int, int]] = []
    for let in w.letters:
        if stack and stack[-1][0] == let[0] and stack[-1][1] == -let[1]:
            stack.pop()
        else:
            stack.append(let)
    return BraidWord(tuple(stack), w.strand_count)


def cyclic_canonical(w: BraidWord) -> BraidWord:
    """Canonical representative under free reduction and cyclic rotation.

    Reduces freely, cancels inverse pairs across the wrap-around, then picks
    the lexicographically smallest rotation. Words equal up to a change of
    base point share one canonical form.
    """
    letters = list(free_reduce(w).letters)
    while len(letters) >= 2 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
        letters = letters[1:-1]
    if not letters:
        return BraidWord.empty(w.strand_count)
    rotations = [tuple(letters[i:] + letters[:i]) for i in range(len(letters))]
    return BraidWord(min(rotations), w.strand_count)


def words_cyclic_equal(a: BraidWord, b: BraidWord) -> bool:
    return (a.strand_count == b.strand_count
            and cyclic_canonical(a).letters == cyclic_canonical(b).letters)


# -- extraction from tracked bands ---------------------------------------

_BISECTION_WIDTH = 2.0 * np.pi * 1e-6   # letter sign is read at the crossing
_SUBDIVIDE_FLOOR = 2.0 * np.pi * 1e-9   # below this, coincident crossings


def _rank_order(values: np.ndarray) -> tuple[int, ...]:
    """Band indices sorted ascending by real part; ties by imaginary part."""
    return tuple(int(i) for i in np.lexsort((values.imag, values.real)))


def _match_to(reference: np.ndarray, raw: np.ndarray) -> np.ndarray:
    """Reorder ``raw`` to minimise total distance to ``reference``."""
    n = len(reference)
    if n <= 3:
        best, best_cost = None, None
        for perm in itertools.permutations(range(n)):
            cost = sum(abs(raw[perm[i]] - reference[i]) for i in range(n))
            if best_cost is None or cost < best_cost:
                best, best_cost = perm, cost
        return raw[list(best)]
    from scipy.optimize import linear_sum_assignment
    cost = np.abs(raw[None, :] - reference[:, None])
    _, cols = linear_sum_assignment(cost)
    return raw[cols]


def extract_braid_word(trajectory) -> BraidWord:
    """Read the braid word off a tracked band trajectory.

    Scanning the zone upward from the base point, every swap in the
    real-part order of two adjacent strands emits one letter for the rank
    the pair occupied just before the swap. The crossing is localised by
    bisection (re-evaluating the model between samples) and the sign is read
    there: +1 when the strand that was upper in real part lies above in
    imaginary part at the crossing, -1 otherwise. This convention makes the
    exponent sum of the word coincide with the spectral winding index.

    Raises :class:`DegenerateCrossing` when a crossing has both parts equal
    (an exceptional point) and :class:`UnresolvedCrossing` when two
    crossings cannot be separated.
    """
    bands = trajectory.bands
    tvals = trajectory.t_grid
    n = bands.shape[0]
    scale = trajectory.scale
    evaluate = trajectory.evaluate_raw

    orders = np.lexsort((bands.imag.T, bands.real.T))
    events = np.nonzero(np.any(orders[:-1] != orders[1:], axis=1))[0]

    letters: list[tuple[int, int]] = []

    def resolve(tl: float, el: np.ndarray, tr: float, er: np.ndarray) -> None:
        ol = _rank_order(el)
        orr = _rank_order(er)
        if ol == orr:
            return
        swapped = [p for p in range(n) if ol[p] != orr[p]]
        single = (len(swapped) == 2 and swapped[1] == swapped[0] + 1
                  and ol[swapped[0]] == orr[swapped[1]] and ol[swapped[1]] == orr[swapped[0]])
        if not single:
            if tr - tl < _SUBDIVIDE_FLOOR:
                raise UnresolvedCrossing(
                    f"multiple crossings within dt={tr - tl:.3e} near t={tl:.6f}")
            tm = 0.5 * (tl + tr)
            em = _match_to(el, evaluate(tm))
            resolve(tl, el, tm, em)
            resolve(tm, em, tr, er)
            return

        p = swapped[0]
        lower, upper = ol[p], ol[p + 1]

        def rediff(e: np.ndarray) -> float:
            return float((e[upper] - e[lower]).real)

        dl = rediff(el)
        # guard against a crossing pinned exactly on a sample
        shrink = 0
        while dl == 0.0 and shrink < 8:
            tl = tl + 1e-3 * (tr - tl)
            el = _match_to(el, evaluate(tl))
            dl = rediff(el)
            shrink += 1
        while tr - tl > _BISECTION_WIDTH:
            tm = 0.5 * (tl + tr)
            em = _match_to(el, evaluate(tm))
            dm = rediff(em)
            if dm == 0.0 or (dm > 0) == (dl > 0):
                tl, el, dl = tm, em, dm
            else:
                tr, er = tm, em
        tm = 0.5 * (tl + tr)
        em = _match_to(el, evaluate(tm))
        imdiff = float((em[upper] - em[lower]).imag)
        if abs(imdiff) < 1e-8 * scale:
            raise DegenerateCrossing(
                f"bands {lower + 1} and {upper + 1} coalesce at t={tm:.9f}")
        letters.append((p + 1, 1 if imdiff > 0 else -1))

    for j in events:
        resolve(float(tvals[j]), bands[:, j].copy(), float(tvals[j + 1]), bands[:, j + 1].copy())

    return BraidWord(tuple(letters), n)
