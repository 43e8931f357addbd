"""Free-group words, simple commutators, and evaluation in group models.

Words are stored unreduced as sequences of signed 1-based generator
indices: letter ``+i`` is x_i, letter ``-i`` is x_i^{-1}.  The length of a
word counts letters before any free reduction, which is the convention
the commutator-length formula is stated for.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

from .errors import IndexOutOfRange
from .groups import GroupModel


@dataclass(frozen=True)
class Word:
    letters: Tuple[int, ...]

    def __post_init__(self):
        if any(v == 0 for v in self.letters):
            raise ValueError("letter indices are signed and nonzero")

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-v for v in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def max_index(self) -> int:
        return max((abs(v) for v in self.letters), default=0)


def free_reduce(word: Word) -> Word:
    stack: List[int] = []
    for v in word.letters:
        if stack and stack[-1] == -v:
            stack.pop()
        else:
            stack.append(v)
    return Word(tuple(stack))


def commutator_word_length(k: int) -> int:
    """Unreduced letter count of the weight-k simple commutator: 3*2^(k-1) - 2."""
    if k < 1:
        raise ValueError("weight must be positive")
    return 3 * 2 ** (k - 1) - 2


def simple_commutator_word(k: int) -> Word:
    """[x_1] = x_1 and [w, x_k] = w^{-1} x_k^{-1} w x_k, kept unreduced."""
    if k < 1:
        raise ValueError("weight must be positive")
    w = Word((1,))
    for i in range(2, k + 1):
        xi = Word((i,))
        w = w.inverse() * xi.inverse() * w * xi
    return w


def evaluate_word(model: GroupModel, word: Word, assignment: Sequence) -> object:
    """Left-to-right product of the assigned elements and their inverses."""
    out = model.identity
    for v in word.letters:
        idx = abs(v) - 1
        if idx >= len(assignment):
            raise IndexOutOfRange(f"letter x_{abs(v)} has no assigned element")
        g = assignment[idx]
        out = model.compose(out, g if v > 0 else model.inverse(g))
    return out


def commutator(model: GroupModel, g, h):
    """g^{-1} h^{-1} g h evaluated exactly."""
    return model.compose(
        model.compose(model.inverse(g), model.inverse(h)),
        model.compose(g, h),
    )


def simple_commutator(model: GroupModel, elements: Sequence):
    """[g_1, ..., g_k] by left-nested commutators."""
    if not elements:
        raise ValueError("need at least one element")
    out = elements[0]
    for g in elements[1:]:
        out = commutator(model, out, g)
    return out


def parse_word(text: str) -> Word:
    """Parse letters like ``x3`` (generator) / ``X3`` (inverse), whitespace-separated."""
    letters = []
    for tok in text.split():
        if len(tok) < 2 or tok[0] not in "xX" or not tok[1:].isdigit():
            raise ValueError(f"bad word letter {tok!r}; expected e.g. 'x2' or 'X2'")
        idx = int(tok[1:])
        if idx < 1:
            raise ValueError("generator indices are 1-based")
        letters.append(idx if tok[0] == "x" else -idx)
    return Word(tuple(letters))


def format_word(word: Word) -> str:
    return " ".join(f"x{v}" if v > 0 else f"X{-v}" for v in word.letters)
