"""Four-valued qualitative sign domain and its two combination operators.

The domain is {+, -, 0, ?}: Plus and Minus are known directions of
influence, Zero is known absence of influence, Question is unknown.
Signs combine by chaining along a trail (product) and by merging
parallel trails (sum).
"""

from __future__ import annotations

import enum

from .errors import ParseError


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    ZERO = "0"
    QUESTION = "?"

    def __str__(self):
        return self.value

    @classmethod
    def from_str(cls, s: str) -> "Sign":
        for member in cls:
            if member.value == s:
                return member
        raise ParseError(f"not a sign: {s!r} (expected one of '+', '-', '0', '?')")


def sign_product(a: Sign, b: Sign) -> Sign:
    """Chaining operator: the sign of a two-step influence a-then-b.

    Zero absorbs (no influence through a severed link), Question
    propagates, and Plus/Minus multiply like signs of real numbers.
    """
    if a is Sign.ZERO or b is Sign.ZERO:
        return Sign.ZERO
    if a is Sign.QUESTION or b is Sign.QUESTION:
        return Sign.QUESTION
    return Sign.PLUS if a is b else Sign.MINUS


def sign_sum(a: Sign, b: Sign) -> Sign:
    """Parallel-combination operator: merging two trails' contributions.

    Zero is the identity, Question absorbs, and conflicting directions
    (+ with -) merge to Question.
    """
    if a is Sign.ZERO:
        return b
    if b is Sign.ZERO:
        return a
    if a is Sign.QUESTION or b is Sign.QUESTION:
        return Sign.QUESTION
    return a if a is b else Sign.QUESTION
