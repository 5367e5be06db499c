"""Symbolic token sequences and the three primitive comparisons built on them.

Every capability of the system (recognition, learning, classification) reduces
to three operations on ordered sequences of opaque tokens: exact equality,
prefix matching, and the suffix left over once the longest common prefix is
removed. Order is significant throughout: "dog bites man" and "man bites dog"
are different patterns.

Patterns are modality-scoped (visual, verbal, ...). Comparing patterns across
modalities is a usage error, never a silent False.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


class PatternError(ValueError):
    """Raised on malformed tokens or cross-modality comparisons."""


@dataclass(frozen=True)
class Pattern:
    """An ordered sequence of symbolic primitives within one modality.

    Tokens are non-empty strings with no whitespace (whitespace is the
    serialization delimiter). The empty pattern is legal; it is a prefix of
    everything.
    """

    modality: str
    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.modality:
            raise PatternError("pattern modality must be non-empty")
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))
        for tok in self.tokens:
            if not tok:
                raise PatternError("pattern tokens must be non-empty")
            if any(ch.isspace() for ch in tok):
                raise PatternError(f"pattern token contains whitespace: {tok!r}")

    def __len__(self) -> int:
        return len(self.tokens)

    def __bool__(self) -> bool:
        return bool(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def to_line(self) -> str:
        """Canonical one-line text form: tokens joined by single spaces."""
        return " ".join(self.tokens)

    @classmethod
    def from_line(cls, modality: str, line: str) -> "Pattern":
        """Inverse of :meth:`to_line`. Round-trips bit-exactly."""
        return cls(modality, tuple(line.split()))


def make_pattern(modality: str, tokens: Iterable[str]) -> Pattern:
    return Pattern(modality, tuple(tokens))


def _require_same_modality(a: Pattern, b: Pattern) -> None:
    if a.modality != b.modality:
        raise PatternError(
            f"modality mismatch: {a.modality!r} vs {b.modality!r}"
        )


def equal(a: Pattern, b: Pattern) -> bool:
    """True iff the two sequences are identical element-wise and in length."""
    _require_same_modality(a, b)
    return a.tokens == b.tokens


def matches(a: Pattern, b: Pattern) -> bool:
    """True iff ``a`` is a (possibly equal) prefix of ``b``.

    The empty pattern matches everything; a longer pattern never matches a
    shorter one.
    """
    _require_same_modality(a, b)
    return b.tokens[: len(a.tokens)] == a.tokens


def common_prefix_length(a: Pattern, b: Pattern) -> int:
    _require_same_modality(a, b)
    n = 0
    for x, y in zip(a.tokens, b.tokens):
        if x != y:
            break
        n += 1
    return n


def difference(a: Pattern, b: Pattern) -> Pattern:
    """``a`` with its longest common prefix with ``b`` removed.

    difference(a, a) is empty; when the patterns share no leading tokens the
    result is ``a`` unchanged.
    """
    k = common_prefix_length(a, b)
    return Pattern(a.modality, a.tokens[k:])


def write_patterns(path, patterns: Iterable[Pattern]) -> None:
    """One pattern per line; modality is carried out-of-band (manifest)."""
    with open(path, "w", encoding="utf-8") as fh:
        for p in patterns:
            fh.write(p.to_line() + "\n")


def read_patterns(path, modality: str) -> list[Pattern]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            out.append(Pattern.from_line(modality, line))
    return out
