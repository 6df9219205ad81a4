"""Deterministic reference classifier for visual-guidance types.

Providers assign each step's visual type themselves; this lexicon-based
classifier re-derives the type from the instruction text alone so provider
drift can be flagged. The decision order is fixed: a waiting step is type 5,
an external-tool step is type 4, a bare-hand gesture is type 3, a component
movement is type 2, and anything else defaults to type 1. Mismatches against
a provider-assigned type are reported, never silently overruled.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .types import VisualType

_SECTION_RE = re.compile(r"^\[(\w+)\]$")

CATEGORIES = ("waiting", "tool", "gesture", "movement")

_RULE_TYPE = {
    "waiting": VisualType.WIDGET,
    "tool": VisualType.TOOL,
    "gesture": VisualType.HAND_GESTURE,
    "movement": VisualType.MOVEMENT,
}


@dataclass(frozen=True)
class ClassifierLexicons:
    """Word lists per rule category; token order decides trace reporting."""

    waiting: tuple[str, ...]
    tool: tuple[str, ...]
    gesture: tuple[str, ...]
    movement: tuple[str, ...]

    def tokens(self, category: str) -> tuple[str, ...]:
        return getattr(self, category)


def parse_lexicons(text: str) -> ClassifierLexicons:
    """Parse the lexicon config format: [category] headers, one token per line."""
    sections: dict[str, list[str]] = {c: [] for c in CATEGORIES}
    current: list[str] | None = None
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION_RE.match(line)
        if m:
            name = m.group(1).lower()
            if name not in sections:
                raise ValueError(f"unknown lexicon category [{name}]")
            current = sections[name]
        elif current is None:
            raise ValueError(f"token {line!r} outside any [category] section")
        else:
            current.append(line.lower())
    return ClassifierLexicons(**{c: tuple(v) for c, v in sections.items()})


def load_lexicons(path: str | None = None) -> ClassifierLexicons:
    """Load lexicons from a config file, or the shipped defaults."""
    if path is None:
        text = resources.files("arguide.plan").joinpath("data/lexicons.txt").read_text()
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    return parse_lexicons(text)


_default_lexicons: ClassifierLexicons | None = None


def default_lexicons() -> ClassifierLexicons:
    global _default_lexicons
    if _default_lexicons is None:
        _default_lexicons = load_lexicons()
    return _default_lexicons


@dataclass(frozen=True)
class Classification:
    """Classifier verdict plus the rule/token trace that produced it."""

    visual_type: VisualType
    rule: str
    token: str | None


def _find_token(instruction_lower: str, tokens: tuple[str, ...]) -> str | None:
    for token in tokens:
        pattern = r"\b" + re.escape(token).replace(r"\ ", r"\s+") + r"\b"
        if re.search(pattern, instruction_lower):
            return token
    return None


def classify_visual_type(
    instruction: str, lexicons: ClassifierLexicons | None = None
) -> Classification:
    """Classify an instruction, returning the first rule that matches.

    Checks run in the fixed order waiting, tool, gesture, movement; the
    default is type 1 (highlight) with no matched token.
    """
    if not instruction.strip():
        raise ValueError("instruction is blank")
    if lexicons is None:
        lexicons = default_lexicons()
    lowered = instruction.lower()
    for category in CATEGORIES:
        token = _find_token(lowered, lexicons.tokens(category))
        if token is not None:
            return Classification(_RULE_TYPE[category], category, token)
    return Classification(VisualType.HIGHLIGHT, "default", None)
