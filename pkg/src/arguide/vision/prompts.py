"""Prompt templates for the four provider query kinds.

Templates are data files with ``{{slot}}`` markers; rendering substitutes
slot values verbatim and is byte-stable across runs.
"""

from __future__ import annotations

import re
from importlib import resources

from .types import MissingSlot

TEMPLATE_IDS = ("plan", "bbox", "translation", "rotation")

_SLOT_RE = re.compile(r"\{\{([a-z_]+)\}\}")

_cache: dict[str, str] = {}


def template_text(template_id: str) -> str:
    if template_id not in TEMPLATE_IDS:
        raise KeyError(f"unknown template {template_id!r}")
    if template_id not in _cache:
        path = resources.files("arguide.vision").joinpath(f"templates/{template_id}.txt")
        _cache[template_id] = path.read_text()
    return _cache[template_id]


def required_slots(template_id: str) -> frozenset[str]:
    return frozenset(_SLOT_RE.findall(template_text(template_id)))


def render_prompt(template_id: str, slots: dict[str, str] | None = None) -> str:
    """Substitute slot values into a template.

    Raises MissingSlot when the template references a slot that is absent
    (or blank) in ``slots``; extra slots are ignored.
    """
    slots = slots or {}
    text = template_text(template_id)
    needed = required_slots(template_id)
    for name in sorted(needed):
        value = slots.get(name)
        if value is None or not str(value).strip():
            raise MissingSlot(f"template {template_id!r} needs slot {name!r}")
        text = text.replace("{{" + name + "}}", str(value))
    return text
