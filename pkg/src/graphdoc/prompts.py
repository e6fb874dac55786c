"""Prompt templates shipped as text assets, rendered by simple interpolation."""
from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

_PLACEHOLDER = re.compile(r"\{([a-zA-Z_][a-zA-Z0-9_]*)\}")

TEMPLATE_NAMES = ("relevance", "global_filter", "testgen", "codegen", "refine")


class TemplateError(Exception):
    """Template missing, or rendering left a placeholder unfilled."""


@lru_cache(maxsize=None)
def template_text(name: str) -> str:
    if name not in TEMPLATE_NAMES:
        raise TemplateError(f"unknown template: {name!r}")
    ref = resources.files("graphdoc").joinpath("assets", "prompts", f"{name}.txt")
    return ref.read_text(encoding="utf-8")


def render(name: str, **values) -> str:
    """Fill {placeholders} in a template. Values are inserted verbatim and
    never re-scanned, so braces inside values are safe."""
    text = template_text(name)
    missing = []

    def sub(match):
        key = match.group(1)
        if key in values:
            return str(values[key])
        missing.append(key)
        return match.group(0)

    rendered = _PLACEHOLDER.sub(sub, text)
    if missing:
        raise TemplateError(f"template {name!r} missing values for: {sorted(set(missing))}")
    return rendered
