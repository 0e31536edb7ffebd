"""Stage prompt templates and placeholder rendering.

The five template bodies ship as data files next to this module; their
bytes are significant and guarded by digests in the test suite. Template
syntax: ``{name}`` is a placeholder, ``{{`` / ``}}`` are escaped literal
braces. Replacement is literal and single-pass, so braces inside bound
values are never re-expanded.
"""

from __future__ import annotations

import hashlib
import re
from importlib import resources

STAGES = ("context", "decision_points", "ruling", "prediction", "explanation")

_PLACEHOLDER_RE = re.compile(r"\{([a-z_]+)\}")


class PromptError(ValueError):
    pass


def _load_body(stage: str) -> str:
    if stage not in STAGES:
        raise PromptError(f"unknown prompt stage {stage!r}; valid: {list(STAGES)}")
    data = resources.files(__package__).joinpath(f"{stage}.txt").read_bytes()
    return data.decode("utf-8")


_BODIES = {stage: _load_body(stage) for stage in STAGES}


def template_body(stage: str) -> str:
    if stage not in _BODIES:
        raise PromptError(f"unknown prompt stage {stage!r}; valid: {list(STAGES)}")
    return _BODIES[stage]


def template_digest(stage: str) -> str:
    """Hex digest of the exact template bytes; recorded in run manifests."""
    return hashlib.sha256(template_body(stage).encode("utf-8")).hexdigest()


def all_digests() -> dict[str, str]:
    return {stage: template_digest(stage) for stage in STAGES}


def placeholders(stage: str) -> set[str]:
    """Placeholder names appearing in the template body."""
    body = template_body(stage)
    # Drop escaped literal braces before scanning so {{...}} blocks are not
    # mistaken for placeholders.
    stripped = body.replace("{{", "").replace("}}", "")
    return set(_PLACEHOLDER_RE.findall(stripped))


def render(stage: str, bindings: dict[str, str]) -> str:
    """Render a stage template over its bindings.

    Every placeholder must be bound and no extra bindings are accepted;
    both conditions fail loudly so prompt drift cannot pass silently.
    """
    body = template_body(stage)
    required = placeholders(stage)
    missing = required - set(bindings)
    if missing:
        raise PromptError(f"stage {stage!r}: missing binding for {sorted(missing)}")
    extra = set(bindings) - required
    if extra:
        raise PromptError(f"stage {stage!r}: unknown binding {sorted(extra)}")

    out: list[str] = []
    i, n = 0, len(body)
    while i < n:
        ch = body[i]
        if ch == "{":
            if body.startswith("{{", i):
                out.append("{")
                i += 2
                continue
            m = _PLACEHOLDER_RE.match(body, i)
            if m and m.group(1) in required:
                out.append(str(bindings[m.group(1)]))
                i = m.end()
                continue
            out.append(ch)
            i += 1
        elif ch == "}":
            if body.startswith("}}", i):
                out.append("}")
                i += 2
                continue
            out.append(ch)
            i += 1
        else:
            out.append(ch)
            i += 1
    return "".join(out)
