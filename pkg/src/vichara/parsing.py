"""Tolerant parsing of model output.

Models routinely violate the "strict JSON" and fixed-format instructions:
they wrap output in code fences, add prose, leave trailing commas, emit
smart quotes, or break string literals across lines. The repair ladder
here applies fixes cumulatively, in a fixed order, until a parse
succeeds; the applied steps are kept for error reporting.
"""

from __future__ import annotations

import json
import re


class ParseError(ValueError):
    def __init__(self, message: str, raw: str = "", trace: list[str] | None = None):
        super().__init__(message)
        self.raw = raw
        self.trace = trace or []


_FENCE_RE = re.compile(r"```[a-zA-Z0-9_-]*\n?|```")
_TRAILING_COMMA_RE = re.compile(r",(\s*[}\]])")
_SMART_QUOTES = {
    "“": '"', "”": '"', "„": '"', "″": '"',
    "‘": "'", "’": "'", "‚": "'",
}


def _strip_to_payload(text: str) -> str:
    """Drop code fences and any prose around the outermost {...} or [...]."""
    cleaned = _FENCE_RE.sub("", text)
    starts = [i for i in (cleaned.find("{"), cleaned.find("[")) if i != -1]
    if not starts:
        return cleaned.strip()
    start = min(starts)
    opener = cleaned[start]
    closer = "}" if opener == "{" else "]"
    end = cleaned.rfind(closer)
    if end <= start:
        return cleaned.strip()
    return cleaned[start:end + 1]


def _drop_trailing_commas(text: str) -> str:
    prev = None
    while prev != text:
        prev = text
        text = _TRAILING_COMMA_RE.sub(r"\1", text)
    return text


def _normalize_quotes(text: str) -> str:
    for smart, plain in _SMART_QUOTES.items():
        text = text.replace(smart, plain)
    return text


def _escape_newlines_in_strings(text: str) -> str:
    out = []
    in_string = False
    escaped = False
    for ch in text:
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            elif ch == "\n":
                out.append("\\n")
                continue
            elif ch == "\r":
                out.append("\\r")
                continue
            elif ch == "\t":
                out.append("\\t")
                continue
        elif ch == '"':
            in_string = True
        out.append(ch)
    return "".join(out)


_REPAIRS = (
    ("strip_fences_and_prose", _strip_to_payload),
    ("drop_trailing_commas", _drop_trailing_commas),
    ("normalize_smart_quotes", _normalize_quotes),
    ("escape_raw_newlines", _escape_newlines_in_strings),
)


def parse_llm_json_with_trace(text: str) -> tuple[object, list[str]]:
    """Parse a JSON value out of a raw model response.

    Tries a strict parse first, then applies the repair ladder
    cumulatively, returning the value and the repairs that were needed.
    Raises ParseError with the repair trace when every rung fails.
    """
    trace: list[str] = []
    candidate = text
    try:
        return json.loads(candidate), trace
    except (json.JSONDecodeError, ValueError):
        pass
    for name, fix in _REPAIRS:
        candidate = fix(candidate)
        trace.append(name)
        try:
            return json.loads(candidate), list(trace)
        except (json.JSONDecodeError, ValueError):
            continue
    raise ParseError(
        f"response is not JSON after repairs {trace}", raw=text, trace=trace)


def parse_llm_json(text: str):
    return parse_llm_json_with_trace(text)[0]


_PREDICTION_RE = re.compile(r"prediction\b[\s:*`'\"=–—-]*([01])\b", re.IGNORECASE)


def parse_prediction(text: str) -> int:
    """Extract the 0/1 verdict; the last "Prediction: <digit>" occurrence wins."""
    matches = _PREDICTION_RE.findall(text)
    if not matches:
        raise ParseError("no 'Prediction: <0 or 1>' pattern found", raw=text)
    return int(matches[-1])


# Canonical section headers of the structured explanation, in order,
# mapped to Explanation field names.
EXPLANATION_HEADERS = (
    ("Facts of the Case", "facts"),
    ("Legal Issue(s) Presented", "issues"),
    ("Applicable Law and Precedents", "law_and_precedents"),
    ("Analysis / Reasoning", "reasoning"),
    ("Predicted Conclusion", "conclusion"),
)


def _header_pattern(header: str) -> re.Pattern:
    # Tolerates markdown decoration ("### ", "**"), list numbering, spacing
    # variations around "/", and a trailing colon.
    words = [re.escape(w) for w in re.split(r"[\s/]+", header) if w]
    core = r"[\s/]*".join(words).replace(r"\(s\)", r"\(?s\)?")
    return re.compile(
        r"^[ \t>#*\d.)-]*" + core + r"[ \t]*:?[ \t]*\**[ \t]*$",
        re.IGNORECASE | re.MULTILINE)


_HEADER_PATTERNS = [(field, _header_pattern(h)) for h, field in EXPLANATION_HEADERS]


def parse_explanation_sections(text: str) -> dict[str, str]:
    """Split a response into the five explanation sections.

    Header matching is case-insensitive and tolerant of numbering and
    markdown decoration. Raises ParseError naming any missing sections.
    """
    found: list[tuple[int, int, str]] = []
    missing = []
    for field, pattern in _HEADER_PATTERNS:
        m = pattern.search(text)
        if m is None:
            missing.append(field)
        else:
            found.append((m.start(), m.end(), field))
    if missing:
        raise ParseError(f"missing explanation sections: {missing}", raw=text)
    found.sort()
    sections: dict[str, str] = {}
    for i, (start, end, field) in enumerate(found):
        stop = found[i + 1][0] if i + 1 < len(found) else len(text)
        body = text[end:stop].strip().strip("-* \n")
        sections[field] = body.strip()
    empty = [f for f, body in sections.items() if not body]
    if empty:
        raise ParseError(f"empty explanation sections: {empty}", raw=text)
    return sections
