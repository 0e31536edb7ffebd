"""Rule-based sentence segmentation for English legal text.

Boundary candidates are terminal punctuation followed by whitespace (or
end of text). Candidates are suppressed by an abbreviation exception
list shipped as a data file, plus rules for initials, line-leading
enumerators, and lowercase continuations. Periods inside numeric dates
("3.2.2019") never produce candidates because no whitespace follows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

TERMINALS = ".?!"
# Closing punctuation absorbed into the sentence after its terminal.
CLOSERS = "\"')]}”’»"
_OPENERS = "\"'([{“‘«"

_INITIALS_RE = re.compile(r"^([A-Za-z]\.)+$")
_ENUMERATOR_RE = re.compile(r"^\(?(?:\d{1,3}|[ivxlc]{1,6}|[IVXLC]{1,6}|[A-Za-z])\.$")


@dataclass
class Sentence:
    index: int
    text: str
    char_span: tuple[int, int]


def _load_abbreviations() -> frozenset[str]:
    raw = resources.files(__package__).joinpath("data/abbreviations.txt").read_text("utf-8")
    entries = set()
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line.lower())
    return frozenset(entries)


ABBREVIATIONS = _load_abbreviations()


def _token_before(text: str, period_pos: int) -> tuple[str, int]:
    """The whitespace-delimited token ending at the period, and its start offset."""
    start = period_pos
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    token = text[start:period_pos + 1]
    stripped = token.lstrip(_OPENERS)
    return stripped, start + (len(token) - len(stripped))


def _is_boundary(text: str, term_pos: int, next_pos: int,
                 abbreviations: frozenset[str]) -> bool:
    if text[term_pos] in "?!":
        return True
    token, tok_start = _token_before(text, term_pos)
    if token.lower() in abbreviations:
        return False
    if _INITIALS_RE.match(token):
        return False
    at_line_start = tok_start == 0 or text[tok_start - 1] == "\n"
    if at_line_start and _ENUMERATOR_RE.match(token):
        return False
    # A lowercase continuation almost always signals an unlisted abbreviation.
    j = next_pos
    while j < len(text) and text[j].isspace():
        j += 1
    if j < len(text) and text[j].islower():
        return False
    return True


def segment(text: str, extra_abbreviations: tuple[str, ...] = ()) -> list[Sentence]:
    """Split a document into sentences with exact character spans.

    Spans cover every non-whitespace character; only whitespace separates
    them, so slicing the source by spans reconstructs the document.
    """
    if not text or not text.strip():
        return []
    abbreviations = ABBREVIATIONS
    if extra_abbreviations:
        abbreviations = abbreviations | frozenset(a.lower() for a in extra_abbreviations)

    boundaries: list[int] = []
    pos, n = 0, len(text)
    while pos < n:
        if text[pos] not in TERMINALS:
            pos += 1
            continue
        end = pos
        while end + 1 < n and text[end + 1] in TERMINALS:
            end += 1
        while end + 1 < n and text[end + 1] in CLOSERS:
            end += 1
        nxt = end + 1
        if nxt >= n or text[nxt].isspace():
            if _is_boundary(text, pos, nxt, abbreviations):
                boundaries.append(nxt)
        pos = nxt

    sentences: list[Sentence] = []
    seg_start = 0
    for cut in boundaries + [n]:
        if cut <= seg_start:
            continue
        chunk = text[seg_start:cut]
        lead = len(chunk) - len(chunk.lstrip())
        trail = len(chunk) - len(chunk.rstrip())
        if lead + trail < len(chunk):
            start = seg_start + lead
            end = cut - trail
            sentences.append(Sentence(index=len(sentences),
                                      text=text[start:end],
                                      char_span=(start, end)))
        seg_start = cut
    return sentences
