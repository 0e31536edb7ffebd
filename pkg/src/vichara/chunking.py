"""Split case documents into prompt-sized segments.

Explicit bullet-point lists become one chunk per item (the enumerator
stays with its item). Remaining prose is packed greedily into
sentence-aligned windows of at most ``token_limit`` whitespace tokens;
only a single oversized sentence may exceed the limit. Chunks partition
the document: every non-whitespace character lands in exactly one chunk.
"""

from __future__ import annotations

import re

from .models import Chunk
from .textprep import Sentence

DEFAULT_TOKEN_LIMIT = 1000

# Line-leading enumerators: "1." / "12)" / "(a)" / "(iv)" / "i)" / "a." / bullets.
BULLET_LINE_RE = re.compile(
    r"^[ \t]*(?:\(\w{1,4}\)|\d{1,3}[.)]|[a-zA-Z][.)]|[ivxlcIVXLC]{1,6}[.)]|[•‣●*-])[ \t]+\S"
)

MIN_BULLET_RUN = 2


def _token_count(text: str) -> int:
    return len(text.split())


def _bullet_line_spans(text: str, min_run: int = MIN_BULLET_RUN) -> list[tuple[int, int]]:
    """Char spans of bullet items, honoring the minimum run length.

    Runs may be separated by blank lines; any other line breaks the run.
    """
    lines: list[tuple[int, int, str]] = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.rstrip("\n")
        lines.append((offset, offset + len(body), body))
        offset += len(line)

    spans: list[tuple[int, int]] = []
    run: list[tuple[int, int]] = []

    def flush():
        nonlocal run
        if len(run) >= min_run:
            spans.extend(run)
        run = []

    for start, end, body in lines:
        if BULLET_LINE_RE.match(body):
            run.append((start, end))
        elif body.strip():
            flush()
    flush()
    return spans


def chunk_document(text: str, sentences: list[Sentence],
                   token_limit: int = DEFAULT_TOKEN_LIMIT,
                   min_bullet_run: int = MIN_BULLET_RUN) -> list[Chunk]:
    """Chunk a document given its sentence segmentation."""
    if token_limit < 1:
        raise ValueError(f"token_limit must be >= 1, got {token_limit}")
    if not sentences:
        return []

    bullet_spans = _bullet_line_spans(text, min_bullet_run)

    def bullet_slot(sentence: Sentence) -> int | None:
        for i, (start, end) in enumerate(bullet_spans):
            if start <= sentence.char_span[0] < end:
                return i
        return None

    # Group consecutive sentences into bullet items or prose runs.
    groups: list[tuple[str, list[Sentence]]] = []
    for s in sentences:
        slot = bullet_slot(s)
        kind = ("bullet", slot) if slot is not None else ("prose", None)
        if groups and groups[-1][0] == kind:
            groups[-1][1].append(s)
        else:
            groups.append((kind, [s]))

    chunks: list[Chunk] = []

    def emit(members: list[Sentence], source: str):
        start = members[0].char_span[0]
        end = members[-1].char_span[1]
        body = text[start:end]
        chunks.append(Chunk(index=len(chunks), text=body,
                            source=source, token_count=_token_count(body)))

    for (kind, _), members in groups:
        if kind == "bullet":
            emit(members, "bullet_group")
            continue
        window: list[Sentence] = []
        window_tokens = 0
        for s in members:
            tokens = _token_count(s.text)
            if window and window_tokens + tokens > token_limit:
                emit(window, "token_window")
                window, window_tokens = [], 0
            window.append(s)
            window_tokens += tokens
            if tokens > token_limit:
                # A single oversized sentence stands alone.
                emit(window, "token_window")
                window, window_tokens = [], 0
        if window:
            emit(window, "token_window")
    return chunks
