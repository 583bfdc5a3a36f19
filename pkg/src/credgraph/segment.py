"""Sentence segmentation heuristic for decomposing long-form text.

Splits on terminal punctuation (optionally followed by closing quotes or
brackets) followed by whitespace and an uppercase start, then keeps only
sentences whose token count is plausible for a factual statement (5 to 60
tokens). Deliberately simple and fully pinned by tests; anything smarter
belongs in a dedicated extraction service.
"""

from __future__ import annotations

import re

MIN_TOKENS = 5
MAX_TOKENS = 60

_BOUNDARY = re.compile(r"[.!?…][\"')\]]*(\s+)(?=[\"'(\[]*[A-Z0-9])")


def split_sentences(text: str) -> list:
    """All sentence candidates in reading order, without length filtering."""
    if not text or not text.strip():
        return []
    parts = []
    for block in text.splitlines():
        block = block.strip()
        if not block:
            continue
        pos = 0
        for boundary in _BOUNDARY.finditer(block):
            parts.append(block[pos:boundary.start(1)])
            pos = boundary.end(1)
        tail = block[pos:].strip()
        if tail:
            parts.append(tail)
    return parts


def _dedupe_key(sentence: str) -> str:
    return " ".join(sentence.split()).lower().rstrip(".!?…")


def reviewable_sentences(*texts) -> list:
    """Unique sentences of 5-60 tokens across the given texts, in order.

    Uniqueness ignores case and terminal punctuation so a title repeated as
    the first body sentence is reviewed once.
    """
    seen = set()
    out = []
    for text in texts:
        if not text:
            continue
        for sentence in split_sentences(text):
            n = len(sentence.split())
            key = _dedupe_key(sentence)
            if MIN_TOKENS <= n <= MAX_TOKENS and key not in seen:
                seen.add(key)
                out.append(sentence)
    return out
