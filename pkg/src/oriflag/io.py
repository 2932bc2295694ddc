"""Text formats: matrices, signed-permutation arguments, parabolic type specs."""

from __future__ import annotations

import json
from fractions import Fraction

from .bruhat import _mbar_theta, make_parabolic_type
from .weyl import GroupContext, antidiag, decode, diag, mbar_elements

__all__ = ["parse_number", "parse_matrices", "read_matrices", "format_matrix",
           "parse_signs", "parse_element", "parse_type"]


def parse_number(tok: str):
    """int, then Fraction for 'p/q', then float."""
    try:
        return int(tok)
    except ValueError:
        pass
    if "/" in tok:
        return Fraction(tok)
    return float(tok)


def parse_matrices(text: str) -> list[list[list]]:
    """Whitespace rows, one matrix per blank-line separated block, '#' comments.
    A JSON document ``{"rows": ...}`` (or a list of them) is accepted too."""
    stripped = text.strip()
    if stripped.startswith("{") or stripped.startswith("["):
        doc = json.loads(stripped)
        docs = doc if isinstance(doc, list) else [doc]
        return [[[parse_number(str(x)) for x in row] for row in d["rows"]] for d in docs]
    blocks, cur = [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append([parse_number(t) for t in line.split()])
    if cur:
        blocks.append(cur)
    for b in blocks:
        if any(len(r) != len(b) for r in b):
            raise ValueError(f"matrix block is not square: {len(b)} rows of lengths {[len(r) for r in b]}")
    if not blocks:
        raise ValueError("no matrix found")
    return blocks


def read_matrices(path: str) -> list[list[list]]:
    with open(path, encoding="utf-8") as fh:
        return parse_matrices(fh.read())


def format_matrix(rows) -> str:
    cells = [[str(x) for x in row] for row in rows]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def parse_signs(text: str) -> list[int]:
    """'+,-,+' or '+-+' or '1,-1,1' -> [1, -1, 1]."""
    text = text.strip()
    if "," in text:
        parts = [p.strip() for p in text.split(",")]
    else:
        parts = list(text)
    out = []
    for p in parts:
        if p in ("+", "+1", "1"):
            out.append(1)
        elif p in ("-", "-1"):
            out.append(-1)
        else:
            raise ValueError(f"bad sign {p!r} in {text!r}")
    return out


def parse_element(text: str, projective: bool = False):
    """``antidiag:+,-,+``, ``diag:-,-,+`` or signed one-line notation ``+2 -1 +3``."""
    if text.startswith("antidiag:"):
        return antidiag(parse_signs(text[len("antidiag:"):]), projective)
    if text.startswith("diag:"):
        return diag(parse_signs(text[len("diag:"):]), projective)
    return decode(text, projective)


def parse_type(ctx: GroupContext, text: str | None, extra=()):
    """``theta=1,3;E=-+-/+--`` with E given as '/'-separated diagonal sign
    strings.  ``E=mbar`` takes all of M-bar; omitting E takes the smallest
    allowed group.  ``extra`` elements are added to E."""
    theta: list[int] = []
    E = set(extra)
    full = False
    if text:
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            key, _, val = part.partition("=")
            key = key.strip()
            if key == "theta":
                theta = [int(x) for x in val.split(",") if x.strip()]
            elif key == "E":
                if val.strip() == "mbar":
                    full = True
                else:
                    for sig in val.split("/"):
                        if sig.strip():
                            E.add(diag(parse_signs(sig), ctx.projective))
            else:
                raise ValueError(f"unknown key {key!r} in type spec {text!r}")
    if full:
        E |= set(mbar_elements(ctx))
    E |= set(_mbar_theta(ctx, theta))
    # close E under products
    changed = True
    while changed:
        new = {a * b for a in E for b in E} - E
        changed = bool(new)
        E |= new
    return make_parabolic_type(ctx, theta, E)
