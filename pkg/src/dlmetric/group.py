"""The affine group over the ring, its generating set, words and encodings.

An element is the matrix ``[[prod (t+l_i)^k_i, P], [0, 1]]``, stored as the
exponent vector ``k`` and the canonical form of ``P``.  Words act by right
multiplication, so a word ``s_1 ... s_n`` labels the Cayley-graph path
``1, s_1, s_1 s_2, ...``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ParseError
from .ring import (
    RationalForm,
    RingParams,
    normalize,
    rat_add,
    rat_scale,
    zero,
)


@dataclass(frozen=True, order=True)
class GroupElem:
    k: tuple
    p: RationalForm

    def is_identity(self) -> bool:
        return not self.p.num and not any(self.k)


class Kind(IntEnum):
    UP = 0
    DOWN = 1
    MIXED = 2


@dataclass(frozen=True, order=True)
class Generator:
    """One of Up(i, b), Down(i, b), Mixed(i, j, b); indices are 1-based.

    Field order gives the canonical generator order used for tie-breaking.
    """

    kind: Kind
    i: int
    j: int
    b: int

    @classmethod
    def up(cls, i: int, b: int) -> "Generator":
        return cls(Kind.UP, i, 0, b)

    @classmethod
    def down(cls, i: int, b: int) -> "Generator":
        return cls(Kind.DOWN, i, 0, b)

    @classmethod
    def mixed(cls, i: int, j: int, b: int) -> "Generator":
        return cls(Kind.MIXED, i, j, b)

    def inverse(self, q: int) -> "Generator":
        if self.kind is Kind.UP:
            return Generator.down(self.i, self.b)
        if self.kind is Kind.DOWN:
            return Generator.up(self.i, self.b)
        return Generator.mixed(self.j, self.i, -self.b % q)

    def token(self) -> str:
        if self.kind is Kind.UP:
            return f"u{self.i}:{self.b}"
        if self.kind is Kind.DOWN:
            return f"d{self.i}:{self.b}"
        return f"m{self.i},{self.j}:{self.b}"

    def __str__(self) -> str:
        return self.token()


Word = tuple  # tuple[Generator, ...]


def identity(params: RingParams) -> GroupElem:
    return GroupElem((0,) * (params.d - 1), zero(params))


def multiply(params: RingParams, g: GroupElem, h: GroupElem) -> GroupElem:
    # (a, P)(a', P') = (a a', a P' + P)
    k = tuple(x + y for x, y in zip(g.k, h.k))
    if not h.p.num:
        return GroupElem(k, g.p)
    return GroupElem(k, rat_add(params, rat_scale(params, h.p, g.k), g.p))


def invert(params: RingParams, g: GroupElem) -> GroupElem:
    # (a, P)^-1 = (a^-1, -a^-1 P)
    negk = tuple(-x for x in g.k)
    return GroupElem(negk, rat_scale(params, g.p, negk, -1))


@lru_cache(maxsize=None)
def generators(params: RingParams) -> tuple:
    """S_{d,q} in canonical order: all Up, then all Down, then all Mixed."""
    d, q = params.d, params.q
    ups = [Generator.up(i, b) for i in range(1, d) for b in range(q)]
    downs = [Generator.down(i, b) for i in range(1, d) for b in range(q)]
    mixed = [
        Generator.mixed(i, j, b)
        for i in range(1, d)
        for j in range(1, d)
        if i != j
        for b in range(q)
    ]
    return tuple(ups + downs + mixed)


@lru_cache(maxsize=None)
def generator_elem(params: RingParams, s: Generator) -> GroupElem:
    n = params.d - 1
    unit = [0] * n
    if s.kind is Kind.UP:
        unit[s.i - 1] = 1
        return GroupElem(tuple(unit), normalize(params, (s.b,), (0,) * n))
    if s.kind is Kind.DOWN:
        unit[s.i - 1] = -1
        den = list(unit)
        den[s.i - 1] = 1
        return GroupElem(tuple(unit), normalize(params, (-s.b,), den))
    unit[s.i - 1] = 1
    unit[s.j - 1] = -1
    den = [0] * n
    den[s.j - 1] = 1
    return GroupElem(tuple(unit), normalize(params, (-s.b,), den))


def step(params: RingParams, g: GroupElem, s: Generator) -> GroupElem:
    return multiply(params, g, generator_elem(params, s))


def eval_word(params: RingParams, word: Iterable[Generator]) -> GroupElem:
    g = identity(params)
    for s in word:
        g = step(params, g, s)
    return g


def invert_word(params: RingParams, word: Sequence[Generator]) -> Word:
    return tuple(s.inverse(params.q) for s in reversed(word))


# -- text encodings ----------------------------------------------------------


def elem_to_dict(g: GroupElem) -> dict:
    return {"k": list(g.k), "num": list(g.p.num), "den": list(g.p.den)}


def format_elem(g: GroupElem) -> str:
    return json.dumps(elem_to_dict(g), separators=(",", ":"))


def _int_list(obj, key: str, size: int | None, text: str) -> list[int]:
    val = obj.get(key)
    pos = text.find(f'"{key}"')
    if not isinstance(val, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in val):
        raise ParseError(f"field {key!r} must be a list of integers", pos if pos >= 0 else None)
    if size is not None and len(val) != size:
        raise ParseError(f"field {key!r} must have {size} entries, got {len(val)}", pos)
    return val


def elem_from_dict(params: RingParams, obj: dict, text: str = "") -> GroupElem:
    if not isinstance(obj, dict):
        raise ParseError("element must be a JSON object", 0)
    extra = set(obj) - {"k", "num", "den"}
    if extra:
        raise ParseError(f"unexpected fields {sorted(extra)}", 0)
    n = params.d - 1
    k = _int_list(obj, "k", n, text)
    num = _int_list(obj, "num", None, text)
    den = _int_list(obj, "den", n, text)
    if any(e < 0 for e in den):
        raise ParseError("denominator exponents must be non-negative", text.find('"den"'))
    return GroupElem(tuple(k), normalize(params, num, den))


def parse_elem(params: RingParams, text: str) -> GroupElem:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed element JSON: {exc.msg}", exc.pos) from None
    return elem_from_dict(params, obj, text)


_TOKEN = re.compile(r"(?:([ud])(\d+)|m(\d+),(\d+)):(\d+)\Z")


def parse_generator(params: RingParams, token: str, pos: int = 0) -> Generator:
    m = _TOKEN.match(token)
    if not m:
        raise ParseError(f"bad generator token {token!r}", pos)
    b = int(m.group(5))
    if b >= params.q:
        raise ParseError(f"offset {b} out of range for q={params.q}", pos)
    if m.group(1):
        i = int(m.group(2))
        if not 1 <= i < params.d:
            raise ParseError(f"tree index {i} out of range 1..{params.d - 1}", pos)
        return Generator.up(i, b) if m.group(1) == "u" else Generator.down(i, b)
    i, j = int(m.group(3)), int(m.group(4))
    if not (1 <= i < params.d and 1 <= j < params.d) or i == j:
        raise ParseError(f"bad mixed generator indices {i},{j}", pos)
    return Generator.mixed(i, j, b)


def parse_word(params: RingParams, text: str) -> Word:
    return tuple(parse_generator(params, m.group(), m.start()) for m in re.finditer(r"\S+", text))


def format_word(word: Iterable[Generator]) -> str:
    return " ".join(s.token() for s in word)


def parse_elem_or_word(params: RingParams, text: str) -> GroupElem:
    """Accept either element JSON or a word in generator tokens."""
    if text.lstrip().startswith("{"):
        return parse_elem(params, text)
    return eval_word(params, parse_word(params, text))
