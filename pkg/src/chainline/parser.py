"""Textual feature-model format.

Grammar (UTF-8, LF newlines, `#` comments to end of line):

    model       := "model" NAME block constraint*
    block       := "{" entry* "}"
    entry       := kind NAME ["abstract"] [block]
    kind        := "mandatory" | "optional" | "or" | "xor" | "member"
    constraint  := "constraint" NAME ("=>" | "<=>") NAME

The NAME after "model" is the root feature. An "or"/"xor" entry declares a
feature that carries that group decomposition and is a mandatory child of its
parent; all of its children must be "member" entries, and "member" entries may
appear nowhere else. A group that should be de-selectable is wrapped in an
optional parent feature.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .model import (
    ConstraintOp,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    GroupKind,
    ParentLink,
)

KEYWORDS = {"model", "mandatory", "optional", "or", "xor", "member", "abstract", "constraint"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<iff><=>)
  | (?P<implies>=>)
  | (?P<lbrace>\{)
  | (?P<rbrace>\})
    """,
    re.VERBOSE,
)

_ENTRY_KINDS = {"mandatory", "optional", "or", "xor", "member"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        assert kind is not None
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, m.group(), line, m.start() - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.seen_names: set[str] = set()

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column)

    def expect_keyword(self, word: str) -> _Token:
        tok = self.advance()
        if tok.kind != "name" or tok.text != word:
            raise self.fail(f"expected '{word}', found {tok.text!r}", tok)
        return tok

    def expect_name(self) -> _Token:
        tok = self.advance()
        if tok.kind != "name":
            raise self.fail(f"expected a feature name, found {tok.text!r}", tok)
        if tok.text in KEYWORDS:
            raise self.fail(f"'{tok.text}' is a reserved word", tok)
        return tok

    def declare(self, tok: _Token) -> str:
        if tok.text in self.seen_names:
            raise self.fail(f"duplicate feature name '{tok.text}'", tok)
        self.seen_names.add(tok.text)
        return tok.text

    def parse_model(self) -> FeatureModel:
        self.expect_keyword("model")
        root_tok = self.expect_name()
        root_name = self.declare(root_tok)
        children = self.parse_block(inside_group=False)
        root = Feature(name=root_name, link=ParentLink.ROOT, children=tuple(children))
        constraints = []
        while self.peek().kind != "eof":
            constraints.append(self.parse_constraint())
        eof = self.advance()
        if eof.kind != "eof":
            raise self.fail("trailing input", eof)
        return FeatureModel(name=root_name, root=root, constraints=tuple(constraints))

    def parse_block(self, inside_group: bool) -> list[Feature]:
        tok = self.advance()
        if tok.kind != "lbrace":
            raise self.fail(f"expected '{{', found {tok.text!r}", tok)
        entries: list[Feature] = []
        while True:
            tok = self.peek()
            if tok.kind == "rbrace":
                self.advance()
                return entries
            if tok.kind == "eof":
                raise self.fail("unexpected end of input, missing '}'", tok)
            entries.append(self.parse_entry(inside_group))

    def parse_entry(self, inside_group: bool) -> Feature:
        kind_tok = self.advance()
        if kind_tok.kind != "name" or kind_tok.text not in _ENTRY_KINDS:
            raise self.fail(
                f"expected one of {sorted(_ENTRY_KINDS)}, found {kind_tok.text!r}", kind_tok
            )
        kind = kind_tok.text
        if kind == "member" and not inside_group:
            raise self.fail("'member' entries are only allowed inside or/xor groups", kind_tok)
        if kind != "member" and inside_group:
            raise self.fail(f"group blocks may only contain 'member' entries, found '{kind}'", kind_tok)
        name_tok = self.expect_name()
        name = self.declare(name_tok)
        abstract = False
        if self.peek().kind == "name" and self.peek().text == "abstract":
            self.advance()
            abstract = True
        group = GroupKind(kind) if kind in ("or", "xor") else None
        children: list[Feature] = []
        if self.peek().kind == "lbrace":
            children = self.parse_block(inside_group=group is not None)
        if group is not None and len(children) < 2:
            raise self.fail(
                f"{kind}-group '{name}' must declare at least 2 members", name_tok
            )
        link = {
            "mandatory": ParentLink.MANDATORY,
            "optional": ParentLink.OPTIONAL,
            "or": ParentLink.MANDATORY,
            "xor": ParentLink.MANDATORY,
            "member": ParentLink.GROUP_MEMBER,
        }[kind]
        return Feature(
            name=name, link=link, abstract=abstract, group=group, children=tuple(children)
        )

    def parse_constraint(self) -> CrossTreeConstraint:
        self.expect_keyword("constraint")
        lhs = self.expect_name()
        op_tok = self.advance()
        if op_tok.kind == "iff":
            op = ConstraintOp.IFF
        elif op_tok.kind == "implies":
            op = ConstraintOp.IMPLIES
        else:
            raise self.fail(f"expected '=>' or '<=>', found {op_tok.text!r}", op_tok)
        rhs = self.expect_name()
        if lhs.text == rhs.text:
            raise self.fail("constraint relates a feature to itself", rhs)
        for tok in (lhs, rhs):
            if tok.text not in self.seen_names:
                raise self.fail(f"constraint references unknown feature '{tok.text}'", tok)
        return CrossTreeConstraint(lhs.text, op, rhs.text)


def parse_model(text: str) -> FeatureModel:
    return _Parser(text).parse_model()


def _entry_kind(feature: Feature) -> str:
    if feature.group is not None:
        return feature.group.value
    return {
        ParentLink.MANDATORY: "mandatory",
        ParentLink.OPTIONAL: "optional",
        ParentLink.GROUP_MEMBER: "member",
    }[feature.link]


def serialize_model(model: FeatureModel) -> str:
    """Emit grammar text that parses back to a structurally equal model."""
    lines: list[str] = []

    def emit(feature: Feature, depth: int) -> None:
        indent = "  " * depth
        if feature.link is ParentLink.ROOT:
            head = f"model {feature.name}"
        else:
            if feature.group is not None and feature.link is ParentLink.GROUP_MEMBER:
                raise ValueError(
                    f"feature '{feature.name}' is both a group and a member; "
                    "not expressible in the textual format"
                )
            head = f"{_entry_kind(feature)} {feature.name}"
            if feature.abstract:
                head += " abstract"
        if feature.children or feature.link is ParentLink.ROOT:
            lines.append(f"{indent}{head} {{")
            for child in feature.children:
                emit(child, depth + 1)
            lines.append(f"{indent}}}")
        else:
            lines.append(f"{indent}{head}")

    emit(model.root, 0)
    for c in model.constraints:
        lines.append(f"constraint {c.lhs} {c.op.value} {c.rhs}")
    return "\n".join(lines) + "\n"
