"""Logic-less template dialect with swappable delimiters.

Tags are `<open>key<close>` for variables, `<open>#key<close>` /
`<open>/key<close>` for sections and `<open>^key<close>` for inverted
sections. Two delimiter styles exist:

  - Plain, e.g. ``{{``/``}}``: everything between the delimiters must be a
    well-formed tag.
  - CommentWrapped, ``/*``/``*/``: tags ride inside block comments so a
    template stays a syntactically valid source file. A comment whose payload
    is not a well-formed tag is kept as literal text, and one optional space
    on each side of the payload is consumed (``/* #Key */``).

Rendering never evaluates expressions; output is a function of the parsed
tree and the context only. Missing keys render as the empty string.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence, Union

from .errors import TemplateError

_KEY_RE = r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*"
_PAYLOAD_RE = re.compile(rf"(?P<sigil>[#/^])?(?P<key>{_KEY_RE})$")


class DelimiterStyle(Enum):
    PLAIN = "plain"
    COMMENT_WRAPPED = "comment_wrapped"


@dataclass(frozen=True)
class DelimiterPair:
    open: str
    close: str
    style: DelimiterStyle

    def __post_init__(self):
        if not self.open or not self.close or self.open == self.close:
            raise ValueError("delimiters must be distinct and non-empty")


PLAIN_DELIMITERS = DelimiterPair("{{", "}}", DelimiterStyle.PLAIN)
SOLIDITY_DELIMITERS = DelimiterPair("/*", "*/", DelimiterStyle.COMMENT_WRAPPED)


def delimiters_for_path(path: Union[str, Path]) -> DelimiterPair:
    name = str(path)
    return SOLIDITY_DELIMITERS if name.endswith(".sol.tpl") else PLAIN_DELIMITERS


@dataclass(frozen=True)
class Text:
    text: str


@dataclass(frozen=True)
class Variable:
    key: str


@dataclass(frozen=True)
class Section:
    key: str
    children: tuple["Node", ...]


@dataclass(frozen=True)
class InvertedSection:
    key: str
    children: tuple["Node", ...]


Node = Union[Text, Variable, Section, InvertedSection]


@dataclass(frozen=True)
class TemplateAst:
    nodes: tuple[Node, ...]


@dataclass(frozen=True)
class _Tag:
    sigil: str  # "", "#", "/" or "^"
    key: str
    start: int
    end: int
    line: int
    standalone: bool


def _strip_one_space(payload: str) -> str:
    if payload.startswith(" "):
        payload = payload[1:]
    if payload.endswith(" "):
        payload = payload[:-1]
    return payload


def _scan_tags(source: str, delims: DelimiterPair) -> list[_Tag]:
    tags: list[_Tag] = []
    pos = 0
    while True:
        start = source.find(delims.open, pos)
        if start == -1:
            return tags
        end = source.find(delims.close, start + len(delims.open))
        line = source.count("\n", 0, start) + 1
        if end == -1:
            if delims.style is DelimiterStyle.COMMENT_WRAPPED:
                return tags  # unterminated comment stays literal
            raise TemplateError(f"tag opened with {delims.open!r} is never closed", line)
        payload = _strip_one_space(source[start + len(delims.open) : end])
        m = _PAYLOAD_RE.fullmatch(payload)
        tag_end = end + len(delims.close)
        if m is None:
            if delims.style is DelimiterStyle.COMMENT_WRAPPED:
                pos = tag_end  # a real comment, not a tag
                continue
            raise TemplateError(f"malformed tag payload {payload!r}", line)
        line_start = source.rfind("\n", 0, start) + 1
        newline_at = source.find("\n", tag_end)
        after = source[tag_end : newline_at if newline_at != -1 else len(source)]
        standalone = (
            m.group("sigil") in ("#", "/", "^")
            and source[line_start:start].strip(" \t") == ""
            and after.strip(" \t") == ""
        )
        tags.append(
            _Tag(m.group("sigil") or "", m.group("key"), start, tag_end, line, standalone)
        )
        pos = tag_end


def parse_template(
    source: str,
    delimiters: DelimiterPair = PLAIN_DELIMITERS,
    trim_standalone: bool = False,
) -> TemplateAst:
    """Build the template tree. With ``trim_standalone``, a section or
    inverted-section tag alone on its line is removed together with the
    line's whitespace and newline, so deselected blocks leave no residue."""
    tags = _scan_tags(source, delimiters)
    root: list[Node] = []
    stack: list[tuple[_Tag, list[Node]]] = []
    nodes = root
    pos = 0

    def emit_text(upto: int) -> None:
        if upto > pos:
            nodes.append(Text(source[pos:upto]))

    for tag in tags:
        cut = tag.start
        if trim_standalone and tag.standalone:
            cut = source.rfind("\n", 0, tag.start) + 1
            cut = max(cut, pos)
        emit_text(cut)
        if tag.sigil == "#" or tag.sigil == "^":
            stack.append((tag, nodes))
            nodes = []
        elif tag.sigil == "/":
            if not stack:
                raise TemplateError(f"close tag '{tag.key}' without an open section", tag.line)
            open_tag, outer = stack.pop()
            if open_tag.key != tag.key:
                raise TemplateError(
                    f"close tag '{tag.key}' does not match open section "
                    f"'{open_tag.key}' (line {open_tag.line})",
                    tag.line,
                )
            section_cls = Section if open_tag.sigil == "#" else InvertedSection
            outer.append(section_cls(open_tag.key, tuple(nodes)))
            nodes = outer
        else:
            nodes.append(Variable(tag.key))
        pos = tag.end
        if trim_standalone and tag.standalone:
            newline_at = source.find("\n", pos)
            pos = newline_at + 1 if newline_at != -1 else len(source)
    if stack:
        open_tag, _ = stack[0]
        raise TemplateError(f"section '{open_tag.key}' is never closed", open_tag.line)
    emit_text(len(source))
    return TemplateAst(tuple(root))


_MISSING = object()


def _lookup(key: str, scopes: Sequence[object]) -> object:
    head, *rest = key.split(".")
    value: object = _MISSING
    for scope in reversed(scopes):
        if isinstance(scope, Mapping) and head in scope:
            value = scope[head]
            break
    for part in rest:
        if isinstance(value, Mapping) and part in value:
            value = value[part]
        else:
            return _MISSING
    return value


def _truthy(value: object) -> bool:
    if value is _MISSING or value is None or value is False:
        return False
    if isinstance(value, Mapping):
        return True
    if isinstance(value, str):
        return len(value) > 0
    if isinstance(value, (list, tuple)):
        return len(value) > 0
    return bool(value)


def _stringify(value: object) -> str:
    if value is _MISSING or value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, (int, float)):
        return repr(value) if isinstance(value, float) else str(value)
    if isinstance(value, (Mapping, list, tuple)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def _render_nodes(nodes: tuple[Node, ...], scopes: list[object], out: list[str]) -> None:
    for node in nodes:
        if isinstance(node, Text):
            out.append(node.text)
        elif isinstance(node, Variable):
            out.append(_stringify(_lookup(node.key, scopes)))
        elif isinstance(node, Section):
            value = _lookup(node.key, scopes)
            if not _truthy(value):
                continue
            if isinstance(value, (list, tuple)):
                for element in value:
                    scopes.append(element)
                    _render_nodes(node.children, scopes, out)
                    scopes.pop()
            elif isinstance(value, Mapping):
                scopes.append(value)
                _render_nodes(node.children, scopes, out)
                scopes.pop()
            else:
                _render_nodes(node.children, scopes, out)
        else:
            if not _truthy(_lookup(node.key, scopes)):
                _render_nodes(node.children, scopes, out)


def render(ast: TemplateAst, context: Mapping) -> str:
    out: list[str] = []
    _render_nodes(ast.nodes, [context], out)
    return "".join(out)


def render_string(
    source: str, context: Mapping, delimiters: DelimiterPair = PLAIN_DELIMITERS
) -> str:
    return render(parse_template(source, delimiters), context)


def render_file(
    path: Union[str, Path],
    delimiters: DelimiterPair,
    context: Mapping,
) -> str:
    source = Path(path).read_text(encoding="utf-8")
    return render(parse_template(source, delimiters, trim_standalone=True), context)


def collect_keys(ast: TemplateAst) -> set[str]:
    """Top-level segment of every key the template can resolve against the
    root context; the generator checks these against the generation context."""
    keys: set[str] = set()

    def walk(nodes: tuple[Node, ...]) -> None:
        for node in nodes:
            if isinstance(node, (Variable, Section, InvertedSection)):
                keys.add(node.key.split(".")[0])
            if isinstance(node, (Section, InvertedSection)):
                walk(node.children)

    walk(ast.nodes)
    return keys
