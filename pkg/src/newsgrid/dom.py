"""HTML parsing into a cleaned, position-indexed DOM tree.

Builds an immutable tree of element nodes from (possibly malformed) HTML,
drops non-text machinery (scripts, styles, comments, ...), normalizes all
text, and provides CSS selection plus positional-XPath generation and
resolution over the cleaned tree.
"""
from __future__ import annotations

import html as html_escape
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser

__all__ = [
    "DomNode",
    "DomTree",
    "XPathExpr",
    "EmptyDocument",
    "NoMatch",
    "SelectorSyntax",
    "normalize_text",
    "parse_and_clean",
    "xpath_of",
    "resolve_xpath",
    "select_css",
    "subtree_text",
    "tree_to_records",
    "to_html",
]


class EmptyDocument(ValueError):
    """No element nodes survived parsing and cleaning."""


class NoMatch(LookupError):
    """An XPath step did not resolve to a node."""


class SelectorSyntax(ValueError):
    """CSS selector uses grammar outside the supported subset."""


# Elements whose entire subtree carries no article text.
REMOVAL_TAGS = frozenset(
    {"script", "style", "noscript", "template", "iframe", "svg", "canvas"}
)

VOID_TAGS = frozenset(
    {"area", "base", "br", "col", "embed", "hr", "img", "input", "link",
     "meta", "param", "source", "track", "wbr"}
)

# Content model shortcuts for recovery of unclosed tags: starting a tag in
# the value set implicitly closes an open tag equal to the key.
_AUTO_CLOSE = {
    "p": {"p", "div", "ul", "ol", "li", "dl", "table", "blockquote", "pre",
          "section", "article", "aside", "header", "footer", "figure", "nav",
          "form", "address", "h1", "h2", "h3", "h4", "h5", "h6"},
    "li": {"li"},
    "dt": {"dt", "dd"},
    "dd": {"dt", "dd"},
    "tr": {"tr"},
    "td": {"td", "th", "tr"},
    "th": {"td", "th", "tr"},
    "option": {"option", "optgroup"},
    "thead": {"tbody", "tfoot"},
    "tbody": {"tbody", "tfoot"},
}

# Elements that belong in <head>; anything else opens <body>.
_HEAD_TAGS = frozenset(
    {"title", "base", "link", "meta", "style", "script", "noscript", "template"}
)

# C0/C1 controls except the classic whitespace ones (which collapse below).
_CONTROL_RE = re.compile(r"[\x00-\x08\x0e-\x1f\x7f-\x9f]")
_WS_RE = re.compile(r"\s+")


def normalize_text(s: str) -> str:
    """Drop control characters, collapse whitespace runs to one space, strip.

    NBSP and other Unicode whitespace count as whitespace; C0/C1 controls
    that are not whitespace are removed outright.
    """
    s = _CONTROL_RE.sub("", s)
    s = _WS_RE.sub(" ", s)
    return s.strip()


@dataclass(frozen=True)
class DomNode:
    """One element of a cleaned DOM tree.

    ``texts`` holds the normalized direct text fragments and ``text_marks``
    records, for each fragment, how many element children precede it, so
    reading order survives even though ``text`` is a flat join.
    """

    node_id: int
    tag: str
    attributes: tuple[tuple[str, str], ...]
    text: str
    parent_id: int | None
    depth: int
    sibling_index: int
    child_ids: tuple[int, ...]
    texts: tuple[str, ...] = ()
    text_marks: tuple[int, ...] = ()

    def attr(self, name: str) -> str | None:
        """First value of attribute ``name``, or None."""
        for key, value in self.attributes:
            if key == name:
                return value
        return None

    def classes(self) -> tuple[str, ...]:
        return tuple((self.attr("class") or "").split())


@dataclass(frozen=True)
class DomTree:
    """Immutable cleaned parse tree; nodes indexed by pre-order id."""

    nodes: tuple[DomNode, ...]
    source_url: str = ""
    language: str = "und"

    @property
    def root(self) -> DomNode:
        return self.nodes[0]

    def __len__(self) -> int:
        return len(self.nodes)

    def children(self, node_id: int) -> tuple[DomNode, ...]:
        return tuple(self.nodes[c] for c in self.nodes[node_id].child_ids)

    def ancestors(self, node_id: int) -> list[int]:
        """Ancestor ids from root down to the node's parent."""
        chain: list[int] = []
        parent = self.nodes[node_id].parent_id
        while parent is not None:
            chain.append(parent)
            parent = self.nodes[parent].parent_id
        chain.reverse()
        return chain


def subtree_text(tree: DomTree, node_id: int) -> str:
    """Text of a node and its descendants in reading order, single-spaced."""
    pieces: list[str] = []

    def walk(nid: int) -> None:
        node = tree.nodes[nid]
        fi = 0
        for slot in range(len(node.child_ids) + 1):
            while fi < len(node.texts) and node.text_marks[fi] == slot:
                pieces.append(node.texts[fi])
                fi += 1
            if slot < len(node.child_ids):
                walk(node.child_ids[slot])

    walk(node_id)
    return " ".join(p for p in pieces if p)


class _El:
    """Mutable element used only while the parser runs."""

    __slots__ = ("tag", "attrs", "content")

    def __init__(self, tag: str, attrs: list[tuple[str, str]]):
        self.tag = tag
        self.attrs = attrs
        # Mixed list of str fragments and _El children, in document order.
        self.content: list[object] = []


class _TreeBuilder(HTMLParser):
    """Error-recovering parser: inserts implied html/head/body, closes
    unclosed tags at parent boundaries, drops comments/PIs/doctype."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root: _El | None = None
        self._head: _El | None = None
        self._body: _El | None = None
        self._stack: list[_El] = []

    # -- scaffolding -------------------------------------------------
    def _ensure_root(self, attrs: list[tuple[str, str]] | None = None) -> _El:
        if self.root is None:
            self.root = _El("html", attrs or [])
            self._stack = [self.root]
        elif attrs:
            seen = {k for k, _ in self.root.attrs}
            self.root.attrs.extend((k, v) for k, v in attrs if k not in seen)
        return self.root

    def _ensure_head(self) -> _El:
        root = self._ensure_root()
        if self._head is None:
            self._head = _El("head", [])
            root.content.append(self._head)
        if self._head not in self._stack:
            self._stack = [root, self._head]
        return self._head

    def _ensure_body(self) -> _El:
        root = self._ensure_root()
        if self._body is None:
            self._body = _El("body", [])
            root.content.append(self._body)
        if self._body not in self._stack:
            self._stack = [root, self._body]
        return self._body

    def _insertion_parent(self, tag: str) -> _El:
        if self._body is None:
            if tag in _HEAD_TAGS:
                return self._ensure_head()
            self._ensure_body()
        top = self._stack[-1]
        if top is self.root:
            return self._ensure_body()
        return top

    # -- parser callbacks --------------------------------------------
    def handle_starttag(self, tag: str, attrs) -> None:
        tag = tag.lower()
        clean_attrs: list[tuple[str, str]] = []
        seen: set[str] = set()
        for name, value in attrs:
            name = name.lower()
            if name not in seen:
                seen.add(name)
                clean_attrs.append((name, value or ""))

        if tag == "html":
            self._ensure_root(clean_attrs)
            return
        if tag == "head":
            self._ensure_head()
            return
        if tag == "body":
            body = self._ensure_body()
            existing = {k for k, _ in body.attrs}
            body.attrs.extend((k, v) for k, v in clean_attrs if k not in existing)
            return

        self._insertion_parent(tag)
        while len(self._stack) > 1 and tag in _AUTO_CLOSE.get(self._stack[-1].tag, ()):
            self._stack.pop()

        el = _El(tag, clean_attrs)
        self._stack[-1].content.append(el)
        if tag not in VOID_TAGS:
            self._stack.append(el)

    def handle_startendtag(self, tag: str, attrs) -> None:
        tag = tag.lower()
        if tag in ("html", "head", "body"):
            self.handle_starttag(tag, attrs)
            return
        self.handle_starttag(tag, attrs)
        if tag not in VOID_TAGS and self._stack and self._stack[-1].tag == tag:
            self._stack.pop()

    def handle_endtag(self, tag: str) -> None:
        tag = tag.lower()
        if tag in VOID_TAGS:
            return
        for i in range(len(self._stack) - 1, -1, -1):
            if self._stack[i].tag == tag:
                if tag in ("html", "head", "body"):
                    # Keep scaffolding reachable; just unwind to it.
                    del self._stack[i + 1:]
                    if tag != "html" and self.root is not None:
                        self._stack = [self.root]
                else:
                    del self._stack[i:]
                return
        # Unmatched end tag: ignore.

    def handle_data(self, data: str) -> None:
        if self.root is None or self._stack[-1] is self.root:
            if not data.strip():
                return
            self._ensure_body()
        elif self._stack[-1] is self._head and data.strip():
            self._ensure_body()
        self._stack[-1].content.append(data)

    def handle_comment(self, data: str) -> None:
        pass

    def handle_decl(self, decl: str) -> None:
        pass

    def handle_pi(self, data: str) -> None:
        pass

    def unknown_decl(self, data: str) -> None:
        pass


def parse_and_clean(html: bytes | str, url: str = "", language: str = "und") -> DomTree:
    """Parse HTML (malformed tolerated) into a cleaned DomTree.

    Removes scripts/styles/other non-text subtrees plus comments, CDATA,
    processing instructions and the doctype; normalizes every text fragment.
    Raises EmptyDocument when nothing survives.
    """
    if isinstance(html, bytes):
        html = html.decode("utf-8", errors="replace")
    if html.startswith("﻿"):
        html = html[1:]

    builder = _TreeBuilder()
    builder.feed(html)
    builder.close()
    if builder.root is None:
        raise EmptyDocument("no element nodes survived cleaning")

    nodes: list[DomNode] = []

    def build(el: _El, parent_id: int | None, depth: int, sibling_index: int) -> int:
        node_id = len(nodes)
        nodes.append(None)  # type: ignore[arg-type]  # reserve pre-order slot

        kept_children = [c for c in el.content
                         if isinstance(c, _El) and c.tag not in REMOVAL_TAGS]
        texts: list[str] = []
        marks: list[int] = []
        preceding = 0
        for item in el.content:
            if isinstance(item, _El):
                if item.tag not in REMOVAL_TAGS:
                    preceding += 1
            else:
                fragment = normalize_text(item)
                if fragment:
                    texts.append(fragment)
                    marks.append(preceding)

        child_ids: list[int] = []
        tag_counts: dict[str, int] = {}
        for child in kept_children:
            tag_counts[child.tag] = tag_counts.get(child.tag, 0) + 1
            child_ids.append(build(child, node_id, depth + 1, tag_counts[child.tag]))

        nodes[node_id] = DomNode(
            node_id=node_id,
            tag=el.tag,
            attributes=tuple(el.attrs),
            text=" ".join(texts),
            parent_id=parent_id,
            depth=depth,
            sibling_index=sibling_index,
            child_ids=tuple(child_ids),
            texts=tuple(texts),
            text_marks=tuple(marks),
        )
        return node_id

    if builder.root.tag in REMOVAL_TAGS:
        raise EmptyDocument("no element nodes survived cleaning")
    build(builder.root, None, 0, 1)
    return DomTree(nodes=tuple(nodes), source_url=url, language=language)


# ---------------------------------------------------------------------------
# XPath generation and resolution
# ---------------------------------------------------------------------------

_XPATH_STEP_RE = re.compile(r"/([a-zA-Z][\w-]*)(?:\[(\d+)\])?")


@dataclass(frozen=True)
class XPathExpr:
    """Absolute positional XPath as (tag, subscript) steps from the root.

    A missing subscript means the element is the only same-tag child of its
    parent and is equivalent to [1].
    """

    steps: tuple[tuple[str, int | None], ...]

    def __str__(self) -> str:
        return "".join(
            f"/{tag}[{sub}]" if sub is not None else f"/{tag}"
            for tag, sub in self.steps
        )

    @classmethod
    def parse(cls, s: str) -> "XPathExpr":
        steps: list[tuple[str, int | None]] = []
        pos = 0
        while pos < len(s):
            m = _XPATH_STEP_RE.match(s, pos)
            if m is None:
                raise NoMatch(f"malformed xpath: {s!r}")
            steps.append((m.group(1).lower(), int(m.group(2)) if m.group(2) else None))
            pos = m.end()
        if not steps:
            raise NoMatch("empty xpath")
        return cls(steps=tuple(steps))


def xpath_of(tree: DomTree, node_id: int) -> XPathExpr:
    """Absolute positional XPath of a node; subscripts only where needed."""
    steps: list[tuple[str, int | None]] = []
    nid: int | None = node_id
    while nid is not None:
        node = tree.nodes[nid]
        if node.parent_id is None:
            steps.append((node.tag, None))
        else:
            same_tag = sum(
                1 for cid in tree.nodes[node.parent_id].child_ids
                if tree.nodes[cid].tag == node.tag
            )
            steps.append((node.tag, node.sibling_index if same_tag > 1 else None))
        nid = node.parent_id
    steps.reverse()
    return XPathExpr(steps=tuple(steps))


def resolve_xpath(tree: DomTree, expr: XPathExpr | str) -> int:
    """Resolve a positional XPath to its unique node id, or raise NoMatch."""
    if isinstance(expr, str):
        expr = XPathExpr.parse(expr)
    tag, sub = expr.steps[0]
    root = tree.root
    if root.tag != tag or (sub or 1) != 1:
        raise NoMatch(f"root step /{tag} does not match /{root.tag}")
    current = root
    for tag, sub in expr.steps[1:]:
        wanted = sub or 1
        nxt = None
        for cid in current.child_ids:
            child = tree.nodes[cid]
            if child.tag == tag and child.sibling_index == wanted:
                nxt = child
                break
        if nxt is None:
            raise NoMatch(f"step /{tag}[{wanted}] has no match under /{current.tag}")
        current = nxt
    return current.node_id


# ---------------------------------------------------------------------------
# CSS selection (subset: type, #id, .class, [a=v], descendant, >, :nth-of-type)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Compound:
    type_: str | None = None
    id_: str | None = None
    classes: tuple[str, ...] = ()
    attrs: tuple[tuple[str, str | None], ...] = ()
    nth: int | None = None


_SIMPLE_RE = re.compile(
    r"""(?P<type>\*|[a-zA-Z][\w-]*)
      | \#(?P<id>[\w-]+)
      | \.(?P<cls>[\w-]+)
      | \[(?P<aname>[\w-]+)(?:=(?P<aval>"[^"]*"|'[^']*'|[^\]]+))?\]
      | :nth-of-type\((?P<nth>[0-9]+)\)
    """,
    re.X,
)


def _parse_compound(sel: str, pos: int) -> tuple[_Compound, int]:
    type_: str | None = None
    id_: str | None = None
    classes: list[str] = []
    attrs: list[tuple[str, str | None]] = []
    nth: int | None = None
    start = pos
    while pos < len(sel) and sel[pos] not in " \t>,":
        m = _SIMPLE_RE.match(sel, pos)
        if m is None:
            raise SelectorSyntax(f"unsupported selector syntax at {sel[pos:]!r}")
        if m.group("type"):
            if pos != start:
                raise SelectorSyntax(f"type selector must come first in {sel!r}")
            t = m.group("type").lower()
            type_ = None if t == "*" else t
        elif m.group("id"):
            id_ = m.group("id")
        elif m.group("cls"):
            classes.append(m.group("cls"))
        elif m.group("aname"):
            value = m.group("aval")
            if value is not None and value[:1] in "\"'":
                value = value[1:-1]
            attrs.append((m.group("aname").lower(), value))
        elif m.group("nth"):
            nth = int(m.group("nth"))
        pos = m.end()
    if pos == start:
        raise SelectorSyntax(f"empty compound selector in {sel!r}")
    return _Compound(type_, id_, tuple(classes), tuple(attrs), nth), pos


def _parse_selector(sel: str) -> list[list[tuple[str, _Compound]]]:
    """Parse a comma group into lists of (combinator, compound) sequences."""
    groups: list[list[tuple[str, _Compound]]] = []
    for part in _split_commas(sel):
        part = part.strip()
        if not part:
            raise SelectorSyntax("empty selector")
        seq: list[tuple[str, _Compound]] = []
        pos = 0
        combinator = ""
        while pos < len(part):
            while pos < len(part) and part[pos] in " \t":
                combinator = combinator or " "
                pos += 1
            if pos < len(part) and part[pos] == ">":
                combinator = ">"
                pos += 1
                while pos < len(part) and part[pos] in " \t":
                    pos += 1
            if pos >= len(part):
                raise SelectorSyntax(f"dangling combinator in {sel!r}")
            compound, pos = _parse_compound(part, pos)
            seq.append((combinator if seq else "", compound))
            combinator = ""
        groups.append(seq)
    if not groups:
        raise SelectorSyntax("empty selector")
    return groups


def _split_commas(sel: str) -> list[str]:
    parts: list[str] = []
    depth = 0
    quote = ""
    current = []
    for ch in sel:
        if quote:
            if ch == quote:
                quote = ""
        elif ch in "\"'":
            quote = ch
        elif ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
            continue
        current.append(ch)
    parts.append("".join(current))
    return parts


def _match_compound(tree: DomTree, node: DomNode, c: _Compound) -> bool:
    if c.type_ is not None and node.tag != c.type_:
        return False
    if c.id_ is not None and node.attr("id") != c.id_:
        return False
    if c.classes:
        have = set(node.classes())
        if not all(cls in have for cls in c.classes):
            return False
    for name, value in c.attrs:
        actual = node.attr(name)
        if actual is None or (value is not None and actual != value):
            return False
    if c.nth is not None and node.sibling_index != c.nth:
        return False
    return True


def select_css(tree: DomTree, selector: str) -> list[int]:
    """All nodes matching the selector, in document order."""
    result: set[int] = set()
    for seq in _parse_selector(selector):
        matched = {n.node_id for n in tree.nodes if _match_compound(tree, n, seq[0][1])}
        for combinator, compound in seq[1:]:
            candidates = (n for n in tree.nodes if _match_compound(tree, n, compound))
            if combinator == ">":
                matched = {n.node_id for n in candidates if n.parent_id in matched}
            else:
                matched = {
                    n.node_id for n in candidates
                    if any(a in matched for a in tree.ancestors(n.node_id))
                }
        result |= matched
    return sorted(result)


# ---------------------------------------------------------------------------
# Serialization helpers (tests, debugging, and the translate CLI)
# ---------------------------------------------------------------------------

def tree_to_records(tree: DomTree) -> list[dict]:
    """JSON-ready per-node records: {id, tag, parent, text, attrs}."""
    return [
        {
            "id": n.node_id,
            "tag": n.tag,
            "parent": n.parent_id,
            "text": n.text,
            "attrs": [[k, v] for k, v in n.attributes],
        }
        for n in tree.nodes
    ]


def to_html(tree: DomTree) -> str:
    """Serialize a cleaned tree back to HTML.

    Re-parsing the output yields an isomorphic tree (same tags, texts and
    order); adjacent text fragments are space-joined, matching ``text``.
    """
    out: list[str] = []

    def render(nid: int) -> None:
        node = tree.nodes[nid]
        attrs = "".join(
            f' {k}="{html_escape.escape(v, quote=True)}"' for k, v in node.attributes
        )
        out.append(f"<{node.tag}{attrs}>")
        if node.tag in VOID_TAGS:
            return
        fi = 0
        previous_text = False
        for slot in range(len(node.child_ids) + 1):
            while fi < len(node.texts) and node.text_marks[fi] == slot:
                if previous_text:
                    out.append(" ")
                out.append(html_escape.escape(node.texts[fi]))
                previous_text = True
                fi += 1
            if slot < len(node.child_ids):
                render(node.child_ids[slot])
                previous_text = False
        out.append(f"</{node.tag}>")

    render(0)
    return "".join(out)
