"""Page-record storage, ground-truth node mapping, validation and statistics.

Dataset layout: one directory per site containing ``page_<k>.html`` +
``page_<k>.json`` pairs and an optional ``sitemap.json`` wrapper file.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from urllib.parse import urlparse

from . import dom
from .dates import parse_date
from .dom import DomTree

__all__ = [
    "AttributeKind",
    "LABEL_ORDER",
    "label_id",
    "kind_for_label",
    "AttributeAnnotation",
    "PageRecord",
    "Sitemap",
    "SelectorEntry",
    "DatasetStats",
    "ValidationFinding",
    "ValidationReport",
    "SchemaError",
    "MissingHtml",
    "load_dataset",
    "load_sitemaps",
    "map_annotations",
    "validate",
    "compute_stats",
    "registrable_domain",
    "truth_article",
]


class AttributeKind(Enum):
    """The five extractable article attributes."""

    TITLE = "title"
    DATE = "date"
    TEXT = "text"
    AUTHOR = "author"
    TAG = "tag"

    @property
    def json_key(self) -> str:
        return _JSON_KEYS[self]

    @property
    def single_node(self) -> bool:
        return self in (AttributeKind.TITLE, AttributeKind.DATE)


_JSON_KEYS = {
    AttributeKind.TITLE: "title",
    AttributeKind.DATE: "date",
    AttributeKind.TEXT: "text",
    AttributeKind.AUTHOR: "authors",
    AttributeKind.TAG: "tags",
}
_KEY_TO_KIND = {v: k for k, v in _JSON_KEYS.items()}

# Class order fixed for serialization: id 0 is the background "none" class.
LABEL_ORDER: tuple[AttributeKind | None, ...] = (
    None,
    AttributeKind.TITLE,
    AttributeKind.DATE,
    AttributeKind.TEXT,
    AttributeKind.AUTHOR,
    AttributeKind.TAG,
)
NUM_CLASSES = len(LABEL_ORDER)


def label_id(kind: AttributeKind | None) -> int:
    return LABEL_ORDER.index(kind)


def kind_for_label(label: int) -> AttributeKind | None:
    return LABEL_ORDER[label]


class SchemaError(ValueError):
    """Malformed dataset JSON; carries the file path and offending field."""

    def __init__(self, path: Path | str, field_name: str, message: str):
        super().__init__(f"{path}: field {field_name!r}: {message}")
        self.path = str(path)
        self.field = field_name


class MissingHtml(FileNotFoundError):
    """A page JSON record has no sibling HTML file."""


@dataclass(frozen=True)
class SelectorEntry:
    kind: AttributeKind
    css: str
    mode: str = "text"  # "text" or "attribute"
    attribute: str | None = None
    multiple: bool = False


@dataclass(frozen=True)
class Sitemap:
    site_id: str
    entries: tuple[SelectorEntry, ...]

    def entry(self, kind: AttributeKind) -> SelectorEntry | None:
        for e in self.entries:
            if e.kind == kind:
                return e
        return None


@dataclass(frozen=True)
class AttributeAnnotation:
    kind: AttributeKind
    values: tuple[str, ...]
    selector: str | None = None
    mode: str = "text"
    attribute: str | None = None
    node_ids: tuple[int, ...] | None = None  # None until mapped
    xpaths: tuple[str, ...] = ()
    unmapped_values: tuple[str, ...] = ()

    @property
    def mapped(self) -> bool:
        return self.node_ids is not None


@dataclass(frozen=True)
class PageRecord:
    url: str
    html: bytes
    language: str
    site_id: str
    annotations: tuple[AttributeAnnotation, ...]
    path: str = ""

    def annotation(self, kind: AttributeKind) -> AttributeAnnotation | None:
        for a in self.annotations:
            if a.kind == kind:
                return a
        return None


# Multi-label public suffixes seen in news domains; default is two labels.
_LONG_SUFFIXES = {
    "co.uk", "org.uk", "ac.uk", "gov.uk", "com.au", "net.au", "co.jp",
    "co.kr", "com.cn", "com.br", "com.tr", "co.in", "com.mx", "com.ar",
}


def registrable_domain(url: str) -> str:
    host = urlparse(url).hostname or ""
    host = host.lower().lstrip(".")
    if host.startswith("www."):
        host = host[4:]
    labels = host.split(".")
    if len(labels) >= 3 and ".".join(labels[-2:]) in _LONG_SUFFIXES:
        return ".".join(labels[-3:])
    if len(labels) >= 2:
        return ".".join(labels[-2:])
    return host


def _parse_selector_obj(path: Path, key: str, obj) -> tuple[str, str, str | None]:
    if not isinstance(obj, dict) or "css" not in obj:
        raise SchemaError(path, f"selectors.{key}", "expected object with 'css'")
    css = obj["css"]
    if not isinstance(css, str) or not css.strip():
        raise SchemaError(path, f"selectors.{key}.css", "expected non-empty string")
    mode = obj.get("mode", "text")
    if mode == "text":
        return css, "text", None
    if isinstance(mode, dict) and isinstance(mode.get("attribute"), str):
        return css, "attribute", mode["attribute"]
    raise SchemaError(path, f"selectors.{key}.mode", "expected 'text' or {'attribute': name}")


def _load_page(json_path: Path) -> PageRecord:
    try:
        raw = json.loads(json_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError(json_path, "<document>", f"invalid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise SchemaError(json_path, "<document>", "expected a JSON object")
    url = raw.get("url")
    if not isinstance(url, str) or not url:
        raise SchemaError(json_path, "url", "expected non-empty string")
    language = raw.get("language")
    if not isinstance(language, str) or not language:
        raise SchemaError(json_path, "language", "expected non-empty string")

    attributes = raw.get("attributes", {})
    if not isinstance(attributes, dict):
        raise SchemaError(json_path, "attributes", "expected object")
    selectors = raw.get("selectors", {})
    if not isinstance(selectors, dict):
        raise SchemaError(json_path, "selectors", "expected object")
    for key in selectors:
        if key not in _KEY_TO_KIND:
            raise SchemaError(json_path, f"selectors.{key}", "unknown attribute key")

    annotations: list[AttributeAnnotation] = []
    for key, values in attributes.items():
        kind = _KEY_TO_KIND.get(key)
        if kind is None:
            raise SchemaError(json_path, f"attributes.{key}", "unknown attribute key")
        if not isinstance(values, list) or not values:
            raise SchemaError(json_path, f"attributes.{key}", "expected non-empty list")
        if not all(isinstance(v, str) for v in values):
            raise SchemaError(json_path, f"attributes.{key}", "expected list of strings")
        css = mode = attr = None
        if key in selectors:
            css, mode, attr = _parse_selector_obj(json_path, key, selectors[key])
        annotations.append(
            AttributeAnnotation(
                kind=kind,
                values=tuple(values),
                selector=css,
                mode=mode or "text",
                attribute=attr,
            )
        )
    annotations.sort(key=lambda a: label_id(a.kind))

    html_path = json_path.with_suffix(".html")
    if not html_path.exists():
        raise MissingHtml(f"{json_path} has no HTML file {html_path.name}")
    return PageRecord(
        url=url,
        html=html_path.read_bytes(),
        language=language,
        site_id=registrable_domain(url) or json_path.parent.name,
        annotations=tuple(annotations),
        path=str(json_path),
    )


_PAGE_NUM_RE = re.compile(r"page_(\d+)\.json$")


def load_dataset(root_path: str | Path) -> list[PageRecord]:
    """Load every page record under ``root_path`` (one directory per site)."""
    root = Path(root_path)
    if not root.is_dir():
        raise SchemaError(root, "<root>", "dataset directory does not exist")
    records: list[PageRecord] = []
    for site_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        pages = sorted(
            (p for p in site_dir.glob("page_*.json")),
            key=lambda p: int(_PAGE_NUM_RE.search(p.name).group(1)),
        )
        for json_path in pages:
            records.append(_load_page(json_path))
    return records


def load_sitemaps(root_path: str | Path) -> dict[str, Sitemap]:
    """Load per-site wrapper files (``sitemap.json``) keyed by site id."""
    root = Path(root_path)
    sitemaps: dict[str, Sitemap] = {}
    for path in sorted(root.glob("*/sitemap.json")):
        raw = json.loads(path.read_text(encoding="utf-8"))
        site_id = raw.get("site_id")
        if not isinstance(site_id, str) or not site_id:
            raise SchemaError(path, "site_id", "expected non-empty string")
        entries = []
        for key, obj in raw.get("selectors", {}).items():
            kind = _KEY_TO_KIND.get(key)
            if kind is None:
                raise SchemaError(path, f"selectors.{key}", "unknown attribute key")
            css, mode, attr = _parse_selector_obj(path, key, obj)
            multiple = bool(obj.get("multiple", not kind.single_node))
            if kind.single_node and multiple:
                raise SchemaError(path, f"selectors.{key}.multiple",
                                  "title/date selectors are single-node")
            entries.append(SelectorEntry(kind, css, mode, attr, multiple))
        entries.sort(key=lambda e: label_id(e.kind))
        sitemaps[site_id] = Sitemap(site_id=site_id, entries=tuple(entries))
    return sitemaps


def _node_value(tree: DomTree, node_id: int, mode: str, attribute: str | None) -> str:
    if mode == "attribute" and attribute:
        return (tree.nodes[node_id].attr(attribute) or "").strip()
    return dom.subtree_text(tree, node_id)


def map_annotations(record: PageRecord, tree: DomTree) -> PageRecord:
    """Resolve every annotation to node ids.

    Selector present: its matches are authoritative (first match only for
    title/date). Otherwise nodes are found by exact normalized subtree-text
    equality with each ground-truth value, smallest node id first. Values
    that resolve nowhere are kept and flagged in ``unmapped_values``.
    """
    mapped: list[AttributeAnnotation] = []
    for ann in record.annotations:
        node_ids: list[int] = []
        unmapped: list[str] = []
        if ann.selector is not None:
            matches = dom.select_css(tree, ann.selector)
            if ann.kind.single_node:
                matches = matches[:1]
            node_ids = matches
            if not matches:
                unmapped = list(ann.values)
        else:
            used: set[int] = set()
            for value in ann.values:
                want = dom.normalize_text(value)
                found = None
                for node in tree.nodes:
                    if node.node_id in used:
                        continue
                    if dom.subtree_text(tree, node.node_id) == want:
                        found = node.node_id
                        break
                if found is None:
                    unmapped.append(value)
                else:
                    used.add(found)
                    node_ids.append(found)
        mapped.append(
            replace(
                ann,
                node_ids=tuple(node_ids),
                xpaths=tuple(str(dom.xpath_of(tree, n)) for n in node_ids),
                unmapped_values=tuple(unmapped),
            )
        )
    return replace(record, annotations=tuple(mapped))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationFinding:
    site_id: str
    page_url: str
    kind: str  # attribute json key, or "" for page-level findings
    check: str  # empty_selector | multi_node | attr_value_selector | heuristic_fail
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[ValidationFinding, ...]
    pages_checked: int

    @property
    def ok(self) -> bool:
        return not self.findings

    def to_json(self) -> dict:
        return {
            "pages_checked": self.pages_checked,
            "findings": [
                {
                    "site": f.site_id,
                    "page": f.page_url,
                    "attribute": f.kind,
                    "check": f.check,
                    "detail": f.detail,
                }
                for f in self.findings
            ],
        }


MIN_TEXT_LENGTH = 100


def validate(
    records: list[PageRecord],
    sitemaps: dict[str, Sitemap] | None = None,
    min_text_length: int = MIN_TEXT_LENGTH,
) -> ValidationReport:
    """Run the wrapper error-correction checks; never mutates records."""
    sitemaps = sitemaps or {}
    findings: list[ValidationFinding] = []

    def add(record: PageRecord, kind: AttributeKind | None, check: str, detail: str):
        findings.append(
            ValidationFinding(
                site_id=record.site_id,
                page_url=record.url,
                kind=kind.json_key if kind else "",
                check=check,
                detail=detail,
            )
        )

    for record in records:
        tree = dom.parse_and_clean(record.html, url=record.url, language=record.language)

        selector_plan: list[tuple[AttributeKind, str, str, str | None]] = []
        sitemap = sitemaps.get(record.site_id)
        if sitemap is not None:
            for entry in sitemap.entries:
                selector_plan.append((entry.kind, entry.css, entry.mode, entry.attribute))
        else:
            for ann in record.annotations:
                if ann.selector is not None:
                    selector_plan.append((ann.kind, ann.selector, ann.mode, ann.attribute))

        for kind, css, mode, attribute in selector_plan:
            try:
                matches = dom.select_css(tree, css)
            except dom.SelectorSyntax as e:
                add(record, kind, "empty_selector", f"selector not supported: {e}")
                continue
            if not matches:
                add(record, kind, "empty_selector", f"selector {css!r} located nothing")
            elif kind.single_node and len(matches) > 1:
                add(record, kind, "multi_node",
                    f"selector {css!r} found {len(matches)} nodes")
            if mode == "attribute":
                add(record, kind, "attr_value_selector",
                    f"selector {css!r} extracts attribute {attribute!r}")

        for ann in record.annotations:
            for value in ann.values:
                if not dom.normalize_text(value):
                    add(record, ann.kind, "heuristic_fail", "empty value after normalization")
            if ann.kind == AttributeKind.DATE:
                for value in ann.values:
                    if dom.normalize_text(value) and parse_date(value, record.language) is None:
                        add(record, ann.kind, "heuristic_fail", f"unparseable date {value!r}")
            if ann.kind == AttributeKind.TEXT:
                total = sum(len(dom.normalize_text(v)) for v in ann.values)
                if total < min_text_length:
                    add(record, ann.kind, "heuristic_fail",
                        f"text length {total} below {min_text_length}")

    findings.sort(key=lambda f: (f.site_id, f.page_url, f.kind, f.check, f.detail))
    return ValidationReport(findings=tuple(findings), pages_checked=len(records))


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AttrStats:
    sites: int
    pages: int
    nodes: int


@dataclass(frozen=True)
class LanguageStats:
    sites: int
    pages: int
    attributes: dict[str, AttrStats]


@dataclass(frozen=True)
class DatasetStats:
    languages: dict[str, LanguageStats]

    def to_json(self) -> dict:
        return {
            lang: {
                "sites": ls.sites,
                "pages": ls.pages,
                "attributes": {
                    key: {"sites": a.sites, "pages": a.pages, "nodes": a.nodes}
                    for key, a in sorted(ls.attributes.items())
                },
            }
            for lang, ls in sorted(self.languages.items())
        }


def compute_stats(records: list[PageRecord]) -> DatasetStats:
    """Per-language site/page counts and per-attribute coverage counts.

    Requires mapped annotations: node counts are counts of resolved node ids.
    """
    languages: dict[str, LanguageStats] = {}
    by_lang: dict[str, list[PageRecord]] = {}
    for record in records:
        by_lang.setdefault(record.language, []).append(record)
    for lang, recs in by_lang.items():
        attrs: dict[str, AttrStats] = {}
        for kind in AttributeKind:
            sites = set()
            pages = 0
            nodes = 0
            for record in recs:
                ann = record.annotation(kind)
                if ann is None or not ann.values:
                    continue
                sites.add(record.site_id)
                pages += 1
                nodes += len(ann.node_ids or ())
            attrs[kind.json_key] = AttrStats(sites=len(sites), pages=pages, nodes=nodes)
        languages[lang] = LanguageStats(
            sites=len({r.site_id for r in recs}),
            pages=len(recs),
            attributes=attrs,
        )
    return DatasetStats(languages=languages)


def truth_article(record: PageRecord) -> dict:
    """Ground-truth structured article for a record, in the output schema."""
    def values(kind: AttributeKind) -> tuple[str, ...]:
        ann = record.annotation(kind)
        return ann.values if ann else ()

    titles = values(AttributeKind.TITLE)
    dates = values(AttributeKind.DATE)
    texts = values(AttributeKind.TEXT)
    return {
        "url": record.url,
        "title": titles[0] if titles else None,
        "date": dates[0] if dates else None,
        "text": "\n".join(texts) if texts else None,
        "authors": list(values(AttributeKind.AUTHOR)),
        "tags": list(values(AttributeKind.TAG)),
    }
