import json
from pathlib import Path

import pytest

from newsgrid.dom import (
    EmptyDocument,
    NoMatch,
    SelectorSyntax,
    XPathExpr,
    normalize_text,
    parse_and_clean,
    resolve_xpath,
    select_css,
    subtree_text,
    to_html,
    tree_to_records,
    xpath_of,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def simple_tree():
    html = (FIXTURES / "en_simple.html").read_bytes()
    return parse_and_clean(html, url="https://example.test/simple", language="en")


@pytest.fixture(scope="module")
def expected():
    return json.loads((FIXTURES / "en_simple.expected.json").read_text())


def test_three_node_page_cleaning():
    tree = parse_and_clean(
        b"<html><body><p> Hello&nbsp;  world </p><script>x</script></body></html>"
    )
    assert [n.tag for n in tree.nodes] == ["html", "body", "p"]
    assert tree.nodes[2].text == "Hello world"


def test_title_depth():
    tree = parse_and_clean(b"<html><head><title>T</title></head><body></body></html>")
    title = next(n for n in tree.nodes if n.tag == "title")
    assert title.text == "T"
    assert title.depth == 2


def test_fixture_matches_hand_built_tree(simple_tree, expected):
    got = tree_to_records(simple_tree)
    want = expected["nodes"]
    assert len(got) == len(want) == 40
    for g, w in zip(got, want):
        assert g == {k: w[k] for k in ("id", "tag", "parent", "text", "attrs")}


def test_fixture_xpaths(simple_tree, expected):
    for nid, xp in expected["xpaths"].items():
        assert str(xpath_of(simple_tree, int(nid))) == xp


def test_fixture_subtree_texts(simple_tree, expected):
    assert subtree_text(simple_tree, 15) == expected["subtree_texts"]["15"]
    assert subtree_text(simple_tree, 20) == expected["subtree_texts"]["20"]
    assert subtree_text(simple_tree, 13).startswith(
        expected["subtree_texts"]["13_prefix"]
    )


def test_preorder_invariants(simple_tree):
    for node in simple_tree.nodes:
        if node.parent_id is None:
            assert node.node_id == 0
            assert node.depth == 0
        else:
            parent = simple_tree.nodes[node.parent_id]
            assert node.parent_id < node.node_id
            assert node.depth == parent.depth + 1
            same_tag_before = [
                c for c in parent.child_ids
                if c < node.node_id and simple_tree.nodes[c].tag == node.tag
            ]
            assert node.sibling_index == 1 + len(same_tag_before)
        assert node.node_id in (
            simple_tree.nodes[node.parent_id].child_ids if node.parent_id is not None else (0,)
        )


def test_xpath_root():
    tree = parse_and_clean(b"<html><body></body></html>")
    assert str(xpath_of(tree, 0)) == "/html"
    assert resolve_xpath(tree, "/html") == 0


def test_xpath_sibling_subscripts():
    html = b"<html><body><div><p>a</p></div><div><p>b</p><p>c</p></div></body></html>"
    tree = parse_and_clean(html)
    second_div = [n for n in tree.nodes if n.tag == "div"][1]
    first_p = tree.nodes[second_div.child_ids[0]]
    assert str(xpath_of(tree, first_p.node_id)) == "/html/body/div[2]/p[1]"


def test_xpath_roundtrip_all_nodes(simple_tree):
    for node in simple_tree.nodes:
        expr = xpath_of(simple_tree, node.node_id)
        assert resolve_xpath(simple_tree, expr) == node.node_id
        assert resolve_xpath(simple_tree, str(expr)) == node.node_id


def test_xpath_no_match():
    tree = parse_and_clean(b"<html><body><div>a</div><div>b</div></body></html>")
    with pytest.raises(NoMatch):
        resolve_xpath(tree, "/html/body/div[9]")


def test_select_css_examples(simple_tree):
    tree = parse_and_clean(b"<html><body><p>x</p></body></html>")
    assert select_css(tree, "p") == [2]
    assert select_css(simple_tree, "div.article > h1") == [14]
    assert select_css(simple_tree, "span#nope") == []


def test_select_css_variants(simple_tree):
    assert select_css(simple_tree, "#main") == [13]
    assert select_css(simple_tree, "ul.tags li") == [29, 30]
    assert select_css(simple_tree, 'meta[property="article:tag"]') == [6, 7]
    assert select_css(simple_tree, "meta[name=author]") == [5]
    assert select_css(simple_tree, "div.body p:nth-of-type(3)") == [23]
    assert select_css(simple_tree, "h1, h2") == [14, 22, 32]
    assert select_css(simple_tree, "aside a") == [35, 37]


def test_select_css_document_order(simple_tree):
    ids = select_css(simple_tree, "li, p, a")
    assert ids == sorted(ids)


def test_select_css_syntax_error(simple_tree):
    with pytest.raises(SelectorSyntax):
        select_css(simple_tree, "p::before")
    with pytest.raises(SelectorSyntax):
        select_css(simple_tree, "div ~ p")
    with pytest.raises(SelectorSyntax):
        select_css(simple_tree, "")


def test_empty_document():
    with pytest.raises(EmptyDocument):
        parse_and_clean(b"")
    with pytest.raises(EmptyDocument):
        parse_and_clean(b"   \n  ")


def test_malformed_html_recovery():
    tree = parse_and_clean(b"<p>one<p>two<div>three")
    tags = [n.tag for n in tree.nodes]
    assert tags[:2] == ["html", "body"]
    texts = [n.text for n in tree.nodes if n.text]
    assert texts == ["one", "two", "three"]
    ps = [n for n in tree.nodes if n.tag == "p"]
    assert all(tree.nodes[p.parent_id].tag == "body" for p in ps)


def test_unclosed_tags_close_at_parent_boundary():
    tree = parse_and_clean(b"<html><body><div><b>bold</div><p>after</p></body></html>")
    p = next(n for n in tree.nodes if n.tag == "p")
    assert tree.nodes[p.parent_id].tag == "body"


def test_control_chars_and_nbsp():
    assert normalize_text("a\x00b  c\t\nd") == "ab c d"
    assert normalize_text("　  x  ") == "x"
    tree = parse_and_clean("<html><body><p>a\x01b&#160;c</p></body></html>".encode())
    assert tree.nodes[2].text == "ab c"


def test_cleaning_preserves_nonspace_characters():
    from collections import Counter

    raw = "Wet &amp; windy — 40cm of snow!   Roads shut."
    tree = parse_and_clean(f"<html><body><p>{raw}</p></body></html>".encode())
    unescaped = raw.replace("&amp;", "&")

    def meaningful(s):
        return Counter(ch for ch in s if not ch.isspace())

    assert meaningful(tree.nodes[2].text) == meaningful(unescaped)
    assert "  " not in tree.nodes[2].text


def test_reparse_isomorphism(simple_tree):
    rendered = to_html(simple_tree)
    reparsed = parse_and_clean(rendered, url=simple_tree.source_url)
    a = [(n.tag, n.text, n.parent_id) for n in simple_tree.nodes]
    b = [(n.tag, n.text, n.parent_id) for n in reparsed.nodes]
    assert a == b


def test_reparse_isomorphism_with_fragment_merging():
    tree = parse_and_clean(b"<html><body><p>a<!--gap-->b<script>s</script>c</p></body></html>")
    assert tree.nodes[2].text == "a b c"
    again = parse_and_clean(to_html(tree))
    assert again.nodes[2].text == "a b c"


def test_xpath_parse_rejects_garbage():
    with pytest.raises(NoMatch):
        XPathExpr.parse("html/body")
    with pytest.raises(NoMatch):
        XPathExpr.parse("")
