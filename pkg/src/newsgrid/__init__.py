"""newsgrid: multilingual news-article attribute extraction pipeline."""

__version__ = "0.1.0"

from .dom import DomNode, DomTree, parse_and_clean, select_css, xpath_of, resolve_xpath

__all__ = [
    "__version__",
    "DomNode",
    "DomTree",
    "parse_and_clean",
    "select_css",
    "xpath_of",
    "resolve_xpath",
]
