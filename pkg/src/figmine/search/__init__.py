"""Figure search: inverted index, ranking, and the HTTP service."""

from figmine.search.index import (
    SearchIndex,
    SearchResult,
    build_index,
    figure_detail,
    fold,
    query,
    tokenize,
)
from figmine.search.service import VerificationLog, create_app, load_scores

__all__ = [
    "SearchIndex",
    "SearchResult",
    "build_index",
    "figure_detail",
    "fold",
    "query",
    "tokenize",
    "VerificationLog",
    "create_app",
    "load_scores",
]
