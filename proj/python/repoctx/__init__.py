"""Repository context retrieval engine for code completion."""

try:
    from ._repoctx import (
        Engine,
        count_tokens,
        dig_dataset,
        edit_similarity,
        jaccard,
        normalize_ws,
        soft_exact_match,
        tokenize,
    )
except ImportError:  # extension on sys.path during in-tree test runs
    from _repoctx import (
        Engine,
        count_tokens,
        dig_dataset,
        edit_similarity,
        jaccard,
        normalize_ws,
        soft_exact_match,
        tokenize,
    )

__all__ = [
    "Engine",
    "count_tokens",
    "dig_dataset",
    "edit_similarity",
    "jaccard",
    "normalize_ws",
    "soft_exact_match",
    "tokenize",
]
