"""Backlink co-linkage analysis: domain parsing, metrics and networks."""

import os
from pathlib import Path

_data = Path(__file__).with_name("data")
if _data.is_dir():
    os.environ.setdefault("COLINK_DATA_DIR", str(_data))

from ._core import (  # noqa: E402
    ColinkError,
    average_ranks,
    cluster,
    colinked_matrix,
    colinking_matrix,
    country_of_tld,
    import_backlinks,
    modularity,
    normalize_host,
    project_age_days,
    run_cli,
    spearman,
    split_domain,
)

__all__ = [
    "ColinkError",
    "average_ranks",
    "cluster",
    "colinked_matrix",
    "colinking_matrix",
    "country_of_tld",
    "import_backlinks",
    "modularity",
    "normalize_host",
    "project_age_days",
    "run_cli",
    "spearman",
    "split_domain",
]
