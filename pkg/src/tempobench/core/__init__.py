from .data import (
    SplitDataset,
    Subsequence,
    accuracy,
    intern_labels,
    load_dataset,
    read_split_tsv,
    save_dataset,
    write_split_tsv,
    z_normalize,
    z_normalize_rows,
)
from .rng import Prng, derive_seed

__all__ = [
    "Prng",
    "derive_seed",
    "SplitDataset",
    "Subsequence",
    "accuracy",
    "intern_labels",
    "load_dataset",
    "read_split_tsv",
    "save_dataset",
    "write_split_tsv",
    "z_normalize",
    "z_normalize_rows",
]
