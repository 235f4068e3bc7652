import numpy as np

from ..core.validation import check_labels


def encode_training_labels(y, n_instances):
    """``np.unique`` label encoding; at least two classes are required."""
    y = check_labels(y, n_instances)
    classes, encoded = np.unique(y, return_inverse=True)
    if classes.shape[0] < 2:
        raise ValueError("training data must contain at least two classes")
    return classes, encoded.astype(np.int64)
