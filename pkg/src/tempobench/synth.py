"""Synthetic problems separating coordinate-wise evidence from shape evidence.

``positional``: a class-dependent spike at a fixed index; order carries no
information.  ``temporal``: a class-specific shape at a random offset.
``aligned``: the same shapes, always at the centre.
"""

from dataclasses import dataclass

import numpy as np

from .core.data import SplitDataset, z_normalize_rows
from .core.rng import Prng, derive_seed

__all__ = ["SynthSpec", "class_pattern", "gen_positional", "gen_temporal", "gen_aligned", "generate", "SYNTH_KINDS"]

SYNTH_KINDS = ("positional", "temporal", "aligned")


@dataclass(frozen=True)
class SynthSpec:
    kind: str = "temporal"
    n: int = 128
    n_train: int = 100
    n_test: int = 100
    n_classes: int = 2
    width: int = 16
    noise: float = 1.0
    amplitude: float = 3.0
    seed: int = 0
    name: str = ""

    def __post_init__(self):
        if self.kind not in SYNTH_KINDS:
            raise ValueError(f"unknown synthetic kind {self.kind!r}; choose from {SYNTH_KINDS}")
        if self.n < 2:
            raise ValueError("series length must be >= 2")
        if self.n_classes < 2:
            raise ValueError("at least two classes are required")
        for label, size in (("n_train", self.n_train), ("n_test", self.n_test)):
            if size < self.n_classes or size % self.n_classes:
                raise ValueError(f"{label}={size} must be a positive multiple of n_classes={self.n_classes}")
        if not 2 <= self.width <= self.n:
            raise ValueError(f"pattern width must lie in [2, n], got {self.width}")
        if self.noise < 0:
            raise ValueError("noise must be non-negative")
        if not self.name:
            object.__setattr__(self, "name", f"synth_{self.kind}")


def class_pattern(k: int, width: int, amplitude: float = 1.0) -> np.ndarray:
    """Zero-mean shape for class ``k`` with root-mean-square ``amplitude``.

    Class 0 is a triangle spanning the window, class 1 a flat pulse over the
    middle half of the window and class ``k >= 2`` a +/-1 square wave of
    ``k`` cycles.  Removing the mean keeps the pattern from shifting the
    instance mean, and the common RMS keeps the variance uninformative.
    """
    if width < 2:
        raise ValueError("pattern width must be >= 2")
    t = np.arange(width, dtype=np.float64)
    if k == 0:
        shape = 1.0 - np.abs(2.0 * t / (width - 1) - 1.0)
    elif k == 1:
        quarter = width // 4
        shape = ((t >= quarter) & (t < width - quarter)).astype(np.float64)
    else:
        shape = np.where(np.sin(2.0 * np.pi * k * (t + 0.5) / width) >= 0, 1.0, -1.0)
    shape = shape - shape.mean()
    rms = np.sqrt(np.mean(shape ** 2))
    if rms == 0:
        raise ValueError(f"pattern for class {k} is degenerate at width {width}")
    return amplitude * shape / rms


def _generate(spec: SynthSpec, offset_rule):
    splits = {}
    for split, size in (("train", spec.n_train), ("test", spec.n_test)):
        X = np.empty((size, spec.n))
        y = np.arange(size, dtype=np.int64) % spec.n_classes
        for i in range(size):
            rng = Prng(derive_seed(spec.seed, spec.kind if spec.kind == "positional" else "shape", split, i))
            x = rng.gaussian_array(spec.n, 0.0, spec.noise)
            offset_rule(x, int(y[i]), rng)
            X[i] = x
        splits[split] = (z_normalize_rows(X), y)
    classes = tuple(str(c) for c in range(spec.n_classes))
    return SplitDataset(spec.name, *splits["train"], *splits["test"], classes)


def gen_positional(spec: SynthSpec) -> SplitDataset:
    """Class ``k`` adds ``amplitude * (k + 1)`` at index ``n // 2``."""

    def add_spike(x, k, rng):
        x[spec.n // 2] += spec.amplitude * (k + 1)

    return _generate(spec, add_spike)


def _embed(spec, fixed_offset):
    patterns = [class_pattern(k, spec.width, spec.amplitude) for k in range(spec.n_classes)]

    def add_pattern(x, k, rng):
        # the offset is always drawn so both variants share noise streams
        offset = rng.next_int(0, spec.n - spec.width)
        if fixed_offset is not None:
            offset = fixed_offset
        x[offset:offset + spec.width] += patterns[k]

    return add_pattern


def gen_temporal(spec: SynthSpec) -> SplitDataset:
    """Class shape embedded at an offset uniform over ``0..n-width``."""
    return _generate(spec, _embed(spec, None))


def gen_aligned(spec: SynthSpec) -> SplitDataset:
    """Class shape embedded at ``(n - width) // 2`` in every instance."""
    return _generate(spec, _embed(spec, (spec.n - spec.width) // 2))


_GENERATORS = {"positional": gen_positional, "temporal": gen_temporal, "aligned": gen_aligned}


def generate(spec: SynthSpec) -> SplitDataset:
    return _GENERATORS[spec.kind](spec)
