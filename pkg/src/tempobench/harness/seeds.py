from ..core.rng import derive_seed

__all__ = ["derive_cell_seed", "l_milli"]


def l_milli(l_fraction: float) -> int:
    return int(round(float(l_fraction) * 1000))


def derive_cell_seed(master_seed, dataset_name, classifier_id, transform_id, l_milli_value, run):
    """Seed of one experiment cell.

    FNV-1a 64 over ``master, dataset, classifier, transform, l_milli, run``
    joined by ``0x1F`` (integers in decimal), followed by a SplitMix64
    scramble.  Data-level draws shared by all classifiers pass ``""`` as the
    classifier id.
    """
    return derive_seed(int(master_seed), str(dataset_name), str(classifier_id), str(transform_id), int(l_milli_value), int(run))
