import pytest

from specforge import DatasetStats, split, synth_spiral


@pytest.fixture(scope="session")
def spiral():
    return synth_spiral(300, 3, 0.2, seed=50)


@pytest.fixture(scope="session")
def spiral_folds(spiral):
    return split(spiral, 0.9, seed=50)


@pytest.fixture(scope="session")
def spiral_stats(spiral_folds):
    gen, ev = spiral_folds
    return DatasetStats.from_datasets(gen, ev)


def write_csv(path, header, rows):
    path.write_text("\n".join([",".join(header)] + [",".join(str(c) for c in r) for r in rows]) + "\n")
    return path
