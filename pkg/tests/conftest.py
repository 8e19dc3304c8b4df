from pathlib import Path

import pytest

from cantorstring import (
    lebesgue_model,
    make_letter,
    middle_third_letter,
    single_letter_model,
    third_fifth_model,
)

# frozen reference values (independent solves, see test_exponent for the oracles)
GAMMA_R_THIRD_FIFTH = 0.39640345203549965
GAMMA_H_THIRD_FIFTH = 0.39630395655253714


@pytest.fixture
def third_fifth():
    return third_fifth_model()


@pytest.fixture
def middle_third():
    return single_letter_model(middle_third_letter())


@pytest.fixture
def lebesgue():
    return lebesgue_model()


@pytest.fixture
def balanced_pair():
    """Two distinct letters sharing the per-letter exponent alpha = ln2/ln6."""
    import math
    from cantorstring import IfsModel

    alpha = math.log(2) / math.log(6)
    # three maps with equal products q = 3^(-1/alpha), equal weights 1/3
    r = 3.0 ** (1.0 - 1.0 / alpha)
    gap = (1.0 - 3.0 * r) / 2.0
    other = make_letter("tri", [(r, 0.0), (r, r + gap), (r, 1.0 - r)],
                        (1 / 3, 1 / 3, 1 / 3))
    return IfsModel((0.0, 1.0), (middle_third_letter(), other), (0.5, 0.5))


@pytest.fixture(scope="session")
def models_dir():
    return Path(__file__).resolve().parent.parent / "models"
