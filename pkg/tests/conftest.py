import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from clausealign.lexicon import IdfTable, build_lexicon  # noqa: E402
from clausealign.scoring import AlignmentConfig  # noqa: E402
from clausealign.segmenter import CharSegmenter  # noqa: E402

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data", "sample")


@pytest.fixture
def char_seg():
    return CharSegmenter()


@pytest.fixture
def toy_lexicon():
    return build_lexicon([("B", "Y"), ("C", "Y Z")])


@pytest.fixture
def toy_idf():
    return IdfTable(3, {"Y": 2}, {"Y": 0.2})


@pytest.fixture
def plain_config():
    return AlignmentConfig(mu=1.0, sigma=0.5)
