import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clausealign import _kernels_py, kernels
from oracles import lcs_oracle, levenshtein_oracle

try:
    from clausealign import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

BACKENDS = [_kernels_py] + ([compiled] if compiled is not None else [])
texts = st.text(alphabet="abc天下人之", max_size=12)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__)
class TestStringKernels:
    @pytest.mark.parametrize("a, b, expected", [
        ("", "abc", 3),
        ("abc", "abc", 0),
        ("kitten", "sitting", 3),
        ("", "", 0),
        ("天下", "天上", 1),
    ])
    def test_levenshtein_cases(self, impl, a, b, expected):
        assert impl.levenshtein(a, b) == expected

    @pytest.mark.parametrize("a, b, expected", [
        ("ABCBDAB", "BDCABA", 4),
        ("abc", "abc", 3),
        ("abc", "xyz", 0),
        ("", "abc", 0),
    ])
    def test_lcs_cases(self, impl, a, b, expected):
        assert impl.lcs_length(a, b) == expected

    @given(a=texts, b=texts)
    @settings(max_examples=200, deadline=None)
    def test_against_oracles(self, impl, a, b):
        assert impl.levenshtein(a, b) == levenshtein_oracle(a, b)
        assert impl.lcs_length(a, b) == lcs_oracle(a, b)

    def test_astral_code_points(self, impl):
        # one code point each, not surrogate pairs
        assert impl.levenshtein("\U00020000a", "\U00020001a") == 1
        assert impl.lcs_length("\U00020000a", "\U00020000b") == 1


@pytest.mark.skipif(compiled is None, reason="extension not built")
@given(
    m=st.integers(1, 7),
    n=st.integers(1, 7),
    seed=st.integers(0, 2**32 - 1),
)
@settings(max_examples=100, deadline=None)
def test_dp_fill_backends_bit_identical(m, n, seed):
    rng = np.random.default_rng(seed)
    tables = [rng.random((m, n)) for _ in range(4)] + [rng.random(m) * 0.1, rng.random(n) * 0.1]
    # invalid cells carry -inf, as the aligner produces them
    tables[1][0, :] = -np.inf
    tables[2][:, 0] = -np.inf
    tables[3][0, :] = -np.inf
    tables[3][:, 0] = -np.inf
    D1, b1 = _kernels_py.dp_fill(*tables)
    D2, b2 = compiled.dp_fill(*tables)
    assert np.array_equal(D1, D2)
    assert np.array_equal(b1, b2)


def test_dp_fill_tie_prefers_one_to_one():
    # every transition scores 0: 1-1 must win wherever it is available
    z = np.zeros((2, 2))
    D, back = kernels.dp_fill(z, z, z, z, np.zeros(2), np.zeros(2))
    assert back[1, 1] == kernels.BP_11
    assert back[2, 2] == kernels.BP_11
    assert back[1, 0] == kernels.BP_10
    assert back[0, 1] == kernels.BP_01


def test_dp_fill_boundary_cells_only_reachable_by_drops():
    z = np.ones((3, 3))
    D, back = kernels.dp_fill(z, z, z, z, np.full(3, 0.5), np.full(3, 0.25))
    assert list(D[:, 0]) == [0.0, 0.5, 1.0, 1.5]
    assert list(D[0, :]) == [0.0, 0.25, 0.5, 0.75]


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "python")


def test_pure_backend_gives_identical_alignments(tmp_path):
    import json
    import os
    import subprocess
    import sys

    from clausealign.cli import main
    from conftest import DATA_DIR

    args = ["align", "--corpus", os.path.join(DATA_DIR, "corpus.jsonl"),
            "--dict", os.path.join(DATA_DIR, "dict.tsv"),
            "--wordlist", os.path.join(DATA_DIR, "wordlist.txt"), "--jobs", "1"]
    assert main(args + ["--out", str(tmp_path / "a.jsonl")]) == 0
    env = dict(os.environ, CLAUSEALIGN_PURE="1")
    code = ("import sys; from clausealign import kernels; from clausealign.cli import main; "
            "assert kernels.BACKEND == 'python'; sys.exit(main(sys.argv[1:]))")
    subprocess.run([sys.executable, "-c", code] + args + ["--out", str(tmp_path / "b.jsonl")],
                   env=env, check=True, capture_output=True)
    a = [json.loads(x) for x in (tmp_path / "a.jsonl").read_text(encoding="utf-8").splitlines()]
    b = [json.loads(x) for x in (tmp_path / "b.jsonl").read_text(encoding="utf-8").splitlines()]
    assert a == b
