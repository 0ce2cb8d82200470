import math
from datetime import date

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from helpers import rca_oracle, random_panel
from regcomplex import panel
from regcomplex.ingest import ACTIVE, FirmRecord
from regcomplex.panel import BinaryMatrix, PanelError, RegionIndustryPanel


def firm(fid, region, nic2, cap):
    return FirmRecord(fid, region, nic2 + "011", nic2, date(2015, 1, 1), ACTIVE, cap)


def make_panel(w, regions=None, industries=None):
    w = np.asarray(w)
    return RegionIndustryPanel(
        tuple(regions or [f"r{i}" for i in range(w.shape[0])]),
        tuple(industries or [f"p{j}" for j in range(w.shape[1])]),
        w,
    )


# ---------------------------------------------------------------- aggregate


def test_aggregate_additive():
    p = panel.aggregate([firm("a", "A", "62", 10), firm("b", "A", "62", 5)])
    assert p.regions == ("A",) and p.industries == ("62",)
    assert p.weights.tolist() == [[15]]


def test_aggregate_sorted_labels():
    rs = [firm("a", "Zed", "62", 1), firm("b", "Ann", "13", 2), firm("c", "Zed", "13", 4)]
    p = panel.aggregate(rs)
    assert p.regions == ("Ann", "Zed") and p.industries == ("13", "62")
    assert p.weights.tolist() == [[2, 0], [4, 1]]
    assert p.total() == 7


def test_aggregate_given_label_sets():
    p = panel.aggregate([firm("a", "A", "62", 3)], regions=["B", "A"], industries=["62", "10"])
    assert p.regions == ("A", "B") and p.industries == ("10", "62")
    assert p.weights.tolist() == [[0, 3], [0, 0]]
    with pytest.raises(PanelError):
        panel.aggregate([firm("a", "C", "62", 3)], regions=["A"])


def test_aggregate_errors():
    with pytest.raises(PanelError):
        panel.aggregate([])
    big = 2**62
    with pytest.raises(PanelError, match="overflow"):
        panel.aggregate([firm("a", "A", "62", big), firm("b", "A", "62", big)])


def test_panel_validation():
    with pytest.raises(PanelError):
        make_panel([[1, -1]])
    with pytest.raises(PanelError):
        make_panel([[1, 2]], industries=["x", "x"])
    with pytest.raises(PanelError):
        make_panel([[1.0, float("nan")]])
    p = make_panel([[1, 2]])
    with pytest.raises(ValueError):
        p.weights[0, 0] = 5


def test_drop_empty():
    p, log = panel.drop_empty(make_panel([[1, 0, 2], [0, 0, 0]]))
    assert p.regions == ("r0",) and p.industries == ("p0", "p2")
    assert log.regions == ["r1"] and log.industries == ["p1"]
    with pytest.raises(PanelError):
        panel.drop_empty(make_panel([[0, 0]]))


# ---------------------------------------------------------------- rca


def test_rca_one_by_one():
    assert panel.rca(make_panel([[37]])).tolist() == [[1.0]]


def test_rca_uniform():
    assert panel.rca(make_panel(np.full((2, 2), 9))).tolist() == [[1.0, 1.0], [1.0, 1.0]]


def test_rca_hand_example():
    assert panel.rca(make_panel([[3, 1], [1, 3]])).tolist() == [[1.5, 0.5], [0.5, 1.5]]


def test_rca_zero_sum_names_label():
    with pytest.raises(PanelError, match="'q'"):
        panel.rca(make_panel([[1, 0], [2, 0]], industries=["p", "q"]))
    with pytest.raises(PanelError, match="'b'"):
        panel.rca(make_panel([[1, 1], [0, 0]], regions=["a", "b"]))


def test_rca_matches_exact_oracle():
    rng = np.random.default_rng(3)
    for _ in range(30):
        w = random_panel(rng, 8, 8)
        exact = rca_oracle(w)
        got = panel.rca(make_panel(w))
        # correctly rounded: identical to rounding the exact rational once
        assert got.tolist() == [[float(v) for v in row] for row in exact]


def test_rca_float_weights():
    got = panel.rca(make_panel([[0.5, 1.5], [1.0, 1.0]]))
    assert got[0, 0] == 0.5 * 4 / (2 * 1.5)


positive_panels = hnp.arrays(np.int64, hnp.array_shapes(min_dims=2, max_dims=2, max_side=8), elements=st.integers(0, 10**12)).filter(
    lambda w: w.sum(axis=1).all() and w.sum(axis=0).all()
)


@given(positive_panels, st.integers(1, 10**6))
def test_rca_scale_invariance(w, c):
    a = panel.rca(make_panel(w))
    b = panel.rca(make_panel(w * c))
    assert np.array_equal(a, b)


@given(positive_panels)
def test_rca_share_identity(w):
    r = panel.rca(make_panel(w))
    col = w.sum(axis=0)
    g = col / col.sum()
    for s in range(w.shape[0]):
        assert math.isclose(math.fsum(r[s] * g), 1.0, rel_tol=1e-12)


# ---------------------------------------------------------------- binarize and prune


def test_binarize_example():
    bm = panel.binarize([[1.5, 0.5], [0.5, 1.5]])
    assert bm.m.tolist() == [[1, 0], [0, 1]]
    assert bm.diversification.tolist() == [1, 1] and bm.ubiquity.tolist() == [1, 1]


def test_binarize_inclusive_threshold():
    assert panel.binarize(np.ones((2, 3))).m.all()


def test_binarize_threshold_two_then_prune_fails():
    bm = panel.binarize([[1.5, 0.5], [0.5, 1.5]], threshold=2.0)
    assert not bm.m.any()
    with pytest.raises(PanelError):
        panel.prune(bm)


def test_binarize_rejects_bad_input():
    with pytest.raises(PanelError):
        panel.binarize([[1.0]], threshold=0)
    with pytest.raises(PanelError):
        panel.binarize([[np.inf]])


rca_mats = hnp.arrays(np.float64, hnp.array_shapes(min_dims=2, max_dims=2, max_side=8), elements=st.floats(0, 5))


@given(rca_mats, st.floats(0.01, 4), st.floats(0, 2))
def test_binarize_monotone_in_threshold(r, t, dt):
    lo = panel.binarize(r, t).m
    hi = panel.binarize(r, t + dt).m
    assert np.all(hi <= lo)


def test_binary_matrix_validation():
    with pytest.raises(PanelError):
        BinaryMatrix.from_array([[0, 2]])
    bm = BinaryMatrix.from_array([[1, 0, 1], [0, 0, 1]])
    assert bm.diversification.tolist() == [2, 1] and bm.ubiquity.tolist() == [1, 0, 2]
    assert bm.regions == ("r0", "r1") and bm.industries == ("p0", "p1", "p2")


def test_prune_single_zero_column():
    bm = BinaryMatrix.from_array([[1, 0, 1], [1, 0, 0]], industries=["a", "b", "c"])
    out, log = panel.prune(bm)
    assert out.industries == ("a", "c")
    assert log.removed == [(1, "industry", "b")]


def test_prune_zero_row_and_column():
    # a zero row and a zero column together; both go in the first pass
    bm = BinaryMatrix.from_array([[1, 0, 1], [0, 0, 0], [1, 0, 0]])
    out, log = panel.prune(bm)
    assert out.regions == ("r0", "r2") and out.industries == ("p0", "p2")
    assert log.removed == [(1, "region", "r1"), (1, "industry", "p1")]
    assert log.to_dict()[0] == {"pass": 1, "axis": "region", "label": "r1"}


def test_prune_already_pruned_unchanged():
    bm = BinaryMatrix.from_array([[1, 1], [0, 1]])
    out, log = panel.prune(bm)
    assert out == bm and log.removed == []


binary = hnp.arrays(np.uint8, hnp.array_shapes(min_dims=2, max_dims=2, max_side=8), elements=st.integers(0, 1)).filter(lambda m: m.any())


@given(binary)
def test_prune_idempotent(m):
    once, _ = panel.prune(BinaryMatrix.from_array(m))
    twice, log = panel.prune(once)
    assert twice == once and log.removed == []
    assert once.diversification.all() and once.ubiquity.all()
    assert once.diversification.tolist() == once.m.sum(axis=1).tolist()


def test_specialization_pipeline():
    p = make_panel([[3, 1, 0], [1, 3, 0], [0, 0, 0]])
    bm, ratios, trimmed, log = panel.specialization(p)
    assert trimmed.shape == (2, 2)
    assert ratios.tolist() == [[1.5, 0.5], [0.5, 1.5]]
    assert bm.m.tolist() == [[1, 0], [0, 1]]
    assert log.regions == ["r2"] and log.industries == ["p2"]
