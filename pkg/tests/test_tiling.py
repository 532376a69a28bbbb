import numpy as np
import pytest

from affinestruct.affine_core import AffineMap, GroupPresentation, apply, inverse
from affinestruct.errors import InvalidParameter
from affinestruct.fixtures import SIMILARITY_POLYGON, build_example
from affinestruct.tiling import (
    TilingJob,
    edge_gluing_check,
    enumerate_group_elements,
    parse_tiling,
    render_tiling,
    tiling_copies,
)

Q = np.array(SIMILARITY_POLYGON)
WIDE = ((-100.0, -100.0), (100.0, 100.0))


def similarity_job(L, viewport=WIDE, **kw):
    G, meta = build_example("SimilarityTorus")
    return TilingJob(Q, G, L, viewport, edge_labels=tuple(meta["edge_labels"]), **kw)


def test_length_zero_is_fundamental_polygon():
    svg = render_tiling(similarity_job(0))
    copies = parse_tiling(svg)
    assert list(copies) == [""]
    np.testing.assert_array_equal(copies[""][0], Q)


def test_length_one_copies():
    G, _ = build_example("SimilarityTorus")
    copies = {c.label: c.polygons[0] for c in tiling_copies(similarity_job(1))}
    assert set(copies) == {"", "a", "a^-1", "b", "b^-1"}
    # hand images: a Q = Q/2 + (0,1), b Q via (x - y + 2, x + y)
    np.testing.assert_allclose(copies["a"], [[0, 1], [1, 1], [0.5, 1.5], [0, 1.5]])
    np.testing.assert_allclose(copies["b"], [[2, 0], [4, 2], [2, 2], [1, 1]])
    np.testing.assert_allclose(copies["a^-1"], apply(inverse(G["a"]), Q))
    np.testing.assert_allclose(copies["b^-1"], apply(inverse(G["b"]), Q))


def test_viewport_clipping():
    # default viewport [-1,5] x [-1,3] clips the large copies
    svg = render_tiling(similarity_job(1, viewport=((-1.0, -1.0), (5.0, 3.0))))
    copies = parse_tiling(svg)
    for polys in copies.values():
        for poly in polys:
            assert np.all(poly[:, 0] >= -1 - 1e-9) and np.all(poly[:, 0] <= 5 + 1e-9)
            assert np.all(poly[:, 1] >= -1 - 1e-9) and np.all(poly[:, 1] <= 3 + 1e-9)
    assert "a^-1" in copies  # 2Q - (0,2) straddles the lower edge


def test_dedup_by_fingerprint():
    # an involution: a^-1 and every longer word repeat a or the identity
    flip = AffineMap([[-1.0, 0.0], [0.0, 1.0]], [1.0, 0.0])
    G = GroupPresentation.of(a=flip)
    words = [w for w, _ in enumerate_group_elements(G, 4)]
    assert words == [(), ((0, 1),)]
    # no two kept words share a fingerprint
    G2, _ = build_example("SimilarityTorus")
    elems = enumerate_group_elements(G2, 3)
    fps = [tuple(np.round(np.concatenate([f.linear.ravel(), f.translation]) / 1e-7)) for _, f in elems]
    assert len(fps) == len(set(fps))


@pytest.mark.parametrize("example", ["TranslationTorus", "SimilarityTorus"])
def test_abelian_dedup_counts(example):
    # both groups are Z^2 (the similarity generators share the fixed point (0,2) and
    # commute), so distinct elements are lattice points with |i| + |j| <= L
    G, _ = build_example(example)
    for L in range(5):
        assert len(enumerate_group_elements(G, L)) == 1 + 2 * L * (L + 1)


def test_free_group_counts():
    # a = x + (1, 0) and b = diag(2, 3) x + (0, 1) do not commute
    G = GroupPresentation.of(
        a=AffineMap.translation_by([1.0, 0.0]),
        b=AffineMap([[2.0, 0.0], [0.0, 3.0]], [0.0, 1.0]),
    )
    assert len(enumerate_group_elements(G, 1)) == 5
    # reduced words of length <= 2 number 1 + 4 + 12 = 17, and none coincide here
    assert len(enumerate_group_elements(G, 2)) == 17


def test_word_growth_monotone():
    G, _ = build_example("TranslationTorus")
    counts = [len(tiling_copies(TilingJob([[0, 0], [1, 0], [1, 1], [0, 1]], G, L))) for L in range(6)]
    assert counts == sorted(counts)


def test_ordering_is_lexicographic():
    G, _ = build_example("SimilarityTorus")
    words = [w for w, _ in enumerate_group_elements(G, 2)]
    assert words[:6] == [(), ((0, 1),), ((0, 1), (0, 1)), ((0, 1), (1, 1)), ((0, 1), (1, -1)), ((0, -1),)]


def test_deterministic_output():
    assert render_tiling(similarity_job(4)) == render_tiling(similarity_job(4))


def test_identity_copy_marked_and_labelled():
    svg = render_tiling(similarity_job(1))
    assert 'class="fundamental"' in svg
    for label in "αβγδ":
        assert label in svg


def test_edge_gluing():
    G, _ = build_example("SimilarityTorus")
    svg = render_tiling(similarity_job(2))
    report = edge_gluing_check(svg, G)
    assert report["render_error"] <= 1e-9
    assert report["gluing_error"] <= 1e-9


def test_writes_output(tmp_path):
    out = tmp_path / "fig.svg"
    text = render_tiling(similarity_job(1, output=str(out)))
    assert out.read_text() == text + "\n"


@pytest.mark.parametrize(
    "polygon",
    [
        [[0, 0], [1, 0]],
        [[0, 0], [1, 1], [1, 0], [0, 1]],  # bow tie
        [[0, 0], [0, 1], [1, 1], [1, 0]],  # clockwise
    ],
)
def test_polygon_validation(polygon):
    G, _ = build_example("SimilarityTorus")
    with pytest.raises(InvalidParameter):
        TilingJob(polygon, G, 1)


def test_job_validation():
    G, _ = build_example("SimilarityTorus")
    with pytest.raises(InvalidParameter):
        TilingJob(Q, G, 1, ((0.0, 0.0), (0.0, 1.0)))
    with pytest.raises(InvalidParameter):
        TilingJob(Q, G, -1)
    H, _ = build_example("HopfManifold")
    with pytest.raises(InvalidParameter):
        TilingJob(Q, H, 1)
