import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from honeycomb.geometry import ConvexPolygon, area, load_polygon, rectangle, regular_polygon
from honeycomb.tiling import (
    HexCell,
    SamplerError,
    TileClass,
    classify,
    from_parallelogram,
    hex_ring_offsets,
    lattice_vectors,
    regular_hexagon,
    sample_parallelogram,
    sample_random,
    verify_tiling,
)

FIXTURES = Path(__file__).parent / "fixtures"


def test_regular_hexagon_cell():
    H = regular_hexagon()
    assert math.isclose(area(H.poly), 1.0, rel_tol=1e-14)
    np.testing.assert_allclose(H.side_lengths, 0.6204032394013997, rtol=1e-14)
    assert not H.degenerate


def test_hexcell_rejects_asymmetric():
    v = regular_hexagon().vertices.copy()
    v[0] += 0.01
    with pytest.raises(ValueError, match="symmetric"):
        HexCell(v)
    with pytest.raises(ValueError, match="six"):
        HexCell(v[:5])
    with pytest.raises(ValueError, match="counterclockwise"):
        HexCell(regular_hexagon().vertices[::-1])


def test_parallelogram_is_degenerate_hexagon():
    cell = from_parallelogram((0, 0), (1, 0), (1.5, 1), (0.5, 1))
    assert cell.degenerate
    assert len(cell.poly) == 6
    assert classify(cell.poly) is TileClass.PARALLELOGRAM
    with pytest.raises(ValueError):
        from_parallelogram((0, 0), (1, 0), (1.5, 1), (0.4, 1))


def test_classification():
    assert classify(regular_polygon(6)) is TileClass.CENTRALLY_SYMMETRIC_HEXAGON
    assert classify(rectangle(0, 0, 2, 1)) is TileClass.PARALLELOGRAM
    assert classify(regular_polygon(5)) is TileClass.NOT_A_TILE
    assert classify(regular_polygon(8)) is TileClass.NOT_A_TILE
    assert classify(ConvexPolygon([(0, 0), (1, 0), (0, 1)])) is TileClass.NOT_A_TILE
    assert classify(load_polygon(FIXTURES / "nontile.json")) is TileClass.NOT_A_TILE


def test_lattice_vectors_and_ring_count():
    H = regular_hexagon()
    basis = lattice_vectors(H)
    assert math.isclose(abs(basis.det), 1.0, rel_tol=1e-14)
    assert len(hex_ring_offsets(1)) == 7
    assert len(hex_ring_offsets(2)) == 19
    assert len(hex_ring_offsets(3)) == 37


def test_neighbours_share_edges():
    # the six ring-1 translates of H* touch it along full edges
    H = regular_hexagon()
    b = lattice_vectors(H)
    shifts = [b.translation(m, n) for m, n in hex_ring_offsets(1) if (m, n) != (0, 0)]
    dist = sorted(float(np.linalg.norm(s)) for s in shifts)
    np.testing.assert_allclose(dist, math.sqrt(3) * 0.6204032394013997, rtol=1e-14)


@given(st.integers(0, 2**63 - 1))
def test_random_cells_tile(seed):
    cell = sample_random(seed)
    assert math.isclose(area(cell.poly), 1.0, rel_tol=1e-12)
    basis = lattice_vectors(cell)
    assert abs(abs(basis.det) - area(cell.poly)) <= 1e-12 * area(cell.poly)
    assert classify(cell.poly) is TileClass.CENTRALLY_SYMMETRIC_HEXAGON


def test_sampler_is_deterministic():
    np.testing.assert_array_equal(sample_random(5).vertices, sample_random(5).vertices)
    assert not np.array_equal(sample_random(5).vertices, sample_random(6).vertices)


def test_sampler_failure_is_reported():
    with pytest.raises(SamplerError):
        sample_random(0, min_turn=3.0)


@pytest.mark.parametrize("seed", range(5))
def test_verify_tiling_passes(seed):
    for cell in (sample_random(seed), sample_parallelogram(seed)):
        rep = verify_tiling(cell, rings=2, probes=2000, seed=seed)
        assert rep.passed, rep.to_dict()
        assert rep.coverage == 1.0


def test_verify_tiling_rejects_non_tile():
    P = load_polygon(FIXTURES / "nontile.json")
    rep = verify_tiling(P, rings=2)
    assert not rep.passed
    assert rep.det_residual > 1e-6 or rep.max_overlap > 0 or rep.coverage < 1.0
