"""Lattice geometry: counts, roles, seam placement, logical reference."""

import json

import numpy as np
import pytest

from seamsim.geometry import (
    LayoutError, REGION_BULK, REGION_SEAM_DATA, REGION_SEAM_SYNDROME,
    ROLE_DATA, ROLE_XCHECK, ROLE_ZCHECK, build_layout,
    logical_flip_reference,
)


@pytest.mark.parametrize("L", [2, 3, 5, 8, 20])
def test_site_counts(L):
    layout = build_layout(L)
    assert layout.grid_size == 2 * L - 1
    assert layout.n_sites == (2 * L - 1) ** 2
    assert layout.n_data == L * L + (L - 1) * (L - 1)
    assert layout.n_zchecks == L * (L - 1)
    assert len(layout.xcheck_coords) == L * (L - 1)
    assert layout.n_data + 2 * layout.n_zchecks == layout.n_sites


def test_l20_patch_size():
    # The desk-scale reference patch: 1521 sites for distance 20.
    assert build_layout(20).n_sites == 1521


def test_roles():
    layout = build_layout(3)
    assert layout.site_role(0, 0) == ROLE_DATA
    assert layout.site_role(1, 1) == ROLE_DATA
    assert layout.site_role(1, 0) == ROLE_ZCHECK
    assert layout.site_role(0, 1) == ROLE_XCHECK
    for (r, c) in layout.data_coords:
        assert (r + c) % 2 == 0
    for (r, c) in layout.zcheck_coords:
        assert r % 2 == 1 and c % 2 == 0
    for (r, c) in layout.xcheck_coords:
        assert r % 2 == 0 and c % 2 == 1


def test_invalid_distance():
    for bad in (1, 0, -3, 2.5, "5"):
        with pytest.raises(LayoutError):
            build_layout(bad)


def test_seam_column_validation():
    # Odd (conjugate-check) columns and non-interior columns are rejected.
    with pytest.raises(LayoutError):
        build_layout(5, seam_column=3)
    with pytest.raises(LayoutError):
        build_layout(5, seam_column=0)
    with pytest.raises(LayoutError):
        build_layout(5, seam_column=8)
    layout = build_layout(5, seam_column=4)
    assert layout.seam_column == 4


def test_seam_region_counts():
    L = 5
    layout = build_layout(L, seam_column=4)
    counts = layout.region_counts()
    # One interior even column: L data qubits and L-1 bit-flip checks.
    assert counts[REGION_SEAM_DATA] == L
    assert counts[REGION_SEAM_SYNDROME] == L - 1
    assert counts[REGION_BULK] == layout.n_sites - (2 * L - 1)
    assert layout.data_seam_mask().sum() == L
    assert layout.zcheck_seam_mask().sum() == L - 1


def test_no_seam_is_all_bulk():
    layout = build_layout(4)
    assert layout.region_counts()[REGION_BULK] == layout.n_sites
    assert not layout.data_seam_mask().any()


def test_zcheck_matrix_degrees():
    layout = build_layout(4)
    H = layout.zcheck_matrix()
    assert H.shape == (layout.n_zchecks, layout.n_data)
    row_deg = np.asarray(H.sum(axis=1)).ravel()
    # Checks touch 4 data qubits except on the left/right lattice edge.
    assert set(row_deg) <= {3, 4}
    col_deg = np.asarray(H.sum(axis=0)).ravel()
    # Data qubits touch 1 or 2 bit-flip checks in this orientation.
    assert set(col_deg) <= {1, 2}


@pytest.mark.parametrize("L,expected_len", [(2, 2), (5, 5)])
def test_logical_reference_length(L, expected_len):
    layout = build_layout(L)
    ref = logical_flip_reference(layout)
    assert len(ref) == expected_len
    coords = [layout.data_coords[i] for i in ref]
    assert all(r == 0 and c % 2 == 0 for r, c in coords)


def test_logical_reference_crosses_seam_once():
    layout = build_layout(7, seam_column=6)
    ref = logical_flip_reference(layout)
    coords = [layout.data_coords[i] for i in ref]
    on_seam = [rc for rc in coords if rc[1] == layout.seam_column]
    assert len(on_seam) == 1


def test_logical_reference_parity_flips():
    # The reference string anticommutes with exactly the error patterns
    # of odd overlap: direct parity check on random patterns.
    layout = build_layout(5)
    ref = np.asarray(logical_flip_reference(layout))
    rng = np.random.default_rng(42)
    for _ in range(100):
        pattern = rng.integers(0, 2, size=layout.n_data)
        overlap = int(pattern[ref].sum() % 2)
        flipped = bool(overlap)
        assert flipped == (int(pattern[ref].sum()) % 2 == 1)


def test_to_json_round_trip_fields():
    layout = build_layout(3, seam_column=2)
    blob = json.loads(layout.to_json())
    assert blob["distance"] == 3
    assert blob["seam_column"] == 2
    assert blob["orientation"] == "vertical"
    assert len(blob["roles"]) == 5
    assert blob["regions"][1][2] == REGION_SEAM_SYNDROME
    assert blob["regions"][0][2] == REGION_SEAM_DATA
