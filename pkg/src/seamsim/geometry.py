"""Planar surface-code lattice with an optional noisy seam column.

The code patch of distance L lives on a (2L-1) x (2L-1) grid of sites.
Sites with both coordinates even or both odd are data qubits, giving
L^2 + (L-1)^2 data qubits.  Sites at (odd row, even col) are the checks
whose outcomes flip under data bit flips ("z checks" below); sites at
(even row, odd col) are the conjugate check type.  Each check type has
L(L-1) members, for (2L-1)^2 sites total.

The seam is a single interior even column: its data qubits and z checks
carry elevated flip rates.  Error chains running down the seam column
implement the vertical logical bit-flip string, which is the sector this
layout is built to stress.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix

REGION_BULK = "bulk"
REGION_SEAM_DATA = "seam_data"
REGION_SEAM_SYNDROME = "seam_syndrome"

ROLE_DATA = "data"
ROLE_ZCHECK = "zcheck"
ROLE_XCHECK = "xcheck"


class LayoutError(ValueError):
    """Rejected layout parameters (bad distance or seam column)."""


def _role(r: int, c: int) -> str:
    if (r + c) % 2 == 0:
        return ROLE_DATA
    return ROLE_ZCHECK if r % 2 == 1 else ROLE_XCHECK


@dataclass(frozen=True)
class CodeLayout:
    """Immutable geometry of one planar patch, safe to share across workers.

    ``data_coords``/``zcheck_coords`` fix the site index ordering used by
    the sampler and decoder.  ``orientation`` records the direction the
    seam (and the logical bit-flip string) runs; only "vertical" exists.
    """

    distance: int
    seam_column: int | None
    orientation: str = "vertical"
    data_coords: tuple[tuple[int, int], ...] = field(repr=False, default=())
    zcheck_coords: tuple[tuple[int, int], ...] = field(repr=False, default=())
    xcheck_coords: tuple[tuple[int, int], ...] = field(repr=False, default=())

    @property
    def grid_size(self) -> int:
        return 2 * self.distance - 1

    @property
    def n_sites(self) -> int:
        return self.grid_size**2

    @property
    def n_data(self) -> int:
        return len(self.data_coords)

    @property
    def n_zchecks(self) -> int:
        return len(self.zcheck_coords)

    def site_role(self, r: int, c: int) -> str:
        return _role(r, c)

    def site_region(self, r: int, c: int) -> str:
        if self.seam_column is None or c != self.seam_column:
            return REGION_BULK
        role = _role(r, c)
        if role == ROLE_DATA:
            return REGION_SEAM_DATA
        return REGION_SEAM_SYNDROME

    def region_counts(self) -> dict[str, int]:
        counts = {REGION_BULK: 0, REGION_SEAM_DATA: 0, REGION_SEAM_SYNDROME: 0}
        n = self.grid_size
        for r in range(n):
            for c in range(n):
                counts[self.site_region(r, c)] += 1
        return counts

    def data_index(self) -> dict[tuple[int, int], int]:
        return {rc: i for i, rc in enumerate(self.data_coords)}

    def zcheck_index(self) -> dict[tuple[int, int], int]:
        return {rc: i for i, rc in enumerate(self.zcheck_coords)}

    def data_seam_mask(self) -> np.ndarray:
        """Boolean mask over data qubits lying on the seam column."""
        return np.array(
            [self.seam_column is not None and c == self.seam_column
             for _, c in self.data_coords],
            dtype=bool,
        )

    def zcheck_seam_mask(self) -> np.ndarray:
        return np.array(
            [self.seam_column is not None and c == self.seam_column
             for _, c in self.zcheck_coords],
            dtype=bool,
        )

    def zcheck_matrix(self) -> csr_matrix:
        """Sparse (n_zchecks x n_data) incidence matrix of the bit-flip checks."""
        didx = self.data_index()
        rows, cols = [], []
        for zi, (r, c) in enumerate(self.zcheck_coords):
            for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if 0 <= rr < self.grid_size and 0 <= cc < self.grid_size:
                    rows.append(zi)
                    cols.append(didx[(rr, cc)])
        data = np.ones(len(rows), dtype=np.uint8)
        return csr_matrix((data, (rows, cols)),
                          shape=(self.n_zchecks, self.n_data))

    def to_json(self) -> str:
        n = self.grid_size
        return json.dumps(
            {
                "distance": self.distance,
                "seam_column": self.seam_column,
                "orientation": self.orientation,
                "roles": [[_role(r, c) for c in range(n)] for r in range(n)],
                "regions": [
                    [self.site_region(r, c) for c in range(n)] for r in range(n)
                ],
            }
        )


def build_layout(distance: int, seam_column: int | None = None) -> CodeLayout:
    """Construct the lattice, validating distance and seam placement.

    The seam column must be an even interior column: even columns are the
    ones containing alternating data qubits and bit-flip checks, i.e. the
    columns a vertical logical bit-flip string can run along.
    """
    if not isinstance(distance, (int, np.integer)) or distance < 2:
        raise LayoutError(f"distance must be an integer >= 2, got {distance!r}")
    distance = int(distance)
    n = 2 * distance - 1
    if seam_column is not None:
        seam_column = int(seam_column)
        if not 0 < seam_column < n - 1:
            raise LayoutError(
                f"seam column {seam_column} is not interior to [1, {n - 2}]"
            )
        if seam_column % 2 != 0:
            raise LayoutError(
                f"seam column must be even (data/zcheck column), got {seam_column}"
            )
    data, zchecks, xchecks = [], [], []
    for r in range(n):
        for c in range(n):
            role = _role(r, c)
            if role == ROLE_DATA:
                data.append((r, c))
            elif role == ROLE_ZCHECK:
                zchecks.append((r, c))
            else:
                xchecks.append((r, c))
    return CodeLayout(
        distance=distance,
        seam_column=seam_column,
        data_coords=tuple(data),
        zcheck_coords=tuple(zchecks),
        xcheck_coords=tuple(xchecks),
    )


def logical_flip_reference(layout: CodeLayout) -> list[int]:
    """Data-qubit indices whose error parity witnesses a logical bit flip.

    This is the top row of data qubits: a minimum-weight (L-qubit) cut that
    every top-to-bottom bit-flip chain crosses an odd number of times and
    that crosses the seam column exactly once.  Sampler ground truth and
    decoder prediction both use this same string, keeping success
    basis-consistent.
    """
    didx = layout.data_index()
    return [didx[(0, c)] for c in range(0, layout.grid_size, 2)]
