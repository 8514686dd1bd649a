"""PCR plate geometry: row-major well labels for 96- and 384-well plates."""

import string
from dataclasses import dataclass
from typing import List

from gtcs.core.errors import InvalidParameterError


@dataclass(frozen=True)
class PlateGeometry:
    """A rectangular plate with lettered rows and numbered columns."""

    rows: int
    cols: int

    @property
    def wells(self) -> int:
        return self.rows * self.cols

    def well_label(self, index: int) -> str:
        """Label of the index-th well (0-based) in row-major order, e.g. 13 -> B2."""
        if not 0 <= index < self.wells:
            raise InvalidParameterError(f"well index {index} outside a {self.wells}-well plate")
        row, col = divmod(index, self.cols)
        return f"{string.ascii_uppercase[row]}{col + 1}"

    def well_labels(self) -> List[str]:
        return [self.well_label(i) for i in range(self.wells)]


PLATES = {
    96: PlateGeometry(rows=8, cols=12),
    384: PlateGeometry(rows=16, cols=24),
}


def plate_for(size: int) -> PlateGeometry:
    """Geometry of a 96- or 384-well plate."""
    try:
        return PLATES[size]
    except KeyError:
        raise InvalidParameterError(f"unsupported plate size {size}; choose one of {sorted(PLATES)}")
