import logging
from typing import Dict

import numpy as np

from gtcs.core.errors import DesignFormatError, FormatVersionError
from gtcs.services.design import DesignMatrix
from gtcs.utils.files import atomic_write_text

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1.0"
DESIGN_MAGIC = "# gtcs-design"


def parse_header(line: str, magic: str) -> Dict[str, str]:
    """Parse a `<magic> key=value ...` header line and check its major version.

    A header without a version key is read as the current version.

    Raises:
        DesignFormatError: If the magic prefix or a token is malformed
        FormatVersionError: If the major version differs from ours
    """
    if not line.startswith(magic):
        raise DesignFormatError(f"expected header starting with '{magic}', got '{line[:60]}'")
    fields = {}
    for token in line[len(magic):].split():
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise DesignFormatError(f"malformed header token '{token}'")
        fields[key] = value
    check_version(fields.get("version", FORMAT_VERSION))
    return fields


def check_version(version: str) -> None:
    if version.split(".")[0] != FORMAT_VERSION.split(".")[0]:
        raise FormatVersionError(
            f"file format version {version} is incompatible with {FORMAT_VERSION}"
        )


class DesignStore:
    """Read and write designs in the gtcs CSV format.

    The first line is `# gtcs-design n=<n> m=<m> alpha=<alpha> seed=<seed>
    version=<version>`, followed by m lines of n comma-separated 0/1 values.
    """

    def dumps(self, design: DesignMatrix) -> str:
        """Serialize a design to CSV text."""
        header = (
            f"{DESIGN_MAGIC} n={design.cols} m={design.rows} alpha={design.alpha} "
            f"seed={design.seed} version={FORMAT_VERSION}"
        )
        body = [",".join("1" if b else "0" for b in row) for row in design.bits]
        return "\n".join([header, *body]) + "\n"

    def loads(self, text: str) -> DesignMatrix:
        """Parse CSV text into a design.

        Raises:
            DesignFormatError: If the header or body is malformed or inconsistent
        """
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines:
            raise DesignFormatError("empty design file")
        fields = parse_header(lines[0], DESIGN_MAGIC)
        try:
            n, m, alpha, seed = (int(fields[k]) for k in ("n", "m", "alpha", "seed"))
        except (KeyError, ValueError) as e:
            raise DesignFormatError(f"design header needs integer n, m, alpha and seed: {e}")

        rows = lines[1:]
        if len(rows) != m:
            raise DesignFormatError(f"header declares m={m} rows, found {len(rows)}")
        bits = np.zeros((m, n), dtype=np.uint8)
        for i, row in enumerate(rows):
            values = row.split(",")
            if len(values) != n or any(v not in ("0", "1") for v in values):
                raise DesignFormatError(f"row {i + 1} must hold {n} comma-separated 0/1 values")
            bits[i] = [v == "1" for v in values]
        try:
            return DesignMatrix(bits=bits, alpha=alpha, seed=seed)
        except ValueError as e:
            raise DesignFormatError(f"invalid design: {e}")

    def save(self, design: DesignMatrix, path: str) -> str:
        """Write a design to path atomically."""
        atomic_write_text(path, self.dumps(design))
        logger.info("event=design_saved path=%s n=%d m=%d alpha=%d", path, design.cols, design.rows, design.alpha)
        return path

    def load(self, path: str) -> DesignMatrix:
        """Read a design from path."""
        with open(path, "r", encoding="utf-8") as f:
            return self.loads(f.read())


# Create a singleton instance
design_store = DesignStore()
