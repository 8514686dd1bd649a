import os
import tempfile


def atomic_write_text(path: str, text: str) -> str:
    """Write text to path through a temporary file and an atomic rename.

    An interrupted write leaves either the old file or no file, never a
    partial one.

    Args:
        path: Destination file path
        text: Full file content

    Returns:
        The destination path
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except Exception:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    return path
