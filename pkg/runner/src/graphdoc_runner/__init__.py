"""Runner shim for candidate graph programs.

The executor appends :data:`shim.py` to a candidate's source and runs the
result in a fresh interpreter. This package only hands out that file; the
shim itself is pure stdlib and never imports anything from here.
"""
from pathlib import Path

__all__ = ["shim_path", "shim_source"]


def shim_path() -> str:
    """Filesystem path of the shim, ready to append to candidate code."""
    return str(Path(__file__).with_name("shim.py"))


def shim_source() -> str:
    return Path(shim_path()).read_text(encoding="utf-8")
