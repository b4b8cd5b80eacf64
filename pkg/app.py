# app.py
from __future__ import annotations

from cli.commands import run


if __name__ == "__main__":
    raise SystemExit(run())
