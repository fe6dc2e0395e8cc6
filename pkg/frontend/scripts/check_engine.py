#!/usr/bin/env python3
"""Load the editor-authored document in the engine and verify the round trip.

Run `vitest run` first: the authoring test writes tests/out/authored_by_editor.json,
and this script confirms the engine accepts that exact file and reproduces it
byte for byte.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))

from skirmish.scenario import load_scenario, save_scenario
from skirmish.core import validate_scenario


def main() -> int:
    authored = Path(__file__).resolve().parents[1] / "tests" / "out" / "authored_by_editor.json"
    if not authored.exists():
        print(f"missing {authored}; run `vitest run` in frontend/ first", file=sys.stderr)
        return 1

    raw = authored.read_bytes()
    config = load_scenario(raw)

    report = validate_scenario(config)
    if not report.ok:
        print("validation report not empty:", file=sys.stderr)
        for line in report.violations:
            print(f"  {line}", file=sys.stderr)
        return 1

    resaved = save_scenario(config).encode("utf-8")
    if resaved != raw:
        print("re-save is not byte-identical", file=sys.stderr)
        return 1

    if config.load_notes:
        print("loader filled in defaults (editor output should be complete):", file=sys.stderr)
        for line in config.load_notes:
            print(f"  {line}", file=sys.stderr)
        return 1

    print(f"[PASS] {authored.name}: clean validation, byte-identical re-save ({len(raw)} bytes)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
