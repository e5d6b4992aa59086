#!/usr/bin/env python3
"""Prepend the license header to every .h/.cc file under the source dirs.

Files that already start with the header are left alone.
usage: add_license_header.py HEADER_FILE [ROOT]
"""
import pathlib
import sys


def main() -> int:
    header = pathlib.Path(sys.argv[1]).read_text().rstrip("\n") + "\n\n"
    root = pathlib.Path(sys.argv[2] if len(sys.argv) > 2 else ".")
    changed = 0
    for sub in ("include", "src", "tests", "tools"):
        for path in sorted((root / sub).rglob("*")):
            if path.suffix not in (".h", ".cc"):
                continue
            text = path.read_text()
            if text.startswith(header):
                continue
            path.write_text(header + text)
            changed += 1
    print(f"{changed} files updated")
    return 0


if __name__ == "__main__":
    sys.exit(main())
