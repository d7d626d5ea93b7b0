"""Collects one summary line per acceptance criterion for the terminal report."""

LINES: dict[int, str] = {}


def record(n: int, ok: bool, text: str) -> None:
    line = f"criterion {n} [{'PASS' if ok else 'FAIL'}] {text}"
    LINES[n] = line
    print(line)
