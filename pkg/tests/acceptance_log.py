"""One result line per acceptance criterion, printed in the terminal summary."""

LINES: dict[int, str] = {}


def record(n: int, ok: bool | None, detail: str) -> None:
    """ok=None marks a criterion that is excluded by design rather than run."""
    status = "EXCLUDED" if ok is None else ("PASS" if ok else "FAIL")
    line = f"criterion {n}: {status} - {detail}"
    LINES[n] = line
    print(line)
