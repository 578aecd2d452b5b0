"""Pass/fail lines of the acceptance criteria, printed at the end of the run."""

LINES = {}


def record(number: int, ok: bool, text: str) -> bool:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} | {text}"
    LINES[number] = line
    print(line)
    return ok
