"""Shared registry so the acceptance suite can print one line per
criterion in the terminal summary (outside pytest's capture)."""

LINES = []


def record(number, name, ok, detail):
    status = "PASS" if ok else "FAIL"
    LINES.append(f"ACCEPTANCE {number:>2} {name}: {status} ({detail})")
    return ok
