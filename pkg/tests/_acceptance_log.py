"""Shared record of acceptance outcomes, printed by the terminal summary hook."""

RESULTS = []


def record(number: int, title: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] AC-{number:02d} {title}: {detail}"
    RESULTS.append((number, line))
    print(line)
    return ok
