"""PASS/FAIL lines collected by the acceptance tests, one per criterion."""

LINES = []


def report(number, name, ok, detail, seconds):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({name}): {detail} [{seconds:.1f} s]"
    LINES.append(line)
    print(line)
    return ok
