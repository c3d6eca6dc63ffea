"""Acceptance matrix: one PASS/FAIL line per criterion.

Run under pytest, or directly with ``python tests/test_acceptance.py [--fast]``.
"""
import sys

import pytest

from worpitzky.acceptance import criteria, run_criterion

NUMBERS = [num for num, *_ in criteria()]


@pytest.mark.parametrize("number", NUMBERS)
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.line()


if __name__ == "__main__":
    fast = "--fast" in sys.argv[1:]
    failed = 0
    for num in NUMBERS:
        res = run_criterion(num, fast)
        print(res.line(), flush=True)
        failed += not res.passed
    sys.exit(1 if failed else 0)
