import numpy as np
import pytest

from rlpsi.textcore import Convention, build_suffix_structures, ingest_text

WORKED_TEXT = b"GATTACAT$AGATACAT$GATACAT$GATTAGAT$GATTAGATA$"
WORKED_BL = "101100000001100100000010000010001000011010100"
WORKED_BF = "110001100000100001010010010000001010000000110"
WORKED_BFL = "01011001011000101010111010"
WORKED_TAU = [3, 7, 1, 6, 8, 10, 12, 4, 5, 0, 2, 9, 11]

ACCEPTANCE_LINES = []


def random_text(rng, n, sigma):
    """n random bytes over a sigma-letter printable alphabet."""
    return bytes((32 + rng.integers(0, sigma, n)).astype(np.uint8))


@pytest.fixture(scope="session")
def worked_rotation():
    return build_suffix_structures(ingest_text(WORKED_TEXT, Convention.ROTATION))


@pytest.fixture(scope="session")
def worked_suffix():
    return build_suffix_structures(ingest_text(WORKED_TEXT, Convention.SUFFIX))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
