#!/usr/bin/env python3
"""Run the high-precision invertibility scan over the standard grid.

Defaults match the acceptance grid (k 1..10, n 2..30, 512 bits); pass
extra CLI flags to narrow it, e.g. --kmax 5 --nmax 20 --sign=-1.
"""

import sys

from pelltrib import cli

DEFAULTS = ["scan", "--kmax", "10", "--nmax", "30", "--bits", "512", "--format", "csv"]


if __name__ == "__main__":
    sys.exit(cli.main(DEFAULTS + sys.argv[1:]))
