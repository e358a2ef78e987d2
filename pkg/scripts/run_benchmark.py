#!/usr/bin/env python3
"""Benchmark fast vs dense circulant matvec across desk-scale sizes."""

import sys

from pelltrib import cli

DEFAULTS = ["bench", "--sizes", "64,256,1024,4096", "--k", "1", "--r", "2",
            "--format", "csv"]


if __name__ == "__main__":
    sys.exit(cli.main(DEFAULTS + sys.argv[1:]))
