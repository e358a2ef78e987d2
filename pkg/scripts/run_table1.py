#!/usr/bin/env python3
"""Reproduce the published norm-bound table and print the CSV with flags."""

import sys

from pelltrib import cli


if __name__ == "__main__":
    sys.exit(cli.main(["table1", "--format", "csv"] + sys.argv[1:]))
