"""Numberwall - exact number walls over prime fields.

Main entry point; see src/cli.py for the subcommands.

Usage:
  python main.py gen --p 3 --seq cantor --h 3 --pad tilde --out renders/cantor.ppm
  python main.py verify --suite all --p 3 --h 1,2 --json reports/verify.json
  python main.py verify --suite-file suites/desk.yaml
  python main.py fractal --p 3 --levels 5 --csv fractal.csv
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
