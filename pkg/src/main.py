"""Main entry point for tradeoff-lab."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
