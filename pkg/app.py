"""
State Separation Analyzer
Batch feasibility, channel construction and failure-bound analysis for
probabilistic quantum state separation
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
