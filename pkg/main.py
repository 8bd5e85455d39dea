#!/usr/bin/env python3
"""
trace-rearrange - main entry point

Runs the command line harness from a source checkout:
    python main.py verify all --dims 2..6 --samples 500 --seed 1
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from trace_rearrange.main import main

if __name__ == "__main__":
    sys.exit(main())
