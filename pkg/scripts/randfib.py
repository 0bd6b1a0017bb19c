#!/usr/bin/env python3
"""
randfib command line.

Usage:
    python scripts/randfib.py enumerate --beta 1 --n 10
    python scripts/randfib.py verify --suite lemma1
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
