"""
HRCP-Incremental Command-Line Launcher

Runs the hrcp command line from a source checkout.

Usage:
    python run.py gen --d 2 --n 57 --p 4 --s 0.3 --seed 7 -o inst.hrcp
    python run.py solve --method dm --p 4 inst.hrcp
    python run.py --help
"""

import sys
import os

# Add current directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli.commands import main


if __name__ == "__main__":
    sys.exit(main())
