#!/usr/bin/env python3
"""
ising-traffic
=============

Entry point for the coherent Ising machine simulator and the traffic
assignment compiler.

Subcommands:
- maxcut: GFSNN-CIM vs SNN-CIM success rates on Max-Cut instances
- tap: Frank-Wolfe, DIA, SA and both CIM variants on one network
- calibrate: grid search of the oscillator parameters
- fit: quadratic-fit diagnostics of one link
- oracle: brute-force ground state of a dumped Ising model
- gen: write generated instances
"""

import logging

# Ensure src is in path
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent))

from src.cli import main

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)


if __name__ == "__main__":
    exit(main())
