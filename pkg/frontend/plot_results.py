#!/usr/bin/env python3
"""Plot failure-rate and inactivation curves from a cssdec sweep CSV.

usage: plot_results.py <sweep.csv> <output-prefix>
"""

import sys

from erasure_qec.plotting import main

if __name__ == "__main__":
    sys.exit(main())
