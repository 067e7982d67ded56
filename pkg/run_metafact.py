#!/usr/bin/env python3
"""
metafact command-line launcher
"""

import sys

from metafact.main import main

if __name__ == "__main__":
    sys.exit(main())
