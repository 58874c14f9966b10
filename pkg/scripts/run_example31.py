#!/usr/bin/env python3
"""Reproduce the bundled example31 analysis end to end.

The three-branch map on [0,3/2] keeps (0,1) trapped inside [0,1] forever
(an exact invariant-set certificate, hence a CERTIFIED_FAIL for
transitivity), yet every 1/64-cell spreads past diameter 1/2 within 30
steps (a passing sensitivity certificate): sensitivity without weak
mixing, certified in exact arithmetic.
"""

import sys

from nadyn.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", "example31"] + sys.argv[1:]))
