"""The command-line interface, driven from Python.

Each subcommand prints a JSON document (or CSV with '#' header lines) that
echoes the full configuration.  A sweep over K with b = K^2 + 1 shows the
geometric bound log K / log(K^2 + 1) creeping up towards 1/2.
"""

from __future__ import annotations

import json

from expressible.cli import main

main(["identity", "--a1", "2", "--n", "4", "--format", "csv"])

cells = {"cells": [{"K": k, "b": k * k + 1} for k in range(2, 8)]}
main(["sweep", "--family", "thm1", "--grid", json.dumps(cells), "--precision", "12", "--format", "csv"])
