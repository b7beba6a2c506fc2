"""CSV and JSON renderings of character tables."""

from __future__ import annotations

import csv
import io
import json

from .alternating import alt_table
from .symmetric import sym_table


def sym_table_csv(n: int) -> str:
    lams, mus, table = sym_table(n)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["partition"] + [str(m) for m in mus])
    for lam, row in zip(lams, table):
        w.writerow([str(lam)] + row)
    return buf.getvalue()


def alt_table_csv(n: int) -> str:
    """Quadratic values written as ``a+b*sqrt(D)/2``."""
    chars, classes, table = alt_table(n)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["character"] + [str(k) for k in classes])
    for chi, row in zip(chars, table):
        w.writerow([str(chi)] + [str(v) for v in row])
    return buf.getvalue()


def table_json(n: int) -> str:
    lams, mus, st = sym_table(n)
    chars, classes, at = alt_table(n) if n >= 3 else ([], [], [])
    data = {
        "n": n,
        "sym": {
            "partitions": [list(l) for l in lams],
            "classes": [list(m.partition()) for m in mus],
            "values": st,
        },
        "alt": {
            "characters": [str(c) for c in chars],
            "classes": [str(k) for k in classes],
            "class_sizes": [k.size() for k in classes],
            "values": [[str(v) for v in row] for row in at],
        },
    }
    return json.dumps(data, indent=1)
