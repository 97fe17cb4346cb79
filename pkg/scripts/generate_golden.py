#!/usr/bin/env python3
"""Regenerates the golden JSON artifacts under data/.

Run from the repository root:  python3 scripts/generate_golden.py
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from braidforge.markov import ttk_to_one_bridge, verify_trace
from braidforge.ordercert import (
    certificate_to_json,
    property_d_certificate,
    property_d_inputs,
    v2503_bundle,
)

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def dump(name, payload):
    path = DATA / name
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    print(f"wrote {path}")


def main():
    DATA.mkdir(exist_ok=True)

    conversion = ttk_to_one_bridge(3, 4, 2, 2)
    verify_trace(conversion.trace)
    dump("trace_ttk_3_4_2_2.json", conversion.trace.to_json())

    conversion = ttk_to_one_bridge(5, 9, 3, 3)
    verify_trace(conversion.trace)
    dump("trace_ttk_5_9_3_3.json", conversion.trace.to_json())

    for omega, t, b in [(2, 3, 0), (3, 2, 0), (5, 3, 2), (5, 1, 2)]:
        cert = property_d_certificate(omega, t, b)
        pres, S, target = property_d_inputs(omega, t, b)
        dump(
            f"propd_cert_B_{omega}_{t}_{b}.json",
            certificate_to_json(cert, S, target),
        )
        dump(f"propd_pres_B_{omega}_{t}_{b}.json", pres.to_json())

    bundle = v2503_bundle()
    dump(
        "v2503_certificate.json",
        certificate_to_json(
            bundle.certificate,
            list(bundle.certificate_S),
            bundle.certificate_target,
        ),
    )
    dump("v2503_presentation.json", bundle.presentation.to_json())


if __name__ == "__main__":
    main()
