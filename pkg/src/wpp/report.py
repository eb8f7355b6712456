"""Per-triple reports: JSON-safe dictionaries round-tripping losslessly.

Every rational is serialized as an exact string like "5/3" (or "4" when
integral), never as a float. parse(serialize(report)) == report holds by
construction since reports contain only JSON-native values.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .homlat import NEG_INF
from .resolution import (
    ResolutionPair,
    check_divisor_predicates,
    check_sum_bound,
    check_two_minus2,
    connector_selfints,
)
from .rulings import RulingData, RulingResolution, ruling, ruling_resolution

__all__ = [
    "SCHEMA_VERSION",
    "fraction_str",
    "make_report",
    "serialize_report",
    "parse_report",
    "text_report",
]

SCHEMA_VERSION = 1


def fraction_str(x) -> str:
    return str(Fraction(x))


def _kodaira_json(k):
    if k is None:
        return None
    if k == NEG_INF:
        return "-inf"
    return int(k)


def _ruling_json(rd: RulingData) -> dict:
    return {
        "target": rd.target,
        "opposite": rd.opposite,
        "opposite_selfint": rd.opposite_selfint,
        "case": rd.case,
        "nu_a": rd.nu_a,
        "nu_b": rd.nu_b,
        "fiber": None if rd.fiber is None else list(rd.fiber),
        "pa": rd.pa,
        "qa": rd.qa,
        "pb": rd.pb,
        "qb": rd.qb,
        "selfint": rd.selfint,
        "canonical_pairing": rd.canonical_pairing,
        "cusp_location": None if rd.cusp_location is None else list(rd.cusp_location),
        "meet_component": rd.meet_component,
        "deltas_forward": list(rd.forward.deltas),
        "deltas_backward": list(rd.backward.deltas),
        "chain_forward": {
            "labels": list(rd.forward.combined.labels()),
            "selfints": list(rd.forward.combined.selfints),
        },
        "chain_backward": {
            "labels": list(rd.backward.combined.labels()),
            "selfints": list(rd.backward.combined.selfints),
        },
        "violations": list(rd.violations),
    }


def _ruling_resolution_json(rr: RulingResolution) -> dict:
    return {
        "multiplicities": list(rr.multiplicities),
        "blowups": len(rr.multiplicities),
        "final_rank": rr.final_rank,
        "fiber": list(rr.resolved.fclass),
        "chain_labels": [c.label for c in rr.config.components],
        "chain_selfints": list(rr.config.selfints()),
        "last_meeting": rr.resolved.last_meeting,
    }


def make_report(rp: ResolutionPair, timing: float | None = None) -> dict:
    """Full machine-readable description of one resolution with all checks."""
    pred = check_divisor_predicates(rp)
    sums = check_sum_bound(rp)
    rows = check_two_minus2(rp)
    conns = connector_selfints(rp)
    rd = ruling(rp, "c")
    rres = ruling_resolution(rp, rd) if rd.case == "Unicuspidal" else None
    w = rp.weights
    lat = rp.lattice
    assert lat.canonical is not None
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "triple": list(rp.weights_input),
        "weights": {"a": w.a, "b": w.b, "c": w.c},
        "residues": {k: getattr(w, k) for k in ("a_b", "a_c", "b_a", "b_c", "c_a", "c_b")},
        "presentation": rp.presentation,
        "n": rp.n,
        "k_squared": lat.sq(lat.canonical),
        "terminal_model": {"kind": rp.terminal, "k": rp.terminal_k},
        "polygon": {
            "vertices": [[fraction_str(x), fraction_str(y)] for x, y in rp.polygon.vertices],
            "edge_selfints": list(rp.edge_sels),
            "edge_lengths": [
                fraction_str(rp.polygon.edge_length(i)) for i in range(rp.polygon.n)
            ],
        },
        "strings": {
            role: {
                "weight": sd.weight,
                "residue": sd.residue,
                "selfints": list(sd.selfints),
                "edge_ids": list(sd.edge_ids),
                "classes": [list(rp.edge_classes[i]) for i in sd.edge_ids],
                "areas": [fraction_str(rp.edge_area(i)) for i in sd.edge_ids],
            }
            for role, sd in sorted(rp.strings.items())
        },
        "connectors": {
            name: {
                "selfint": cd.selfint,
                "edge_id": cd.edge_id,
                "class": list(rp.edge_classes[cd.edge_id]),
                "area": fraction_str(rp.edge_area(cd.edge_id)),
            }
            for name, cd in sorted(rp.connectors.items())
        },
        "checks": {
            "predicates": {
                "full": pred.full,
                "abc_type": pred.abc_type,
                "gap_admissible": pred.gap_admissible,
                "sub_toric": pred.sub_toric,
                "gaps": {k: fraction_str(v) for k, v in sorted(pred.gaps.items())},
                "adjoint_area": fraction_str(pred.adjoint_area),
                "adjoint_square": pred.adjoint_square,
                "area_identity": pred.area_identity,
                "kodaira": _kodaira_json(pred.kodaira),
            },
            "connector_selfints": list(conns),
            "sum_bound": {
                "total": sums.total_b,
                "lower_bound": sums.lower_bound,
                "identity": sums.identity_ok,
                "holds": sums.bound_ok,
            },
            "two_minus2": [
                {
                    "x": r.x,
                    "y": r.y,
                    "z": r.z,
                    "both_minus2": r.both_minus2,
                    "k": r.k,
                    "predicted_third": None
                    if r.predicted_third is None
                    else list(r.predicted_third),
                }
                for r in rows
            ],
        },
        "ruling": _ruling_json(rd),
        "ruling_resolution": None if rres is None else _ruling_resolution_json(rres),
    }
    if timing is not None:
        report["timing"] = {"seconds": timing}
    return report


def serialize_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def parse_report(text: str) -> dict:
    return json.loads(text)


def text_report(report: dict) -> str:
    """Terminal-friendly rendering of a report."""
    a, b, c = report["triple"]
    lines = [
        f"CP({a},{b},{c})  presentation {report['presentation']}",
        f"n = {report['n']}, K^2 = {report['k_squared']}, "
        f"terminal model {report['terminal_model']['kind']}",
        "strings:",
    ]
    for role, sd in report["strings"].items():
        sel = ", ".join(str(s) for s in sd["selfints"])
        lines.append(
            f"  S_{role}: {sd['weight']}/{sd['residue']}  selfints ({sel})"
        )
    conn = ", ".join(
        f"{name}^2 = {cd['selfint']} (area {cd['area']})"
        for name, cd in report["connectors"].items()
    )
    lines.append(f"connectors: {conn}")
    pred = report["checks"]["predicates"]
    lines.append(
        "predicates: full {full}, type {abc_type}, gap-admissible {gap_admissible}, "
        "sub-toric {sub_toric}".format(**pred)
    )
    lines.append(
        f"adjoint: area {pred['adjoint_area']}, square {pred['adjoint_square']}, "
        f"kodaira {pred['kodaira']}"
    )
    sb = report["checks"]["sum_bound"]
    lines.append(
        f"entry sum: {sb['total']} >= {sb['lower_bound']} "
        f"({'ok' if sb['holds'] else 'VIOLATED'})"
    )
    rd = report["ruling"]
    if rd["case"] == "Unicuspidal":
        lines.append(
            f"ruling: Unicuspidal, (p,q) = ({rd['pa']},{rd['qa']}), "
            f"cusp at node C_{rd['nu_a']} | C_{rd['nu_b']} of S_{rd['target']}"
        )
        rr = report["ruling_resolution"]
        if rr is not None:
            mults = ",".join(str(m) for m in rr["multiplicities"])
            lines.append(f"  resolved by {rr['blowups']} blowups, multiplicities ({mults})")
    else:
        lines.append(
            f"ruling: {rd['case']}, (p,q) = ({rd['pa']},{rd['qa']}), "
            f"meets component {rd['meet_component']} of S_{rd['target']}"
        )
    if "timing" in report:
        lines.append(f"time: {report['timing']['seconds']:.4f} s")
    return "\n".join(lines)
