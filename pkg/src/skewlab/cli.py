"""Command-line surface: analyze, compare, synth, and the built-in worked example.

Output is JSON, pretty by default and compact with --json.  Exit codes are a
stable contract: 0 for success or a decided comparison, 1 for validation
errors, 2 for verification failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .castle import fps_from_json
from .ergodic import gp_report
from .perm import Perm, conjugacy_class, generate_subgroup, symmetric_group
from .speeduprel import decide, verdict_to_json
from .symbolic import LabeledSystem, full_shift, system_from_json
from .synth import build_stage, stage_to_json, stages_from_json


def gerber_systems() -> tuple[LabeledSystem, LabeledSystem]:
    """The two classical 3-point extensions: a full 3-shift labeled by the
    alternating group and a full 6-shift labeled by the whole symmetric group."""
    gamma = [
        Perm.of(1, 2, 3),
        Perm.from_cycles(3, (1, 2, 3)),
        Perm.from_cycles(3, (1, 3, 2)),
        Perm.from_cycles(3, (1, 2)),
        Perm.from_cycles(3, (1, 3)),
        Perm.from_cycles(3, (2, 3)),
    ]
    s1 = full_shift(gamma[:3], [Fraction(1, 3)] * 3)
    s2 = full_shift(gamma, [Fraction(1, 6)] * 6)
    return s1, s2


def _load_json(path: str):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _emit(data: dict, compact: bool, out: str | None = None) -> None:
    if compact:
        text = json.dumps(data, separators=(",", ":"))
    else:
        text = json.dumps(data, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def cmd_analyze(args) -> int:
    sysm = system_from_json(_load_json(args.system))
    _emit(gp_report(sysm), args.json)
    return 0


def cmd_compare(args) -> int:
    sys1 = system_from_json(_load_json(args.first))
    sys2 = system_from_json(_load_json(args.second))
    verdict = decide(sys1, sys2)
    _emit(verdict_to_json(verdict, sys1, sys2), args.json)
    return 0


def cmd_synth(args) -> int:
    source = fps_from_json(_load_json(args.source))
    specs = stages_from_json(_load_json(args.spec))
    if args.stages < 1:
        raise ValueError("--stages must be at least 1")
    if args.stages > len(specs):
        raise ValueError(
            f"requested {args.stages} stages but the spec file describes {len(specs)}"
        )
    stages = []
    prev = None
    for spec in specs[: args.stages]:
        prev = build_stage(source, spec, prev)
        stages.append(prev)
    trace = {
        "system": {"size": source.size, "fiber_degree": source.fiber_degree},
        "stages": [stage_to_json(stage) for stage in stages],
        "passed": all(stage.report.passed for stage in stages),
    }
    _emit(trace, args.json, args.out)
    return 0 if trace["passed"] else 2


def cmd_gerber(args) -> int:
    s1, s2 = gerber_systems()
    v21 = decide(s2, s1)
    v12 = decide(s1, s2)
    a3 = generate_subgroup([Perm.from_cycles(3, (1, 2, 3))])
    s3 = symmetric_group(3)
    expected = (
        v21.gp2.klass == conjugacy_class(a3)
        and v21.gp1.klass == conjugacy_class(s3)
        and v21.answer
        and v21.witness is not None
        and v21.witness[0].elements == s3.elements
        and v21.witness[1].elements == a3.elements
        and not v12.answer
    )
    report = {
        "gp1": gp_report(s1),
        "gp2": gp_report(s2),
        "s2_to_s1": verdict_to_json(v21, s2, s1),
        "s1_to_s2": verdict_to_json(v12, s1, s2),
        "matches_expected": expected,
    }
    _emit(report, args.json)
    return 0 if expected else 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewlab",
        description=(
            "Exact analysis of permutation-labeled Markov systems: ergodic "
            "decomposition of group lifts, speedup comparison with certificates, "
            "and constructive speedup synthesis on cyclic point systems."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify one labeled system")
    p.add_argument("system", help="labeled system JSON file")
    p.add_argument("--json", action="store_true", help="compact machine output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="decide the speedup relation between two systems")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--json", action="store_true", help="compact machine output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="synthesize speedup stages on a cyclic system")
    p.add_argument("source", help="finite point system JSON file")
    p.add_argument("spec", help="target castle spec JSON file")
    p.add_argument("--stages", type=int, default=1, help="number of stages to run")
    p.add_argument("--out", help="write the trace to this path instead of stdout")
    p.add_argument("--json", action="store_true", help="compact machine output")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("gerber", help="reproduce the built-in worked example")
    p.add_argument("--json", action="store_true", help="compact machine output")
    p.set_defaults(func=cmd_gerber)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
