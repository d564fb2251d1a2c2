"""Command-line front end.

Subcommands: simulate, analyze, check, render, report.  Exit codes: 0 for a
clean run, 1 when the run completed but produced violations or findings,
2 for invalid input, 3 for an internal error.  All machine output is
byte-stable for identical inputs and tool version.

Paths under corpus/ fall back to the files installed with the package, so
`portsec check corpus/tos-pcs-model.json` works from any directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

import portsec
from portsec import archmodel, render, rules, simulator, surfaces
from portsec.common import canonical_dumps, sha256_hex

EXIT_CLEAN = 0
EXIT_FINDINGS = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3


class InputError(ValueError):
    """User-supplied file or option is unusable."""


def resolve_input(path: str) -> Path:
    candidate = Path(path)
    if candidate.exists():
        return candidate
    parts = Path(path).parts
    if "corpus" in parts:
        name = parts[-1]
        packaged = resources.files("portsec").joinpath(f"corpus/{name}")
        if packaged.is_file():
            return Path(str(packaged))
    raise InputError(f"no such file: {path}")


def _read_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _load_model(path: Path) -> archmodel.SystemModel:
    try:
        return archmodel.parse_model(path.read_text(encoding="utf-8"))
    except archmodel.ModelError as exc:
        detail = "\n  ".join(exc.errors)
        raise InputError(f"{path}: invalid model\n  {detail}") from exc


def _load_advisories(path: Path | None) -> rules.AdvisoryCatalog:
    if path is None:
        return rules.AdvisoryCatalog()
    try:
        return rules.AdvisoryCatalog.from_dict(_read_json(path))
    except rules.AdvisoryError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_scenario(path: Path) -> tuple[list[str], list[simulator.AdversaryAction], int]:
    data = _read_json(path)
    if not isinstance(data, dict) or "stages" not in data:
        raise InputError(f"{path}: scenario file must be an object with a 'stages' list")
    try:
        adversaries = [simulator.AdversaryAction.from_dict(a) for a in data.get("adversaries", [])]
    except (KeyError, ValueError) as exc:
        raise InputError(f"{path}: bad adversary entry: {exc}") from exc
    seed = data.get("seed", 0)
    return data["stages"], adversaries, seed


def _paths_payload(enumeration: surfaces.PathEnumeration,
                   report: surfaces.CutReport | None = None) -> dict:
    grouped: dict[tuple[str, str], list[surfaces.AttackPath]] = {}
    for path in enumeration.paths:
        grouped.setdefault((path.entry, path.resource), []).append(path)
    cuts_by_pair = {}
    if report is not None:
        cuts_by_pair = {(p.entry, p.resource): p.cuts for p in report.pairs}
    pairs = []
    for (entry, resource), paths in sorted(grouped.items()):
        entry_payload = {
            "entry": entry,
            "resource": resource,
            "paths": [list(p.nodes) for p in paths],
            "escalations": [[list(edge) for edge in p.escalations] for p in paths],
        }
        if report is not None:
            entry_payload["cuts"] = [list(edge) for edge in cuts_by_pair.get((entry, resource), ())]
        pairs.append(entry_payload)
    return {"pairs": pairs, "truncated": enumeration.truncated}


def _surfaces_payload(model: archmodel.SystemModel) -> dict:
    surface = surfaces.attack_surface(model)
    impact = surfaces.impact_surface(model)
    return {
        "attack_surface": {
            side: [
                {"id": e.id, "actor_role": e.actor_role, "component": e.component,
                 "authenticated": e.authenticated}
                for e in surface[side]
            ]
            for side in ("unauthenticated", "authenticated")
        },
        "impact_surface": [
            {"id": r.id, "kind": r.kind.value, "value": r.value.value, "owner": r.owner}
            for r in impact
        ],
    }


def _ranking_payload(model: archmodel.SystemModel) -> dict:
    return {
        "assets": [
            {"resource": a.resource, "value": a.value.value, "reach_count": a.reach_count}
            for a in surfaces.rank_assets(model)
        ]
    }


def _findings_payload(findings: list[rules.Finding]) -> dict:
    return {"findings": [f.to_dict() for f in findings]}


def _write(text: str, out_path: str | None, stdout) -> None:
    if out_path is None:
        stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _cmd_simulate(args, stdout) -> int:
    stages, adversaries, seed = _load_scenario(resolve_input(args.scenario))
    if args.seed is not None:
        seed = args.seed
    try:
        trace = simulator.run(stages, adversaries, seed)
    except (simulator.ScenarioError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if args.trace:
        Path(args.trace).write_text(canonical_dumps(trace.to_dict()), encoding="utf-8")
    summary = {
        "seed": trace.seed,
        "stages": [s.value for s in trace.stages],
        "events": len(trace.events),
        "violations": [v.to_dict() for v in trace.violations],
        "final_state": trace.final_state.value,
    }
    stdout.write(canonical_dumps(summary))
    return EXIT_FINDINGS if trace.violations else EXIT_CLEAN


def _cmd_analyze(args, stdout) -> int:
    model = _load_model(resolve_input(args.model))
    if args.surfaces:
        stdout.write(canonical_dumps(_surfaces_payload(model)))
    elif args.rank:
        stdout.write(canonical_dumps(_ranking_payload(model)))
    else:
        try:
            enumeration = surfaces.enumerate_paths(
                model, max_length=args.max_length, max_paths=args.max_paths
            )
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if args.cuts:
            report = surfaces.cut_points(model, enumeration)
            stdout.write(canonical_dumps(_paths_payload(enumeration, report)))
        else:
            stdout.write(canonical_dumps(_paths_payload(enumeration)))
    return EXIT_CLEAN


def _cmd_check(args, stdout) -> int:
    model = _load_model(resolve_input(args.model))
    advisories = _load_advisories(resolve_input(args.advisories) if args.advisories else None)
    selected = args.rules.split(",") if args.rules else None
    try:
        findings = rules.check(model, rules=selected, advisories=advisories)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    stdout.write(canonical_dumps(_findings_payload(findings)))
    return EXIT_FINDINGS if findings else EXIT_CLEAN


def _cmd_render(args, stdout) -> int:
    path = resolve_input(args.input)
    data = _read_json(path)
    if isinstance(data, dict) and "events" in data:
        try:
            trace = simulator.ShipmentTrace.from_dict(data)
        except (KeyError, ValueError) as exc:
            raise InputError(f"{path}: bad trace file: {exc}") from exc
        dot = render.render_trace_dot(trace)
    else:
        dot = render.render_model_dot(_load_model(path))
    _write(dot, args.dot, stdout)
    return EXIT_CLEAN


def _cmd_report(args, stdout) -> int:
    model_path = resolve_input(args.model)
    model = _load_model(model_path)
    advisories_path = resolve_input(args.advisories) if args.advisories else None
    advisories = _load_advisories(advisories_path)

    enumeration = surfaces.enumerate_paths(model)
    cut_report = surfaces.cut_points(model, enumeration)
    findings = rules.check(model, advisories=advisories)

    inputs = {"model": {"sha256": sha256_hex(model_path.read_bytes())}}
    if advisories_path is not None:
        inputs["advisories"] = {"sha256": sha256_hex(advisories_path.read_bytes())}

    payload = {
        "version": portsec.__version__,
        "inputs": inputs,
        "surfaces": _surfaces_payload(model),
        "paths": _paths_payload(enumeration),
        "cuts": _paths_payload(enumeration, cut_report),
        "ranking": _ranking_payload(model),
        "findings": _findings_payload(findings)["findings"],
    }
    _write(canonical_dumps(payload), args.out, stdout)
    return EXIT_FINDINGS if findings else EXIT_CLEAN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="portsec",
        description="Shipping-flow simulation and architectural security assessment",
    )
    parser.add_argument("--version", action="version", version=f"portsec {portsec.__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="run a shipping-flow scenario")
    simulate.add_argument("scenario", help="scenario JSON: {stages, adversaries, seed}")
    simulate.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    simulate.add_argument("--trace", metavar="OUT", help="write the full trace JSON here")
    simulate.set_defaults(func=_cmd_simulate)

    analyze = commands.add_parser("analyze", help="surface, path, cut or ranking analysis")
    analyze.add_argument("model", help="system model JSON")
    mode = analyze.add_mutually_exclusive_group(required=True)
    mode.add_argument("--surfaces", action="store_true", help="attack and impact surfaces")
    mode.add_argument("--paths", action="store_true", help="enumerate attack paths")
    mode.add_argument("--cuts", action="store_true", help="paths plus verified cut points")
    mode.add_argument("--rank", action="store_true", help="rank assets by value and reach")
    analyze.add_argument("--max-length", type=int, default=surfaces.DEFAULT_MAX_LENGTH)
    analyze.add_argument("--max-paths", type=int, default=surfaces.DEFAULT_MAX_PATHS)
    analyze.set_defaults(func=_cmd_analyze)

    check = commands.add_parser("check", help="run weakness rules over a model")
    check.add_argument("model", help="system model JSON")
    check.add_argument("--advisories", help="offline advisory catalog JSON")
    check.add_argument("--rules", help="comma-separated subset, e.g. R1,R3")
    check.set_defaults(func=_cmd_check)

    render_cmd = commands.add_parser("render", help="emit a DOT diagram")
    render_cmd.add_argument("input", help="model or trace JSON")
    render_cmd.add_argument("--dot", metavar="OUT", help="write DOT here instead of stdout")
    render_cmd.set_defaults(func=_cmd_render)

    report = commands.add_parser("report", help="full assessment report for a model")
    report.add_argument("model", help="system model JSON")
    report.add_argument("--advisories", help="offline advisory catalog JSON")
    report.add_argument("--out", metavar="OUT", help="write the report here instead of stdout")
    report.set_defaults(func=_cmd_report)

    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors
        return int(exc.code or 0)
    try:
        return args.func(args, stdout)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
