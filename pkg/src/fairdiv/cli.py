"""Command-line front end.

Subcommands: gamma, solve {efx|tefx|pmms}, verify, scale, gen, oracle,
tight-example, curve. Instances are JSON ({"agents": n, "goods": m,
"values": [[...]]}) or CSV (one agent per row); rationals are written
"p/q". Allocation files are JSON {"bundles": [[good indices], ...]}.
Agents and goods are 0-indexed everywhere.

Solve commands print a text summary, optionally write a machine-readable
JSON report (--report), and exit 0 iff the measured ratio meets the
theoretical guarantee. The curve command emits a gamma -> factor CSV and
renders a matplotlib figure next to it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import fairness, instance as inst_mod, labase, oracle, pmms, scaling, tefx
from .envy_graph import Allocation, TiePolicy
from .rationals import format_rational, parse_rational
from .tight_examples import run_tight_example

TIE_PROFILES = {
    "default": TiePolicy(),
    "lowest": TiePolicy(),
    "highest": TiePolicy(good="highest", agent="highest", source="highest"),
    "appendix-a": TiePolicy(good="lowest", agent="lowest", source="highest"),
}


def parse_tie_profile(text: str) -> TiePolicy:
    if text in TIE_PROFILES:
        return TIE_PROFILES[text]
    fields = {}
    for part in text.split(","):
        key, _, value = part.partition("=")
        if key not in ("good", "agent", "source") or value not in ("lowest", "highest"):
            raise argparse.ArgumentTypeError(
                f"bad tie-break profile {text!r}; use a name {sorted(TIE_PROFILES)} "
                "or key=value pairs like good=lowest,source=highest")
        fields[key] = value
    return TiePolicy(**fields)


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if x == math.inf:
        return "inf"
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else str(k)): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return float(x)  # high-precision reals from the reduced layer


def _write_report(path, payload):
    text = json.dumps(_jsonable(payload), indent=2)
    if path == "-":
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _load_allocation(path) -> Allocation:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return Allocation.from_bundles(doc["bundles"])


def _report_payload(algorithm, inst, alloc, report, theoretical, extra=None):
    payload = {
        "algorithm": algorithm,
        "instance": {
            "agents": inst.n,
            "goods": inst.m,
            "values": [[format_rational(v) for v in row] for row in inst.values],
        },
        "gamma": inst.range_parameter(),
        "theoretical_alpha": theoretical,
        "measured_alpha": report.alpha,
        "witness_pair": report.witness_pair,
        "witness_good": report.witness_good,
        "arithmetic": report.arithmetic,
        "allocation": {"bundles": [list(b) for b in alloc.bundles]},
    }
    if extra:
        payload.update(extra)
    return payload


def cmd_gamma(args) -> int:
    inst = inst_mod.load_instance(args.input, args.drop_degenerate)
    print(f"agents={inst.n} goods={inst.m}")
    for g in range(inst.m):
        stats = inst.good_stats(g)
        print(f"good {g}: gamma_g={format_rational(stats.gamma)} "
              f"base_sq={format_rational(stats.base_sq)}")
    print(f"range parameter gamma = {format_rational(inst.range_parameter())}")
    return 0


def cmd_solve(args) -> int:
    inst = inst_mod.load_instance(args.input, args.drop_degenerate)
    gamma = inst.range_parameter()
    ties = args.tie_break
    extra = {}
    trace_payload = None

    if args.notion == "efx":
        mode = labase.EtaMode.parse(args.eta)
        config = labase.LaBaseConfig(eta=mode, ties=ties, record_trace=args.trace)
        result = labase.run_labase(inst, config)
        alloc, trace = result if args.trace else (result, None)
        report = fairness.efx_ratio(inst, alloc)
        if mode.kind == "default":
            theoretical = labase.efx_factor(gamma)
            ok = labase.ratio_meets_efx_factor(report.alpha, gamma)
        elif mode.kind == "tefx":
            theoretical = tefx.tefx_variant_factor(gamma)
            ok = True  # the variant's guarantee is for the transfer notion
        else:
            theoretical, ok = None, True
        if trace is not None:
            trace_payload = [
                {"branch": r.branch, "top_good": r.top_good, "assigned": r.assigned_good,
                 "agent": r.agent, "lookahead": r.lookahead,
                 "unassigned_before": r.unassigned_before}
                for r in trace]
    elif args.notion == "tefx":
        if args.variant == "labase-eta":
            mode = labase.EtaMode.tefx_variant()
            alloc = labase.run_labase(inst, labase.LaBaseConfig(eta=mode, ties=ties))
            theoretical = tefx.tefx_variant_factor(gamma)
            report = fairness.tefx_ratio(inst, alloc)
            ok = tefx.ratio_meets_tefx_variant_factor(report.alpha, gamma)
        else:
            alloc = tefx.run_tefx(inst, ties)
            theoretical = tefx.tefx_factor(gamma)
            report = fairness.tefx_ratio(inst, alloc)
            ok = tefx.ratio_meets_tefx_factor(report.alpha, gamma)
    else:  # pmms
        reduced = pmms.reduce_instance(inst, args.precision)
        alloc = pmms.run_restricted(reduced, ties)
        report = fairness.pmms_ratio(inst, alloc)
        theoretical = pmms.pmms_guarantee(gamma)
        ok = report.meets(theoretical)
        reduced_report = pmms.reduced_fairness(reduced, alloc, "pmms")
        extra["precision_bits"] = reduced.precision_bits
        extra["reduced_instance"] = {
            "arithmetic": reduced.arithmetic,
            "theoretical_alpha": "5/6",
            "measured_alpha": reduced_report.alpha,
        }

    print(f"gamma = {format_rational(gamma)}")
    print(report.summary())
    shown = theoretical if theoretical is not None else "n/a"
    print(f"theoretical guarantee: {shown}")
    print(f"bundles: {[list(b) for b in alloc.bundles]}")
    print("guarantee met" if ok else "guarantee NOT met")
    payload = _report_payload(f"solve-{args.notion}", inst, alloc, report, theoretical, extra)
    payload["tie_break"] = vars(ties)
    if args.notion == "efx":
        payload["eta"] = args.eta
    elif args.notion == "tefx":
        payload["variant"] = args.variant
    if trace_payload is not None:
        payload["trace"] = trace_payload
    if args.report:
        _write_report(args.report, payload)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    inst = inst_mod.load_instance(args.input, args.drop_degenerate)
    alloc = _load_allocation(args.allocation)
    report = fairness.RATIO_FUNCTIONS[args.notion](inst, alloc)
    print(report.summary())
    if args.report:
        _write_report(args.report, _report_payload(f"verify-{args.notion}", inst,
                                                   alloc, report, None))
    if args.alpha is None:
        return 0
    return 0 if report.meets(args.alpha) else 1


def cmd_scale(args) -> int:
    inst = inst_mod.load_instance(args.input, args.drop_degenerate)
    result = scaling.max_range_scaling(inst, args.epsilon)
    scaled = scaling.apply_scaling(inst, result.factors)
    print(f"unscaled gamma = {format_rational(inst.range_parameter())}")
    print(f"achieved gamma >= {format_rational(result.achieved_gamma)} "
          f"(bracket width {format_rational(result.interval_width)})")
    print("factors:", " ".join(format_rational(f) for f in result.factors))
    print(f"scaled instance gamma = {format_rational(scaled.range_parameter())}")
    if args.trace and result.interval_width > 0:
        probe = result.achieved_gamma + result.interval_width
        _, certificate = scaling.lp_feasible(inst, probe, with_certificate=True)
        if certificate is not None:
            print(f"infeasibility certificate at gamma = {format_rational(probe)}: "
                  f"agent cycle {list(certificate.agents)} with constraint product "
                  f"{format_rational(certificate.product)} < 1")
    if args.emit_scaled:
        with open(args.emit_scaled, "w", encoding="utf-8") as fh:
            fh.write(scaled.to_json() + "\n")
        print(f"scaled instance written to {args.emit_scaled}")
    if args.report:
        _write_report(args.report, {
            "algorithm": "scale",
            "unscaled_gamma": inst.range_parameter(),
            "achieved_gamma": result.achieved_gamma,
            "interval_width": result.interval_width,
            "beta": result.beta,
            "factors": list(result.factors),
            "scaled_gamma": scaled.range_parameter(),
        })
    return 0


def cmd_gen(args) -> int:
    seed = int(os.environ["FAIRDIV_SEED"]) if "FAIRDIV_SEED" in os.environ else args.seed
    model = inst_mod.parse_model(args.model)
    inst = inst_mod.generate_random(args.agents, args.goods, model, seed)
    text = inst.to_csv() if args.format == "csv" else inst.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"instance written to {args.out} (seed {seed})")
    else:
        print(text)
    return 0


def cmd_oracle(args) -> int:
    inst = inst_mod.load_instance(args.input, args.drop_degenerate)
    alpha, witness = oracle.best_alpha(inst, args.notion)
    print(f"best achievable {args.notion} alpha = "
          f"{'inf' if alpha == math.inf else format_rational(alpha)}")
    print(f"witness bundles: {[list(b) for b in witness.bundles]}")
    if args.report:
        _write_report(args.report, {
            "algorithm": "oracle-best-alpha",
            "notion": args.notion,
            "best_alpha": alpha,
            "witness": {"bundles": [list(b) for b in witness.bundles]},
        })
    return 0


def cmd_tight_example(args) -> int:
    which = {"labase-appendix-a": "labase", "pmms-appendix-b": "pmms"}[args.which]
    result = run_tight_example(which, args.gamma)
    inst = result.instance
    print(f"instance: {inst.n} agents x {inst.m} goods, "
          f"gamma = {format_rational(result.gamma)}")
    print(f"bundles: {[list(b) for b in result.allocation.bundles]}")
    print(result.report.summary())
    print(f"theoretical factor: {result.theoretical}")
    measured = float(result.measured) if result.measured != math.inf else math.inf
    print(f"achieved vs theoretical: {measured:.12f} vs {result.theoretical:.12f}")
    print("guarantee met with equality" if result.meets_theoretical else "guarantee NOT met")
    if args.report:
        _write_report(args.report, _report_payload(
            f"tight-example-{args.which}", inst, result.allocation, result.report,
            result.theoretical, {"values": [list(r) for r in inst.values]}))
    return 0 if result.meets_theoretical else 1


CURVE_FACTORS = {
    "efx": labase.efx_factor,
    "tefx": lambda g: float(tefx.tefx_factor(g)),
    "pmms": lambda g: float(pmms.pmms_guarantee(g)),
}


def cmd_curve(args) -> int:
    notion = args.notion
    rows = []
    for k in range(1, args.steps + 1):
        g = Fraction(k, args.steps)
        rows.append((float(g), CURVE_FACTORS[notion](g)))
    lines = ["gamma,factor"] + [f"{g:.6f},{f:.10f}" for g, f in rows]
    text = "\n".join(lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"curve written to {args.out}")
    else:
        print(text)
    plot_path = args.plot
    if plot_path is None and args.out:
        plot_path = os.path.splitext(args.out)[0] + ".png"
    if plot_path:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        xs, ys = zip(*rows)
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot(xs, ys, lw=1.5)
        ax.set_xlabel("range parameter gamma")
        ax.set_ylabel("approximation factor")
        ax.set_title(f"{notion} guarantee")
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(plot_path, dpi=150)
        plt.close(fig)
        print(f"figure written to {plot_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairdiv",
                                     description="fair division of indivisible goods: "
                                                 "range-parameterized solvers and verifiers")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p):
        p.add_argument("--input", required=True, help="instance file (JSON or CSV)")
        p.add_argument("--drop-degenerate", action="store_true",
                       help="drop zero-valued goods/agents instead of rejecting")

    p = sub.add_parser("gamma", help="print per-good range stats and gamma")
    add_input(p)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("solve", help="compute an allocation and verify it")
    p.add_argument("notion", choices=("efx", "tefx", "pmms"))
    add_input(p)
    p.add_argument("--eta", default="default",
                   help="efx only: 'default' | 'tefx' | explicit rational eta^2 (e.g. 9/16)")
    p.add_argument("--variant", choices=("labase-eta",),
                   help="tefx only: run the look-ahead solver with the transfer eta")
    p.add_argument("--precision", type=int, default=pmms.DEFAULT_PRECISION_BITS,
                   help="pmms only: working precision (bits) for the reduced instance")
    p.add_argument("--tie-break", type=parse_tie_profile, default=TiePolicy(),
                   help="profile name or good=...,agent=...,source=... (lowest/highest)")
    p.add_argument("--trace", action="store_true", help="efx only: record the decision trace")
    p.add_argument("--report", help="write a JSON report here ('-' for stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="verify an allocation file against an instance")
    add_input(p)
    p.add_argument("--allocation", required=True, help='JSON {"bundles": [[...], ...]}')
    p.add_argument("--notion", required=True, choices=("efx", "tefx", "pmms"))
    p.add_argument("--alpha", type=parse_rational,
                   help="exit 0 iff the measured ratio is at least this rational")
    p.add_argument("--report", help="write a JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scale", help="find per-agent factors maximizing gamma")
    add_input(p)
    p.add_argument("--epsilon", type=parse_rational, default=Fraction(1, 10**6),
                   help="binary-search width (rational, default 1/1000000)")
    p.add_argument("--emit-scaled", help="write the scaled instance (JSON) here")
    p.add_argument("--trace", action="store_true",
                   help="print the infeasibility certificate just above the optimum")
    p.add_argument("--report", help="write a JSON report here")
    p.set_defaults(func=cmd_scale)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--agents", "-n", type=int, required=True)
    p.add_argument("--goods", "-m", type=int, required=True)
    p.add_argument("--model", default="uniform:1,10",
                   help="'uniform:lo,hi' | 'two-valued:a,b[,p0]' | 'restricted[:p0[,lo,hi]]'")
    p.add_argument("--seed", type=int, default=0,
                   help="RNG seed (the FAIRDIV_SEED env var overrides this)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="brute-force ground truth on tiny instances")
    oracle_sub = p.add_subparsers(dest="oracle_command", required=True)
    pb = oracle_sub.add_parser("best-alpha", help="best achievable alpha over all allocations")
    add_input(pb)
    pb.add_argument("--notion", required=True, choices=("efx", "tefx", "pmms"))
    pb.add_argument("--report", help="write a JSON report here")
    pb.set_defaults(func=cmd_oracle)

    p = sub.add_parser("tight-example", help="reproduce a built-in worst-case example")
    p.add_argument("which", choices=("labase-appendix-a", "pmms-appendix-b"))
    p.add_argument("--gamma", type=parse_rational,
                   help="labase example only: rational gamma in (0, 1]")
    p.add_argument("--report", help="write a JSON report here")
    p.set_defaults(func=cmd_tight_example)

    p = sub.add_parser("curve", help="emit the gamma -> guarantee curve as CSV (+figure)")
    p.add_argument("notion", choices=("efx", "tefx", "pmms"))
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--out", help="CSV path (default: stdout); a PNG lands next to it")
    p.add_argument("--plot", help="explicit figure path")
    p.set_defaults(func=cmd_curve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (inst_mod.InstanceError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
