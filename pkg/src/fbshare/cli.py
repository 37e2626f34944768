"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (the error class name is
printed on stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import io as fio
from .core import partition_grouped, plan_grouping
from .cost import (
    CostMode,
    expected_cost_discrete,
    expected_cost_grouped,
    monte_carlo_cost,
    serialized_cost,
)
from .errors import FilterBankError
from .evaluate import direct_convolve, shared_evaluate
from .graph import build_graph, write_graph
from .optimize import DEFAULT_RHO, optimize_G_discrete
from .polyphase import interpolate_direct, interpolate_shared, polyphase_decompose
from .rng import default_seed, random_bank, random_signal


def _groups(value: str):
    if value == "auto":
        return value
    try:
        g = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {value!r}") from None
    return g


def _positive_int(value: str) -> int:
    try:
        v = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _resolve_plan(K, M, groups, mode, rho=DEFAULT_RHO):
    if groups == "auto":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            groups = int(optimize_G_discrete(K, M, mode, rho).best_G)
    return plan_grouping(K, groups)


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        fio.atomic_write_text(out, text)


def cmd_gen(args):
    seed = default_seed() if args.seed is None else args.seed
    bank = random_bank(args.filters, args.taps, seed)
    text = fio.bank_to_json(bank) if str(args.out).endswith(".json") else fio.bank_to_text(bank)
    _emit(text, args.out)


def cmd_partition(args):
    bank = fio.read_bank(args.bank)
    plan = _resolve_plan(bank.K, bank.M, args.groups, args.mode, args.rho)
    doc = {"K": bank.K, "M": bank.M, "G": plan.G, "groups": []}
    for part in partition_grouped(bank, plan):
        doc["groups"].append({
            "filters": list(part.filters),
            "subsets": {str(p): list(t) for p, t in part.subsets.items()},
        })
    _emit(json.dumps(doc, indent=1) + "\n", args.out)


def cmd_simulate(args):
    bank = fio.read_bank(args.bank)
    x = fio.read_signal(args.signal)
    if args.mode == "direct":
        y = direct_convolve(bank, x)
    else:
        plan = _resolve_plan(bank.K, bank.M, args.groups, args.cost_mode)
        y = shared_evaluate(bank, plan, x)
    _emit(fio.outputs_to_text(y.outputs), args.out)


def cmd_cost(args):
    if args.discrete:
        g = float(args.groups)
        if not g.is_integer():
            print(_usage("cost", "--groups must be an integer with --discrete"), file=sys.stderr)
            return 2
        rep = expected_cost_discrete(args.filters, args.taps, int(g), args.mode)
    else:
        rep = expected_cost_grouped(args.filters, args.taps, args.groups, args.mode)
    if args.serialize is not None:
        rep = serialized_cost(rep, args.serialize, args.stage)
    fields = [
        ("K", rep.K), ("M", rep.M), ("G", rep.G), ("mode", rep.mode.value),
        ("inner_macs", rep.inner_macs), ("outer_macs", rep.outer_macs),
        ("outer_adds", rep.outer_adds), ("total_macs", rep.total_macs),
        ("total_ops", rep.total_ops), ("inner_rate", rep.inner_rate),
        ("outer_rate", rep.outer_rate),
    ]
    print("\n".join(f"{k}={fio._num(v) if not isinstance(v, str) else v}" for k, v in fields))


def cmd_optimize(args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        res = optimize_G_discrete(args.filters, args.taps, args.mode, args.rho)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(f"best_G={res.best_G} cost={fio._num(res.best_cost)}")
    csv_text = fio.curve_csv(res)
    if args.out in (None, "-"):
        sys.stdout.write(csv_text)
    else:
        fio.atomic_write_text(args.out, csv_text)


def cmd_polyphase(args):
    proto = fio.read_bank(args.prototype)
    spec = polyphase_decompose(proto, args.up)
    plan = _resolve_plan(spec.U, spec.subfilters.M, args.groups, args.mode)
    if not args.check:
        lines = [
            "".join("+" if c > 0 else "-" for c in spec.subfilters.coefficients[u, :n]) + "\n"
            for u, n in enumerate(spec.phase_lengths)
        ]
        _emit("".join(lines), args.out)
        return 0
    seed = default_seed() if args.seed is None else args.seed
    x = random_signal(args.length or 4 * proto.M, seed)
    ref = interpolate_direct(proto, spec.U, x).samples
    got = interpolate_shared(spec, plan, x).samples
    ok = ref.shape == got.shape and bool((ref == got).all())
    print(f"U={spec.U} M={proto.M} G={plan.G} samples={got.size} equal={int(ok)}")
    return 0 if ok else 1


def cmd_graph(args):
    bank = fio.read_bank(args.bank)
    plan = _resolve_plan(bank.K, bank.M, args.groups, args.mode)
    write_graph(build_graph(bank, plan, args.mode), args.out)


def cmd_montecarlo(args):
    seed = default_seed() if args.seed is None else args.seed
    st = monte_carlo_cost(args.filters, args.taps, args.groups, args.mode, args.trials, seed)
    print(
        f"trials={st.trials} seed={st.seed} mean_total={st.mean_total:.6g} "
        f"std_total={st.std_total:.6g} mean_nonempty={st.mean_nonempty:.6g} "
        f"stderr_nonempty={st.stderr_nonempty:.6g} inner_min={st.inner_min} inner_max={st.inner_max}"
    )


def _usage(cmd, msg):
    return f"fbshare {cmd}: error: {msg}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fbshare", description="Coefficient sharing for PN filter banks")
    sub = parser.add_subparsers(dest="command", required=True)
    mode = dict(type=CostMode.parse, default=CostMode.MAC_OUTER, choices=list(CostMode),
                metavar="{mac,pyramid}")

    p = sub.add_parser("gen", help="generate a seeded random bank")
    p.add_argument("--filters", type=_positive_int, required=True)
    p.add_argument("--taps", type=_positive_int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("partition", help="print the per-group subset partition")
    p.add_argument("--bank", required=True)
    p.add_argument("--groups", type=_groups, default="auto")
    p.add_argument("--mode", **mode)
    p.add_argument("--rho", type=float, default=DEFAULT_RHO)
    p.add_argument("--out")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("simulate", help="filter a signal file")
    p.add_argument("--bank", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--mode", choices=["direct", "shared"], default="shared")
    p.add_argument("--groups", type=_groups, default="auto")
    p.add_argument("--cost-mode", **mode)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cost", help="expected operation counts")
    p.add_argument("--filters", type=_positive_int, required=True)
    p.add_argument("--taps", type=_positive_int, required=True)
    p.add_argument("--groups", type=float, required=True)
    p.add_argument("--mode", **mode)
    p.add_argument("--discrete", action="store_true")
    p.add_argument("--serialize", type=int)
    p.add_argument("--stage", choices=["inner", "outer", "both"], default="both")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("optimize", help="search the group count")
    p.add_argument("--filters", type=_positive_int, required=True)
    p.add_argument("--taps", type=_positive_int, required=True)
    p.add_argument("--mode", **mode)
    p.add_argument("--rho", type=float, default=DEFAULT_RHO)
    p.add_argument("--out", help="CSV destination, '-' for stdout (default)")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("polyphase", help="polyphase interpolator decomposition and check")
    p.add_argument("--prototype", required=True)
    p.add_argument("--up", type=int, required=True)
    p.add_argument("--groups", type=_groups, default="auto")
    p.add_argument("--mode", **mode)
    p.add_argument("--check", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--length", type=_positive_int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_polyphase)

    p = sub.add_parser("graph", help="export the dataflow graph")
    p.add_argument("--bank", required=True)
    p.add_argument("--groups", type=_groups, default="auto")
    p.add_argument("--mode", **mode)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("montecarlo", help="actual costs over random banks")
    p.add_argument("--filters", type=_positive_int, required=True)
    p.add_argument("--taps", type=_positive_int, required=True)
    p.add_argument("--groups", type=_positive_int, default=1)
    p.add_argument("--mode", **mode)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_montecarlo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.func(args)
    except FilterBankError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return rc or 0


def run(argv=None) -> int:
    """Like :func:`main` but turns argparse's ``SystemExit`` into a return code."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
