"""Command-line interface.

Exit status is 0 on success, 1 when a bound or suite check fails, and 2 on
usage, parse or validation errors.
"""

import argparse
import sys

from . import __version__
from . import bounds
from . import channels as ch
from .errors import ProblemFileError, QConverseError
from .fileio import builtin_channel, dumps, envelope, is_flat, load_problem_file, to_csv, to_plain
from .quantities import (
    coherent_information,
    entanglement_fidelity,
    entropy_exchange,
    fano_bound,
    fidelities,
    von_neumann_entropy,
)
from .states import density_of_source
from .suite import SuiteConfig, inequality_suite

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common(p):
    p.add_argument("--input", "-i", help="problem file (JSON)")
    p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--n", type=int, default=1, help="block length")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qconverse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qconverse {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="von Neumann entropy of a source's density matrix")
    _common(p)
    p.add_argument("--source", required=True)

    for name, helptext in (("coherent-info", "coherent information breakdown"),
                           ("fidelity", "entanglement and average fidelity")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--source", required=True)
        p.add_argument("--channel", required=True)

    p = sub.add_parser("fano", help="quantum Fano bound")
    _common(p)
    p.add_argument("--fe", type=float, help="entanglement fidelity")
    p.add_argument("--dim", type=int, help="output dimension")
    p.add_argument("--source")
    p.add_argument("--channel")

    p = sub.add_parser("optimize", help="maximize coherent information (ctilde) or input entropy (rc)")
    p.add_argument("target", choices=("ctilde", "rc"))
    _common(p)
    p.add_argument("--source", required=True, help="source whose states are optimized over")
    p.add_argument("--channel")
    p.add_argument("--starts", type=int, default=bounds.N_STARTS)

    p = sub.add_parser("converse", help="weak converse bound report")
    p.add_argument("target", choices=("source", "channel"))
    _common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--channel")
    p.add_argument("--encoder")
    p.add_argument("--decoder")
    p.add_argument("--rate", type=float, help="typical-subspace code rate (source converse)")
    p.add_argument("--sweep", action="store_true",
                   help="source converse over every code size for block lengths 1..n")

    p = sub.add_parser("suite", help="randomized inequality suite")
    _common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dim-min", type=int, default=2)
    p.add_argument("--dim-max", type=int, default=4)
    p.add_argument("--max-states", type=int, default=4)
    p.add_argument("--max-kraus", type=int, default=4)

    p = sub.add_parser("run", help="execute the jobs listed in a problem file")
    _common(p)
    return parser


def _problem(args):
    if not args.input:
        raise UsageError("--input is required for this command")
    return load_problem_file(args.input)


def _source(pf, name):
    try:
        return pf.sources[name]
    except KeyError:
        raise ProblemFileError(f"undefined source {name!r}") from None


def _channel(pf, name, dim):
    if name in pf.channels:
        return pf.channels[name]
    c = builtin_channel(name, dim)
    if c is None:
        raise ProblemFileError(f"undefined channel {name!r}")
    return c


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing))


def execute(args):
    """Run one parsed command; returns ``(result, rows_for_csv, ok)``."""
    cmd = args.command
    if cmd == "suite":
        cfg = SuiteConfig(
            trials=args.trials, seed=args.seed, dim_min=args.dim_min, dim_max=args.dim_max,
            max_states=args.max_states, max_kraus=args.max_kraus,
        )
        if args.tolerance is not None:
            cfg.tolerance = cfg.identity_tolerance = args.tolerance
        rep = inequality_suite(cfg)
        return rep, rep.rows(), rep.ok

    if cmd == "fano" and args.fe is not None:
        _require(args, "dim")
        bound = fano_bound(args.fe, args.dim)
        row = {"entanglement_fidelity": args.fe, "dim": args.dim, "fano_bound": bound}
        return row, [row], True

    pf = _problem(args)
    if cmd == "run":
        results, ok = [], True
        for job in pf.jobs:
            job_args = build_parser().parse_args(_job_argv(job, args))
            res, _, job_ok = execute(job_args)
            results.append({"job": job, "result": res, "ok": job_ok})
            ok = ok and job_ok
        return results, None, ok

    s = _source(pf, args.source)
    if cmd == "entropy":
        val = von_neumann_entropy(density_of_source(s))
        return {"source": args.source, "entropy": val}, [{"source": args.source, "entropy": val}], True
    if cmd == "coherent-info":
        b = coherent_information(s, _channel(pf, args.channel, s.dim))
        row = {"source": args.source, "channel": args.channel, "output_entropy": b.output_entropy,
               "entropy_exchange": b.entropy_exchange, "coherent_information": b.coherent_information}
        return row, [row], True
    if cmd == "fidelity":
        f = fidelities(s, _channel(pf, args.channel, s.dim))
        row = {"source": args.source, "channel": args.channel,
               "entanglement_fidelity": f.entanglement_fidelity, "average_fidelity": f.average_fidelity}
        return row, [row], True
    if cmd == "fano":
        return _fano(args, pf, s)
    if cmd == "optimize":
        return _optimize(args, pf, s)
    if cmd == "converse":
        return _converse(args, pf, s)
    raise UsageError(f"unknown command {cmd!r}")


def _fano(args, pf, s):
    _require(args, "channel")
    c = _channel(pf, args.channel, s.dim)
    fe = entanglement_fidelity(s, c)
    exch = entropy_exchange(s, c)
    bound = fano_bound(fe, c.out_dim)
    row = {"source": args.source, "channel": args.channel, "entanglement_fidelity": fe,
           "entropy_exchange": exch, "fano_bound": bound, "satisfied": exch <= bound + 1e-9}
    return row, [row], row["satisfied"]


def _optimize(args, pf, s):
    if args.target == "rc":
        res = bounds.maximize_input_entropy(s.states, n_starts=args.starts, seed=args.seed)
    else:
        _require(args, "channel")
        c = _channel(pf, args.channel, s.dim)
        res = bounds.maximize_coherent_info(s.states, c, args.n, n_starts=args.starts, seed=args.seed)
    out = {
        "target": args.target,
        "block_length": args.n if args.target == "ctilde" else 1,
        "value": res.value,
        "probs": list(res.point.probs),
        "optimizer_value": res.optimizer_value,
        "grid_value": res.grid_value,
        "n_starts": res.n_starts,
        "label": res.label,
    }
    row = {k: v for k, v in out.items() if k != "probs"}
    return out, [row], True


def _converse(args, pf, s):
    tol = args.tolerance if args.tolerance is not None else bounds.REPORT_TOL
    if args.target == "source":
        if args.sweep:
            reports = bounds.source_converse_sweep(s, range(1, args.n + 1), tol)
            rows = [sweep_row(r) for r in reports]
            return rows, rows, all(r.satisfied for r in reports)
        if args.rate is not None:
            enc, dec, _ = ch.typical_subspace_encoder(density_of_source(s), args.n, rate=args.rate)
        else:
            _require(args, "encoder", "decoder")
            enc = _channel(pf, args.encoder, s.dim**args.n)
            dec = _channel(pf, args.decoder, enc.out_dim)
        rep = bounds.source_converse_report(s, enc, dec, args.n, tol)
        return rep, None, rep.satisfied

    _require(args, "channel")
    c = _channel(pf, args.channel, s.dim)
    big = s.dim**args.n
    enc = _channel(pf, args.encoder, big) if args.encoder else None
    dec = _channel(pf, args.decoder, big) if args.decoder else None
    rep = bounds.channel_converse_report(s.states, s.probs, c, enc, dec, args.n, seed=args.seed, tol=tol)
    return rep, None, rep.satisfied and rep.extras["chain_satisfied"]


def sweep_row(r: bounds.BoundReport) -> dict:
    """One line of the rate-vs-fidelity table."""
    return {
        "block_length": r.block_length,
        "code_dim": r.extras["code_dim"],
        "rate": r.rate,
        "entropy": r.entropy_rate,
        "delta": r.bound_lhs,
        "entanglement_fidelity": r.entanglement_fidelity,
        "bound_rhs": r.bound_rhs,
        "slack": r.slack,
        "satisfied": r.satisfied,
        "asymptotic_fidelity_cap": r.extras["asymptotic_fidelity_cap"],
        "asymptotic_satisfied": r.extras["asymptotic_satisfied"],
    }


def _job_argv(job, args):
    argv = [job["command"]]
    if "target" in job:
        argv.append(job["target"])
    argv += ["--input", args.input, "--seed", str(job.get("seed", args.seed))]
    for key, val in job.items():
        if key in ("command", "target", "seed"):
            continue
        flag = "--" + key.replace("_", "-")
        if val is True:
            argv.append(flag)
        elif val is not False and val is not None:
            argv += [flag, str(val)]
    return argv


def _tolerances(args) -> dict:
    if args.command == "suite":
        t = args.tolerance
        return {"inequality": 1e-9 if t is None else t, "identity": 1e-8 if t is None else t}
    if args.command == "converse":
        return {"report": bounds.REPORT_TOL if args.tolerance is None else args.tolerance}
    return {"hermiticity": 1e-9, "positivity": 1e-10, "trace": 1e-8, "eigenvalue_cutoff": 1e-12}


def render(args, result, rows) -> str:
    if args.format == "csv":
        if rows is None or not is_flat([to_plain(r) for r in rows]):
            raise UsageError(f"'{args.command}' produces a nested report; use --format json")
        return to_csv(rows)
    cmd = args.command + (f" {args.target}" if hasattr(args, "target") else "")
    return dumps(envelope(cmd, result, args.seed, _tolerances(args), __version__))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, rows, ok = execute(args)
        text = render(args, result, rows)
    except (UsageError, QConverseError, ValueError) as exc:
        print(f"qconverse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_OK if ok else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
