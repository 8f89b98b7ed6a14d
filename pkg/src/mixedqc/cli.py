"""Command-line front end: each subcommand regenerates one figure or table
as CSV or JSON, optionally with a static SVG chart.

Exit codes: 0 success, 2 usage error, 1 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__

DEFAULT_SAMPLES = 100
SAMPLE_DEFAULTS = {"trace": 10**4, "schmidt-scan": 20, "classical-trace": 10**5, "entdist": 0,
                   "discord-horodecki": 0}


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    plot_x: str | None = None
    plot_y: tuple[str, ...] = ()

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError(f"row of length {len(row)} for {len(self.columns)} columns")
        self.rows.append([_plain(v) for v in row])

    def records(self):
        return [dict(zip(self.columns, r)) for r in self.rows]


@dataclass
class Result:
    tables: list[Table]
    extra: dict = field(default_factory=dict)


def _plain(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


# --------------------------------------------------------------------------
# Flag parsing
# --------------------------------------------------------------------------


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must lie in [0, 2^64), got {v}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0 or not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {v}")
    return v


def parse_grid(text: str) -> list[float]:
    """``0.5``, ``0.1,0.5,1`` or ``start:stop:step`` (stop included)."""
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            vals = [round(start + i * step, 12) for i in range(count)]
        else:
            vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid must be a number, a comma list or start:stop:step, got {text!r}") from None
    if not vals or not all(np.isfinite(vals)):
        raise argparse.ArgumentTypeError(f"empty or non-finite grid {text!r}")
    return vals


def _split_spec(text: str):
    if text in ("near", "all"):
        return text
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"split must be 'near', 'all' or a part-B size k, got {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError(f"split size must be positive, got {k}")
    return k


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=_u64, default=0, help="base seed (member i uses seed + i)")
    p.add_argument("--samples", type=_positive_int, default=None, help="ensemble size or shot count")
    p.add_argument("--nmax", type=_positive_int, default=None, help="largest system size")
    p.add_argument("--alpha", type=parse_grid, default=None, help="polarization or grid")
    p.add_argument("--split", type=_split_spec, default="near", help="near, all or k")
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default=None, help="write here instead of stdout")
    p.add_argument("--plot", default=None, help="SVG chart path")
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--tol", type=_positive_float, default=1e-10)
    return p


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_trace(args) -> Result:
    from .dqc1 import build_state, normalized_trace_exact, runs_required, sample_trace
    from .random_unitary import member_rng, pseudo_random_unitary

    n = args.nmax or 4
    alphas = args.alpha or [1.0]
    budget = args.samples or 10**4
    u = pseudo_random_unitary(n, member_rng(args.seed, 0))
    exact = normalized_trace_exact(u)
    tab = Table("sampling", ["alpha", "runs", "est_re", "est_im", "exact_re", "exact_im",
                             "abs_error", "std_error"], plot_x="runs", plot_y=("abs_error", "std_error"))
    runs_list = sorted({r for r in (10, 100, 1000, 10**4, 10**5, 10**6) if r < budget} | {budget})
    for ai, a in enumerate(alphas):
        state = build_state(u, a)
        for ri, runs in enumerate(runs_list):
            est = sample_trace(state, runs, member_rng(args.seed, 1 + ai * len(runs_list) + ri))
            tab.add(a, runs, est.value.real, est.value.imag, exact.real, exact.imag,
                    abs(est.value - exact), est.std_error)
    bud = Table("runs_budget", ["alpha", "epsilon", "error_probability", "runs_required"])
    for a in alphas:
        for eps in (0.1, 0.05, 0.01):
            for pe in (0.05, 0.01):
                bud.add(a, eps, pe, runs_required(eps, pe, a))
    return Result([tab, bud], {"num_qubits": n})


def cmd_neg_random(args) -> Result:
    from .negativity import ensemble_negativities, near_equal_split, split_last_k

    nmax = args.nmax or 7
    if nmax < 3:
        raise ValueError("--nmax counts all qubits including the control; need at least 3")
    samples = args.samples or DEFAULT_SAMPLES
    alpha = (args.alpha or [1.0])[0]
    tab = Table("negativity", ["total_qubits", "split_k", "alpha", "samples", "mean", "std"],
                plot_x="total_qubits", plot_y=("mean",))
    for total in range(3, nmax + 1):
        if args.split == "near":
            splits = [near_equal_split(total)]
        elif args.split == "all":
            splits = [split_last_k(total, k) for k in range(1, total)]
        else:
            if args.split >= total:
                continue
            splits = [split_last_k(total, args.split)]
        for split in splits:
            vals = ensemble_negativities(total - 1, split, samples, args.seed, alpha=alpha,
                                         threads=args.threads)
            tab.add(total, len(split.part_b), alpha, samples, vals.mean(), vals.std(ddof=1))
    return Result([tab])


def cmd_neg_bounds(args) -> Result:
    from .bounds import bound_s12, bound_s12_integer, bound_s123, bound_s123_asymptotic
    from .negativity import ensemble_negativities, near_equal_split

    nmax = args.nmax or 6
    if not 3 <= nmax <= 11:
        raise ValueError("--nmax (total qubits) must lie in [3, 11]")
    samples = args.samples or DEFAULT_SAMPLES
    tab = Table("bounds", ["total_qubits", "two_N", "bound_s12", "bound_s12_integer", "bound_s123",
                           "u", "v", "w", "asymptote", "family", "random_mean"],
                plot_x="total_qubits", plot_y=("bound_s12", "bound_s123", "asymptote", "family",
                                               "random_mean"))
    for total in range(3, nmax + 1):
        N = 2 ** (total - 1)
        res = bound_s123(N)
        rand = float("nan")
        if total <= 8:
            rand = ensemble_negativities(total - 1, near_equal_split(total), samples, args.seed,
                                         threads=args.threads).mean()
        tab.add(total, 2 * N, bound_s12(1.0), bound_s12_integer(N, 1.0), res.bound,
                res.triple.u, res.triple.v, res.triple.w, bound_s123_asymptotic(N), 1.25, rand)
    return Result([tab])


def cmd_discord_sweep(args) -> Result:
    from .discord import dqc1_discord_analytic, dqc1_discord_numeric
    from .random_unitary import member_rng, pseudo_random_unitary

    n = args.nmax or 5
    samples = args.samples or DEFAULT_SAMPLES
    alphas = args.alpha or parse_grid("0.1:1.0:0.1")
    if any(not 0 <= a <= 1 for a in alphas):
        raise ValueError("alpha grid must lie in [0, 1]")
    us = [pseudo_random_unitary(n, member_rng(args.seed, i)) for i in range(samples)]
    tab = Table("discord", ["alpha", "analytic", "numeric_mean", "numeric_std", "samples"],
                plot_x="alpha", plot_y=("analytic", "numeric_mean"))
    for a in alphas:
        vals = np.array([dqc1_discord_numeric(u, a).discord for u in us])
        tab.add(a, dqc1_discord_analytic(a), vals.mean(), vals.std(ddof=1) if samples > 1 else 0.0,
                samples)
    return Result([tab], {"num_qubits": n})


def cmd_discord_horodecki(args) -> Result:
    from .discord import (HORODECKI_SPLIT, BlochMeasurement, conditional_entropy_measured,
                          horodecki_discord, horodecki_state)
    from .negativity import multiplicative_negativity
    from .qstate import hermitian_spectrum, partial_trace, partial_transpose, von_neumann_entropy

    ps = args.alpha or parse_grid("0:1:0.01")
    tab = Table("horodecki", ["p", "discord_theta0", "discord_theta_half_pi", "discord_min",
                              "theta_opt", "pt_min_eigenvalue", "negativity"],
                plot_x="p", plot_y=("discord_theta0", "discord_theta_half_pi", "discord_min"))
    for p in ps:
        rho = horodecki_state(p)
        base = von_neumann_entropy(rho) - von_neumann_entropy(partial_trace(rho, HORODECKI_SPLIT, "A"))
        branch = [conditional_entropy_measured(rho, HORODECKI_SPLIT, BlochMeasurement(t, 0.0)) - base
                  for t in (0.0, np.pi / 2)]
        rep = horodecki_discord(p)
        pt = hermitian_spectrum(partial_transpose(rho, HORODECKI_SPLIT, on="A"))
        tab.add(p, branch[0], branch[1], rep.discord, rep.optimal_measurement.theta, pt[-1],
                multiplicative_negativity(rho, HORODECKI_SPLIT))
    return Result([tab])


def cmd_schmidt_scan(args) -> Result:
    from .correlations import min_equal_split_scan
    from .qstate import ket
    from .random_unitary import RandomCircuitSpec, apply_random_circuit_to_state

    nmax = args.nmax or 10
    if nmax > 14:
        raise ValueError("--nmax must not exceed 14")
    seeds = args.samples or 20
    detail = Table("circuits", ["num_qubits", "seed", "min_rank", "reference", "splits", "exhaustive"])
    summary = Table("summary", ["num_qubits", "reference", "fraction_at_reference", "mean_min_rank"],
                    plot_x="num_qubits", plot_y=("reference", "mean_min_rank"))
    for n in range(4, nmax + 1, 2):
        ranks = []
        for i in range(seeds):
            spec = RandomCircuitSpec(n, 2 * n, (args.seed + i) % 2**64)
            psi = apply_random_circuit_to_state(spec, ket("0" * n))
            scan = min_equal_split_scan(psi, args.tol, rng=args.seed + i)
            ranks.append(scan.min_rank)
            detail.add(n, spec.seed, scan.min_rank, 2 ** (n // 2), scan.splits_checked, scan.exhaustive)
        ranks = np.array(ranks)
        summary.add(n, 2 ** (n // 2), float(np.mean(ranks == 2 ** (n // 2))), ranks.mean())
    return Result([summary, detail])


def cmd_entdist(args) -> Result:
    from .entdist import protocol_discord_accounting, protocol_entanglement_audit

    reports = protocol_discord_accounting()
    audit = protocol_entanglement_audit()
    tab = Table("discord", ["state", "discord", "theta_opt", "phi_opt", "pt_min_a", "pt_min_b",
                            "pt_min_c"])
    for name, rep in zip(("rho", "sigma", "tau"), reports):
        tab.add(name, rep.discord, rep.optimal_measurement.theta, rep.optimal_measurement.phi,
                *(audit.pt_spectra[(name, party)][-1] for party in "abc"))
    extra = {
        "discord": [r.discord for r in reports],
        "sigma_a_bc_entangled": audit.sigma_a_bc_entangled,
        "tau_bell_probability": audit.tau_bell_probability,
        "tau_bell_negativity": audit.tau_bell_negativity,
        "ebit_rate": audit.ebit_rate,
        "pt_spectra": {f"{s}|{p}": [float(x) for x in v] for (s, p), v in audit.pt_spectra.items()},
    }
    return Result([tab], extra)


def cmd_pure_neg(args) -> Result:
    from .negativity import PURE_NEG_ASYMPTOTE, avg_pure_negativity_exact, avg_pure_negativity_mc
    from .qstate import BipartiteSplit
    from .random_unitary import member_rng

    nmax = args.nmax or 12
    if nmax > 12:
        raise ValueError("--nmax must not exceed 12 (exact formula supports mu <= 64)")
    samples = args.samples or DEFAULT_SAMPLES
    tab = Table("pure_negativity", ["num_qubits", "mu", "exact", "exact_ratio", "mc_mean",
                                    "mc_stderr", "mc_ratio", "asymptote"],
                plot_x="num_qubits", plot_y=("exact_ratio", "mc_ratio", "asymptote"))
    for n in range(2, nmax + 1, 2):
        mu = 2 ** (n // 2)
        exact = avg_pure_negativity_exact(mu)
        mean, err = avg_pure_negativity_mc(n, BipartiteSplit(tuple(range(n // 2)), n), samples,
                                           member_rng(args.seed, n))
        tab.add(n, mu, exact, exact / mu, mean, err, mean / mu, PURE_NEG_ASYMPTOTE)
    return Result([tab])


def cmd_classical_trace(args) -> Result:
    from .pathsum import (compile_path_sum, exact_trace_by_counting, hadamard_layer, load_circuit,
                          matrix_trace_oracle, random_circuit, sampled_trace)
    from .random_unitary import member_rng

    samples = args.samples or 10**5
    if args.circuit:
        circuits = [(args.circuit, load_circuit(args.circuit))]
    else:
        circuits = [(f"{gs}-{i}", random_circuit(3, 8, gs, member_rng(args.seed, i + 10 * j)))
                    for j, gs in enumerate(("toffoli", "clifford_t")) for i in range(3)]
    rep = Table("traces", ["circuit", "qubits", "path_bits", "h", "degree", "oracle_re", "oracle_im",
                           "counted_re", "counted_im", "sampled_re", "sampled_im", "std_error"])
    for i, (label, circ) in enumerate(circuits):
        polys = compile_path_sum(circ)
        oracle = matrix_trace_oracle(circ) if circ.num_qubits <= 12 else complex("nan")
        counted = exact_trace_by_counting(polys) if polys.num_path_bits <= 26 else complex("nan")
        est = sampled_trace(polys, samples, member_rng(args.seed, 1000 + i))
        rep.add(label, circ.num_qubits, polys.num_path_bits, polys.h, polys.degree, oracle.real,
                oracle.imag, counted.real, counted.imag, est.estimate.real, est.estimate.imag,
                est.std_error)
    var = Table("variance", ["k", "h", "empirical_variance", "ratio"], plot_x="h",
                plot_y=("empirical_variance",))
    prev = None
    for k in range(2, min(args.nmax or 10, 20) + 1):
        est = sampled_trace(compile_path_sum(hadamard_layer(k)), samples, member_rng(args.seed, 2000 + k))
        v = est.empirical_variance
        var.add(k, k, v, v / prev if prev else float("nan"))
        prev = v
    return Result([rep, var])


COMMANDS = {
    "trace": (cmd_trace, "one-clean-qubit trace estimation: exact vs sampled, runs budget"),
    "neg-random": (cmd_neg_random, "random-unitary negativity mean and spread vs size and split"),
    "neg-bounds": (cmd_neg_bounds, "power-sum negativity bounds vs family and random values"),
    "discord-sweep": (cmd_discord_sweep, "analytic vs ensemble one-clean-qubit discord over alpha"),
    "discord-horodecki": (cmd_discord_horodecki, "bound entangled family: discord branches over p"),
    "schmidt-scan": (cmd_schmidt_scan, "min balanced-split Schmidt rank of random circuits"),
    "entdist": (cmd_entdist, "discord and partial-transpose audit of the distribution protocol"),
    "pure-neg": (cmd_pure_neg, "average negativity of random pure states, exact and sampled"),
    "classical-trace": (cmd_classical_trace, "path-sum traces: oracle, counted, sampled, variance"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixedqc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    common = _common_parser()
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name == "classical-trace":
            sp.add_argument("--circuit", default=None, help="circuit text file")
    return parser


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(result: Result, meta: dict) -> str:
    buf = io.StringIO()
    buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    for i, tab in enumerate(result.tables):
        if len(result.tables) > 1:
            if i:
                buf.write("\n")
            buf.write(f"# table={tab.name}\n")
        writer.writerow(tab.columns)
        for row in tab.rows:
            writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not np.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return _plain(v)


def render_json(result: Result, meta: dict) -> str:
    doc = dict(meta)
    doc["tables"] = {t.name: t.records() for t in result.tables}
    doc.update(result.extra)
    return json.dumps(_json_safe(doc), indent=2) + "\n"


def write_plot(result: Result, path: str, title: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "mixedqc"  # stable element ids across runs

    tab = next((t for t in result.tables if t.plot_x), None)
    if tab is None:
        raise ValueError("this command has no chart")
    xi = tab.columns.index(tab.plot_x)
    x = np.array([r[xi] for r in tab.rows], dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in tab.plot_y:
        yi = tab.columns.index(name)
        y = np.array([r[yi] for r in tab.rows], dtype=float)
        ax.plot(x, y, marker="o", markersize=3, label=name)
    ax.set_xlabel(tab.plot_x)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    func = COMMANDS[args.command][0]
    if args.samples is None:
        args.samples = SAMPLE_DEFAULTS.get(args.command, DEFAULT_SAMPLES) or None
    try:
        result = func(args)
    except (ValueError, ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"mixedqc {args.command}: {exc}", file=sys.stderr)
        return 1
    meta = {"command": args.command, "version": __version__, "seed": args.seed,
            "samples": args.samples if args.samples is not None else "n/a"}
    text = render_json(result, meta) if args.out == "json" else render_csv(result, meta)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.plot:
        write_plot(result, args.plot, args.command)
    return 0


if __name__ == "__main__":
    sys.exit(main())
