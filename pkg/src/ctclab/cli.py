"""Command-line interface: reproductions, solvers, and scenario runs.

Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
Every flag can also be supplied through a CTCLAB_-prefixed environment
variable (flags win); the seed defaults to 0 so identical invocations
produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction

import click
import numpy as np

from . import deutsch as deutsch_mod
from . import linalg
from . import scenario as scenario_mod

CONTEXT_SETTINGS = {"auto_envvar_prefix": "CTCLAB", "help_option_names": ["-h", "--help"]}


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _echo_report(report: dict, fmt: str, human_renderer):
    if fmt == "json":
        click.echo(scenario_mod.canonical_json(report))
    elif fmt == "csv":
        click.echo(_report_csv(report), nl=False)
    else:
        for line in human_renderer(report):
            click.echo(line)


def _report_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["parameter", "entropy", "mutual_information", "paradox"])
    rows = report.get("sweep")
    if rows is None:
        fig = report.get("figures", {})
        rows = [{
            "parameter": "",
            "entropy": fig.get("entropy_ctc", ""),
            "mutual_information": fig.get("joint_out_mutual_information", ""),
            "paradox": report.get("paradox", ""),
        }]
    for row in rows:
        writer.writerow([row["parameter"], row["entropy"],
                         row["mutual_information"], row["paradox"]])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# human rendering

def _fmt_float(x: float) -> str:
    return format(float(x), ".6g")


def _matrix_lines(mat, indent: str = "  ") -> list:
    """Two-decimal complex matrix block with the exact entries footnoted."""
    a = np.asarray(mat, dtype=complex)
    lines = []
    for row in a:
        cells = ", ".join(f"{v.real:+.2f}{v.imag:+.2f}j" for v in row)
        lines.append(f"{indent}[{cells}]")
    exact = ", ".join(f"{v.real:.17g}{v.imag:+.17g}j" for v in a.reshape(-1))
    lines.append(f"{indent}exact (row-major): {exact}")
    return lines


def _vee(labels) -> str:
    items = sorted(labels)
    if not items:
        return "(none)"
    if isinstance(items[0], (list, tuple)):
        return "∨".join(".".join(str(v) for v in s) for s in items)
    return "∨".join(str(v) for v in items)


def _yesno(flag) -> str:
    return "yes" if flag else "no"


def _render_classical(report: dict) -> list:
    lines = [f"model: classical"]
    lines.append(f"permutation: {report['transform']['cycles']} "
                 f"on {report['transform']['size']} states")
    if "cr_size" in report.get("system", {}):
        lines.append(f"consistent (cr, ctc) pairs: "
                     f"{report['consistent_set'] or '(none)'}")
        lines.append(f"boundary CR states: {report['boundary_conditions'] or '(none)'}")
    else:
        lines.append(f"fixed points (0-based): {report['consistent_set'] or '(none)'}")
        lines.append("stationary basis:")
        for dist in report.get("stationary_basis", []):
            lines.append(f"  [{', '.join(dist)}]")
    lines.append(f"paradox: {_yesno(report['paradox'])}")
    lines.append(f"concealed paradox: {_yesno(report['concealed_paradox'])}")
    out = report.get("output_states", {})
    if "distribution_out" in out:
        lines.append(f"distribution in:  [{', '.join(out['distribution_in'])}]")
        lines.append(f"distribution out: [{', '.join(out['distribution_out'])}]"
                     + ("  (stationary)" if out.get("stationary") else ""))
    return lines


def _render_deutsch(report: dict) -> list:
    fig = report["figures"]
    lines = ["model: deutsch (quantum fixed point)"]
    lines.append(f"fixed-point set dimension: {report['consistent_set']['dimension']}"
                 f"   residual: {report['consistent_set']['residual']:.3e}")
    lines.append("max-entropy consistent CTC state:")
    lines.extend(_matrix_lines(linalg.matrix_from_json(report["output_states"]["rho_ctc"])))
    lines.append("CR output state:")
    lines.extend(_matrix_lines(linalg.matrix_from_json(report["output_states"]["rho_cr_out"])))
    lines.append(f"entropies (bits): ctc={_fmt_float(fig['entropy_ctc'])} "
                 f"cr_in={_fmt_float(fig['entropy_cr_in'])} "
                 f"cr_out={_fmt_float(fig['entropy_cr_out'])}")
    lines.append("joint output mutual information: "
                 f"{_fmt_float(fig['joint_out_mutual_information'])} bits")
    if "mutual_information_before" in fig:
        lines.append(f"pair mutual information: {_fmt_float(fig['mutual_information_before'])}"
                     f" -> {_fmt_float(fig['mutual_information_after'])} bits")
        lines.append("joint pair output:")
        lines.extend(_matrix_lines(linalg.matrix_from_json(report["output_states"]["rho_ab_out"])))
    return lines


def _render_toy(report: dict) -> list:
    lines = [f"model: toy ({report['n_toybits']} toybit(s))"]
    lines.append(f"transformation: {report['transform']['cycles']}")
    if "pre_measurement" in report:
        pre = report["pre_measurement"]
        lines.append(f"pre-measurement: {pre['basis']} observed {_vee(pre['state'])}")
    if report["n_toybits"] == 1:
        lines.append(f"consistent ontic states: {_vee(report['consistent_set'])}")
    else:
        lines.append(f"consistent (cr, ctc) pairs: {_vee(report['consistent_set'])}")
        lines.append(f"boundary CR states: {_vee(report['boundary_conditions'])}")
        if report["forced_states"]:
            lines.append(f"forced CR states: {_vee(report['forced_states'])}")
        outs = report["output_states"].get("cr_outputs", [])
        if outs:
            lines.append("post-interaction CR states: " + ", ".join(
                f"({a}.{c})->{out}" for a, c, out in outs))
    lines.append(f"paradox: {_yesno(report['paradox'])}")
    lines.append(f"concealed paradox: {_yesno(report['concealed_paradox'])}")
    lines.append(f"knowledge-balance violation: {_yesno(report['kb_violation'])}")
    if report.get("witnesses"):
        lines.append("invariant epistemic witnesses: "
                     + ", ".join(_vee(w) for w in report["witnesses"]))
    if "invariants" in report:
        lines.append("invariant valid epistemic states: "
                     + ", ".join(_vee(w) for w in report["invariants"]))
    if "mixture" in report:
        mix = report["mixture"]
        probs = ", ".join(f"p({k})={v}" for k, v in sorted(mix["probabilities"].items()))
        lines.append(f"interaction mixture: plain forces {_vee(mix['plain_forced'])}, "
                     f"primed forces {_vee(mix['primed_forced'])}; {probs} "
                     f"-> state {_vee(mix['state'])}")
    if "correlations" in report:
        corr = report["correlations"]
        lines.append(f"pair state before: {_vee(corr['ab_before'])}")
        lines.append(f"pair state after:  {_vee(corr['ab_after'])}"
                     + ("" if corr["decorrelated"] else "  (correlation preserved)"))
    return lines


_RENDERERS = {
    "classical": _render_classical,
    "deutsch": _render_deutsch,
    "toy": _render_toy,
}


def _render_report(report: dict) -> list:
    return _RENDERERS[report["model"]](report)


# ---------------------------------------------------------------------------
# commands

@click.group(context_settings=CONTEXT_SETTINGS)
def main():
    """Simulator for systems traversing closed timelike curves.

    Three models are available: the quantum fixed-point (Deutsch) model, a
    classical finite-state model, and the toybit (Spekkens-style) epistemic
    model. The `repro` command replays the named worked examples.
    """


@main.command()
@click.argument("target", default="all")
@click.option("--format", "fmt", type=click.Choice(["human", "json"]),
              default="human", show_default=True)
@click.option("--seed", type=int, default=0, envvar="CTCLAB_SEED", show_default=True)
def repro(target, fmt, seed):
    """Run one named reproduction, or all of them; exit 0 only if all pass."""
    registry = scenario_mod.paper_examples()
    if target != "all" and target not in registry:
        _fail(f"unknown reproduction id {target!r}; known ids: "
              + ", ".join(sorted(registry)) + ", all", 2)
    ids = sorted(registry) if target == "all" else [target]
    summary = scenario_mod.verify_all(seed=seed, ids=ids)
    if fmt == "json":
        click.echo(scenario_mod.canonical_json(summary.to_report()))
    else:
        for res in summary.results:
            status = "PASS" if res.passed else "FAIL"
            click.echo(f"{status}  {res.id}  ({res.elapsed_seconds * 1000:.0f} ms)  "
                       f"{registry[res.id].description}")
            for failure in res.failures:
                click.echo(f"      - {failure}")
        click.echo("all passed" if summary.all_passed else "FAILURES present")
    sys.exit(0 if summary.all_passed else 1)


@main.group()
def deutsch():
    """Quantum fixed-point model commands."""


@deutsch.command("solve")
@click.option("--unitary", "unitary_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON matrix file for the interaction unitary.")
@click.option("--cr-state", "cr_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON matrix file for the chronology-respecting input state.")
@click.option("--tol", type=float, default=deutsch_mod.FIXED_POINT_TOL,
              envvar="CTCLAB_TOL", show_default=True,
              help="Fixed-point residual tolerance.")
@click.option("--format", "fmt", type=click.Choice(["human", "json"]),
              default="human", show_default=True)
def deutsch_solve(unitary_path, cr_path, tol, fmt):
    """Solve the consistency condition for a unitary and a CR input state."""
    try:
        with open(unitary_path) as fh:
            unitary = linalg.matrix_from_json(json.load(fh))
        with open(cr_path) as fh:
            rho_cr = linalg.matrix_from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        _fail(str(exc), 2)
    d_cr = rho_cr.shape[0]
    if unitary.shape[0] % d_cr:
        _fail(f"unitary dimension {unitary.shape[0]} is not a multiple of "
              f"the CR dimension {d_cr}", 2)
    d_ctc = unitary.shape[0] // d_cr
    spec = {"model": "deutsch", "d_cr": d_cr, "d_ctc": d_ctc,
            "unitary": linalg.matrix_to_json(unitary),
            "cr_input": {"matrix": linalg.matrix_to_json(rho_cr)}, "tol": tol}
    try:
        report = scenario_mod.run(spec)
    except scenario_mod.ScenarioError as exc:
        _fail(str(exc), 2)
    except deutsch_mod.SolverError as exc:
        _fail(str(exc), 3)
    _echo_report(report, fmt, _render_report)


@main.group()
def classical():
    """Classical finite-state model commands."""


@classical.command("analyze")
@click.option("--perm", required=True, help="Permutation in 1-based cycle notation.")
@click.option("--states", type=int, required=True, help="Number of ontic states.")
@click.option("--dist", default=None,
              help="Optional comma-separated distribution, e.g. '1/2,1/2'.")
@click.option("--format", "fmt", type=click.Choice(["human", "json"]),
              default="human", show_default=True)
def classical_analyze(perm, states, dist, fmt):
    """Fixed points, stationary distributions, and the concealment verdict."""
    spec = {"model": "classical", "size": states, "permutation": {"cycles": perm}}
    if dist is not None:
        try:
            spec["distribution"] = [str(Fraction(tok.strip()))
                                    for tok in dist.split(",")]
        except (ValueError, ZeroDivisionError) as exc:
            _fail(f"cannot parse distribution {dist!r}: {exc}", 2)
    try:
        report = scenario_mod.run(spec)
    except scenario_mod.ScenarioError as exc:
        _fail(str(exc), 2)
    _echo_report(report, fmt, _render_report)


@main.group()
def toy():
    """Toybit (epistemically restricted) model commands."""


@toy.command("analyze")
@click.option("--transform", required=True,
              help="Cycle notation for one toybit, or 'tcn', 'swap', or JSON "
                   "({\"local\": [..]}, {\"compose\": [..]}) for two.")
@click.option("--ctc-factor", type=click.IntRange(0, 1), default=1, show_default=True,
              help="Which factor of a pair lies on the CTC.")
@click.option("--pre-measure", default=None,
              help="Pre-interaction measurement of the CR toybit, e.g. 'z:first'.")
@click.option("--seed", type=int, default=0, envvar="CTCLAB_SEED", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["human", "json"]),
              default="human", show_default=True)
def toy_analyze(transform, ctc_factor, pre_measure, seed, fmt):
    """Consistency, boundary conditions, knowledge balance, and invariance."""
    token = transform.strip()
    if token.startswith("{"):
        try:
            token = json.loads(token)
        except json.JSONDecodeError as exc:
            _fail(f"cannot parse transform JSON: {exc}", 2)
    two = isinstance(token, dict) or (isinstance(token, str)
                                      and token.lower() in ("tcn", "swap"))
    spec = {"model": "toy", "n_toybits": 2 if two else 1, "transform": token,
            "seed": seed}
    if two:
        spec["ctc_factor"] = ctc_factor
    if pre_measure is not None:
        spec["pre_measurement"] = pre_measure
    try:
        report = scenario_mod.run(spec)
    except scenario_mod.ScenarioError as exc:
        _fail(str(exc), 2)
    _echo_report(report, fmt, _render_report)


@main.group()
def scenario():
    """Scenario-file commands."""


@scenario.command("run")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["human", "json", "csv"]),
              default="human", show_default=True)
@click.option("--seed", type=int, default=None, envvar="CTCLAB_SEED",
              help="Override the scenario's seed (default 0).")
def scenario_run(path, fmt, seed):
    """Run one scenario file and emit the analysis report."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
        parsed = scenario_mod.Scenario.from_json(obj, seed=seed)
        report = scenario_mod.run(parsed)
    except (OSError, json.JSONDecodeError, scenario_mod.ScenarioError, ValueError) as exc:
        _fail(str(exc), 2)
    except deutsch_mod.SolverError as exc:
        _fail(str(exc), 3)
    _echo_report(report, fmt, _render_report)


if __name__ == "__main__":
    main()
