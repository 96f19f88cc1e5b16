"""Command-line entry point: figure sweeps, validation runs, protocol runs.

Subcommands:
  figures   - evaluate the closed-form sweeps and write fig5..fig8 CSVs
  validate  - run the cell-level Monte Carlo per access-network kind and
              check it against the closed forms; exit 1 on any failure
  scenario  - run the full protocol simulation and write its counters

Every CSV starts with '#'-prefixed provenance lines naming the formula
evaluated, then a fixed ``sweep_value,metric,value`` header. Output is
byte-stable: rerunning a command on the same config reproduces identical
files. Exit codes: 0 success, 1 validation failure, 2 config error.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass
from pathlib import Path

from .config import ConfigError, ScenarioConfig, default_config, load_config
from .overhead import nonperiodic_overhead, periodic_overhead
from .queueing import FirstOrderValidityError
from .reliability import integrated_reliability
from .simkernel import (
    horizon_for_events,
    run_cell_mc,
    run_system_sim,
    validate_against_analytic,
)
from .timing import total_processing_time_hsca, total_processing_time_sda
from .topology import AccessNetworkKind


@dataclass
class MetricSeries:
    """Rows of (sweep_value, metric_name, value), sorted for emission."""

    sweep_name: str
    rows: list[tuple[float, str, float]]
    provenance: tuple[str, ...] = ()

    def write(self, path: Path):
        lines = [f"# {line}" for line in self.provenance]
        lines.append(f"# sweep variable: {self.sweep_name}")
        lines.append("sweep_value,metric,value")
        for sweep_value, metric, value in sorted(self.rows, key=lambda r: (r[0], r[1])):
            lines.append(f"{sweep_value},{metric},{value}")
        path.write_text("\n".join(lines) + "\n")


def _load(args) -> ScenarioConfig:
    cfg = default_config() if args.config is None else load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.out is not None:
        cfg = dataclasses.replace(cfg, output_dir=args.out)
    return cfg


def _outdir(cfg: ScenarioConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_figures(cfg: ScenarioConfig) -> int:
    out = _outdir(cfg)
    ov = cfg.overhead_params()

    op = periodic_overhead(ov).op
    fig5 = MetricSeries(
        sweep_name="lmm_count",
        rows=[(n, "periodic_overhead", op) for n in cfg.sweeps.lmm_counts],
        provenance=(
            "periodic signalling overhead per second: "
            "O_p = (1/T) * (sum_i a_i*A_i + 2*d); independent of the LMM count",
        ),
    )
    fig5.write(out / "fig5.csv")

    onp = nonperiodic_overhead(ov)
    fig6 = MetricSeries(
        sweep_name="lmm_count",
        rows=[(n, "nonperiodic_overhead", onp) for n in cfg.sweeps.lmm_counts],
        provenance=(
            "non-periodic signalling overhead per second: "
            "O_np = (1/T) * (a * sum_i A_i*Pr_i + d * (Pr_bb1 + Pr_bb2)); "
            "independent of the LMM count",
        ),
    )
    fig6.write(out / "fig6.csv")

    rows7: list[tuple[float, str, float]] = []
    for rate in cfg.sweeps.arrival_rates:
        try:
            sda = total_processing_time_sda(
                dataclasses.replace(cfg.timing, lambda_report=rate)
            )
            rho = rate / cfg.hsca_timing.mu
            hsca = total_processing_time_hsca(
                dataclasses.replace(cfg.hsca_timing, rho_ra=rho, rho_is=rho)
            )
        except ValueError as exc:
            raise ConfigError(f"sweeps.arrival_rates value {rate}: {exc}") from exc
        rows7.append((rate, "processing_time_sda_ms", sda * 1e3))
        rows7.append((rate, "processing_time_hsca_ms", hsca * 1e3))
    fig7 = MetricSeries(
        sweep_name="arrival_rate",
        rows=rows7,
        provenance=(
            "total processing time (ms): "
            "sda = t1 + d_rl/s_rl + 3*(rho+1)/(mu*(1-rho)) + d_ll/s_ll; "
            "hsca = t1 + d_rr/s_rr + d_ris/s_ris + d_ibi/s_ibi "
            "+ (rho_ra+1)/(mu*(1-rho_ra)) + 2*(rho_is+1)/(mu*(1-rho_is))",
            "rho = arrival_rate / mu_serve on both sides",
        ),
    )
    fig7.write(out / "fig7.csv")

    rows8 = []
    for n in cfg.sweeps.reliability_lmm_counts:
        try:
            score = integrated_reliability(cfg.reliability.params_for(n))
        except ValueError as exc:
            raise ConfigError(f"sweeps.reliability_lmm_counts value {n}: {exc}") from exc
        rows8.append((n, "integrated_reliability", score))
    fig8 = MetricSeries(
        sweep_name="lmm_count",
        rows=rows8,
        provenance=(
            "integrated reliability: R = 1 - (P0*L0 + P1*L1 + P2*L2) / B "
            "with uniform traffic intensities",
        ),
    )
    fig8.write(out / "fig8.csv")

    for name in ("fig5.csv", "fig6.csv", "fig7.csv", "fig8.csv"):
        print(f"wrote {out / name}")
    return 0


def cmd_validate(cfg: ScenarioConfig, target_events: int | None = None) -> int:
    out = _outdir(cfg)
    target = cfg.sim.target_events if target_events is None else target_events
    sections: list[str] = []
    all_pass = True
    for kind in AccessNetworkKind:
        p = cfg.types[kind]
        header = f"== {kind.name}: lam={p.lam} mu={p.mu} m={p.m} k1={p.k1} k2={p.k2} T={cfg.T}"
        if p.lam <= 0:
            sections.append(f"{header}\nno traffic: nothing to validate")
            continue
        horizon = horizon_for_events(p, target)
        report = run_cell_mc(p, horizon, cfg.T, seed=cfg.seed + int(kind), kind=kind)
        try:
            verdict = validate_against_analytic(report, p, cfg.T)
        except FirstOrderValidityError as exc:
            sections.append(f"{header}\ncomparison refused: {exc}")
            all_pass = False
            continue
        sections.append(f"{header}\n{verdict.format()}")
        if not verdict.passed:
            all_pass = False

    text = "\n\n".join(sections) + "\n"
    report_path = out / "validation_report.txt"
    report_path.write_text(text)
    print(text, end="")
    print(f"wrote {report_path}")
    return 0 if all_pass else 1


def cmd_scenario(cfg: ScenarioConfig, trace: bool = False) -> int:
    out = _outdir(cfg)
    topo = cfg.topology.build()
    scenario = cfg.sim.scenario(window=cfg.T)
    trace_file = None
    if trace:
        trace_file = (out / "trace.csv").open("w")
        trace_file.write("time,kind,src,dst\n")
    try:
        report = run_system_sim(
            topo, cfg.types, scenario, cfg.sim.horizon, cfg.seed, trace=trace_file
        )
    finally:
        if trace_file is not None:
            trace_file.close()

    lines = ["metric,value"]
    for name, count in sorted(report.message_counts.items()):
        lines.append(f"message_count.{name},{count}")
    for kind in AccessNetworkKind:
        stats = report.per_type[kind]
        lines.append(f"arrivals.{kind.name},{stats.arrivals}")
        lines.append(f"departures.{kind.name},{stats.departures}")
        lines.append(f"blocked.{kind.name},{stats.blocked}")
        blocking = stats.blocked / stats.arrivals if stats.arrivals else 0.0
        lines.append(f"blocking_rate.{kind.name},{blocking}")
        lines.append(f"migrations_in.{kind.name},{stats.migrations_in}")
        lines.append(f"migrations_out.{kind.name},{stats.migrations_out}")
    for i, latency in enumerate(report.failover_latencies):
        lines.append(f"failover_latency[{i}],{latency}")
    report_path = out / "scenario_report.csv"
    report_path.write_text("\n".join(lines) + "\n")
    print(f"wrote {report_path}")
    if trace:
        print(f"wrote {out / 'trace.csv'}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdlb",
        description="Semi-distributed load-balancing models and simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario JSON (default: packaged baseline)")
    common.add_argument("--out", help="output directory (default: config output_dir)")
    common.add_argument("--seed", type=int, help="override the config seed")

    sub.add_parser("figures", parents=[common],
                   help="write the four closed-form sweep CSVs")
    pv = sub.add_parser("validate", parents=[common],
                        help="Monte Carlo validation of the closed forms")
    pv.add_argument("--target-events", type=int,
                    help="events per kind (default: config sim.target_events)")
    ps = sub.add_parser("scenario", parents=[common],
                        help="run the full protocol simulation")
    ps.add_argument("--trace", action="store_true", help="write a message trace")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        if args.command == "figures":
            return cmd_figures(cfg)
        if args.command == "validate":
            return cmd_validate(cfg, target_events=args.target_events)
        if args.command == "scenario":
            return cmd_scenario(cfg, trace=args.trace)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
