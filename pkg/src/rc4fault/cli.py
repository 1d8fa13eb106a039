"""Command-line front end.

Exit codes: 0 when a run completes, 3 when the pipeline halted on a detected
fault, 2 for usage errors (bad key, malformed fault spec, unknown checker).
"""

from __future__ import annotations

import sys

import click

from . import evaluator
from .core import RejectedKeyError, SecretKey
from .faults import FaultSpecError, arm, parse_fault_spec, read_fault_file
from .pipeline import RunState, run, write_trace_csv
from .verdict import CHECKERS

EXIT_DONE = 0
EXIT_USAGE = 2
EXIT_HALTED = 3

EXAMPLES = """
Examples:
  rc4fault keystream --key 0102030405 --bytes 16
  rc4fault inject --key 0102030405 --bytes 16 --fault sbox:5:01:10:falling --trace-out trace.csv
  rc4fault report --checker addition --format csv
"""


def _parse_key(ctx, param, value):
    try:
        return SecretKey.from_hex(value)
    except RejectedKeyError as exc:
        raise click.BadParameter(str(exc)) from exc


def _parse_faults(ctx, param, values):
    try:
        return [parse_fault_spec(v) for v in values]
    except FaultSpecError as exc:
        raise click.BadParameter(str(exc)) from exc


key_option = click.option("--key", required=True, callback=_parse_key, help="Secret key as hex, 5..16 bytes.")
bytes_option = click.option("--bytes", "n_bytes", type=click.IntRange(min=0), default=16, show_default=True,
                            help="Keystream bytes to generate.")
no_checkers_option = click.option("--no-checkers", is_flag=True,
                                  help="Disable all checkers (throughput probe mode).")


@click.group(epilog=EXAMPLES)
def main() -> None:
    """Fault-detecting RC4 datapath model."""


@main.command()
@key_option
@bytes_option
@no_checkers_option
@click.option("--cycles", "show_cycles", is_flag=True, help="Print the clock-cycle count to stderr.")
def keystream(key, n_bytes, no_checkers, show_cycles):
    """Print the keystream as lowercase hex."""
    result = run(key, n_bytes, checkers=not no_checkers)
    click.echo(result.keystream.hex())
    if show_cycles:
        click.echo(f"cycles={result.cycles} prga_cycles={result.prga_cycles}", err=True)


@main.command()
@key_option
@bytes_option
@no_checkers_option
@click.option("--fault", "faults", multiple=True, callback=_parse_faults, metavar="TARGET:INDEX:MASK:CYCLE:EDGE",
              help="Fault to inject; repeatable. Targets: sbox, sbox_crc, j, i, adder, counter_slot.")
@click.option("--fault-file", type=click.Path(exists=True, dir_okay=False),
              help="Plain-text fault list, one spec per line, '#' comments.")
@click.option("--trace-out", type=click.File("w"), help="Write the per-half-cycle trace as CSV.")
def inject(key, n_bytes, no_checkers, faults, fault_file, trace_out):
    """Run with injected faults and report whether the checkers stopped it."""
    specs = list(faults)
    if fault_file:
        try:
            specs.extend(read_fault_file(fault_file))
        except FaultSpecError as exc:
            raise click.BadParameter(str(exc), param_hint="--fault-file") from exc
    result = run(key, n_bytes, arm(specs), checkers=not no_checkers, trace=trace_out is not None)
    if trace_out is not None:
        write_trace_csv(result.trace, trace_out)
    status = result.status
    click.echo(f"keystream={result.keystream.hex()}")
    click.echo(f"status={status.state.name}")
    click.echo(f"cycles={result.cycles}")
    for entry in result.log:
        pre = "-" if entry.pre is None else f"{entry.pre:#x}"
        post = "-" if entry.post is None else f"{entry.post:#x}"
        note = f" ({entry.note})" if entry.note else ""
        click.echo(f"fault {entry.spec} {pre}->{post}{note}")
    if status.state is RunState.HALTED:
        click.echo(f"halted_at={status.halted_at.cycle}:{status.halted_at.edge}")
        click.echo(f"offending={','.join(status.offending)}")
        for detail in status.details:
            click.echo(f"detail={detail}")
        sys.exit(EXIT_HALTED)


@main.command()
@click.option("--checker", type=click.Choice(CHECKERS + ("all",)), default="all", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="text", show_default=True)
@click.option("--output", type=click.File("w"), default="-", help="Output path (default stdout).")
def report(checker, fmt, output):
    """Exhaustive detection-efficiency tables with published-value deltas."""
    names = CHECKERS if checker == "all" else (checker,)
    reports = evaluator.evaluate(names)
    render = {"json": evaluator.to_json, "csv": evaluator.to_csv, "text": evaluator.to_text}[fmt]
    output.write(render(reports))


if __name__ == "__main__":
    main()
