"""Command-line pipeline: ingest, sample, extract, downgrade, verify, mc.

Exit codes: 0 ok, 1 usage, 2 input format, 3 internal invariant violation.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import bounds as bounds_mod
from .errors import HypermomentsError, InvariantViolation, ParseError, FormatError, UnsupportedInputError
from .features import FeatureSchema, extract_features_many, downgrade, write_features
from .hypercore import (
    Hypergraph,
    canonical_text,
    parse_benson,
    parse_hyperedges,
    split_layers,
)
from .sampler import SampleSpec, derive_seed, induced_subgraph, rw_sample
from .spectra import mc_return, moments_trace
from .swalk import ExpansionMode, expand

log = logging.getLogger("hypermoments")


def _load_graph(path: str) -> Hypergraph:
    """Auto-detect input format: three-file prefix or hyperedge-list text."""
    p = Path(path)
    nverts = Path(str(p) + "-nverts.txt")
    if nverts.exists():
        simplices = Path(str(p) + "-simplices.txt")
        if not simplices.exists():
            raise FormatError(f"found {nverts} but no {simplices}")
        times = Path(str(p) + "-times.txt")
        with open(nverts) as f1, open(simplices) as f2:
            if times.exists():
                with open(times) as f3:
                    hg, _ = parse_benson(f1, f2, f3)
            else:
                hg, _ = parse_benson(f1, f2)
        return hg
    if p.is_dir():
        raise click.UsageError(f"{path} is a directory; pass a file or a three-file prefix")
    if not p.exists():
        raise click.UsageError(f"no such input: {path}")
    with open(p) as fh:
        return parse_hyperedges(fh)


def _collect_inputs(inputs: tuple[str, ...]) -> list[tuple[str, Path]]:
    """Expand files/directories into (graph_id, path) pairs, sorted by id."""
    found: list[tuple[str, Path]] = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            for child in sorted(p.glob("*.txt")):
                if child.name.endswith(("-nverts.txt", "-simplices.txt", "-times.txt")):
                    continue
                if child.name == "manifest.json":
                    continue
                found.append((child.stem, child))
        else:
            found.append((p.stem, p))
    if not found:
        raise click.UsageError("no input graphs found")
    return sorted(found)


@click.group()
@click.option("--seed", type=int, default=0, show_default=True, help="Default seed for seeded subcommands.")
@click.option("--threads", type=int, default=1, show_default=True, help="Worker processes for per-graph work.")
@click.option("--log-level", default="warning", show_default=True,
              type=click.Choice(["debug", "info", "warning", "error"]))
@click.pass_context
def cli(ctx, seed, threads, log_level):
    """Spectral-moment representations of higher-order networks."""
    logging.basicConfig(level=getattr(logging, log_level.upper()), format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"seed": seed, "threads": threads}


@cli.command()
@click.argument("input_path")
@click.option("--out", type=click.Path(), default=None, help="Write canonical hyperedge-list text here.")
@click.option("--rmax", type=int, default=5, show_default=True)
def ingest(input_path, out, rmax):
    """Validate an input corpus and print its summary as JSON."""
    hg = _load_graph(input_path)
    split = split_layers(hg, rmax)
    summary = {
        "vertices": hg.n_vertices,
        "unique_edges": hg.n_edges,
        "max_order": hg.max_order(),
        "mean_order": round(hg.mean_order(), 4),
        "layers": {lay.r: lay.n_edges for lay in split.layers},
        "excluded_order1": split.excluded_low,
        "excluded_above_rmax": split.excluded_high,
    }
    if out:
        Path(out).write_text(canonical_text(hg))
        summary["canonical_out"] = str(out)
    click.echo(json.dumps(summary))


@cli.command()
@click.argument("input_path")
@click.option("--size-min", type=int, required=True)
@click.option("--size-max", type=int, required=True)
@click.option("--count", type=int, required=True)
@click.option("--seed", type=int, default=None, help="Overrides the global --seed.")
@click.option("--restart-probability", type=float, default=0.0, show_default=True)
@click.option("--output-dir", type=click.Path(), required=True)
@click.pass_context
def sample(ctx, input_path, size_min, size_max, count, seed, restart_probability, output_dir):
    """Random-walk sample COUNT induced subgraphs, one file each plus a manifest."""
    if size_min < 1 or size_max < size_min:
        raise click.UsageError("need 1 <= size-min <= size-max")
    base_seed = seed if seed is not None else ctx.obj["seed"]
    hg = _load_graph(input_path)
    if hg.n_edges == 0:
        raise UnsupportedInputError("cannot sample an edgeless hypergraph")
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    entries = []
    width = max(4, len(str(count - 1)))
    for i in range(count):
        rng = np.random.default_rng(derive_seed(base_seed, i))
        size = int(rng.integers(size_min, size_max + 1))
        size = min(size, hg.n_vertices)
        spec = SampleSpec(target_size=size, seed=int(rng.integers(2**63)),
                          restart_probability=restart_probability)
        result = rw_sample(hg, spec)
        sub, _parents = induced_subgraph(hg, result.nodes)
        name = f"sample_{i:0{width}d}.txt"
        (outdir / name).write_text(canonical_text(sub))
        entries.append({
            "file": name,
            "requested_size": size,
            "nodes": sub.n_vertices,
            "edges": sub.n_edges,
            "complete": result.complete,
        })
    manifest = {
        "source": str(input_path),
        "seed": base_seed,
        "count": count,
        "size_range": [size_min, size_max],
        "restart_probability": restart_probability,
        "samples": entries,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=1))
    click.echo(json.dumps({"written": count, "output_dir": str(outdir)}))


def _parse_moments(spec: str) -> tuple[int, ...]:
    spec = spec.strip()
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(sorted({int(tok) for tok in spec.replace(",", " ").split()}))


@cli.command()
@click.argument("inputs", nargs=-1, required=True)
@click.option("--rmax", type=int, default=5, show_default=True)
@click.option("--moments", default="2:4", show_default=True,
              help="Moment orders, e.g. '2:4' or '2,3,5'.")
@click.option("--mode", default="auto", show_default=True,
              type=click.Choice(["auto", "ordered", "set_quotient"]))
@click.option("--label", default=None, help="Class label written for every row.")
@click.option("--out", type=click.Path(), required=True)
@click.pass_context
def extract(ctx, inputs, rmax, moments, mode, label, out):
    """Extract moment feature vectors from graphs (files or directories) to CSV."""
    orders = _parse_moments(moments)
    schema = FeatureSchema(r_max=rmax, moment_orders=orders)
    items = []
    for gid, path in _collect_inputs(inputs):
        with open(path) as fh:
            items.append((gid, parse_hyperedges(fh), label))
    vectors = extract_features_many(items, schema, mode=mode, workers=ctx.obj["threads"])
    write_features(vectors, out)
    click.echo(json.dumps({"graphs": len(vectors), "columns": 2 + schema.dimension + len(schema.pairs()), "out": str(out)}))


@cli.command("downgrade")
@click.argument("input_path")
@click.option("--out", type=click.Path(), required=True)
def downgrade_cmd(input_path, out):
    """Replace every hyperedge by all its 2-subsets; write a dyadic edge list."""
    hg = _load_graph(input_path)
    pairs = downgrade(hg)
    lines = sorted((hg.labels[u], hg.labels[v]) for u, v in pairs)
    text = "".join(f"{min(a, b)} {max(a, b)}\n" for a, b in lines)
    Path(out).write_text(text)
    click.echo(json.dumps({"dyadic_edges": len(pairs), "out": str(out)}))


@cli.command()
@click.argument("inputs", nargs=-1, required=True)
@click.option("--rmax", type=int, default=5, show_default=True)
@click.option("--out", type=click.Path(), required=True, help="JSON report array.")
@click.option("--csv", "csv_out", type=click.Path(), default=None,
              help="Optional CSV of (m2, rhs_eq5, m3, rhs_eq8, rhs_eq9) rows.")
@click.option("--calibrate/--no-calibrate", default=True, show_default=True,
              help="Embed the THM2 convention calibration in the output.")
def verify(inputs, rmax, out, csv_out, calibrate):
    """Bound-quality reports for every (graph, r, s<=r/2) with signed slacks."""
    reports = []
    for gid, path in _collect_inputs(inputs):
        with open(path) as fh:
            hg = parse_hyperedges(fh)
        split = split_layers(hg, rmax)
        for layer in split.layers:
            for s in range(1, layer.r // 2 + 1):
                reports.append(bounds_mod.bound_report(layer, s, graph_id=gid))
    envelope = {
        "convention": bounds_mod.EXPECTATION_CONVENTION,
        "thm2_calibration": bounds_mod.calibrate_thm2().as_dict() if calibrate else None,
        "reports": [r.as_dict() for r in reports],
    }
    Path(out).write_text(json.dumps(envelope, indent=1))
    if csv_out:
        rows = ["graph_id,r,s,m2,rhs_eq5,m3,rhs_eq8,rhs_eq9"]
        for r in reports:
            if r.empty_layer:
                continue
            rows.append(",".join([
                str(r.graph_id), str(r.r), str(r.s),
                *(format(x, ".12g") for x in (r.m2, r.rhs_eq5, r.m3, r.rhs_eq8, r.rhs_eq9)),
            ]))
        Path(csv_out).write_text("\n".join(rows) + "\n")
    click.echo(json.dumps({"reports": len(reports), "out": str(out)}))


@cli.command()
@click.argument("input_path")
@click.option("--r", "order", type=int, required=True)
@click.option("--s", "overlap", type=int, required=True)
@click.option("--length", type=int, default=2, show_default=True)
@click.option("--walks", type=int, default=100000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--mode", default="auto", show_default=True,
              type=click.Choice(["auto", "ordered", "set_quotient"]))
@click.pass_context
def mc(ctx, input_path, order, overlap, length, walks, seed, mode):
    """Monte-Carlo return probability on the (r, s) expansion of a graph."""
    base_seed = seed if seed is not None else ctx.obj["seed"]
    hg = _load_graph(input_path)
    split = split_layers(hg, max(order, 2))
    layer = split.layer(order)
    if layer.n_edges == 0:
        raise UnsupportedInputError(f"layer r={order} is empty")
    if mode == "ordered":
        chosen = ExpansionMode.ORDERED
    elif mode == "set_quotient":
        chosen = ExpansionMode.SET_QUOTIENT
    else:
        chosen = ExpansionMode.SET_QUOTIENT if 2 * overlap <= order else ExpansionMode.ORDERED
    graph = expand(layer, overlap, chosen)
    estimate, stderr = mc_return(graph, length, walks, base_seed)
    reference = moments_trace(graph, length)
    click.echo(json.dumps({
        "r": order, "s": overlap, "mode": graph.mode, "length": length,
        "walks": walks, "estimate": estimate, "stderr": stderr,
        "raw_moment": reference[length] / graph.moment_scale,
        "canonical_moment": reference[length],
    }))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except (ParseError, FormatError, UnsupportedInputError) as exc:
        click.echo(f"input error: {exc}", err=True)
        return 2
    except InvariantViolation as exc:
        click.echo(f"invariant violation: {exc}", err=True)
        return 3
    except ValueError as exc:
        click.echo(f"usage error: {exc}", err=True)
        return 1
    except HypermomentsError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
