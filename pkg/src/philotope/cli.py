"""Command-line pipeline.

Each stage of the style-comparison procedure is a subcommand writing a
checkpoint file, so the expensive steps (embedding training, trials) can
be reused and the whole experiment is resumable:

    fetch-corpus -> preprocess -> run        (the full experiment)
    synthetic -> diagram -> bottleneck       (engine validation)

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from . import __version__
from .config import ConfigError, build_config
from .corpus import (CorpusError, balance, load_corpus, load_processed,
                     load_stopwords, preprocess, save_processed)
from .distance import BottleneckError, bottleneck
from .embedding import (EmbeddingError, load_cloud, save_cloud,
                        save_embedding, train_skipgram)
from .stats import (StatsError, analysis_payload, format_p, load_trials_csv,
                    run_trials, save_trials_csv)
from .synthetic import SHAPES, synthetic_cloud
from .tda import (TdaError, distance_matrix, h0_single_linkage, load_diagrams,
                  persistence_diagram, reduce_filtration, save_diagrams,
                  vietoris_rips)

_DATA_ERRORS = (CorpusError, TdaError, BottleneckError, EmbeddingError,
                StatsError, ConfigError, FileNotFoundError, OSError,
                ValueError)


def _config_options(fn):
    opts = [
        click.option("--config", "config_file", type=click.Path(exists=True),
                     default=None, help="key = value config file"),
        click.option("--corpus-root", default=None),
        click.option("--poets", default=None,
                     help="comma-separated poet ids"),
        click.option("--sonnets-per-poet", type=int, default=None),
        click.option("--dim", type=int, default=None),
        click.option("--epochs", type=int, default=None),
        click.option("--window", type=int, default=None),
        click.option("--negatives", type=int, default=None),
        click.option("--lr-start", type=float, default=None),
        click.option("--lr-min", type=float, default=None),
        click.option("--metric", type=click.Choice(["cosine", "euclidean"]),
                     default=None),
        click.option("--trials", type=int, default=None),
        click.option("--seed", "base_seed", type=int, default=None),
        click.option("--workers", type=int, default=None),
        click.option("--output-dir", default=None),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _build_cfg(config_file, poets, **kw):
    if poets is not None:
        poets = tuple(p.strip() for p in poets.split(",") if p.strip())
    return build_config(config_file, poets=poets, **kw)


@click.group()
@click.version_option(__version__, prog_name="philotope")
def cli():
    """Topological comparison of literary styles."""


@cli.command("fetch-corpus")
@click.option("--url", default="https://github.com/bncolorado/"
              "CorpusSonetosSigloDeOro/archive/refs/heads/master.zip",
              show_default=True)
@click.option("--dest", default="corpus", show_default=True)
@click.option("--poets", default="quevedo,lope,gongora", show_default=True)
def cmd_fetch_corpus(url, dest, poets):
    """Download the public sonnet dataset into the expected layout.

    Requires network access; path-based ingestion (an existing
    <root>/<poet>/*.txt tree) is the primary path.
    """
    from .fetch import fetch_corpus
    poet_list = [p.strip() for p in poets.split(",") if p.strip()]
    counts = fetch_corpus(url, Path(dest), poet_list)
    for poet, n in counts.items():
        click.echo(f"{poet}: {n} sonnets")


@cli.command("preprocess")
@_config_options
@click.option("--out", default=None, help="output JSON checkpoint")
@click.option("--stopwords", "stopwords_path", type=click.Path(exists=True),
              default=None, help="alternative stop-word file")
@click.option("--force", is_flag=True, help="overwrite an existing checkpoint")
def cmd_preprocess(config_file, poets, out, stopwords_path, force, **kw):
    """Load, balance, and preprocess the corpus; write a JSON checkpoint."""
    cfg = _build_cfg(config_file, poets, **kw)
    out = Path(out) if out else Path(cfg.output_dir) / "processed.json"
    if out.exists() and not force:
        raise click.UsageError(f"{out} exists; pass --force to overwrite")
    corpus = load_corpus(cfg.corpus_root, list(cfg.poets))
    corpus = balance(corpus, cfg.sonnets_per_poet)
    processed = preprocess(corpus, load_stopwords(stopwords_path))
    out.parent.mkdir(parents=True, exist_ok=True)
    save_processed(processed, out)
    total = sum(len(s) for s in processed.sonnets.values())
    click.echo(f"wrote {out} ({total} sonnets, "
               f"{len(set(processed.tokens()))} distinct stems)")


@cli.command("embed")
@_config_options
@click.option("--processed", "processed_path", required=True,
              type=click.Path(exists=True))
@click.option("--out", default=None, help="embedding checkpoint path")
def cmd_embed(config_file, poets, processed_path, out, **kw):
    """Train the skipgram embedding from a processed-corpus checkpoint."""
    cfg = _build_cfg(config_file, poets, **kw)
    corpus = load_processed(processed_path)
    emb = train_skipgram(
        corpus, dim=cfg.dim, epochs=cfg.epochs, window=cfg.window,
        negatives=cfg.negatives, lr=(cfg.lr_start, cfg.lr_min),
        seed=cfg.base_seed)
    out = Path(out) if out else Path(cfg.output_dir) / "embedding.bin"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_embedding(emb, out)
    click.echo(f"wrote {out} ({len(emb.vocab)} words, dim {emb.dim}, "
               f"kernel {emb.meta['kernel']})")


@cli.command("synthetic")
@click.argument("shape", type=click.Choice(SHAPES))
@click.option("--n", default=100, show_default=True)
@click.option("--noise", default=0.1, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default="cloud.txt", show_default=True)
def cmd_synthetic(shape, n, noise, seed, out):
    """Sample a synthetic point cloud and write it to a cloud file."""
    cloud = synthetic_cloud(shape, n, noise=noise, seed=seed)
    save_cloud(cloud, out, provenance={
        "shape": shape, "n": n, "noise": noise, "seed": seed})
    click.echo(f"wrote {out} ({len(cloud)} points)")


@cli.command("diagram")
@click.argument("cloud_file", type=click.Path(exists=True))
@click.option("--metric", type=click.Choice(["cosine", "euclidean"]),
              default="euclidean", show_default=True)
@click.option("--dim", "max_dim", default=0, show_default=True,
              help="largest homology dimension to compute")
@click.option("--max-value", type=float, default=None,
              help="filtration cutoff (required sensibly for dim >= 1; "
              "defaults to the largest pairwise distance)")
@click.option("--out", default="diagram.txt", show_default=True)
def cmd_diagram(cloud_file, metric, max_dim, max_value, out):
    """Compute persistence diagrams of a point cloud file."""
    cloud = load_cloud(cloud_file)
    dm = distance_matrix(cloud, metric)
    diagrams = []
    if max_dim == 0:
        diagrams.append(h0_single_linkage(dm))
    else:
        cutoff = max_value if max_value is not None else float(dm.max())
        filtration = vietoris_rips(dm, max_dim + 1, cutoff)
        pairing = reduce_filtration(filtration, clearing=True)
        for d in range(max_dim + 1):
            diagrams.append(persistence_diagram(filtration, pairing, d))
    save_diagrams(diagrams, out, provenance={
        "source": cloud_file, "metric": metric, "max_dim": max_dim,
        "max_value": max_value if max_value is not None else "inf"})
    click.echo(f"wrote {out}")


@cli.command("bottleneck")
@click.argument("diagram_a", type=click.Path(exists=True))
@click.argument("diagram_b", type=click.Path(exists=True))
@click.option("--dim", default=0, show_default=True)
def cmd_bottleneck(diagram_a, diagram_b, dim):
    """Exact bottleneck distance between two diagram files."""
    dgms_a = load_diagrams(diagram_a)
    dgms_b = load_diagrams(diagram_b)
    for name, dgms in ((diagram_a, dgms_a), (diagram_b, dgms_b)):
        if dim not in dgms:
            raise TdaError(f"{name} has no dimension-{dim} points")
    value = bottleneck(dgms_a[dim], dgms_b[dim])
    click.echo(f"{value:.12g}")


@cli.command("run")
@_config_options
@click.option("--processed", "processed_path", default=None,
              type=click.Path(exists=True),
              help="processed-corpus checkpoint (default: "
              "<output-dir>/processed.json)")
def cmd_run(config_file, poets, processed_path, **kw):
    """Run the repeated experiment: trials.csv, anova.json, boxplot.svg."""
    cfg = _build_cfg(config_file, poets, **kw)
    outdir = Path(cfg.output_dir)
    processed_path = Path(processed_path) if processed_path \
        else outdir / "processed.json"
    if not processed_path.exists():
        raise CorpusError(
            f"processed corpus not found: {processed_path} (run "
            "'philotope preprocess' first)")
    corpus = load_processed(processed_path)
    results = run_trials(corpus, cfg)
    outdir.mkdir(parents=True, exist_ok=True)
    save_trials_csv(results, outdir / "trials.csv")
    payload = analysis_payload(results)
    (outdir / "anova.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    from .plotting import render_boxplot
    render_boxplot(results, outdir / "boxplot.svg")
    _echo_analysis(payload)
    click.echo(f"wrote {outdir}/trials.csv, anova.json, boxplot.svg")


@cli.command("stats")
@click.argument("trials_csv", type=click.Path(exists=True))
@click.option("--out", default=None, help="write anova.json here")
def cmd_stats(trials_csv, out):
    """Recompute the statistical analysis from a trials.csv file."""
    results = load_trials_csv(trials_csv)
    payload = analysis_payload(results)
    if out:
        Path(out).write_text(json.dumps(payload, indent=2, sort_keys=True),
                             encoding="utf-8")
    _echo_analysis(payload)


@cli.command("plot")
@click.argument("trials_csv", type=click.Path(exists=True))
@click.option("--out", default="boxplot.svg", show_default=True)
def cmd_plot(trials_csv, out):
    """Render the box plot from a trials.csv file."""
    from .plotting import render_boxplot
    results = load_trials_csv(trials_csv)
    render_boxplot(results, out)
    click.echo(f"wrote {out}")


def _echo_analysis(payload: dict) -> None:
    anova = payload["anova"]
    click.echo(f"epsilon GG={anova['epsilon']['greenhouse_geisser']:.3f} "
               f"HF={anova['epsilon']['huynh_feldt']:.3f}")
    for row in anova["rows"]:
        f = row["f"]
        f_txt = "inf" if math.isinf(f) else f"{f:.2f}"
        click.echo(f"{row['correction']:>19}: F={f_txt} "
                   f"df=({row['df_factor']:.3f}, {row['df_residual']:.3f}) "
                   f"p={format_p(row['p'])}")
    for comp in payload["pairwise"]:
        a, b = comp["pair"]
        lo, hi = comp["ci95"]
        click.echo(f"{a} vs {b}: diff={comp['mean_difference']:+.4g} "
                   f"p={format_p(comp['p_bonferroni'])} "
                   f"ci95=[{lo:.4g}, {hi:.4g}]")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 2
    except _DATA_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except Exception as exc:  # internal error
        click.echo(f"internal error: {exc!r}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
