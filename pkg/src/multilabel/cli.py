"""Command line front end: one subcommand per solver plus the service."""

from __future__ import annotations

import json
import random

import click

from . import report
from .complexes import (
    cross_polytope_sphere,
    edgewise_sphere,
    kuhn_triangulation,
    load_triangulation,
    save_triangulation,
)
from .fairdiv import (
    CakeSource,
    LinearWageUtility,
    RentSource,
    WageProblem,
    cake_divide,
    rent_divide,
    worker_wages,
)
from .fan import (
    Z2Complex,
    fan_search,
    multifan_dual,
    multilabeled_fan,
    sphere_complex,
)
from .halving import consensus_halving
from .homgraph import Graph, colorful_bipartite
from .labelings import (
    labeling_from_json,
    labeling_to_json,
    random_fan,
    random_sperner,
)
from .measures import valuation_from_json
from .multisperner import (
    bapat_signed_count,
    oriented_sperner_count,
    solve_distinct_labels,
    solve_popular_labels,
)
from .rational import frac


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _emit(doc) -> None:
    click.echo(json.dumps(doc, sort_keys=True, indent=2))


def _load_labelings(paths) -> list:
    return [labeling_from_json(_load_json(p)) for p in paths]


def _complex_from_file(path: str, index: int | None) -> Z2Complex:
    t = load_triangulation(path)
    if t.involution is None:
        raise click.ClickException("triangulation has no involution")
    k = sphere_complex(t)
    if index is not None:
        k = Z2Complex(
            maximal_simplices=k.maximal_simplices,
            involution=k.involution,
            declared_index=index,
            dim=k.dim,
            triangulation=t,
        )
    return k


@click.group()
def main():
    """Exact multilabeled simplex and sphere solvers."""


# ---------------------------------------------------------------------------
# triangulation helpers


@main.group()
def tri():
    """Generate triangulation files."""


@tri.command("kuhn")
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("-o", "--out", type=click.Path(), required=True)
def tri_kuhn(n, k, out):
    save_triangulation(kuhn_triangulation(n, k), out)
    click.echo(out)


@tri.command("sphere")
@click.option("--n", type=int, required=True)
@click.option("--r", type=int, default=0, help="barycentric subdivision rounds")
@click.option("--edgewise", type=int, default=0, help="edgewise resolution instead")
@click.option("-o", "--out", type=click.Path(), required=True)
def tri_sphere(n, r, edgewise, out):
    t = edgewise_sphere(n, edgewise) if edgewise else cross_polytope_sphere(n, r)
    save_triangulation(t, out)
    click.echo(out)


@main.group()
def lab():
    """Generate labeling files."""


@lab.command("random")
@click.option("--tri", "tri_path", type=click.Path(exists=True), required=True)
@click.option("--kind", type=click.Choice(["sperner", "fan"]), required=True)
@click.option("--seed", type=int, default=0)
@click.option("--bound", type=int, default=None, help="fan label bound")
@click.option("-o", "--out", type=click.Path(), required=True)
def lab_random(tri_path, kind, seed, bound, out):
    t = load_triangulation(tri_path)
    rng = random.Random(seed)
    labx = (
        random_sperner(t, rng) if kind == "sperner" else random_fan(t, rng, bound)
    )
    with open(out, "w") as fh:
        json.dump(labeling_to_json(labx), fh)
    click.echo(out)


# ---------------------------------------------------------------------------
# degree-prescribed searches and signed counts


@main.group()
def sperner():
    """Degree-prescribed simplex searches and signed counts."""


@sperner.command("solve")
@click.option("--mode", type=click.Choice(["labels", "labelings"]), required=True)
@click.option("--k", "k_text", default=None, help="labels mode: counts per labeling")
@click.option("--l", "l_text", default=None, help="labelings mode: counts per label")
@click.option("--tri", "tri_path", type=click.Path(exists=True), required=True)
@click.option("--lab", "lab_paths", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--report", "report_dir", type=click.Path(), default=None)
def sperner_solve(mode, k_text, l_text, tri_path, lab_paths, report_dir):
    """Find a simplex meeting per-labeling or per-label count prescriptions."""
    t = load_triangulation(tri_path)
    labs = _load_labelings(lab_paths)
    if mode == "labels":
        if not k_text:
            raise click.ClickException("labels mode needs --k")
        sigma, label_sets, cert = solve_distinct_labels(t, labs, _ints(k_text))
        doc = {
            "simplex": list(sigma),
            "label_sets": [sorted(s) for s in label_sets],
            "certificate": cert.to_json(),
        }
    else:
        if not l_text:
            raise click.ClickException("labelings mode needs --l")
        sigma, counts, cert = solve_popular_labels(t, labs, _ints(l_text))
        doc = {
            "simplex": list(sigma),
            "label_counts": {str(j): c for j, c in sorted(counts.items())},
            "certificate": cert.to_json(),
        }
    if report_dir:
        doc["report"] = report.render_labeled_triangle(t, labs, cert, report_dir)
    _emit(doc)


@sperner.command("count")
@click.option("--bapat", "which", flag_value="bapat")
@click.option("--oriented", "which", flag_value="oriented", default=True)
@click.option("--tri", "tri_path", type=click.Path(exists=True), required=True)
@click.option("--lab", "lab_paths", type=click.Path(exists=True), multiple=True, required=True)
def sperner_count(which, tri_path, lab_paths):
    """Signed counts of fully-labeled or pair-distinct simplices."""
    t = load_triangulation(tri_path)
    labs = _load_labelings(lab_paths)
    if which == "bapat":
        count = bapat_signed_count(t, labs)
    else:
        if len(labs) != 1:
            raise click.ClickException("oriented count takes one labeling")
        count = oriented_sperner_count(t, labs[0])
    _emit(
        {
            "positive": count.positive,
            "negative": count.negative,
            "difference": count.difference,
        }
    )


# ---------------------------------------------------------------------------
# fair division


@main.command()
@click.option("--mode", type=click.Choice(["envyfree", "secretive", "survivor"]), default="envyfree")
@click.option("--players", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--p", type=int, default=None)
@click.option("--q", type=int, default=None)
@click.option("--eps", default="1/1000000")
@click.option("--report", "report_dir", type=click.Path(), default=None)
def cake(mode, players, p, q, eps, report_dir):
    """Cut the interval so a whole removal-scenario family is envy-free."""
    sources = [CakeSource(valuation_from_json(_load_json(f))) for f in players]
    out = cake_divide(sources, mode=mode, p=p, q=q, eps=frac(eps))
    doc = out.to_json()
    if report_dir:
        doc["report"] = report.render_division(out, report_dir)
    _emit(doc)


@main.command()
@click.option("--players", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--total-rent", default="1")
@click.option("--eps", default="1/1000000")
@click.option("--report", "report_dir", type=click.Path(), default=None)
def rent(players, total_rent, eps, report_dir):
    """Price the rooms so any roommate's exit leaves everyone envy-free."""
    sources = [RentSource(_load_json(f)["values"]) for f in players]
    out = rent_divide(sources, frac(total_rent), eps=frac(eps))
    doc = out.to_json()
    if report_dir:
        doc["report"] = report.render_division(out, report_dir)
    _emit(doc)


@main.command()
@click.option("--workers", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--quotas", required=True)
@click.option("--budget", required=True)
@click.option("--eps", default="1/1000000")
@click.option("--report", "report_dir", type=click.Path(), default=None)
def wages(workers, quotas, budget, eps, report_dir):
    """Set factory wages meeting quotas exactly with no worker regret."""
    utilities = tuple(
        LinearWageUtility(tuple(frac(w) for w in _load_json(f)["weights"]))
        for f in workers
    )
    prob = WageProblem(
        utilities=utilities, quotas=tuple(_ints(quotas)), budget=frac(budget)
    )
    out = worker_wages(prob, eps=frac(eps))
    doc = out.to_json()
    if report_dir:
        doc["report"] = report.render_wages(out, prob.quotas, report_dir)
    _emit(doc)


# ---------------------------------------------------------------------------
# signed labelings


@main.group()
def fan():
    """Alternating-simplex searches on involutive complexes."""


@fan.command("search")
@click.option("--tri", "tri_path", type=click.Path(exists=True), required=True)
@click.option("--lab", "lab_path", type=click.Path(exists=True), required=True)
@click.option("--d", type=int, default=None)
@click.option("--index", type=int, default=None)
@click.option("--sign", type=click.Choice(["-1", "1"]), default="-1")
def fan_search_cmd(tri_path, lab_path, d, index, sign):
    """Exhaustive alternating-simplex search."""
    k = _complex_from_file(tri_path, index)
    labx = labeling_from_json(_load_json(lab_path))
    simplex = fan_search(k, labx, d=d, sign=int(sign))
    _emit({"simplex": list(simplex), "labels": [labx.values[v] for v in simplex]})


@fan.command("multi")
@click.option("--tri", "tri_path", type=click.Path(exists=True), required=True)
@click.option("--lab", "lab_paths", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--d", "d_text", required=True)
@click.option("--index", type=int, default=None)
def fan_multi(tri_path, lab_paths, d_text, index):
    """One alternating face per labeling on a common simplex."""
    k = _complex_from_file(tri_path, index)
    labs = _load_labelings(lab_paths)
    out = multilabeled_fan(k, labs, _ints(d_text))
    _emit(
        {
            "simplex": list(out.simplex),
            "alternating_faces": [list(f) for f in out.alternating_faces],
            "chain": [list(f) for f in out.chain.chain],
            "mu": list(out.chain.mu_values),
        }
    )


@fan.command("dual")
@click.option("--tri", "tri_path", type=click.Path(exists=True), required=True)
@click.option("--lab", "lab_paths", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--l", "l_text", required=True)
@click.option("--index", type=int, default=None)
def fan_dual(tri_path, lab_paths, l_text, index):
    """Prescribed label popularity with alternating label numbers."""
    k = _complex_from_file(tri_path, index)
    labs = _load_labelings(lab_paths)
    out = multifan_dual(k, labs, _ints(l_text))
    _emit(
        {
            "simplex": list(out.simplex),
            "label_numbers": list(out.js),
            "labeling_indices": list(out.is_),
            "vertices": list(out.vertices),
        }
    )


@main.command()
@click.option("--collections", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--n", type=int, required=True)
@click.option("--k", "k_text", required=True)
@click.option("--eps", default="1/10000")
@click.option("--report", "report_dir", type=click.Path(), default=None)
def halving(collections, n, k_text, eps, report_dir):
    """Split the interval with a verdict for every measure collection."""
    families = [
        [valuation_from_json(v) for v in _load_json(f)["measures"]]
        for f in collections
    ]
    out = consensus_halving(families, n=n, ks=_ints(k_text), eps=frac(eps))
    doc = out.to_json()
    if report_dir:
        doc["report"] = report.render_split(out, report_dir)
    _emit(doc)


@main.group()
def graph():
    """Colorful subgraph extraction."""


@graph.command("colorful")
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@click.option("--colorings", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--d", "d_text", required=True)
@click.option("--index", type=int, default=None)
def graph_colorful(graph_path, colorings, d_text, index):
    """Colorful complete bipartite subgraphs, one per proper coloring."""
    g = Graph.from_json(_load_json(graph_path))
    cs = []
    for f in colorings:
        doc = _load_json(f)
        colors = doc["colors"] if isinstance(doc, dict) else doc
        cs.append({v: int(c) for v, c in enumerate(colors)})
    witnesses = colorful_bipartite(g, cs, _ints(d_text), declared_index=index)
    _emit(
        [
            {
                "left": list(w.left),
                "right": list(w.right),
                "inside": [list(w.inside[0]), list(w.inside[1])],
                "shape": list(w.shape),
            }
            for w in witnesses
        ]
    )


@main.command()
@click.option("--port", type=int, default=None)
@click.option("--store-dir", type=click.Path(), default=None)
@click.option("--webui-dir", type=click.Path(), default=None)
def serve(port, store_dir, webui_dir):
    """Run the interactive session service (env: PORT, STORE_DIR, WEBUI_DIR)."""
    import os

    import uvicorn

    from .service import create_app

    app = create_app(store_dir, webui_dir)
    uvicorn.run(app, host="0.0.0.0", port=port or int(os.environ.get("PORT", 8000)))


if __name__ == "__main__":
    main()
