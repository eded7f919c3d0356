"""
Command handlers for the graphlim CLI.

Maps subcommands to library calls and writes their reports. Library errors
become a JSON error object on stderr and the exit code of the exception.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from ..constants import (
    ANNEAL_SWEEPS,
    DEFAULT_ALIGNMENT_BUDGET,
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_K_MAX,
    DEFAULT_RESTARTS,
    DEFAULT_SEARCH_BUDGET,
    FAMILY_CLIQUE,
    FAMILY_ER,
    FAMILY_SBM,
    FAMILY_W_RANDOM,
    METHOD_ANNEAL,
    METHOD_EXACT,
    PARTITIONER_RESTARTS,
)
from ..exceptions import BudgetExceededError, GraphLimitError, ValidationError
from ..graph import Quotient, VertexPartition, WeightedGraph, enumerate_quotients
from ..graphon import StepGraphon, cut_distance, normalize, normalized_cut_distance
from ..graphon.tails import KTable
from ..large_deviations import RateEstimate, empirical_rate, graphon_rate, quotient_ball_probability
from ..large_deviations.estimate import RATE_COLUMNS
from ..models import GeneratorSpec, generate
from ..quotients import QuotientSet, hausdorff, sample_quotient_set
from ..regularity import (
    equipartition_upper_regular_check,
    regularize,
    uniform_upper_regular_check,
    upper_lp_regular_check,
    upper_regular_graphon_check,
    weak_regularity_partition,
)
from ..statphys import (
    CouplingModel,
    EnergyResult,
    free_energy,
    graphon_free_energy,
    graphon_ground_state_energy,
    graphon_gse,
    graphon_unrestricted_free_energy,
    ground_state_energy,
    microcanonical_free_energy,
    microcanonical_gse,
)
from ..utils.file_ops import dumps_json, load_document
from .reports import RunConfig, csv_report, emit, json_report, resolve_config

logger = logging.getLogger(__name__)

DEFAULT_REGULARIZE_EPS = 0.3
CONVERGENCE_SWEEPS = 100
CONVERGENCE_DIR = "convergence-report"

Loaded = WeightedGraph | StepGraphon


def _require(value: Any, flag: str) -> Any:
    if value is None:
        raise ValidationError(f"Missing required option {flag}")
    return value


def load_input(path: str | Path) -> Loaded:
    """Graph or graphon document, told apart by its keys."""
    document = load_document(Path(path))
    if isinstance(document, dict) and "step_lengths" in document:
        return StepGraphon.from_dict(document)
    return WeightedGraph.from_dict(document)


def _as_graph(obj: Loaded, command: str) -> WeightedGraph:
    if not isinstance(obj, WeightedGraph):
        raise ValidationError(f"{command} needs a graph input here, got a graphon")
    return obj


def _as_graphon(obj: Loaded) -> StepGraphon:
    return normalize(obj) if isinstance(obj, WeightedGraph) else obj


def _load_model(config: RunConfig) -> CouplingModel:
    return CouplingModel.from_dict(load_document(Path(_require(config.model, "--model"))))


def _load_target(config: RunConfig) -> Quotient:
    return Quotient.from_dict(load_document(Path(_require(config.target, "--target"))))


def _family_spec(config: RunConfig) -> GeneratorSpec:
    spec_path = config.options.get("spec")
    if spec_path:
        return GeneratorSpec.from_dict(load_document(Path(spec_path)))
    params = dict(config.params)
    if isinstance(params.get("B"), str):
        params["B"] = json.loads(params["B"])
    if isinstance(params.get("graphon"), str):
        params["graphon"] = load_document(Path(params["graphon"]))
    return GeneratorSpec(_require(config.family, "--family"), params, config.seed)


def _write(config: RunConfig, kind: str, result: Any, columns: list[str], rows: list[list[Any]]) -> None:
    if config.format == "csv":
        emit(csv_report(config, columns, rows), config.out)
    else:
        emit(json_report(config, kind, result), config.out)


def handle_generate(config: RunConfig) -> None:
    spec = _family_spec(config)
    G = generate(spec)
    emit(dumps_json(G.to_dict()), config.out)
    print(f"✓ Generated {spec.family} graph with {G.n} vertices", file=sys.stderr)


def handle_distance(config: RunConfig) -> None:
    first = load_input(_require(config.input, "--input"))
    second = load_input(_require(config.input2, "--input2"))
    budget = config.budget or DEFAULT_ALIGNMENT_BUDGET
    if isinstance(first, WeightedGraph) and isinstance(second, WeightedGraph):
        bound = normalized_cut_distance(first, second, budget, config.seed)
    else:
        bound = cut_distance(_as_graphon(first), _as_graphon(second), budget, config.seed)
    _write(
        config,
        "distance",
        bound.to_dict(),
        ["lower", "upper", "exact_flag", "method"],
        [[bound.lower, bound.upper, bound.exact_flag, bound.method]],
    )


def _quotient_set(obj: Loaded, config: RunConfig) -> QuotientSet:
    budget = config.budget or DEFAULT_ENUMERATION_BUDGET
    if isinstance(obj, WeightedGraph):
        try:
            points = enumerate_quotients(obj, config.q, budget)
            return QuotientSet(tuple(points), {"method": "enumeration", "q": config.q})
        except BudgetExceededError as e:
            logger.info("%s; sampling fractional quotients instead", e)
    return sample_quotient_set(_as_graphon(obj), config.q, config.mesh, config.samples, config.seed)


def _quotient_rows(points: QuotientSet) -> tuple[list[str], list[list[Any]]]:
    q = points.q or 0
    columns = [f"alpha_{i}" for i in range(q)] + [f"beta_{i}{j}" for i in range(q) for j in range(q)]
    return columns, [list(map(float, row)) for row in points.vectors()]


def handle_quotients(config: RunConfig) -> None:
    first = _quotient_set(load_input(_require(config.input, "--input")), config)
    if config.input2 is None:
        columns, rows = _quotient_rows(first)
        _write(config, "quotients", first.to_dict(), columns, rows)
        return
    second = _quotient_set(load_input(config.input2), config)
    distance = hausdorff(first, second)
    result = {
        "hausdorff": distance,
        "sizes": [len(first), len(second)],
        "meta": [first.meta, second.meta],
    }
    _write(config, "hausdorff", result, ["hausdorff", "size_1", "size_2"], [[distance, len(first), len(second)]])


def _graph_energies(G: WeightedGraph, model: CouplingModel, config: RunConfig) -> dict[str, EnergyResult | None]:
    method = config.method or METHOD_EXACT
    budget = config.budget or DEFAULT_ENUMERATION_BUDGET
    sweeps = config.options.get("sweeps", ANNEAL_SWEEPS)
    restarts = config.restarts or 4
    results: dict[str, EnergyResult | None] = {
        "gse": microcanonical_gse(G, model, method, budget, config.seed, sweeps, restarts),
        "ground_state_energy": ground_state_energy(
            G, model.J, model.h, budget, method, config.seed, sweeps, restarts
        ),
    }
    try:
        results["free_energy"] = microcanonical_free_energy(G, model, budget)
        results["unrestricted_free_energy"] = free_energy(G, model.J, model.h, budget)
    except BudgetExceededError:
        if method == METHOD_EXACT:
            raise
        logger.info("Free energies skipped: %d^%d maps exceed the budget", model.q, G.n)
        results["free_energy"] = None
        results["unrestricted_free_energy"] = None
    return results


def _graphon_energies(W: StepGraphon, model: CouplingModel, config: RunConfig) -> dict[str, EnergyResult]:
    restarts = config.restarts or DEFAULT_RESTARTS
    return {
        "gse": graphon_gse(W, model.J, model.a, config.mesh, restarts, config.seed),
        "ground_state_energy": graphon_ground_state_energy(W, model.J, model.h, restarts, config.seed),
        "free_energy": graphon_free_energy(W, model.J, model.a, restarts=restarts, seed=config.seed),
        "unrestricted_free_energy": graphon_unrestricted_free_energy(
            W, model.J, model.h, restarts=restarts, seed=config.seed
        ),
    }


def handle_energy(config: RunConfig) -> None:
    obj = load_input(_require(config.input, "--input"))
    model = _load_model(config)
    if isinstance(obj, WeightedGraph):
        results = _graph_energies(obj, model, config)
    else:
        results = _graphon_energies(obj, model, config)
    rows = [
        [name, r.value, r.method, r.exact_flag] if r is not None else [name, None, None, None]
        for name, r in results.items()
    ]
    payload = {name: (r.to_dict() if r is not None else None) for name, r in results.items()}
    _write(config, "energy", payload, ["quantity", "value", "method", "exact_flag"], rows)


def _load_classes(config: RunConfig) -> VertexPartition | None:
    if config.classes is None:
        return None
    return VertexPartition.from_dict(load_document(Path(config.classes)))


def family_classes(spec: GeneratorSpec, G: WeightedGraph) -> VertexPartition | None:
    """Block partition on which a deterministic family is constant (clique vs isolated)."""
    if spec.family != FAMILY_CLIQUE:
        return None
    c_n = int(spec.params["c_n"])
    return VertexPartition(tuple([0] * c_n + [1] * (G.n - c_n)), 2)


def _ladder(config: RunConfig) -> tuple[GeneratorSpec, list[WeightedGraph]]:
    if not config.sizes:
        raise ValidationError("A size ladder needs --sizes")
    spec = _family_spec(config)
    return spec, [generate(spec.with_n(n)) for n in config.sizes]


def _rates(config: RunConfig) -> list[RateEstimate]:
    target = _load_target(config)
    budget = config.budget or DEFAULT_ENUMERATION_BUDGET
    if config.sizes:
        eps = _require(config.eps, "--eps")
        spec, graphs = _ladder(config)
        classes = [family_classes(spec, G) for G in graphs]
        return empirical_rate(
            graphs, config.q, target, eps, config.method, budget, config.samples, config.seed, classes
        )
    obj = load_input(_require(config.input, "--input"))
    if isinstance(obj, StepGraphon):
        restarts = config.restarts or DEFAULT_RESTARTS
        return [graphon_rate(obj, config.q, target, config.mesh, restarts, config.seed, config.eps)]
    eps = _require(config.eps, "--eps")
    return [
        quotient_ball_probability(
            obj, config.q, target, eps, config.method, budget, config.samples, config.seed, _load_classes(config)
        )
    ]


def handle_ld(config: RunConfig) -> None:
    estimates = _rates(config)
    _write(config, "ld", [e.to_dict() for e in estimates], RATE_COLUMNS, [e.csv_row() for e in estimates])


def _k_table(config: RunConfig) -> KTable:
    path = config.options.get("k_table")
    if path:
        return KTable.from_dict(load_document(Path(path)))
    return KTable.constant(_require(config.options.get("K"), "--K or --k-table"))


def handle_regularity(config: RunConfig) -> None:
    obj = load_input(_require(config.input, "--input"))
    options = config.options
    check = options.get("check", "lp")
    search_budget = options.get("search_budget", DEFAULT_SEARCH_BUDGET)
    if check == "uniform":
        eta = _require(options.get("eta"), "--eta")
        if isinstance(obj, StepGraphon):
            report = upper_regular_graphon_check(obj, _k_table(config), eta, search_budget, config.seed)
        else:
            report = uniform_upper_regular_check(obj, _k_table(config), eta, search_budget, config.seed)
        result = report.to_dict()
    elif check == "lp":
        report = upper_lp_regular_check(
            _as_graph(obj, "lp check"),
            _require(options.get("C"), "--C"),
            _require(options.get("eta"), "--eta"),
            options.get("p_norm", 2.0),
            search_budget,
            config.seed,
        )
        result = report.to_dict()
    elif check == "equipartition":
        report = equipartition_upper_regular_check(
            _as_graph(obj, "equipartition check"), _k_table(config), config.q, search_budget, config.seed
        )
        result = report.to_dict()
    else:
        G = _as_graph(obj, check)
        eps = _require(config.eps, "--eps")
        k = options.get("k", 1)
        k_max = options.get("k_max", DEFAULT_K_MAX)
        restarts = config.restarts or PARTITIONER_RESTARTS
        if check == "partition":
            result = weak_regularity_partition(G, eps, k, k_max, restarts, config.seed).to_dict()
        else:
            result = regularize(G, eps, k, k_max, restarts, config.seed).to_dict()
        emit(json_report(config, check, result), config.out)
        return
    _write(
        config,
        "regularity",
        result,
        ["kind", "verdict", "certified", "searched"],
        [[result["kind"], result["verdict"], result["certified"], result["searched"]]],
    )


def reference_graphon(spec: GeneratorSpec, largest: StepGraphon) -> tuple[StepGraphon, str]:
    """Limit object of the family when known, the largest regularized graph otherwise."""
    if spec.family == FAMILY_ER:
        return StepGraphon.constant(1.0), "constant"
    if spec.family == FAMILY_SBM:
        return StepGraphon.equal_steps(spec.params["B"]), "block_matrix"
    if spec.family == FAMILY_W_RANDOM:
        return StepGraphon.from_dict(spec.params["graphon"]), "graphon"
    return largest, "largest_regularized"


def handle_convergence_report(config: RunConfig) -> None:
    spec, graphs = _ladder(config)
    eps = config.eps if config.eps is not None else DEFAULT_REGULARIZE_EPS
    restarts = config.restarts or PARTITIONER_RESTARTS
    regularized = [regularize(G, eps, 1, DEFAULT_K_MAX, restarts, config.seed) for G in graphs]
    reference, source = reference_graphon(spec, regularized[-1])
    out_dir = Path(config.out or CONVERGENCE_DIR)
    mesh = config.mesh or 0.25

    distance_rows = []
    for G, W in zip(graphs, regularized):
        bound = cut_distance(W, reference, DEFAULT_ALIGNMENT_BUDGET, config.seed)
        distance_rows.append([G.n, W.k, bound.lower, bound.upper, bound.exact_flag, source])
    emit(
        csv_report(config, ["n", "steps", "lower", "upper", "exact_flag", "reference"], distance_rows),
        out_dir / "distance.csv",
    )

    reference_set = sample_quotient_set(reference, config.q, mesh, config.samples, config.seed)
    quotient_rows = []
    for G, W in zip(graphs, regularized):
        points = sample_quotient_set(W, config.q, mesh, config.samples, config.seed)
        quotient_rows.append([G.n, len(points), hausdorff(points, reference_set)])
    emit(csv_report(config, ["n", "points", "hausdorff"], quotient_rows), out_dir / "quotients.csv")

    if config.model:
        model = _load_model(config)
        budget = config.budget or DEFAULT_ENUMERATION_BUDGET
        sweeps = config.options.get("sweeps", CONVERGENCE_SWEEPS)
        energy_rows = []
        for G, W in zip(graphs, regularized):
            method = METHOD_EXACT if model.q**G.n <= budget else METHOD_ANNEAL
            gse = microcanonical_gse(G, model, method, budget, config.seed, sweeps, config.restarts or 4)
            limit = graphon_gse(W, model.J, model.a, mesh, config.restarts or DEFAULT_RESTARTS, config.seed)
            energy_rows.append([G.n, gse.value, gse.method, limit.value])
        emit(
            csv_report(config, ["n", "gse", "method", "regularized_gse"], energy_rows),
            out_dir / "energy.csv",
        )

    if config.target:
        target = _load_target(config)
        ld_eps = _require(config.options.get("ld_eps"), "--ld-eps")
        classes = [family_classes(spec, G) for G in graphs]
        estimates = empirical_rate(
            graphs,
            config.q,
            target,
            ld_eps,
            None,
            config.budget or DEFAULT_ENUMERATION_BUDGET,
            config.samples,
            config.seed,
            classes,
        )
        emit(csv_report(config, RATE_COLUMNS, [e.csv_row() for e in estimates]), out_dir / "ld.csv")


HANDLERS: dict[str, Callable[[RunConfig], None]] = {
    "generate": handle_generate,
    "distance": handle_distance,
    "quotients": handle_quotients,
    "energy": handle_energy,
    "ld": handle_ld,
    "regularity": handle_regularity,
    "convergence-report": handle_convergence_report,
}


def configure_logging(verbosity: int) -> None:
    if verbosity <= 0:
        return
    level = logging.DEBUG if verbosity > 1 else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _report_error(error: Exception, exit_code: int) -> None:
    payload = {"error": {"type": type(error).__name__, "message": str(error), "exit_code": exit_code}}
    print(json.dumps(payload), file=sys.stderr)


def handle_command(args) -> int:
    """
    Handle CLI command execution.

    Args:
        args: Parsed command-line arguments

    Returns:
        Exit code: 0 on success, the exception's code for library errors, 1 otherwise
    """
    configure_logging(getattr(args, "verbose", 0))
    try:
        config = resolve_config(args)
        HANDLERS[config.command](config)
        return 0
    except GraphLimitError as e:
        _report_error(e, e.exit_code)
        return e.exit_code
    except Exception as e:
        logger.debug("Unexpected failure", exc_info=True)
        _report_error(e, 1)
        return 1
