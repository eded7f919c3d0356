"""
Command-line argument parsing for graphlim.

Flags default to None so that resolve_config can tell explicit flags from
values supplied by a --config document.
"""

import argparse

from ..constants import FAMILIES, LD_METHODS, METHOD_ANNEAL, METHOD_EXACT

FAMILY_KEYS = ("n", "p", "B", "rho_n", "alpha", "beta", "c_n", "cycle_len", "copies", "graphon")
REGULARITY_CHECKS = ("lp", "uniform", "equipartition", "partition", "regularize")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON/YAML file with defaults for any flag")
    sub.add_argument("--seed", type=int, help="Root seed (default: 0)")
    sub.add_argument("--out", help="Output path (default: stdout)")
    sub.add_argument("--format", choices=["json", "csv"], help="Report format (default: json)")
    sub.add_argument(
        "-v", "--verbose", action="count", default=0, help="Log progress (-vv for debug)"
    )


def _add_family(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--family", choices=FAMILIES, help="Generator family")
    sub.add_argument("--spec", help="GeneratorSpec JSON/YAML file (overrides --family)")
    sub.add_argument("--n", type=int, help="Number of vertices")
    sub.add_argument("--p", type=float, help="Edge probability (er)")
    sub.add_argument("--B", help="Block matrix as JSON, e.g. '[[1.6,0.4],[0.4,1.6]]' (sbm)")
    sub.add_argument("--rho-n", dest="rho_n", type=float, help="Target density (sbm, w-random)")
    sub.add_argument("--alpha", type=float, help="Power-law exponent alpha")
    sub.add_argument("--beta", type=float, help="Power-law exponent beta")
    sub.add_argument("--c-n", dest="c_n", type=int, help="Clique size (clique)")
    sub.add_argument("--cycle-len", dest="cycle_len", type=int, help="Cycle length (cycles)")
    sub.add_argument("--copies", type=int, help="Number of cycles (cycles)")
    sub.add_argument("--graphon", help="Graphon JSON file (w-random)")
    sub.set_defaults(family_keys=FAMILY_KEYS)


def create_parser() -> argparse.ArgumentParser:
    """
    Create and configure the argument parser for graphlim.

    Returns:
        Configured ArgumentParser instance
    """
    parser = argparse.ArgumentParser(
        prog="graphlim",
        description="Sparse graph limits: distances, quotients, energies, large deviations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )

    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    generate = subparsers.add_parser("generate", help="Sample a graph from a model family")
    _add_family(generate)
    _add_common(generate)

    distance = subparsers.add_parser("distance", help="Bounds on the normalized cut distance")
    distance.add_argument("--input", help="Graph or graphon JSON")
    distance.add_argument("--input2", help="Second graph or graphon JSON")
    distance.add_argument("--budget", type=int, help="Largest equal-atom grid searched exhaustively")
    _add_common(distance)

    quotients = subparsers.add_parser("quotients", help="Quotient sets and Hausdorff distances")
    quotients.add_argument("--input", help="Graph or graphon JSON")
    quotients.add_argument("--input2", help="Second graph or graphon JSON (Hausdorff distance)")
    quotients.add_argument("--q", type=int, help="Number of classes (default: 2)")
    quotients.add_argument("--mesh", type=float, help="Simplex grid spacing for graphons")
    quotients.add_argument("--samples", type=int, help="Random fractional partitions")
    quotients.add_argument("--budget", type=int, help="Largest q^n enumerated for graphs")
    _add_common(quotients)

    energy = subparsers.add_parser("energy", help="Ground state and free energies")
    energy.add_argument("--input", help="Graph or graphon JSON")
    energy.add_argument("--model", help="Coupling model JSON/YAML (J, h, a, eps)")
    mode = energy.add_mutually_exclusive_group()
    mode.add_argument(
        "--exact", dest="method", action="store_const", const=METHOD_EXACT, help="Enumerate all maps"
    )
    mode.add_argument(
        "--anneal", dest="method", action="store_const", const=METHOD_ANNEAL, help="Simulated annealing"
    )
    energy.add_argument("--budget", type=int, help="Largest q^n enumerated")
    energy.add_argument("--mesh", type=float, help="Grid spacing for the graphon cross-check")
    energy.add_argument("--restarts", type=int, help="Restarts of heuristic optimizers")
    energy.add_argument("--sweeps", type=int, help="Annealing sweeps")
    _add_common(energy)

    ld = subparsers.add_parser("ld", help="Quotient-ball probabilities and rates")
    ld.add_argument("--input", help="Graph or graphon JSON")
    ld.add_argument("--target", help="Target quotient JSON")
    ld.add_argument("--q", type=int, help="Number of colors (default: 2)")
    ld.add_argument("--eps", type=float, help="Ball radius")
    ld.add_argument("--method", choices=LD_METHODS, help="Probability method (default: automatic)")
    ld.add_argument("--classes", help="Block partition JSON for exact_multinomial")
    ld.add_argument("--budget", type=int, help="Enumeration budget")
    ld.add_argument("--samples", type=int, help="Monte Carlo samples")
    ld.add_argument("--mesh", type=float, help="Grid spacing for graphon rates")
    ld.add_argument("--restarts", type=int, help="Mean-field starts for graphon rates")
    ld.add_argument("--sizes", help="Comma-separated size ladder (with --family)")
    _add_family(ld)
    _add_common(ld)

    regularity = subparsers.add_parser("regularity", help="Regularity checks and partitions")
    regularity.add_argument("--input", help="Graph or graphon JSON")
    regularity.add_argument("--check", choices=REGULARITY_CHECKS, help="What to compute")
    regularity.add_argument("--C", dest="C", type=float, help="Norm bound (lp)")
    regularity.add_argument("--eta", type=float, help="Minimum class fraction")
    regularity.add_argument("--p-norm", dest="p_norm", type=float, help="Norm exponent (lp)")
    regularity.add_argument("--K", dest="K", type=float, help="Constant threshold K(eps)")
    regularity.add_argument("--k-table", dest="k_table", help="K table JSON {entries: [[eps, K], ...]}")
    regularity.add_argument("--q", type=int, help="Number of equipartition classes")
    regularity.add_argument("--eps", type=float, help="Partition accuracy")
    regularity.add_argument("--k", type=int, help="Minimum number of parts")
    regularity.add_argument("--k-max", dest="k_max", type=int, help="Class cap during refinement")
    regularity.add_argument("--restarts", type=int, help="Witness search restarts")
    regularity.add_argument("--search-budget", dest="search_budget", type=int, help="Random partitions tried")
    _add_common(regularity)

    convergence = subparsers.add_parser(
        "convergence-report", help="Diagnostics along a size ladder (one CSV per diagnostic)"
    )
    _add_family(convergence)
    convergence.add_argument("--sizes", help="Comma-separated sizes, e.g. 100,200,400")
    convergence.add_argument("--q", type=int, help="Number of classes (default: 2)")
    convergence.add_argument("--eps", type=float, help="Regularization accuracy (default: 0.3)")
    convergence.add_argument("--mesh", type=float, help="Simplex grid spacing")
    convergence.add_argument("--samples", type=int, help="Random samples for nets and Monte Carlo")
    convergence.add_argument("--model", help="Coupling model for the energy sequence")
    convergence.add_argument("--target", help="Target quotient for the rate sequence")
    convergence.add_argument("--ld-eps", dest="ld_eps", type=float, help="Ball radius for rates")
    convergence.add_argument("--budget", type=int, help="Enumeration budget")
    convergence.add_argument("--restarts", type=int, help="Restarts of heuristic optimizers")
    convergence.add_argument("--sweeps", type=int, help="Annealing sweeps")
    _add_common(convergence)

    return parser
