"""Command-line front end.

Subcommands ``theorem``, ``cover``, ``partial-ideal``, ``witness`` and
``check`` each emit one JSON report. Exit codes: 0 when every embedded
check passed, 1 for usage or I/O errors, 2 for a verification failure.
Output depends only on the arguments (and the kernel backend).
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from . import _backend, linalg
from .algebra import BlockAlgebra, BlockElement, ProjectionElement, is_central, rank_vector
from .commutative import (
    CommutativeSubalgebra,
    generate,
    ideal_support,
    one_sided_partial_ideal,
    random_chain,
    random_subalgebra,
)
from .covering import main_lemma_cover
from .errors import DegenerateInputError, PreconditionError, VNIdealsError
from .families import (
    WITNESS_GAP,
    FamilyRule,
    FromCentral,
    FromProjection,
    check_consistency,
    check_invariance,
    find_invariance_violation,
    verify_theorem,
)
from .linalg import Tolerance, derive_seed
from .serialize import (
    SCHEMA_VERSION,
    certificate_to_json,
    dumps,
    element_from_json,
    report_to_json,
    witness_to_json,
)

MAX_DIM = 32
EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

# seed streams, so that e.g. witness trial 3 never shares a seed with sample 3
_STREAM_MASKS, _STREAM_WITNESS, _STREAM_CHAINS, _STREAM_SAMPLES, _STREAM_UNITARIES = 1, 2, 3, 4, 5


class UsageError(VNIdealsError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    dims: tuple[int, ...]
    master_seed: int = 0
    trials: int = 20
    samples: int = 10
    eps: float = 1e-9
    rank_eps: float = 1e-9

    def __post_init__(self):
        if not self.dims:
            raise UsageError("dims must be nonempty")
        if any(d < 1 or d > MAX_DIM for d in self.dims):
            raise UsageError(f"each dim must lie in [1, {MAX_DIM}], got {list(self.dims)}")
        if self.trials < 1 or self.samples < 1:
            raise UsageError("trials and samples must be positive")
        if not (self.eps > 0 and self.rank_eps > 0):
            raise UsageError("tolerances must be positive")

    @property
    def algebra(self) -> BlockAlgebra:
        return BlockAlgebra(self.dims)

    @property
    def tol(self) -> Tolerance:
        return Tolerance(self.eps, self.rank_eps)

    def stream(self, name: int) -> int:
        return derive_seed(self.master_seed, name)

    def to_json(self) -> dict:
        d = asdict(self)
        d["dims"] = list(self.dims)
        return d


def _header(command: str, config: ExperimentConfig) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "backend": _backend.BACKEND,
            "config": config.to_json()}


def _sample_subalgebras(config: ExperimentConfig, stream: int, count: int) -> list[CommutativeSubalgebra]:
    base = config.stream(stream)
    return [random_subalgebra(config.algebra, derive_seed(base, i), with_center=(i % 2 == 0), tol=config.tol)
            for i in range(count)]


def _sample_unitaries(config: ExperimentConfig, stream: int, count: int) -> list[BlockElement]:
    base = config.stream(stream)
    return [config.algebra.random_unitary(derive_seed(base, i)) for i in range(count)]


def _sample_chains(config: ExperimentConfig, count: int):
    base = config.stream(_STREAM_CHAINS)
    return [random_chain(config.algebra, derive_seed(base, i), with_center=(i % 2 == 0), tol=config.tol)
            for i in range(count)]


def _noncentral_ranks(dims, seed: int) -> tuple[int, ...] | None:
    """Random rank vector with at least one block strictly between 0 and n."""
    eligible = [k for k, n in enumerate(dims) if n >= 2]
    if not eligible:
        return None
    forced = eligible[derive_seed(seed, 0) % len(eligible)]
    ranks = []
    for k, n in enumerate(dims):
        if k == forced:
            ranks.append(1 + derive_seed(seed, k + 1) % (n - 1))
        else:
            ranks.append(derive_seed(seed, k + 1) % (n + 1))
    return tuple(ranks)


def _witness_trial(args) -> dict:
    dims, master_seed, t, eps, rank_eps = args
    tol = Tolerance(eps, rank_eps)
    alg = BlockAlgebra(dims)
    seed = derive_seed(derive_seed(master_seed, _STREAM_WITNESS), t)
    ranks = _noncentral_ranks(dims, seed)
    p = alg.random_projection(ranks, derive_seed(seed, 99))
    entry = {"trial": t, "ranks": list(ranks)}
    try:
        w = find_invariance_violation(p, tol, seed=seed)
    except VNIdealsError as exc:
        entry.update(verdict="fail", error=str(exc))
        return entry
    recheck = w.recheck(tol)
    ok = w.gap >= WITNESS_GAP and recheck >= WITNESS_GAP and abs(recheck - w.gap) <= 1e-9
    entry.update(gap=float(w.gap), recheck_gap=float(recheck), method=w.method, verdict="pass" if ok else "fail")
    return entry


def cmd_theorem(config: ExperimentConfig, jobs: int = 1) -> tuple[int, dict]:
    """Round-trip every central projection; find a witness for random non-central ones."""
    alg, tol = config.algebra, config.tol
    masks = []
    for m, z in enumerate(alg.central_masks()):
        stream = derive_seed(_STREAM_MASKS, m)
        subs = _sample_subalgebras(config, stream, config.samples)
        units = _sample_unitaries(config, stream + 1, config.samples)
        entry = {"mask": list(z.mask)}
        try:
            r = verify_theorem(FromCentral(z), subs, units, tol)
        except PreconditionError as exc:
            entry.update(verdict="fail", error=str(exc))
        else:
            recovered = r.info["center"]
            entry.update(recovered=list(recovered.mask), trials=r.trials, max_distance=float(r.max_distance),
                         verdict="pass" if r.passed and recovered == z else "fail")
        masks.append(entry)

    witnesses = []
    if _noncentral_ranks(alg.dims, 0) is not None:
        args = [(alg.dims, config.master_seed, t, config.eps, config.rank_eps) for t in range(config.trials)]
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as pool:
                witnesses = list(pool.map(_witness_trial, args))
        else:
            witnesses = [_witness_trial(a) for a in args]

    ok = all(e["verdict"] == "pass" for e in masks + witnesses)
    report = _header("theorem", config)
    report.update(
        central_masks=masks,
        witnesses=witnesses,
        note=None if witnesses else "algebra is abelian: every projection is central",
        summary={"masks_passed": sum(e["verdict"] == "pass" for e in masks), "masks_total": len(masks),
                 "witnesses_found": sum(e["verdict"] == "pass" for e in witnesses), "witness_trials": len(witnesses)},
        verdict="pass" if ok else "fail",
    )
    return (EXIT_OK if ok else EXIT_FAIL), report


def _random_projection(config: ExperimentConfig, ranks) -> ProjectionElement:
    alg = config.algebra
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != alg.num_blocks or any(not 0 <= r <= n for r, n in zip(ranks, alg.dims)):
        raise UsageError(f"rank vector {list(ranks)} invalid for dims {list(alg.dims)}")
    return alg.random_projection(ranks, config.master_seed)


def cmd_cover(config: ExperimentConfig, ranks) -> tuple[int, dict]:
    q = _random_projection(config, ranks)
    if not any(ranks):
        raise UsageError("rank vector is zero: for q = 0 the remainder cannot be strictly dominated")
    try:
        cert = main_lemma_cover(q, config.tol)
    except DegenerateInputError as exc:
        raise UsageError(str(exc)) from exc
    report = _header("cover", config)
    report.update(certificate_to_json(cert), size_M=len(cert.M))
    return (EXIT_OK if cert.passed else EXIT_FAIL), report


class _IdealSupportRule(FamilyRule):
    """Family of units of the one-sided partial ideal ``V -> I cap V``."""

    def __init__(self, p: ProjectionElement, side: str):
        self.p, self.side, self.algebra = p, side, p.algebra

    def evaluate(self, V, tol=linalg.DEFAULT_TOL):
        return ideal_support(one_sided_partial_ideal(self.p, self.side, V, tol))


def cmd_partial_ideal(config: ExperimentConfig, p: ProjectionElement, side: str = "right") -> tuple[int, dict]:
    """Partial ideal of ``pA`` / ``Ap``: always consistent, invariant exactly when ``p`` is central."""
    tol = config.tol
    rule = _IdealSupportRule(p, side)
    subs = _sample_subalgebras(config, _STREAM_SAMPLES, config.trials)
    units = _sample_unitaries(config, _STREAM_UNITARIES, config.trials)
    ideals = [{"atoms": len(V), "ideal": sorted(one_sided_partial_ideal(p, side, V, tol).atom_subset)} for V in subs]
    consistency = check_consistency(rule, _sample_chains(config, config.trials), tol)
    samples = list(zip(subs, units))
    central = is_central(p, tol)
    witness = None
    if not central:
        witness = find_invariance_violation(p, tol, seed=config.master_seed)
        samples.append((witness.V, witness.u))
    invariance = check_invariance(rule, samples, tol)
    ok = consistency.passed and invariance.passed == central
    report = _header("partial-ideal", config)
    report.update(
        side=side,
        p_ranks=list(rank_vector(p, tol)),
        p_central=central,
        ideals=ideals,
        consistency=report_to_json(consistency),
        invariance=report_to_json(invariance),
        witness=witness_to_json(witness) if witness else None,
        expected={"consistency": "pass", "invariance": "pass" if central else "fail"},
        verdict="pass" if ok else "fail",
    )
    return (EXIT_OK if ok else EXIT_FAIL), report


def cmd_witness(config: ExperimentConfig, p: ProjectionElement) -> tuple[int, dict]:
    tol = config.tol
    if is_central(p, tol):
        raise UsageError("p is central; its family is invariant and no witness exists")
    w = find_invariance_violation(p, tol, seed=config.master_seed)
    recheck = w.recheck(tol)
    ok = recheck >= WITNESS_GAP
    report = _header("witness", config)
    report.update(witness_to_json(w), recheck_gap=float(recheck), verdict="pass" if ok else "fail")
    return (EXIT_OK if ok else EXIT_FAIL), report


def cmd_check(config: ExperimentConfig, rule: FamilyRule) -> tuple[int, dict]:
    """Consistency and invariance of a family on random chains and conjugations."""
    tol = config.tol
    consistency = check_consistency(rule, _sample_chains(config, config.trials), tol)
    subs = _sample_subalgebras(config, _STREAM_SAMPLES, config.trials)
    units = _sample_unitaries(config, _STREAM_UNITARIES, config.trials)
    samples = list(zip(subs, units))
    if isinstance(rule, FromProjection):
        # generic V see only Pi(V) = 0; V_p is where the family is nonzero
        V_p = generate([rule.p], config.algebra, tol=tol)
        samples += [(V_p, u) for u in units]
    invariance = check_invariance(rule, samples, tol)
    ok = consistency.passed and invariance.passed
    report = _header("check", config)
    report.update(consistency=report_to_json(consistency), invariance=report_to_json(invariance),
                  verdict="pass" if ok else "fail")
    return (EXIT_OK if ok else EXIT_FAIL), report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _bool_list(text: str) -> list[bool]:
    return [bool(x) for x in _int_list(text)]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--dims", type=_int_list, required=True, help="block sizes, e.g. 2,3,2")
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--samples", type=int, default=10, help="subalgebras per central mask (theorem)")
    common.add_argument("--eps", type=float, default=1e-9)
    common.add_argument("--rank-eps", type=float, default=1e-9)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--quiet", action="store_true", help="no summary on stderr")

    pspec = _Parser(add_help=False)
    pspec.add_argument("--ranks", type=_int_list, help="rank vector of a random projection")
    pspec.add_argument("--p-json", help="projection as an element JSON file")

    parser = _Parser(prog="vnideals", description="Check projection families, covering certificates and "
                     "partial ideals in a direct sum of matrix algebras; each command prints a JSON report.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    t = sub.add_parser("theorem", parents=[common], help="central projections <-> invariant families")
    t.add_argument("--jobs", type=int, default=1)
    c = sub.add_parser("cover", parents=[common], help="covering certificate for a random projection")
    c.add_argument("--ranks", type=_int_list, required=True)
    pi = sub.add_parser("partial-ideal", parents=[common, pspec], help="partial ideal of a one-sided ideal")
    pi.add_argument("--side", choices=["left", "right"], default="right")
    sub.add_parser("witness", parents=[common, pspec], help="invariance violation for a non-central projection")
    ch = sub.add_parser("check", parents=[common, pspec], help="consistency and invariance of a family")
    ch.add_argument("--mask", type=_bool_list, help="central projection mask, e.g. 1,0")
    return parser


def _projection_arg(args, config: ExperimentConfig) -> ProjectionElement:
    if args.p_json:
        with open(args.p_json) as fh:
            p = element_from_json(json.load(fh), projection=True)
        if p.algebra != config.algebra:
            raise UsageError(f"projection dims {list(p.algebra.dims)} differ from --dims")
        return p
    if args.ranks is None:
        raise UsageError("give --ranks or --p-json")
    return _random_projection(config, args.ranks)


def run(args) -> tuple[int, dict]:
    config = ExperimentConfig(tuple(args.dims), args.seed, args.trials, args.samples, args.eps, args.rank_eps)
    if args.command == "theorem":
        return cmd_theorem(config, args.jobs)
    if args.command == "cover":
        return cmd_cover(config, args.ranks)
    if args.command == "partial-ideal":
        return cmd_partial_ideal(config, _projection_arg(args, config), args.side)
    if args.command == "witness":
        return cmd_witness(config, _projection_arg(args, config))
    if args.mask is not None:
        rule = FromCentral(config.algebra.central(args.mask))
    else:
        rule = FromProjection(_projection_arg(args, config))
    return cmd_check(config, rule)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, report = run(args)
        text = dumps(report)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (VNIdealsError, ValueError, OSError) as exc:
        print(f"vnideals: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not args.quiet:
        print(f"vnideals {args.command}: {report['verdict']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
