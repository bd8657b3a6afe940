"""Batch front end: ``pathwise --cmd NAME [--input FILE] [params]``.

Every command writes a report listing each asserted comparison with both
sides as exact rationals.  Exit status: 0 when every row passes, 1 when
some row fails, 3 on unparsable input, 4 on a violated precondition and
5 when an input file is missing.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from . import generators as gen
from . import io
from .complexity import compressible_set, deficiency_class
from .density import LDF, branch, choose_delta, condensation_gap, condense, dense_ext, dense_status
from .errors import InsufficientDepth, ParseError, PreconditionError
from .expander import covering_enumerate, difference_test
from .hitting import (
    amplify,
    cost_tree,
    counting_inequality,
    divergence_partition,
    hitting_cost_bruteforce,
    is_hitting_set,
    optimal_hitting_set,
    robustness,
)
from .hypergraph import StringHypergraph, fatness_sum, kernel, light_vertex
from .measure import ClopenSet, concat_power, is_prefix_free
from .report import Report
from .trees import FinTree, LevelSet

log = logging.getLogger("pathwise")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_MISSING = 5

BRUTE_FORCE_LIMIT = 16


class MissingInput(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    input: str | None = None
    out: str | None = None
    format: str = "json"
    seed: int | None = None
    k: int | None = None
    eps: Fraction | None = None
    c: int | None = None
    n: int | None = None
    e: int | None = None
    q: Fraction | None = None
    depth: int | None = None
    sweep: str | None = None
    count: int | None = None

    def params(self) -> dict:
        skip = {"command", "input", "out", "format"}
        return {k: v for k, v in asdict(self).items() if k not in skip and v is not None}

    def need(self, *names: str):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise PreconditionError(f"--cmd {self.command} needs " + ", ".join("--" + m for m in missing))


def _read(config: ExperimentConfig) -> str:
    if not config.input:
        raise MissingInput(f"--cmd {config.command} needs --input")
    if config.input == "-":
        return sys.stdin.read()
    path = Path(config.input)
    if not path.exists() or path.is_dir():
        raise MissingInput(f"input file not found: {config.input}")
    return path.read_text(encoding="utf-8")


def _positive(name: str, value):
    if value is not None and value <= 0:
        raise PreconditionError(f"--{name} must be positive")


def _validate(config: ExperimentConfig):
    # for difference and sweeps --k is an upper bound, so 0 is a valid range end
    bound_k = config.command in ("difference", "sweep")
    _positive("eps", config.eps)
    if not bound_k:
        _positive("k", config.k)
    for name in ("k", "c", "n", "e", "depth", "count"):
        v = getattr(config, name)
        if v is not None and v < 0:
            raise PreconditionError(f"--{name} must be non-negative")
    if config.q is not None and not 0 < config.q < 1:
        raise PreconditionError("--q must lie strictly between 0 and 1")


# single runs


def cmd_measure(config: ExperimentConfig, r: Report):
    gens = [g for no, line in io._lines(_read(config)) for g in io.parse_bits_list(line, no)]
    V = ClopenSet(gens)
    r.check("mu(V) <= 1", V.measure(), "<=", 1)
    r.check("mu(V) == mu(minimised V)", V.measure(), "==", ClopenSet(V.generators).measure())
    r.outputs["generators"] = [io.format_bits(s) for s in V.generators]
    r.outputs["measure"] = io.format_dyadic(V.measure())
    if config.n is not None:
        if not is_prefix_free(gens):
            raise PreconditionError("concatenation powers need a prefix-free set")
        P = concat_power(gens, config.n)
        r.check("mu(Q^n) == mu(Q)^n", P.measure(), "==", V.measure() ** config.n)
        r.outputs["power"] = [io.format_bits(s) for s in P.generators]
        r.outputs["power_measure"] = io.format_dyadic(P.measure())


def _kernel_rows(r: Report, H: StringHypergraph, prefix: str = ""):
    K = kernel(H)
    r.check(prefix + "total edge weight preserved", K.total_weight, "==", H.total_weight)
    r.flag(prefix + "kernel vertices prefix-free", is_prefix_free(K.vertices))
    r.flag(prefix + "[V] == [V*]", ClopenSet(H.vertices).same_points(ClopenSet(K.vertices)))
    again = kernel(StringHypergraph(K.edges, K.vertices))
    r.flag(prefix + "kernel idempotent", again.vertices == K.vertices and again.edge_map() == K.edge_map())
    return K


def cmd_kernel(config: ExperimentConfig, r: Report):
    H = io.parse_hypergraph(_read(config))
    K = _kernel_rows(r, H)
    r.outputs["kernel"] = io.format_hypergraph(K).splitlines()


def _fatness_rows(r: Report, H: StringHypergraph, k: int, prefix: str = ""):
    rep = fatness_sum(H, k)
    r.check(prefix + "sum ewt >= k*delta", rep.sum, ">=", rep.bound)
    krep = fatness_sum(kernel(H), k)
    r.check(prefix + "kernel: sum ewt* >= k*delta", krep.sum, ">=", krep.bound)
    return rep


def cmd_fatness(config: ExperimentConfig, r: Report):
    config.need("k")
    H = io.parse_hypergraph(_read(config))
    rep = _fatness_rows(r, H, config.k)
    r.outputs["sum"] = io.format_rational(rep.sum)
    r.outputs["bound"] = io.format_rational(rep.bound)


def _light_rows(r: Report, H: StringHypergraph, k: int, prefix: str = "") -> str:
    tau = light_vertex(H, k)
    bound = H.total_weight * k / (1 << len(tau))
    r.check(prefix + "g(tau) >= delta*k*2^-|tau|", H.weight_above(tau), ">=", bound)
    return tau


def cmd_light(config: ExperimentConfig, r: Report):
    config.need("k")
    H = io.parse_hypergraph(_read(config))
    r.outputs["tau"] = io.format_bits(_light_rows(r, H, config.k))


def _cover_rows(r: Report, Phi, k: int, eps: Fraction, prefix: str = ""):
    V, D, run = covering_enumerate(Phi, k, eps)
    r.check(prefix + "mu(V) <= eps", V.measure(), "<=", eps)
    r.check(prefix + "mu(D) <= 1/(k*eps)", D, "<=", 1 / (k * eps))
    for ev in run.trace:
        r.check(f"{prefix}step {ev.step}: mu(dF) >= delta*k*mu(dV)", ev.delta_F, ">=", run.delta * k * ev.delta_V)
    return V, D, run


def cmd_cover(config: ExperimentConfig, r: Report):
    config.need("k", "eps")
    Phi = io.parse_expander(_read(config))
    V, D, run = _cover_rows(r, Phi, config.k, config.eps)
    r.outputs["V"] = [io.format_bits(s) for s in V.generators]
    r.outputs["D_measure"] = io.format_dyadic(D)
    r.outputs["trace"] = [
        {"stage": ev.stage, "tau": io.format_bits(ev.tau), "p": io.format_rational(ev.p), "mu_V": io.format_dyadic(ev.mu_V)}
        for ev in run.trace
    ]


def _difference_rows(r: Report, Phi, k_max: int, prefix: str = ""):
    levels = difference_test(Phi, k_max, check=False)
    for L in levels:
        r.check(f"{prefix}k={L.k}: mu(V_k) <= 2^-k", L.V.measure(), "<=", L.eps)
        r.check(f"{prefix}k={L.k}: mu(D_k) <= 2^-k", L.D_measure, "<=", L.D_bound)
    return levels


def cmd_difference(config: ExperimentConfig, r: Report):
    Phi = io.parse_expander(_read(config))
    k_max = 2 if config.k is None else config.k
    levels = _difference_rows(r, Phi, k_max)
    r.outputs["levels"] = [
        {"k": L.k, "V": [io.format_bits(s) for s in L.V.generators], "D_measure": io.format_dyadic(L.D_measure)}
        for L in levels
    ]


def _hitcost_rows(r: Report, inst, prefix: str = "") -> tuple[Fraction, ClopenSet]:
    cost, V = optimal_hitting_set(inst)
    r.check(prefix + "cost <= 1", cost, "<=", 1)
    r.flag(prefix + "V hits F(Q)", is_hitting_set(V, inst))
    if len(inst.vertices()) <= BRUTE_FORCE_LIMIT:
        r.check(prefix + "cost == exhaustive subsets", cost, "==", hitting_cost_bruteforce(inst))
    return cost, V


def cmd_hitcost(config: ExperimentConfig, r: Report):
    inst = io.parse_hitting(_read(config))
    cost, V = _hitcost_rows(r, inst)
    r.outputs["cost"] = io.format_rational(cost)
    r.outputs["V"] = [io.format_bits(s) for s in V.generators]


def cmd_robustness(config: ExperimentConfig, r: Report):
    sec = io.parse_sections(_read(config), ("Q", "T"), ("Q", "T"))
    Q = io.parse_level(*sec["Q"])
    W = io.parse_tree(*sec["T"])
    rob = robustness(Q, W)
    r.outputs["robustness"] = io.format_dyadic(rob)
    if config.eps is not None:
        Qp, Wp = amplify(Q, W, config.eps)
        r.check("robustness(Q', W') > 1 - eps", robustness(Qp, Wp), ">", 1 - config.eps)
        r.outputs["amplified"] = {"Q": io.format_level(Qp), "T": io.format_tree(Wp)}


def cmd_costtree(config: ExperimentConfig, r: Report):
    config.need("q", "depth")
    costs = {}
    for tok in _read(config).split():
        s, sep, v = tok.partition("=")
        if not sep:
            raise ParseError(f"cost entries look like 'sigma=p/q', got {tok!r}")
        costs[io.parse_bits(s)] = io.parse_rational(v)
    T = cost_tree(costs, config.q, config.depth)
    for s in sorted(costs, key=lambda s: (len(s), s)):
        if len(s) <= config.depth and costs[s] > 1 - config.q:
            r.flag(f"{io.format_bits(s)} enumerated with its prefixes", all(s[:i] in T for i in range(len(s) + 1)))
    r.outputs["tree"] = sorted((io.format_bits(s) for s in T.maximal_nodes()), key=lambda s: (len(s), s))


def _load_partition(config: ExperimentConfig):
    if config.input is None and config.seed is not None:
        return gen.random_h_family(random.Random(config.seed)), None
    try:
        data = json.loads(_read(config))
    except json.JSONDecodeError as exc:
        raise ParseError(f"partition input is not JSON: {exc.msg}", exc.lineno) from None
    try:
        k = int(data.get("k", config.k))
        e = int(data.get("e", config.e))
        n = int(data.get("n", config.n))
        Q = LevelSet([io.parse_bits(t) for t in data["Q"]])
        H = {}
        for item in data.get("H", []):
            H[(io.parse_bits(item["sigma"]), io.parse_bits(item["tau"]))] = ClopenSet(
                io.parse_bits(s) for s in item["set"]
            )
        threshold = io.parse_rational(data["threshold"]) if "threshold" in data else None
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad partition input: {exc}") from None
    return (k, e, n, Q, H), threshold


def _partition_rows(r: Report, k, e, n, Q, H, threshold=None, prefix: str = ""):
    rep = divergence_partition(k, e, n, Q, H, threshold)
    r.check(prefix + "2^(k-e-n-1) + 2^n*2^(k-e-n-2) < 2^(k-e)", rep.bound, "<", rep.limit)
    r.check(prefix + "|(2^k - G) u D_tau| <= bound", rep.union_size, "<=", rep.bound)
    for tau in sorted(rep.light_mass):
        total, bound, holds = rep.hypothesis[tau]
        if holds:
            r.check(f"{prefix}mu_{io.format_bits(tau)}(M'_tau) > 1/2", rep.light_mass[tau], ">", Fraction(1, 2))
    return rep


def cmd_partition(config: ExperimentConfig, r: Report):
    (k, e, n, Q, H), threshold = _load_partition(config)
    rep = _partition_rows(r, k, e, n, Q, H, threshold)
    r.outputs.update(rep.to_json())


def cmd_deficiency(config: ExperimentConfig, r: Report):
    config.need("c")
    M = io.parse_machine(_read(config))
    n = config.n if config.n is not None else max((len(o) for o in M.outputs()), default=0)
    r.check("Kraft sum <= 1", M.kraft_sum(), "<=", 1)
    V = compressible_set(M, config.c, n)
    r.check("mu([K(s) <= |s|-c]) <= 2^-c", V.measure(), "<=", Fraction(1, 1 << config.c))
    r.outputs["compressible"] = [io.format_bits(s) for s in V.generators]
    r.outputs["class"] = io.format_level(deficiency_class(M, config.c, n))


def _dense_inputs(text: str, need_tree: bool):
    sec = io.parse_sections(text, ("d", "E", "T"), ("d", "T") if need_tree else ("d",))
    d = io.parse_ldf(sec["d"][0], no=sec["d"][1])
    E = io.parse_level(*sec["E"]) if "E" in sec else None
    T = io.parse_tree(*sec["T"]) if "T" in sec else None
    return d, E, T


def cmd_dense(config: ExperimentConfig, r: Report):
    d, E, T = _dense_inputs(_read(config), need_tree=False)
    target = E if E is not None else T
    if target is None:
        raise ParseError("dense needs an 'E:' or 'T:' section")
    st = dense_status(target, d)
    r.outputs["weak"] = st.weak
    r.outputs["dense"] = st.dense
    r.outputs["max_slack"] = None if st.max_slack is None else io.format_rational(st.max_slack)


def _densext_rows(r: Report, d: LDF, E: LevelSet, T: FinTree, prefix: str = "") -> LDF:
    ext = dense_ext(d, E, T)
    r.flag(prefix + "e <= d", ext.extends(d))
    r.check(prefix + "slack of T over e > 0", dense_status(T, ext).max_slack, ">", 0)
    return ext


def cmd_densext(config: ExperimentConfig, r: Report):
    d, E, T = _dense_inputs(_read(config), need_tree=True)
    if E is None:
        raise ParseError("densext needs an 'E:' section")
    r.outputs["e"] = io.format_ldf(_densext_rows(r, d, E, T))


def _condense_rows(r: Report, p, n: int, prefix: str = ""):
    q = condense(p, n)
    lhs, rhs = condensation_gap(q, n)
    r.check(prefix + "max(1 - mu_tau(T_q)) < min(1 - d_q)/(n+1)", lhs, "<", rhs)
    r.flag(prefix + "q extends p", q.extends(p))
    return q


def cmd_condense(config: ExperimentConfig, r: Report):
    config.need("n")
    p = io.parse_condition(_read(config))
    r.outputs["delta"] = io.format_rational(choose_delta(p))
    try:
        q = _condense_rows(r, p, config.n)
    except InsufficientDepth as exc:
        r.outputs["outcome"] = "insufficient depth"
        r.outputs["detail"] = str(exc)
        return
    r.outputs["q"] = io.format_condition(q).splitlines()


def _branch_rows(r: Report, p, prefix: str = ""):
    q = branch(p)
    r.flag(prefix + "q extends p", q.extends(p))
    for s in p.F.sorted():
        r.check(f"{prefix}extensions of {io.format_bits(s)} in F_q", len(q.F.above(s)), ">=", 2)
    return q


def cmd_branch(config: ExperimentConfig, r: Report):
    p = io.parse_condition(_read(config))
    r.outputs["q"] = io.format_condition(_branch_rows(r, p)).splitlines()


# sweeps


def _count(config: ExperimentConfig, default: int) -> int:
    return default if config.count is None else config.count


def sweep_divergence(config: ExperimentConfig, r: Report):
    k_max = 12 if config.k is None else config.k
    for k in range(k_max + 1):
        for e in range(k):
            for n in range(k - e - 2):
                lhs, rhs, _ = counting_inequality(k, e, n)
                r.check(f"k={k} e={e} n={n}", lhs, "<", rhs)


def sweep_partition(config: ExperimentConfig, r: Report, rng: random.Random):
    for i in range(_count(config, 100)):
        _partition_rows(r, *gen.random_h_family(rng), prefix=f"case {i}: ")


def sweep_kernel(config: ExperimentConfig, r: Report, rng: random.Random):
    for i in range(_count(config, 100)):
        H, _ = gen.random_hypergraph(rng)
        _kernel_rows(r, H, prefix=f"case {i}: ")


def sweep_fatness(config: ExperimentConfig, r: Report, rng: random.Random):
    for i in range(_count(config, 100)):
        H, k = gen.random_hypergraph(rng)
        _fatness_rows(r, H, k, prefix=f"case {i} (k={k}): ")


def sweep_light(config: ExperimentConfig, r: Report, rng: random.Random):
    for i in range(_count(config, 100)):
        H, k = gen.random_hypergraph(rng)
        _light_rows(r, H, k, prefix=f"case {i} (k={k}): ")


def sweep_cover(config: ExperimentConfig, r: Report, rng: random.Random):
    ks = [config.k] if config.k is not None else [2, 4, 8]
    epss = [config.eps] if config.eps is not None else [Fraction(1, 4), Fraction(1, 2)]
    for i in range(_count(config, 50)):
        Phi = gen.random_expander(rng)
        for k in ks:
            for eps in epss:
                _cover_rows(r, Phi, k, eps, prefix=f"case {i} (k={k}, eps={eps}): ")


def sweep_difference(config: ExperimentConfig, r: Report, rng: random.Random):
    k_max = 2 if config.k is None else config.k
    for i in range(_count(config, 50)):
        _difference_rows(r, gen.random_expander(rng), k_max, prefix=f"case {i}: ")


def sweep_hitcost(config: ExperimentConfig, r: Report, rng: random.Random):
    for i in range(_count(config, 100)):
        _hitcost_rows(r, gen.random_hitting_instance(rng), prefix=f"case {i}: ")


def sweep_deficiency(config: ExperimentConfig, r: Report, rng: random.Random):
    cs = [config.c] if config.c is not None else [0, 1, 2, 3]
    for i in range(_count(config, 50)):
        M = gen.random_machine(rng)
        r.check(f"case {i}: Kraft sum <= 1", M.kraft_sum(), "<=", 1)
        n = max((len(o) for o in M.outputs()), default=0)
        for c in cs:
            mass = compressible_set(M, c, n).measure()
            r.check(f"case {i} (c={c}): mu([K(s) <= |s|-c]) <= 2^-c", mass, "<=", Fraction(1, 1 << c))


def sweep_densext(config: ExperimentConfig, r: Report, rng: random.Random):
    for i in range(_count(config, 100)):
        _densext_rows(r, *gen.random_dense_triple(rng), prefix=f"case {i}: ")


def sweep_condense(config: ExperimentConfig, r: Report, rng: random.Random):
    ns = [config.n] if config.n is not None else [1, 2, 3]
    for i in range(_count(config, 50)):
        p = gen.random_condition(rng)
        for n in ns:
            _condense_rows(r, p, n, prefix=f"case {i} (n={n}): ")
        _branch_rows(r, p, prefix=f"case {i} branch: ")


SWEEPS = {
    "divergence": sweep_divergence,
    "partition": sweep_partition,
    "kernel": sweep_kernel,
    "fatness": sweep_fatness,
    "light": sweep_light,
    "cover": sweep_cover,
    "difference": sweep_difference,
    "hitcost": sweep_hitcost,
    "deficiency": sweep_deficiency,
    "densext": sweep_densext,
    "condense": sweep_condense,
}

COMMANDS = {
    "measure": cmd_measure,
    "kernel": cmd_kernel,
    "fatness": cmd_fatness,
    "light": cmd_light,
    "cover": cmd_cover,
    "difference": cmd_difference,
    "hitcost": cmd_hitcost,
    "robustness": cmd_robustness,
    "costtree": cmd_costtree,
    "partition": cmd_partition,
    "deficiency": cmd_deficiency,
    "dense": cmd_dense,
    "densext": cmd_densext,
    "condense": cmd_condense,
    "branch": cmd_branch,
}


def run(config: ExperimentConfig) -> Report:
    """Execute one command (or ``sweep``) and return its report."""
    _validate(config)
    if config.command == "sweep":
        return sweep(config)
    handler = COMMANDS.get(config.command)
    if handler is None:
        raise PreconditionError(f"unknown command {config.command!r}")
    report = Report(config.command, config.params())
    handler(config, report)
    return report


def sweep(config: ExperimentConfig) -> Report:
    """Seeded parameter sweep; rows come out in a fixed order."""
    _validate(config)
    if config.sweep not in SWEEPS:
        raise PreconditionError(f"--sweep must be one of {', '.join(sorted(SWEEPS))}")
    seed = 0 if config.seed is None else config.seed
    params = dict(config.params(), seed=seed)
    report = Report("sweep", params)
    fn = SWEEPS[config.sweep]
    if fn is sweep_divergence:
        fn(config, report)
    else:
        fn(config, report, random.Random(seed))
    return report


def _rational(text: str) -> Fraction:
    try:
        return io.parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathwise", description="Exact checks of finite pathwise-randomness constructions.")
    ap.add_argument("--cmd", required=True, choices=sorted(COMMANDS) + ["sweep"])
    ap.add_argument("--input", help="instance file ('-' for stdin)")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=["json", "tsv"], default="json")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--sweep", choices=sorted(SWEEPS), help="sweep to run with --cmd sweep")
    ap.add_argument("--count", type=int, help="number of seeded cases in a sweep")
    ap.add_argument("--k", type=int)
    ap.add_argument("--eps", type=_rational)
    ap.add_argument("--c", type=int)
    ap.add_argument("--n", type=int)
    ap.add_argument("--e", type=int)
    ap.add_argument("--q", type=_rational)
    ap.add_argument("--depth", type=int)
    ap.add_argument("-v", "--verbose", action="store_true", help="log covering-loop events to stderr")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    fields = {k: getattr(args, k) for k in ExperimentConfig.__dataclass_fields__ if k != "command"}
    config = ExperimentConfig(command=args.cmd, **fields)
    try:
        report = run(config)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MissingInput as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (PreconditionError, InsufficientDepth) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    text = report.dumps(config.format)
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
