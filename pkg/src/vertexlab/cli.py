#!/usr/bin/env python3
"""
CLI entry point for vertexlab
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .arith import format_rational
from .classical import det_analog, det_analog_nontrivial, eval_classical, pfaffian
from .config import LOG_LEVELS, STRATEGIES, EngineConfig, load_config
from .corrections import DecouplingError
from .freefield import VPoly, circle as ff_circle, configure_engine
from .freefield.engine import EngineError
from .logging import RunLedger, configure_logging
from .models.schemas import RemainderReport
from .parser import ParseError, format_poly, parse_expr, poly_to_json
from .wbasis import FAMILIES, WPoly, get_family, mw_matrix, walgebra

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

REMAINDER_METHODS = ("closed", "recursive", "r1", "limit", "orth", "free")


class UsageError(ValueError):
    pass


def _int_list(text: Optional[str]) -> Optional[Tuple[int, ...]]:
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"Expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=sorted(FAMILIES), default="sp", help="Realization family (default: sp)")
    common.add_argument("--n", type=int, default=1, help="Family rank (default: 1)")
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--max-weight", type=int, help="Largest accepted weight (default: 16)")
    common.add_argument("--memo-limit", type=int, help="Memo entries per engine table (default: 2000000)")
    common.add_argument("--cache-dir", help="Directory for cached relations and the run ledger")
    common.add_argument("--threads", type=int, help="Worker threads for realizations (default: 1)")
    common.add_argument("--strategy", choices=STRATEGIES, help="Normal ordering strategy (default: canonical)")
    common.add_argument("--format", choices=["text", "json"], default="text", help="Output format (default: text)")
    common.add_argument("--progress", action="store_true", default=None, help="Show progress bars")
    common.add_argument("--log-level", choices=LOG_LEVELS, help="Logging level (default: warning)")

    parser = argparse.ArgumentParser(prog="vertexlab", description="Exact free field vertex algebra engine")
    verbs = parser.add_subparsers(dest="command", required=True)

    p = verbs.add_parser("ope", parents=[common], help="All non-negative circle products a(n)b")
    p.add_argument("a")
    p.add_argument("b")

    p = verbs.add_parser("circle", parents=[common], help="The circle product a(n)b")
    p.add_argument("a")
    p.add_argument("index", type=int)
    p.add_argument("b")

    p = verbs.add_parser("wick", parents=[common], help="The Wick product :ab:")
    p.add_argument("a")
    p.add_argument("b")

    p = verbs.add_parser("realize", parents=[common], help="Realize an Omega expression in free fields")
    p.add_argument("expr")

    p = verbs.add_parser("remainder", parents=[common], help="Remainder of a Pfaffian or determinant-analogue relation")
    p.add_argument("--indices", help="Symplectic index list, e.g. 0,1,2,3")
    p.add_argument("--I", dest="first", help="Even index list of the orthogonal case")
    p.add_argument("--J", dest="second", help="Odd index list of the orthogonal case")
    p.add_argument("--method", choices=REMAINDER_METHODS, default="closed", help="Evaluation method (default: closed)")

    p = verbs.add_parser("relation", parents=[common], help="Quantum-correct a classical relation")
    p.add_argument("--indices", help="Pfaffian index list (sp)")
    p.add_argument("--I", dest="first", help="First list of the determinant analogue (o)")
    p.add_argument("--J", dest="second", help="Second list of the determinant analogue (o)")

    p = verbs.add_parser("decouple", parents=[common], help="Decoupling relations up to W^through")
    p.add_argument("--through", type=int, help="Largest generator index (default: first decoupled one)")

    verbs.add_parser("verify-appendix", parents=[common], help="Check the Osp(1,2) weight 16 reference relation")
    verbs.add_parser("selftest", parents=[common], help="Run the invariant suite")
    return parser


def _config(args: argparse.Namespace) -> EngineConfig:
    base = load_config(args.config)
    return base.merged({
        "max_weight": args.max_weight,
        "memo_limit": args.memo_limit,
        "cache_dir": args.cache_dir,
        "threads": args.threads,
        "strategy": args.strategy,
        "progress": args.progress,
        "log_level": args.log_level,
    })


def _emit(args: argparse.Namespace, text: str, payload) -> str:
    output = json.dumps(payload, indent=2, sort_keys=True) if args.format == "json" else text
    print(output)
    return output


def _check_weight(p, config: EngineConfig) -> None:
    weight2 = max((sum(g.weight2 for g in w) for w in p.terms), default=0)
    if weight2 > 2 * config.max_weight:
        raise UsageError(f"Input weight {weight2 / 2} exceeds --max-weight {config.max_weight}")


def _products(args, config) -> Tuple[object, object, Callable]:
    family = get_family(args.family, args.n)
    a = parse_expr(args.a, family.central_charge)
    b = parse_expr(args.b, family.central_charge)
    if type(a) is not type(b) or not isinstance(a, (VPoly, WPoly)):
        raise UsageError("Both operands must be free field or Omega expressions")
    _check_weight(a, config)
    _check_weight(b, config)
    if isinstance(a, VPoly):
        return a, b, ff_circle
    return a, b, walgebra(family.central_charge).circle


def cmd_ope(args, config) -> Tuple[int, str]:
    a, b, circle = _products(args, config)
    top = (max((sum(g.weight2 for g in w) for w in a.terms), default=0)
           + max((sum(g.weight2 for g in w) for w in b.terms), default=0) - 2) // 2
    poles = {n: circle(a, n, b) for n in range(top + 1)}
    poles = {n: p for n, p in poles.items() if p}
    text = "\n".join(f"({n}): {format_poly(p)}" for n, p in poles.items()) or "0"
    return EXIT_OK, _emit(args, text, {str(n): poly_to_json(p) for n, p in poles.items()})


def cmd_circle(args, config) -> Tuple[int, str]:
    a, b, circle = _products(args, config)
    result = circle(a, args.index, b)
    return EXIT_OK, _emit(args, format_poly(result), poly_to_json(result))


def cmd_wick(args, config) -> Tuple[int, str]:
    a, b, circle = _products(args, config)
    result = circle(a, -1, b)
    return EXIT_OK, _emit(args, format_poly(result), poly_to_json(result))


def cmd_realize(args, config) -> Tuple[int, str]:
    family = get_family(args.family, args.n)
    expr = parse_expr(args.expr, family.central_charge)
    if not isinstance(expr, WPoly):
        raise UsageError("realize expects an Omega expression")
    _check_weight(expr, config)
    result = family.realize(expr, threads=config.threads)
    return EXIT_OK, _emit(args, format_poly(result), poly_to_json(result))


def cmd_remainder(args, config) -> Tuple[int, str]:
    from . import remainder

    indices = _int_list(args.indices)
    first, second = _int_list(args.first), _int_list(args.second)
    if args.method in ("orth", "free"):
        if first is None or second is None:
            raise UsageError(f"--method {args.method} needs --I and --J")
        n = len(first) - 1
        if args.method == "orth":
            value = remainder.rn_orth_recursive(n, first, second)
        else:
            value = remainder.orth_remainder(n, first, second)
        lists = [list(first), list(second)]
    else:
        if indices is None:
            raise UsageError(f"--method {args.method} needs --indices")
        lists = [list(indices)]
        if args.method == "limit":
            value = remainder.limit_remainder(len(indices) // 2, indices)
        else:
            n = len(indices) // 2 - 1
            value = {
                "closed": remainder.rn_sym_closed,
                "recursive": remainder.rn_sym_recursive,
                "r1": lambda _, i: remainder.r1_sym(i),
            }[args.method](n, indices)
    report = RemainderReport(family=args.family, n=args.n, method=args.method, indices=lists, value=format_rational(value))
    return EXIT_OK, _emit(args, report.value, report.model_dump())


def _open_cache(config: EngineConfig):
    if not config.cache_dir:
        return None
    from .cache import RelationCache
    return RelationCache(config.cache_dir)


def cmd_relation(args, config) -> Tuple[int, str]:
    from .cache import relation_document
    from .corrections import build_relation

    family = get_family(args.family, args.n)
    indices = _int_list(args.indices)
    first, second = _int_list(args.first), _int_list(args.second)
    if first is not None or second is not None:
        if family.key != "o" or first is None or second is None:
            raise UsageError("--I and --J go together and only with the orthogonal family")
        classical = det_analog(first, second, family.n)
        index_data = (first, second)
    elif indices is not None:
        if family.key == "o":
            raise UsageError("The orthogonal family takes --I and --J, not --indices")
        classical = pfaffian(indices, family.n)
        index_data = (indices,)
    else:
        classical = family.minimal_relation()
        index_data = family.minimal_indices()
    if not classical:
        raise UsageError("The classical relation is zero for these indices")
    _check_weight(classical, config)

    cache = _open_cache(config)
    result = cache.get_relation(family.key, family.n, classical, config.strategy) if cache else None
    if result is None:
        result = build_relation(
            family, classical, indices=index_data, strategy=config.strategy,
            threads=config.threads, progress=config.progress,
        )
        if cache:
            cache.store_relation(result, classical)
    document = relation_document(result)
    remainder = document.remainder if document.remainder is not None else "undefined"
    text = "\n".join(
        [f"family={family.name} weight={result.weight} passes={result.passes} remainder={remainder}"]
        + [f"[{d}] {format_poly(p)}" for d, p in sorted(result.by_degree.items(), reverse=True)]
    )
    return EXIT_OK, _emit(args, text, document.model_dump())


def cmd_decouple(args, config) -> Tuple[int, str]:
    from .cache import decoupling_document
    from .corrections import decoupling_chain

    family = get_family(args.family, args.n)
    through = args.through if args.through is not None else family.first_decoupled()
    if through + 1 > config.max_weight:
        raise UsageError(f"W^{through} exceeds --max-weight {config.max_weight}")
    chain = decoupling_chain(
        family, through, cache=_open_cache(config), strategy=config.strategy,
        threads=config.threads, progress=config.progress,
    )
    text = "\n".join(f"W{m} = {format_poly(d.expression)}" for m, d in sorted(chain.items())) or "no decoupling"
    payload = {str(m): decoupling_document(d).model_dump() for m, d in sorted(chain.items())}
    return EXIT_OK, _emit(args, text, payload)


def cmd_verify_appendix(args, config) -> Tuple[int, str]:
    from .corrections import verify_appendix

    report = verify_appendix(threads=config.threads, progress=config.progress)
    text = f"kernel_ok={str(report.kernel_ok).lower()} remainder={report.remainder}"
    if report.residual_terms:
        text += "\nresidual terms by degree: " + ", ".join(f"{d}: {c}" for d, c in report.residual_terms.items())
    output = _emit(args, text, report.model_dump())
    return (EXIT_OK if report.ok else EXIT_FAILED), output


def selftest_checks() -> List[Tuple[str, Callable[[], bool]]]:
    """Fast invariant checks run by ``selftest``."""
    import random
    from itertools import combinations

    from . import remainder
    from .corrections import build_relation, decoupling_chain, extract_decoupling
    from .freefield.identities import identity_failures, random_element

    def closed_vs_recursive() -> bool:
        for n in (1, 2):
            for indices in combinations(range(8), 2 * n + 2):
                if (n + 1 + sum(indices)) % 2 == 0:
                    if remainder.rn_sym_closed(n, indices) != remainder.rn_sym_recursive(n, indices):
                        return False
        return True

    def swap_symmetry() -> bool:
        for indices in [(0, 1, 2, 3), (0, 3, 4, 5), (0, 1, 2, 3, 4, 5)]:
            n = len(indices) // 2 - 1
            swapped = [indices[k ^ 1] for k in range(len(indices))]
            if remainder.rn_sym_recursive(n, swapped) != (-1) ** (n + 1) * remainder.rn_sym_recursive(n, indices):
                return False
        return True

    def mw_minors() -> bool:
        for m in range(1, 5):
            for w in range(1, 5):
                matrix = mw_matrix(m, w)
                if not matrix.determinant():
                    return False
                for i in range(m):
                    for j in range(m):
                        if matrix.submatrix([i, i + 1], [j, j + 1]).determinant() <= 0:
                            return False
        return True

    def classical_kernels() -> bool:
        sp = get_family("sp", 1)
        o = get_family("o", 1)
        for indices in combinations(range(6), 4):
            if eval_classical(pfaffian(indices, 1), sp, 5):
                return False
        for first in [(0, 0), (0, 2), (1, 2)]:
            for second in [(1, 1), (1, 3), (0, 3)]:
                if det_analog_nontrivial(first, second, 1) and eval_classical(det_analog(first, second, 1), o, 3):
                    return False
        return True

    def sp1_relation() -> bool:
        result = build_relation(get_family("sp", 1), pfaffian((0, 1, 2, 3), 1))
        return result.remainder == Fraction(1, 6)

    def o1_decoupling() -> bool:
        family = get_family("o", 1)
        result = build_relation(family, det_analog((0, 0), (1, 1), 1))
        return result.remainder == Fraction(-7, 3) and extract_decoupling(result, family).m == 3

    def o1_chain() -> bool:
        family = get_family("o", 1)
        chain = decoupling_chain(family, 7)
        return sorted(chain) == [3, 5, 7] and not any(family.realize(d.relation()) for d in chain.values())

    def random_identities() -> bool:
        rng = random.Random(0)
        for key in ("sp", "o", "osp"):
            fields = get_family(key, 1).free_fields()
            for _ in range(10):
                a, b = random_element(rng, fields), random_element(rng, fields)
                failures = identity_failures(a, b)
                if failures:
                    logger.error("%s(1) identities failed on %s, %s: %s", key, a, b, failures)
                    return False
        return True

    return [
        ("closed vs recursive remainders", closed_vs_recursive),
        ("even/odd swap sign", swap_symmetry),
        ("limit of R_2(0,1,2,3,x,x+1)", lambda: remainder.limit_remainder(2, (0, 1, 2, 3)) == Fraction(1, 24)),
        ("M^w determinants and minors", mw_minors),
        ("classical kernels", classical_kernels),
        ("Sp(1) minimal relation", sp1_relation),
        ("O(1) minimal relation and W3", o1_decoupling),
        ("O(1) decouplings through W7", o1_chain),
        ("random vertex algebra identities", random_identities),
    ]


def cmd_selftest(args, config) -> Tuple[int, str]:
    rows = []
    failed = 0
    for name, check in selftest_checks():
        try:
            ok = bool(check())
        except (EngineError, ValueError) as exc:
            logger.error("%s raised %s", name, exc)
            ok = False
        failed += not ok
        rows.append((name, ok))
    width = max(len(name) for name, _ in rows)
    text = "\n".join(f"{name.ljust(width)}  {'PASS' if ok else 'FAIL'}" for name, ok in rows)
    output = _emit(args, text, {name: ok for name, ok in rows})
    return (EXIT_FAILED if failed else EXIT_OK), output


COMMANDS: Dict[str, Callable] = {
    "ope": cmd_ope,
    "circle": cmd_circle,
    "wick": cmd_wick,
    "realize": cmd_realize,
    "remainder": cmd_remainder,
    "relation": cmd_relation,
    "decouple": cmd_decouple,
    "verify-appendix": cmd_verify_appendix,
    "selftest": cmd_selftest,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(config.log_level)
    configure_engine(config.memo_limit)

    ledger = RunLedger(config.cache_dir)
    ledger.start()
    output = None
    try:
        code, output = COMMANDS[args.command](args, config)
    except (ParseError, UsageError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except (EngineError, DecouplingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_FAILED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        code = EXIT_FAILED
    ledger.record(args.command, vars(args), code, output)
    return code


if __name__ == "__main__":
    sys.exit(main())
