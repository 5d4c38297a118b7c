"""Command-line front end.

Three subcommands: ``verify`` replays a module's invariant suite and
reports per-property counts, ``eval`` applies one public operation to a
JSON payload and prints the result as JSON, ``dot`` renders a tree or a
degree poset as deterministic DOT.  Exit codes: 0 pass, 1 operation or
property failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bitseq import (bits_str, column, join_family, join_pair, pair_index,
                     pair_split, split_pair, width)
from .conditions import (condition_from_json, iter_amalgamate, iter_equal,
                         iter_leq, iter_leq_n, iter_restrict, prod_amalgamate,
                         prod_extends, prod_leq, prod_restrict)
from .degrees import (DegreePoset, Ordinal2, ScPattern, TowerCensus,
                      TowerRecipe, census_decode, census_encode, poset_dot,
                      sc_census_decode, sc_census_encode, sc_decode,
                      sc_pattern, sc_schedule, tower_degrees)
from .errors import EngineError, InputError
from .implicit import (FinStructure, eval_formula, formula_size,
                       formula_text, free_vars, imp_levels, implicit_subsets,
                       implicitly_defined_by, levels_to_json, parse_formula,
                       vn_levels)
from .suites import DEFAULT_SEED, SUITE_NAMES, Bounds, run_suite, suite_report
from .trees import SkeletonTree, amalgamate, leq_n, subtree_leq, tree_dot


# -- payload field access -----------------------------------------------------

def _field(payload, name):
    if not isinstance(payload, dict):
        raise InputError(f"{name}: payload is not a JSON object")
    if name not in payload:
        raise InputError(f"{name}: missing field")
    return payload[name]


def _int_field(payload, name, minimum=None):
    v = _field(payload, name)
    if not isinstance(v, int) or isinstance(v, bool):
        raise InputError(f"{name}: expected an integer")
    if minimum is not None and v < minimum:
        raise InputError(f"{name}: expected an integer >= {minimum}")
    return v


def _bits_field(payload, name):
    v = _field(payload, name)
    if not isinstance(v, str) or any(c not in "01" for c in v):
        raise InputError(f"{name}: expected a string of 0s and 1s")
    return tuple(int(c) for c in v)


def _int_list_field(payload, name):
    v = _field(payload, name)
    if not isinstance(v, list) or any(
            not isinstance(c, int) or isinstance(c, bool) for c in v):
        raise InputError(f"{name}: expected a list of integers")
    return v


def _tree_field(payload, name):
    v = _field(payload, name)
    try:
        return SkeletonTree.from_json(v)
    except EngineError:
        raise
    except (TypeError, ValueError, KeyError, AttributeError) as e:
        raise InputError(f"{name}: not a tree presentation ({e})")


def _condition_field(payload, name):
    v = _field(payload, name)
    try:
        return condition_from_json(v)
    except EngineError:
        raise
    except (TypeError, ValueError, KeyError, AttributeError) as e:
        raise InputError(f"{name}: not a condition ({e})")


def _mode_field(payload, name="mode"):
    v = payload.get("mode", "column") if isinstance(payload, dict) else None
    if v not in ("column", "pairwise"):
        raise InputError(f"{name}: expected \"column\" or \"pairwise\"")
    return v


def _index(v, name):
    if isinstance(v, bool) or not isinstance(v, (int, str, list)):
        raise InputError(f"{name}: indices are integers, strings, or lists")
    if isinstance(v, list):
        return tuple(_index(c, name) for c in v)
    return v


def _sbar_field(payload, name="sbar"):
    v = _field(payload, name)
    if not isinstance(v, list):
        raise InputError(f"{name}: expected a list of indices")
    return [_index(c, name) for c in v]


def _formula_field(payload, name="formula"):
    v = _field(payload, name)
    if not isinstance(v, str):
        raise InputError(f"{name}: expected a formula string")
    return parse_formula(v)


def _structure_field(payload, name="universe"):
    return FinStructure(_int_list_field(payload, name))


def _census_field(payload, name="census"):
    v = _field(payload, name)
    entries = v.get("entries") if isinstance(v, dict) else v
    if not isinstance(entries, list):
        raise InputError(f"{name}: expected an entry list")
    out = {}
    for i, entry in enumerate(entries):
        try:
            (a, b), verdict = entry
            out[Ordinal2(a, b)] = verdict
        except (TypeError, ValueError):
            raise InputError(f"{name}[{i}]: expected [[a, b], verdict]")
    return TowerCensus(out)


# -- result encoding ------------------------------------------------------------

def _encode(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, str)):
        return value
    if isinstance(value, tuple) and all(v in (0, 1) for v in value):
        return bits_str(value)
    if isinstance(value, Ordinal2):
        return value.to_json()
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, (frozenset, set)):
        return sorted(_encode(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in sorted(value.items(),
                                                      key=lambda kv: str(kv[0]))}
    raise InputError(f"cannot encode {type(value).__name__}")


# -- operation adapters -----------------------------------------------------------

def _op_pair_index(p):
    return pair_index(_int_field(p, "m", 0), _int_field(p, "n", 0))


def _op_pair_split(p):
    return list(pair_split(_int_field(p, "k", 0)))


def _op_join_pair(p):
    return bits_str(join_pair(_bits_field(p, "x"), _bits_field(p, "y")))


def _op_split_pair(p):
    x, y = split_pair(_bits_field(p, "sigma"))
    return [bits_str(x), bits_str(y)]


def _op_column(p):
    return bits_str(column(_bits_field(p, "sigma"), _int_field(p, "n", 0)))


def _op_join_family(p):
    cols = _field(p, "columns")
    if not isinstance(cols, list):
        raise InputError("columns: expected a list of 0/1 strings")
    xs = [_bits_field({"columns": c}, "columns") for c in cols]
    return bits_str(join_family(xs, _int_field(p, "length", 0)))


def _op_width(p):
    return width(_int_field(p, "k", 0))


def _op_rt(p):
    return bits_str(_tree_field(p, "tree").rt(_bits_field(p, "sigma")))


def _op_stem(p):
    return bits_str(_tree_field(p, "tree").stem())


def _op_restrict_cell(p):
    return _tree_field(p, "tree").restrict_cell(_bits_field(p, "sigma"))


def _op_restrict_node(p):
    return _tree_field(p, "tree").restrict_node(_bits_field(p, "tau"))


def _op_subtree_leq(p):
    return subtree_leq(_tree_field(p, "sub"), _tree_field(p, "sup"))


def _op_leq_n(p):
    return leq_n(_tree_field(p, "sub"), _tree_field(p, "sup"),
                 _int_field(p, "n", 0))


def _op_amalgamate(p):
    return amalgamate(_tree_field(p, "tree"), _bits_field(p, "sigma"),
                      _tree_field(p, "graft"))


def _op_iter_restrict(p):
    return iter_restrict(_condition_field(p, "condition"),
                         _bits_field(p, "sigma"), _mode_field(p))


def _op_iter_leq(p):
    return iter_leq(_condition_field(p, "q"), _condition_field(p, "p"))


def _op_iter_leq_n(p):
    return iter_leq_n(_condition_field(p, "q"), _condition_field(p, "p"),
                      _int_field(p, "n", 0), _mode_field(p))


def _op_iter_equal(p):
    return iter_equal(_condition_field(p, "q"), _condition_field(p, "p"))


def _op_iter_amalgamate(p):
    return iter_amalgamate(_condition_field(p, "p"), _bits_field(p, "sigma"),
                           _condition_field(p, "q"), _mode_field(p))


def _op_prod_restrict(p):
    return prod_restrict(_condition_field(p, "product"),
                         _bits_field(p, "sigma"), _sbar_field(p))


def _op_prod_extends(p):
    return prod_extends(_condition_field(p, "q"), _condition_field(p, "p"))


def _op_prod_leq(p):
    return prod_leq(_condition_field(p, "q"), _condition_field(p, "p"),
                    _int_field(p, "n", 0), _sbar_field(p))


def _op_prod_amalgamate(p):
    return prod_amalgamate(_condition_field(p, "p"), _bits_field(p, "sigma"),
                           _sbar_field(p), _condition_field(p, "q"))


def _kinds_field(p, name="kinds"):
    v = _field(p, name)
    if not isinstance(v, list) or any(k not in ("single", "pair") for k in v):
        raise InputError(f"{name}: expected a list of \"single\"/\"pair\"")
    return tuple(v)


def _op_tower_degrees(p):
    poset = tower_degrees(TowerRecipe(_kinds_field(p)))
    return {"nodes": list(poset.nodes), "edges": [list(e)
                                                  for e in poset.edges]}


def _op_sc_schedule(p):
    recipe = sc_schedule(_int_field(p, "n", 0), _bits_field(p, "g"),
                         _int_field(p, "length", 1))
    return {"kinds": list(recipe.kinds)}


def _op_sc_pattern(p):
    return {"levels": list(sc_pattern(TowerRecipe(_kinds_field(p))).levels)}


def _op_sc_decode(p):
    v = _field(p, "pattern")
    levels = v.get("levels") if isinstance(v, dict) else v
    if not isinstance(levels, list) or any(
            lv not in ("line", "diamond") for lv in levels):
        raise InputError("pattern: expected a list of \"line\"/\"diamond\"")
    n, g = sc_decode(ScPattern(tuple(levels)))
    return {"n": n, "g": bits_str(g)}


def _op_census_encode(p):
    entries = _field(p, "x")
    if not isinstance(entries, list):
        raise InputError("x: expected a list of [a, n, bit] triples")
    x = {}
    for i, entry in enumerate(entries):
        try:
            a, n, bit = entry
            x[Ordinal2(a, n)] = bit
        except (TypeError, ValueError):
            raise InputError(f"x[{i}]: expected [a, n, bit]")
    return census_encode(x, _int_field(p, "limit_bound", 1),
                         _int_field(p, "n_bound", 1))


def _op_census_decode(p):
    x = census_decode(_census_field(p))
    return [[h.a, h.b, bit] for h, bit in sorted(x.items())]


def _op_sc_census_encode(p):
    out = sc_census_encode(_bits_field(p, "h"),
                           _int_field(p, "alpha_bound", 2))
    return {str(n): verdict for n, verdict in sorted(out.items())}


def _op_sc_census_decode(p):
    v = _field(p, "census")
    if not isinstance(v, dict):
        raise InputError("census: expected an object of level -> verdict")
    try:
        census = {int(k): verdict for k, verdict in v.items()}
    except ValueError:
        raise InputError("census: keys must be integer levels")
    return bits_str(sc_census_decode(census))


def _op_parse(p):
    f = _formula_field(p)
    return {"text": formula_text(f), "size": formula_size(f),
            "free": sorted(free_vars(f))}


def _op_eval_formula(p):
    return eval_formula(_formula_field(p), _structure_field(p),
                        _int_list_field(p, "subset"),
                        _int_list_field(p, "params")
                        if "params" in p else ())


def _op_implicitly_defined_by(p):
    got = implicitly_defined_by(_structure_field(p), _formula_field(p),
                                _int_list_field(p, "params")
                                if "params" in p else ())
    return None if got is None else sorted(got)


def _op_implicit_subsets(p):
    fam = implicit_subsets(_structure_field(p), _int_field(p, "budget", 0))
    return sorted(sorted(s) for s in fam)


def _op_imp_levels(p):
    return levels_to_json(imp_levels(_int_field(p, "n", 0),
                                     _int_field(p, "budget", 0)))


def _op_vn_levels(p):
    return levels_to_json(vn_levels(_int_field(p, "n", 0)))


_OPS = {
    "pair_index": _op_pair_index, "pair_split": _op_pair_split,
    "join_pair": _op_join_pair, "split_pair": _op_split_pair,
    "column": _op_column, "join_family": _op_join_family, "width": _op_width,
    "rt": _op_rt, "stem": _op_stem, "restrict_cell": _op_restrict_cell,
    "restrict_node": _op_restrict_node, "subtree_leq": _op_subtree_leq,
    "leq_n": _op_leq_n, "amalgamate": _op_amalgamate,
    "iter_restrict": _op_iter_restrict, "iter_leq": _op_iter_leq,
    "iter_leq_n": _op_iter_leq_n, "iter_equal": _op_iter_equal,
    "iter_amalgamate": _op_iter_amalgamate,
    "prod_restrict": _op_prod_restrict, "prod_extends": _op_prod_extends,
    "prod_leq": _op_prod_leq, "prod_amalgamate": _op_prod_amalgamate,
    "tower_degrees": _op_tower_degrees, "sc_schedule": _op_sc_schedule,
    "sc_pattern": _op_sc_pattern, "sc_decode": _op_sc_decode,
    "census_encode": _op_census_encode, "census_decode": _op_census_decode,
    "sc_census_encode": _op_sc_census_encode,
    "sc_census_decode": _op_sc_census_decode,
    "parse": _op_parse, "eval": _op_eval_formula,
    "implicitly_defined_by": _op_implicitly_defined_by,
    "implicit_subsets": _op_implicit_subsets,
    "imp_levels": _op_imp_levels, "vn_levels": _op_vn_levels,
}


# -- subcommands ------------------------------------------------------------------

def _load_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_verify(args):
    bounds = Bounds(seed=args.seed, depth=args.depth, budget=args.budget,
                    n_bound=args.n_bound)
    results = run_suite(args.suite, bounds)
    for r in results:
        line = f"{'pass' if r.passed else 'FAIL'}  {r.name} ({r.cases} cases)"
        if not r.passed:
            line += f": {r.failed} failed, e.g. {r.samples[0]}"
        print(line)
    report = suite_report(args.suite, results)
    if args.json_report:
        with open(args.json_report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if report["passed"] else 1


def cmd_eval(args, parser):
    if args.op not in _OPS:
        parser.error(f"unknown operation {args.op!r}; "
                     f"known: {', '.join(sorted(_OPS))}")
    try:
        payload = _load_json(args.input)
    except (OSError, json.JSONDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 1
    try:
        result = _OPS[args.op](payload)
    except EngineError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    print(json.dumps(_encode(result), sort_keys=True))
    return 0


def cmd_dot(args, parser):
    try:
        obj = _load_json(args.object)
    except (OSError, json.JSONDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 1
    try:
        if isinstance(obj, dict) and "skeleton" in obj:
            text = tree_dot(SkeletonTree.from_json(obj))
        elif isinstance(obj, dict) and "kinds" in obj:
            text = poset_dot(tower_degrees(TowerRecipe(_kinds_field(obj))))
        elif isinstance(obj, dict) and "nodes" in obj and "edges" in obj:
            poset = DegreePoset(tuple(obj["nodes"]),
                                tuple(tuple(e) for e in obj["edges"]))
            text = poset_dot(poset)
        else:
            parser.error("object is neither a tree, a recipe, nor a poset")
    except EngineError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def _seed(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sacksforcing",
        description="Verify invariant suites, evaluate operations on JSON "
                    "payloads, and export DOT diagrams.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("suite", choices=SUITE_NAMES + ("all",))
    v.add_argument("--seed", type=_seed, default=DEFAULT_SEED, metavar="N",
                   help="seed for the sampled checks")
    v.add_argument("--depth", type=int, default=2, metavar="N",
                   help="tree enumeration depth")
    v.add_argument("--budget", type=int, default=11, metavar="N",
                   help="formula size budget for the imp suite")
    v.add_argument("--n-bound", type=int, default=4, metavar="N",
                   dest="n_bound", help="base bound for self-coding sweeps")
    v.add_argument("--json-report", metavar="PATH",
                   help="also write the report as JSON")

    e = sub.add_parser("eval", help="apply one operation to a JSON payload")
    e.add_argument("op", metavar="OP")
    e.add_argument("input", metavar="INPUT",
                   help="path to a JSON payload, or - for standard input")

    d = sub.add_parser("dot", help="render a tree or degree poset as DOT")
    d.add_argument("object", metavar="OBJECT",
                   help="path to a JSON tree, recipe, or poset")
    d.add_argument("out", metavar="OUT",
                   help="output path, or - for standard output")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "eval":
        return cmd_eval(args, parser)
    return cmd_dot(args, parser)


def entrypoint():
    sys.exit(main())
