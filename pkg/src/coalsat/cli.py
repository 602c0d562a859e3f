"""Command-line front end.

Prints a single JSON object on standard output.  Exit codes: 0 sat,
1 unsat, 2 unknown, 3 usage or parse error, 4 resource cap exceeded.  With
``--differential`` the exit code is 0 exactly when all algorithms agree.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

import jsonschema

from . import formula as F
from .caching import DEFAULT_CHILD_CAP, Strategy, decide_caching
from .elim import decide_elim
from .errors import ParseError, ResourceLimit
from .generate import GenConfig, parse_corpus, random_corpus
from .hybrid import decide_hybrid, decide_universal, univ_subformulas
from .onestep import SAT, UNKNOWN, UNSAT, get_logic
from .oracle import oracle_run
from .parser import parse
from .semantics import Multigraph, SubdistModel, satisfies_globally
from .worklist import decide_worklist

log = logging.getLogger("coalsat")

EXIT = {SAT: 0, UNSAT: 1, UNKNOWN: 2}
EXIT_USAGE = 3
EXIT_LIMIT = 4

MODEL_SCHEMA = {
    "type": "object",
    "required": ["kind", "states", "edges", "atoms", "nominals"],
    "properties": {
        "kind": {"enum": ["multigraph", "subdist"]},
        "states": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "weight"],
                "properties": {
                    "from": {"type": "integer", "minimum": 0},
                    "to": {"type": "integer", "minimum": 0},
                    "weight": {"type": "string", "pattern": r"^\d+(/\d+)?$"},
                },
                "additionalProperties": False,
            },
        },
        "atoms": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "string"}},
        },
        "nominals": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
    },
    "additionalProperties": False,
}

RESULT_SCHEMA = {
    "type": "object",
    "required": ["verdict"],
    "properties": {
        "verdict": {"enum": [SAT, UNSAT, UNKNOWN]},
        "model": MODEL_SCHEMA,
        "stats": {"type": "object"},
        "oracle": {"type": "object"},
    },
}


def model_to_json(model) -> dict:
    edges = [
        {"from": s, "to": t, "weight": str(Fraction(w))}
        for s, row in enumerate(model.succ) for t, w in sorted(row.items()) if w
    ]
    return {
        "kind": model.kind,
        "states": list(range(model.n)),
        "edges": edges,
        "atoms": {str(s): sorted(model.atoms[s]) for s in range(model.n)},
        "nominals": dict(model.nominals),
    }


def model_from_json(data: dict):
    jsonschema.validate(data, MODEL_SCHEMA)
    n = len(data["states"])
    succ: list = [dict() for _ in range(n)]
    for e in data["edges"]:
        w = Fraction(e["weight"])
        succ[e["from"]][e["to"]] = int(w) if data["kind"] == "multigraph" else w
    atoms = [set(data["atoms"].get(str(s), [])) for s in range(n)]
    cls = Multigraph if data["kind"] == "multigraph" else SubdistModel
    return cls(n, succ, atoms, dict(data["nominals"]))


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coalsat", description="Coalgebraic modal satisfiability under global assumptions.")
    p.add_argument("--logic", choices=["k", "presburger", "prob"], default="k")
    p.add_argument("--algorithm", choices=["elim", "caching", "worklist"], default="elim")
    p.add_argument("--assumption", default="true", help="global assumption (default: true)")
    p.add_argument("--formula", help="formula to satisfy at some state")
    p.add_argument("--hybrid", action="store_true", help="allow nominals and @")
    p.add_argument("--kripke", action="store_true", help="nominals denote Kripke states (multiplicity at most one)")
    p.add_argument("--emit-model", action="store_true")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--budget", type=int, help="cap on children per state, type assignments or solver nodes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--differential", action="store_true", help="compare all three algorithms")
    p.add_argument("--corpus", help="corpus file for --differential ('assumption |- formula' per line)")
    p.add_argument("--count", type=int, default=200, help="random problems when no corpus is given")
    p.add_argument("--oracle-states", type=int, help="also run the brute-force oracle with this many states")
    p.add_argument("--oracle-weight", type=int, default=4, help="oracle weight or denominator bound")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _decider(algorithm: str, budget: int | None):
    cap = budget or DEFAULT_CHILD_CAP
    if algorithm == "elim":
        return lambda psi, phi0, logic: decide_elim(psi, phi0, logic)
    if algorithm == "caching":
        return lambda psi, phi0, logic: decide_caching(psi, phi0, logic, Strategy(child_cap=cap))
    return lambda psi, phi0, logic: decide_worklist(psi, phi0, logic, child_cap=cap)


def _logic(args):
    if args.logic == "prob" and args.budget:
        return get_logic("prob", max_nodes=args.budget)
    return get_logic(args.logic)


def decide(psi, phi0, logic, algorithm: str, hybrid: bool = False, kripke: bool = False,
           budget: int | None = None):
    """Dispatch to the hybrid, universal or plain procedure."""
    has_noms = bool(F.nominals_of(psi) or F.nominals_of(phi0))
    if has_noms and not hybrid:
        raise ValueError("nominals and @ need --hybrid")
    if hybrid:
        return decide_hybrid(psi, phi0, logic, kripke=kripke,
                             max_assignments=budget or 100000)
    run = _decider(algorithm, budget)
    if univ_subformulas(psi) or univ_subformulas(phi0):
        return decide_universal(psi, phi0, logic, run)
    return run(psi, phi0, logic)


def _oracle_json(psi, phi0, logic, args) -> dict:
    out = oracle_run(psi, phi0, logic.model_kind, args.oracle_states,
                     args.oracle_weight, args.oracle_weight)
    res = {"found": out.model is not None, "complete": out.complete}
    if out.model is not None:
        res["model"] = model_to_json(out.model)
    return res


def run_single(args, out) -> int:
    if args.formula is None:
        print("coalsat: --formula is required", file=sys.stderr)
        return EXIT_USAGE
    psi = parse(args.assumption)
    phi0 = parse(args.formula)
    logic = _logic(args)
    v = decide(psi, phi0, logic, args.algorithm, args.hybrid, args.kripke, args.budget)
    result: dict = {"verdict": v.verdict}
    if args.emit_model and v.model is not None:
        data = model_to_json(v.model)
        # re-validate the emitted text, not the in-memory model
        back = model_from_json(json.loads(json.dumps(data)))
        if not satisfies_globally(back, psi, phi0):
            raise AssertionError("emitted model fails the model check")
        result["model"] = data
    if args.stats:
        result["stats"] = _jsonable(v.stats)
        if v.culprit is not None:
            result["stats"]["culprit"] = str(v.culprit)
    if args.oracle_states:
        result["oracle"] = _oracle_json(psi, phi0, logic, args)
    jsonschema.validate(result, RESULT_SCHEMA)
    print(json.dumps(result), file=out)
    return EXIT[v.verdict]


def run_differential(args, out) -> int:
    if args.corpus:
        with open(args.corpus, encoding="utf-8") as fh:
            problems = parse_corpus(fh.read())
    else:
        cfg = GenConfig(logic=args.logic)
        problems = [(k + 1, psi, phi0) for k, (psi, phi0) in
                    enumerate(random_corpus(cfg, args.count, args.seed))]
    logic = _logic(args)
    counts = {SAT: 0, UNSAT: 0, UNKNOWN: 0}
    mismatches = []
    skipped = []
    for line, psi, phi0 in problems:
        if F.nominals_of(psi) or F.nominals_of(phi0):
            skipped.append(line)
            continue
        verdicts = {}
        for name in ("elim", "caching", "worklist"):
            verdicts[name] = decide(psi, phi0, logic, name, budget=args.budget).verdict
        if len(set(verdicts.values())) != 1:
            mismatches.append({"line": line, "problem": f"{F.render(psi)} |- {F.render(phi0)}",
                               "verdicts": verdicts})
        else:
            counts[verdicts["elim"]] += 1
        if args.oracle_states:
            o = oracle_run(psi, phi0, logic.model_kind, args.oracle_states,
                           args.oracle_weight, args.oracle_weight)
            if o.model is not None and verdicts["elim"] != SAT:
                mismatches.append({"line": line, "problem": f"{F.render(psi)} |- {F.render(phi0)}",
                                   "verdicts": dict(verdicts, oracle=SAT)})
        log.info("line %d: %s", line, verdicts)
    agree = not mismatches
    result = {
        "verdict": SAT if agree else UNSAT,
        "stats": {"problems": len(problems), "counts": counts,
                  "mismatches": mismatches, "skipped": skipped, "agree": agree},
    }
    print(json.dumps(result), file=out)
    return 0 if agree else 1


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.differential:
            return run_differential(args, out)
        return run_single(args, out)
    except ParseError as exc:
        print(f"coalsat: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"coalsat: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ValueError, OSError) as exc:
        print(f"coalsat: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
