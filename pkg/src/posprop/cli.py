"""Command-line front end.

Exit codes: 0 success; 1 logical negative (non-tautology with countermodel,
proof that fails checking); 2 usage or syntax errors.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter

from .formula import (Fragment, ParseError, fragment_of, parse, pretty)
from .kernel import (AxiomStep, CalculusId, CheckError, check)
from .kalmar import NotTautology, prove
from .proofio import ProofFormatError, read_text, to_json, write_text
from .semantics import find_countermodel, format_assignment
from .transform import (decompose, decompose_to_implicative, gamma,
                        is_gamma_normal, prove_I, prove_IC, prove_P_reduction,
                        tau, translate_derivation)
from .tactics import TacticError

_CALCULI = {c.label: c for c in CalculusId}


def _parse_formula(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        sys.exit(2)


def _synthesize(f, calculus: CalculusId, route: str):
    if route == "reduction":
        if calculus is CalculusId.P:
            return prove_P_reduction(f)
        raise TacticError("the reduction route applies to calculus P")
    if calculus is CalculusId.I:
        return prove_I(f)
    if calculus is CalculusId.IC:
        return prove_IC(f)
    return prove(f, calculus)


def _cmd_prove(args) -> int:
    f = _parse_formula(args.formula)
    calculus = _CALCULI[args.calculus]
    try:
        d = _synthesize(f, calculus, args.route)
    except NotTautology as exc:
        print(f"not a tautology: {format_assignment(exc.countermodel)}")
        return 1
    except TacticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = write_text(d) if args.format == "text" else to_json(d)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"proved {pretty(d.conclusion)} in {calculus} ({len(d)} steps)",
          file=sys.stderr)
    return 0


def _cmd_check(args) -> int:
    try:
        with open(args.path) as fh:
            d = read_text(fh.read())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ProofFormatError, ParseError) as exc:
        print(f"malformed proof file: {exc}", file=sys.stderr)
        return 2
    errors = check(d)
    if errors:
        for e in errors:
            print(str(e))
        return 1
    hyps = ", ".join(pretty(h) for h in sorted(d.hypotheses, key=str)) or "(none)"
    print(f"ok: {len(d)} steps in {d.calculus}; hypotheses: {hyps}; "
          f"conclusion: {pretty(d.conclusion)}")
    return 0


def _cmd_tautology(args) -> int:
    f = _parse_formula(args.formula)
    countermodel = find_countermodel(f)
    if countermodel is None:
        print("tautology")
        return 0
    print(f"not a tautology: {format_assignment(countermodel)}")
    return 1


def _cmd_translate(args) -> int:
    try:
        with open(args.path) as fh:
            d = read_text(fh.read())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ProofFormatError, ParseError) as exc:
        print(f"malformed proof file: {exc}", file=sys.stderr)
        return 2
    try:
        out = translate_derivation(d)
    except (TacticError, CheckError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = write_text(out)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"translated to {len(out)} steps in I", file=sys.stderr)
    return 0


def _cmd_normalize(args) -> int:
    f = _parse_formula(args.formula)
    if args.mode == "gamma":
        g = gamma(f)
        print(pretty(g.formula))
        for rule, path in g.trace:
            loc = ".".join(path) or "(root)"
            print(f"  rule {rule} at {loc}")
        return 0
    if not Fragment.IMPLICATIVE_DISJUNCTIVE.admits(f):
        print("error: tau applies to the ->/v fragment only", file=sys.stderr)
        return 2
    print(pretty(tau(f)))
    return 0


def _cmd_decompose(args) -> int:
    f = _parse_formula(args.formula)
    try:
        dec = (decompose_to_implicative(f) if args.mode == "implicative"
               else decompose(f))
    except (TacticError, CheckError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for conjunct in dec.conjuncts:
        print(pretty(conjunct))
    print(f"equivalence checked: {len(dec.equivalence.forward)} + "
          f"{len(dec.equivalence.backward)} steps", file=sys.stderr)
    return 0


def _cmd_enumerate(args) -> int:
    from .formula import enumerate_formulas
    from .semantics import is_tautology

    calculus = _CALCULI[args.calculus]
    atoms = list(range(1, args.atoms + 1))
    lengths = []
    total = taut = 0
    for f in enumerate_formulas(args.max_connectives, atoms, calculus.fragment):
        total += 1
        if not is_tautology(f):
            continue
        taut += 1
        d = _synthesize(f, calculus, "direct")
        lengths.append(len(d))
    print(f"calculus {calculus}: {total} formulas, {taut} tautologies")
    if lengths:
        print(f"proof steps: max {max(lengths)}, "
              f"mean {sum(lengths) / len(lengths):.1f}")
    return 0


def _cmd_stats(args) -> int:
    try:
        with open(args.path) as fh:
            d = read_text(fh.read())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ProofFormatError, ParseError) as exc:
        print(f"malformed proof file: {exc}", file=sys.stderr)
        return 2
    by_scheme = Counter(str(s.scheme) for s in d.steps if isinstance(s, AxiomStep))
    print(f"calculus: {d.calculus}")
    print(f"steps: {len(d)}")
    print(f"hypotheses: {len(d.hypotheses)}")
    print(f"conclusion: {pretty(d.conclusion)}")
    print(f"fragment: {fragment_of(d.conclusion).name}")
    for scheme, n in sorted(by_scheme.items()):
        print(f"  {scheme}: {n}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="posprop",
                                description="positive propositional proofs")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("prove", help="synthesize a checked derivation")
    sp.add_argument("formula")
    sp.add_argument("--calculus", "-c", choices=sorted(_CALCULI), default="P")
    sp.add_argument("--route", choices=["direct", "reduction"], default="direct")
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.add_argument("--out", "-o")
    sp.set_defaults(func=_cmd_prove)

    sp = sub.add_parser("check", help="validate a proof file")
    sp.add_argument("path")
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("tautology", help="truth-table decision")
    sp.add_argument("formula")
    sp.set_defaults(func=_cmd_tautology)

    sp = sub.add_parser("translate", help="map a closed ID proof into I")
    sp.add_argument("path")
    sp.add_argument("--out", "-o")
    sp.set_defaults(func=_cmd_translate)

    sp = sub.add_parser("normalize", help="gamma or tau normal form")
    sp.add_argument("formula")
    sp.add_argument("--mode", choices=["gamma", "tau"], default="gamma")
    sp.set_defaults(func=_cmd_normalize)

    sp = sub.add_parser("decompose", help="split into conjunction-free parts")
    sp.add_argument("formula")
    sp.add_argument("--mode", choices=["id", "implicative"], default="id")
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("enumerate", help="sweep and prove small tautologies")
    sp.add_argument("--max-connectives", type=int, default=3)
    sp.add_argument("--atoms", type=int, default=2)
    sp.add_argument("--calculus", "-c", choices=sorted(_CALCULI), default="ID")
    sp.set_defaults(func=_cmd_enumerate)

    sp = sub.add_parser("stats", help="summarize a proof file")
    sp.add_argument("path")
    sp.set_defaults(func=_cmd_stats)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
