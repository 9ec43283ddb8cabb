"""Command-line front end: verify universes, print hulls, export DOT, run oracles."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import boolean, capacitor, fincat, hulls, posets, rings
from .fincat import BudgetExceeded, CategoryError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

KINDS = ("poset", "boolean", "ring", "raw")
CHECKS = ("capacitor", "theorem", "corollary", "completion")

NOTES = {
    "boolean": "finite Boolean algebras are complete: completions are identities and "
               "essential embeddings are isomorphisms",
    "ring": "strict topology is discrete on finite rings; non-unital non-degenerate rings "
            "go beyond the local-units hypothesis",
}


class ParseError(ValueError):
    """Itemized problems found while reading a universe file."""

    def __init__(self, path, problems):
        self.path = str(path)
        self.problems = list(problems)
        super().__init__("\n".join(f"{self.path}: {p}" for p in self.problems))


@dataclass
class UniverseSpec:
    kind: str
    entries: list  # FinPoset / FinBoolAlg / FinRing objects, or one raw document
    options: dict = field(default_factory=dict)
    name: str = ""
    source: str = ""


@dataclass
class RunReport:
    universe: str
    kind: str
    n_objects: int = 0
    n_arrows: int = 0
    capacitor: list | None = None  # [(clause, message)], empty when verified
    theorem: list | None = None  # 12 LedgerEntry
    corollary: dict | None = None
    completions: list | None = None
    notes: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        checks = []
        if self.capacitor is not None:
            checks.append(not self.capacitor)
        if self.theorem is not None:
            checks.append(all(e.holds for e in self.theorem))
        if self.corollary is not None:
            checks.append(self.corollary["equivalent"] and self.corollary["enough_injectives"])
        if self.completions is not None:
            checks.append(all(row["hull"] is not None for row in self.completions))
        return all(checks)


# -- parsing ---------------------------------------------------------------


def bundled(name: str) -> Path | None:
    """Path of a fixture shipped with the package, by file name or stem."""
    data = resources.files("polarhull") / "data"
    for cand in (name, f"{name}.json"):
        p = data / cand
        if p.is_file():
            return Path(str(p))
    return None


def bundled_names() -> list[str]:
    data = resources.files("polarhull") / "data"
    return sorted(p.name for p in data.iterdir() if p.name.endswith(".json"))


def _entry_lines(text: str, n: int) -> list[int | None]:
    """Line number where each element of the top-level "entries" array starts."""
    m = re.search(r'"entries"\s*:\s*\[', text)
    if not m:
        return [None] * n
    dec = json.JSONDecoder()
    pos, lines = m.end(), []
    while len(lines) < n:
        while pos < len(text) and text[pos] in " \t\r\n,":
            pos += 1
        try:
            _, end = dec.raw_decode(text, pos)
        except json.JSONDecodeError:
            break
        lines.append(text.count("\n", 0, pos) + 1)
        pos = end
    return lines + [None] * (n - len(lines))


def _ring_entry(doc) -> rings.FinRing:
    if "zmod" in doc:
        return rings.zmod(int(doc["zmod"]), str(doc.get("name", "")))
    if "matrices" in doc:
        return rings.f2_matrix_ring(doc["matrices"], str(doc.get("name", "")))
    if "product" in doc:
        parts = [_ring_entry(d) for d in doc["product"]]
        out = parts[0]
        for p in parts[1:]:
            out = rings.product(out, p)
        return rings.FinRing(out.elements, out.add, out.mul, out.zero,
                             str(doc.get("name", "")) or out.name)
    return rings.ring_from_json(doc)


def _ring_checked(doc) -> rings.FinRing:
    R = _ring_entry(doc)
    problems = rings.validate_ring(R)
    if problems:
        raise rings.RingError("; ".join(problems))
    if not rings.is_non_degenerate(R):
        raise rings.RingError("ring is degenerate (nonzero annihilator)")
    return R


_READERS = {
    "poset": posets.poset_from_json,
    "boolean": boolean.ba_from_json,
    "ring": _ring_checked,
}


def parse_universe(path, kind: str | None = None) -> UniverseSpec:
    """Read and validate a universe file; raises ParseError with every problem."""
    p = Path(path)
    if not p.exists() and bundled(str(path)):
        p = bundled(str(path))
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(path, [f"cannot read file: {exc.strerror}"]) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, [f"line {exc.lineno}, column {exc.colno}: {exc.msg}"]) from None
    if not isinstance(doc, dict):
        raise ParseError(path, ["top level must be an object"])
    file_kind = doc.get("kind")
    if file_kind is None and kind is None:
        raise ParseError(path, ["no kind given in the file or on the command line"])
    if kind is not None and file_kind is not None and kind != file_kind:
        raise ParseError(path, [f"file declares kind {file_kind!r} but {kind!r} was requested"])
    kind = kind or file_kind
    if kind not in KINDS:
        raise ParseError(path, [f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}"])
    options = doc.get("options", {})
    name = str(doc.get("name", p.stem))
    if kind == "raw":
        try:
            spec = capacitor.capacitor_from_json(doc["capacitor"], name=name)
        except KeyError as exc:
            raise ParseError(path, [f"raw universe lacks {exc}"]) from None
        except (CategoryError, TypeError, ValueError) as exc:
            raise ParseError(path, [str(exc)]) from None
        problems = fincat.validate_category(spec.C)
        if problems:
            raise ParseError(path, problems)
        return UniverseSpec(kind, [doc["capacitor"]], options, name, str(p))
    raw_entries = doc.get("entries")
    if not isinstance(raw_entries, list) or not raw_entries:
        raise ParseError(path, ['"entries" must be a non-empty list'])
    lines = _entry_lines(text, len(raw_entries))
    entries, problems = [], []
    for i, (e, line) in enumerate(zip(raw_entries, lines)):
        where = f"line {line}: " if line else ""
        label = e.get("name", "") if isinstance(e, dict) else ""
        try:
            if not isinstance(e, dict):
                raise ValueError("entry must be an object")
            entries.append(_READERS[kind](e))
        except (ValueError, TypeError, KeyError, IndexError) as exc:
            problems.append(f"{where}entry {i} {label!r}: {exc}")
    if problems:
        raise ParseError(path, problems)
    return UniverseSpec(kind, entries, options, name, str(p))


# -- running ---------------------------------------------------------------


def build_spec(u: UniverseSpec, budget: int | None = None):
    budget = budget if budget is not None else u.options.get("budget", fincat.DEFAULT_ARROW_BUDGET)
    closure = u.options.get("closure", True)
    if u.kind == "poset":
        spec = posets.build_poset_capacitor(u.entries, closure=closure, budget=budget)
    elif u.kind == "boolean":
        spec = boolean.build_ba_capacitor(u.entries, budget=budget)
    elif u.kind == "ring":
        spec = rings.build_ring_capacitor(u.entries, closure=closure, budget=budget)
    else:
        spec = capacitor.capacitor_from_json(u.entries[0], name=u.name)
    for label, override in u.options.get("family", {}).items():
        # negative-control hook: replace one family member by (unit label, E object)
        C = spec.C
        arrow = C.arrow_labels.index(str(override[0]))
        spec.family[C.obj(label)] = (arrow, spec.E.obj(override[1]))
    return spec


def completion_table(spec) -> list[dict]:
    C = spec.C
    HM = capacitor.pol.monopole(C, spec.H)
    rows = []
    for x in range(C.n_objects):
        res = hulls.completion_wrt_functor(spec.monopole, x, spec.U, spec.H)
        rows.append({
            "object": str(C.objects[x]),
            "hull": None if res is None else str(C.objects[spec.U.obj_map[res.object]]),
            "unit": None if res is None else C.arrow_labels[res.unit],
            "complete": hulls.is_complete(HM, x),
            "injective": hulls.is_injective_monopole(spec.monopole, x),
        })
    return rows


def _failed_ledger(reason: str) -> list:
    return [capacitor.LedgerEntry(i, "not evaluated", False, reason) for i in range(1, 13)]


def _run_part(u: UniverseSpec, part: str, budget):
    spec = build_spec(u, budget)
    if part == "capacitor":
        return capacitor.verify_capacitor(spec).issues
    if part == "theorem":
        rep = capacitor.verify_capacitor(spec)
        if not rep.ok:
            return _failed_ledger(f"capacitor not verified: {rep.lines()[0]}")
        return capacitor.verify_theorem_main(spec)
    if part == "corollary":
        return capacitor.verify_corollary_main(spec).to_json()
    return completion_table(spec)


def run_verification(u: UniverseSpec, *, only: str | None = None, jobs: int = 1,
                     budget: int | None = None) -> RunReport:
    """Evaluate the requested checks; raises BudgetExceeded on budget overflow."""
    t0 = time.perf_counter()
    parts = [only] if only else list(CHECKS)
    spec = build_spec(u, budget)
    rep = RunReport(u.name, u.kind, spec.C.n_objects, spec.C.n_arrows)
    if u.kind in NOTES:
        rep.notes.append(NOTES[u.kind])
    if jobs > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {p: pool.submit(_run_part, u, p, budget) for p in parts}
            results = {p: f.result() for p, f in futures.items()}
    else:
        results = {}
        for p in parts:
            if p == "capacitor":
                results[p] = capacitor.verify_capacitor(spec).issues
            elif p == "theorem":
                cap = capacitor.verify_capacitor(spec)
                results[p] = (capacitor.verify_theorem_main(spec) if cap.ok else
                              _failed_ledger(f"capacitor not verified: {cap.lines()[0]}"))
            elif p == "corollary":
                results[p] = capacitor.verify_corollary_main(spec).to_json()
            else:
                results[p] = completion_table(spec)
    rep.capacitor = results.get("capacitor")
    rep.theorem = results.get("theorem")
    rep.corollary = results.get("corollary")
    rep.completions = results.get("completion")
    rep.seconds = time.perf_counter() - t0
    return rep


# -- reporting -------------------------------------------------------------


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def report_to_json(rep: RunReport, *, timing: bool = False) -> dict:
    out = {"universe": rep.universe, "kind": rep.kind,
           "objects": rep.n_objects, "arrows": rep.n_arrows}
    if rep.capacitor is not None:
        out["capacitor"] = {"ok": not rep.capacitor,
                            "issues": [{"clause": c, "message": m} for c, m in rep.capacitor]}
    if rep.theorem is not None:
        out["theorem_main"] = [{"item": e.item, "name": e.name, "holds": e.holds,
                                "witness": e.witness} for e in rep.theorem]
    if rep.corollary is not None:
        out["corollary_main"] = rep.corollary
    if rep.completions is not None:
        out["completions"] = rep.completions
    out["notes"] = rep.notes
    out["verdict"] = "pass" if rep.ok else "fail"
    if timing:
        out["seconds"] = round(rep.seconds, 3)
    return out


def report_to_text(rep: RunReport, *, timing: bool = False) -> str:
    lines = [f"universe: {rep.universe} ({rep.kind}, {rep.n_objects} objects, "
             f"{rep.n_arrows} arrows)"]
    if rep.capacitor is not None:
        if rep.capacitor:
            lines.append(f"capacitor: FAIL ({len(rep.capacitor)} issues)")
            lines += [f"  {c}: {m}" for c, m in rep.capacitor]
        else:
            lines.append("capacitor: ok")
    if rep.theorem is not None:
        held = sum(e.holds for e in rep.theorem)
        lines.append(f"theorem_main: {held}/{len(rep.theorem)}")
        for e in rep.theorem:
            mark = "ok  " if e.holds else "FAIL"
            tail = f" -- {e.witness}" if not e.holds and e.witness else ""
            lines.append(f"  [{mark}] ({e.item}) {e.name}{tail}")
    if rep.corollary is not None:
        c = rep.corollary
        lines.append("corollary_main: " + " ".join(f"{k}={_yn(v)}" for k, v in c.items()))
    if rep.completions is not None:
        lines.append("completions:")
        for row in rep.completions:
            if row["hull"] is None:
                lines.append(f"  {row['object']}: no hull")
            else:
                flags = [f for f in ("complete", "injective") if row[f]]
                extra = f" ({', '.join(flags)})" if flags else ""
                lines.append(f"  {row['object']} -> {row['hull']} via {row['unit']}{extra}")
    for n in rep.notes:
        lines.append(f"note: {n}")
    if timing:
        lines.append(f"seconds: {rep.seconds:.3f}")
    lines.append(f"verdict: {'pass' if rep.ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def emit_report(rep: RunReport, fmt: str = "text", out=None, *, timing: bool = False) -> str:
    if fmt == "json":
        text = json.dumps(report_to_json(rep, timing=timing), indent=2, ensure_ascii=False) + "\n"
    else:
        text = report_to_text(rep, timing=timing)
    if out:
        Path(out).write_text(text)
    return text


# -- DOT export ------------------------------------------------------------


def _quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def hasse_dot(P: posets.FinPoset, name: str = "") -> str:
    lines = [f"digraph {_quote(name or P.name or 'poset')} {{", "  rankdir=BT;"]
    for i, e in enumerate(P.elements):
        lines.append(f"  n{i} [label={_quote(e)}];")
    for i, j in P.covers():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def category_dot(C: fincat.FiniteCategory, *, identities: bool = True) -> str:
    lines = [f"digraph {_quote(C.name or 'category')} {{"]
    for x, o in enumerate(C.objects):
        lines.append(f"  o{x} [label={_quote(o)}];")
    for f in C.arrows():
        if not identities and C.is_identity(f):
            continue
        lines.append(f"  o{C.src[f]} -> o{C.tgt[f]} [label={_quote(C.arrow_labels[f])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _structure_poset(spec, kind: str, x: int) -> posets.FinPoset:
    univ = spec.extras.get("universe")
    if kind == "poset":
        return univ.posets[x]
    if kind == "boolean":
        return univ.algebras[x].as_poset()
    if kind == "ring":
        P, ids = rings.ideal_lattice(univ.rings[x])
        labels = tuple("{" + ",".join(str(univ.rings[x].elements[e]) for e in sorted(I)) + "}"
                       for I in ids)
        return posets.FinPoset(labels, P.leq, P.name)
    raise CategoryError("raw universes carry no order structure; use --category")


def export_dot(spec, kind: str, obj: str | None, *, category: bool = False,
               identities: bool = True, macneille: bool = False) -> str:
    """DOT text for the category, or a Hasse diagram for one named object
    (the poset itself, a Boolean algebra's order, or a ring's ideal lattice)."""
    C = spec.C
    if category:
        return category_dot(C, identities=identities)
    if obj is None:
        raise CategoryError("an object name is required unless --category is given")
    x = C.obj(obj)
    P = _structure_poset(spec, kind, x)
    if macneille:
        if kind != "poset":
            raise CategoryError("--macneille applies to poset universes")
        L = posets.macneille(P).lattice
        return hasse_dot(L, L.name)
    return hasse_dot(P, str(obj))


# -- oracles ---------------------------------------------------------------


def _pair_json(pair) -> list:
    return [list(pair[0]), list(pair[1])]


def oracle_rings(entries=None) -> dict:
    rs = entries or rings.unital_test_rings() + [rings.column_ring()]
    out = {}
    for R in rs:
        pairs = rings.multiplier_pairs_oracle(R)
        MR = rings.multiplier_ring(R, pairs=pairs).ring
        out[R.name] = {"size": R.size, "unital": R.is_unital,
                       "multiplier_size": len(pairs),
                       "multiplier_iso_base": R.size == MR.size and rings.is_isomorphic(R, MR),
                       "pairs": [_pair_json(p) for p in pairs]}
    return out


def oracle_posets(max_size: int = 4) -> dict:
    out = {}
    for n in range(max_size + 1):
        for P in posets.all_posets(n):
            out[P.name] = {"size": P.size, "macneille_size": len(posets.macneille_oracle(P))}
    return out


def oracle_boolean(max_atoms: int = 2) -> dict:
    out = {}
    for m in range(max_atoms + 1):
        for n in range(max_atoms + 1):
            A, B = boolean.from_atoms(m), boolean.from_atoms(n)
            out[f"{A.name}->{B.name}"] = len(boolean.enumerate_homs_oracle(A, B))
    return out


def run_oracle(kind: str, u: UniverseSpec | None = None) -> dict:
    if kind == "ring":
        return {"kind": "ring", "rings": oracle_rings(u.entries if u else None)}
    if kind == "poset":
        return {"kind": "poset", "posets": oracle_posets()}
    if kind == "boolean":
        return {"kind": "boolean", "hom_counts": oracle_boolean()}
    raise CategoryError(f"no oracle for kind {kind!r}")


# -- entry point -----------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polarhull", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, universe_required=True):
        p.add_argument("--universe", required=universe_required,
                       help="universe JSON file, or the name of a bundled fixture")
        p.add_argument("--kind", choices=KINDS)
        p.add_argument("--budget", type=int, help="maximum number of arrows to materialize")
        p.add_argument("--out", help="write output here instead of stdout")

    v = sub.add_parser("verify", help="verify the capacitor, theorem ledger and corollary")
    common(v)
    v.add_argument("--only", choices=CHECKS)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--timing", action="store_true", help="include wall time in the report")

    c = sub.add_parser("complete", help="print the hull of one object")
    common(c)
    c.add_argument("--object", required=True)
    c.add_argument("--format", choices=("text", "json"), default="text")

    e = sub.add_parser("export", help="write a DOT diagram")
    common(e)
    e.add_argument("--object")
    e.add_argument("--category", action="store_true", help="export the whole category")
    e.add_argument("--no-identities", action="store_true", help="drop identity loops")
    e.add_argument("--macneille", action="store_true",
                   help="export the MacNeille completion of the object")

    o = sub.add_parser("oracle", help="run the brute-force oracles and write golden values")
    common(o, universe_required=False)

    sub.add_parser("fixtures", help="list bundled universe files")
    return ap


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "fixtures":
        print("\n".join(bundled_names()))
        return EXIT_OK
    try:
        if args.command == "oracle":
            u = parse_universe(args.universe, args.kind) if args.universe else None
            kind = u.kind if u else (args.kind or "ring")
            _write(json.dumps(run_oracle(kind, u), indent=2) + "\n", args.out)
            return EXIT_OK
        u = parse_universe(args.universe, args.kind)
        if args.command == "verify":
            rep = run_verification(u, only=args.only, jobs=args.jobs, budget=args.budget)
            text = emit_report(rep, args.format, timing=args.timing)
            _write(text, args.out)
            return EXIT_OK if rep.ok else EXIT_FAIL
        spec = build_spec(u, args.budget)
        if args.command == "complete":
            x = spec.C.obj(args.object)
            res = hulls.completion_wrt_functor(spec.monopole, x, spec.U, spec.H)
            doc = {"object": args.object, "hull": None}
            if res is not None:
                doc["hull"] = str(spec.C.objects[spec.U.obj_map[res.object]])
                doc["unit"] = spec.C.arrow_labels[res.unit]
                doc["comma_objects"] = len(res.existence)
            if args.format == "json":
                text = json.dumps(doc, indent=2) + "\n"
            elif doc["hull"] is None:
                text = f"{args.object}: no hull\n"
            else:
                text = f"{args.object} -> {doc['hull']} via {doc['unit']}\n"
            _write(text, args.out)
            return EXIT_OK if doc["hull"] is not None else EXIT_FAIL
        text = export_dot(spec, u.kind, args.object, category=args.category,
                          identities=not args.no_identities, macneille=args.macneille)
        _write(text, args.out)
        return EXIT_OK
    except ParseError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CategoryError, posets.PosetError, rings.RingError, boolean.BooleanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
