"""Resolution and execution of analysis jobs.

The service endpoints and the command line both funnel into this module:
specs (group, functor, partial set, element) arrive as strings or plain
JSON-compatible dicts, results leave as plain dicts with deterministic key
and row order.  Rationals are rendered "num/den"; nothing here ever prints
a float.
"""

from __future__ import annotations

import hashlib
import json

from .arith import fmt_rat, parse_p
from .functors import (
    MonoidFunctor,
    conormal_functor,
    lattice_functor,
    slice_functor,
    trivial_functor,
)
from .ghost import verify_fundamental
from .groups import FiniteGroup, builtin_group, group_from_cayley, group_from_permutations
from .posets import FinitePoset, GLattice, make_family
from .partial import (
    PartialSystem,
    build_partial,
    partial_idempotents,
    partial_marks,
    partial_multiply,
    section_system,
    verify_partial,
)
from .rings import (
    RingElement,
    axiom_report,
    basis_element,
    basis_system,
    element_from_json,
    one,
)
from .spectra import equivalence_classes, idempotents_local, idempotents_rational
from .units import RANK_CAP, unit_group

DEFAULT_GROUPS = ("C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8")
DEFAULT_FUNCTORS = ("trivial", "slice", "conormal")
DEFAULT_PRIMES = ("2", "3", "inf")

# unit checks in verify_all stay exhaustive; cells above this rank report
# "skipped" instead of burning the time budget
VERIFY_ALL_UNIT_RANK = 14

_FUNCTORS = {}


def _group_key(spec) -> str:
    if isinstance(spec, str):
        return spec
    payload = json.dumps(spec, sort_keys=True)
    return "json:" + hashlib.sha256(payload.encode()).hexdigest()[:16]


def resolve_group(spec, cap_order: int | None = None) -> FiniteGroup:
    """A builtin name, a Cayley-table dict, or a permutation-generator dict."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        return builtin_group(spec)
    if not isinstance(spec, dict):
        raise ValueError(f"cannot interpret group spec {spec!r}")
    name = spec.get("name", "G")
    if "table" in spec:
        return group_from_cayley(spec["table"], name)
    if "generators" in spec and "degree" in spec:
        kwargs = {"cap": cap_order} if cap_order else {}
        return group_from_permutations(
            spec["degree"], [tuple(p) for p in spec["generators"]], name, **kwargs
        )
    raise ValueError("group spec needs a 'table' or 'degree'+'generators'")


def _family_functor(g: FiniteGroup, spec: dict) -> MonoidFunctor:
    lat_spec = spec["lattice"]
    leq = [[bool(v) for v in row] for row in lat_spec["leq"]]
    labels = [str(x) for x in lat_spec.get("labels", range(len(leq)))]
    action = [tuple(row) for row in lat_spec["action"]]
    lat = GLattice(FinitePoset(leq, labels), action)
    lat.check_action_group_law(g)
    member = {int(k): list(v) for k, v in spec["member"].items()}
    return lattice_functor(make_family(lat, g.lattice, member), spec.get("name", "lattice"))


def resolve_functor(group_spec, functor_spec, cap_order: int | None = None) -> MonoidFunctor:
    """Memoized functor lookup so repeated jobs share all cached structure."""
    key = (_group_key(group_spec), _group_key(functor_spec))
    if key not in _FUNCTORS:
        g = resolve_group(group_spec, cap_order)
        if isinstance(functor_spec, str):
            maker = {
                "trivial": trivial_functor,
                "slice": slice_functor,
                "conormal": conormal_functor,
            }.get(functor_spec)
            if maker is None:
                raise ValueError(
                    f"unknown functor {functor_spec!r}; expected trivial, slice, "
                    "conormal, or a lattice family object"
                )
            _FUNCTORS[key] = maker(g)
        elif isinstance(functor_spec, dict) and "member" in functor_spec:
            _FUNCTORS[key] = _family_functor(g, functor_spec)
        else:
            raise ValueError(f"cannot interpret functor spec {functor_spec!r}")
    return _FUNCTORS[key]


def resolve_partial(functor: MonoidFunctor, spec) -> PartialSystem:
    if isinstance(spec, str):
        if spec == "section":
            if functor.name != "slice":
                raise ValueError("the section pair set lives over the slice functor")
            ps = functor.__dict__.get("_section_system")
            if ps is None:
                ps = section_system(functor.group)
                functor.__dict__["_section_system"] = ps
            return ps
        raise ValueError(f"unknown partial spec {spec!r}")
    if isinstance(spec, dict) and "pairs" in spec:
        return build_partial(functor, [tuple(q) for q in spec["pairs"]])
    raise ValueError(f"cannot interpret partial spec {spec!r}")


def _element_arg(bs, ps: PartialSystem | None, value) -> RingElement:
    if isinstance(value, int):
        pos = ps.xreps[value] if ps is not None else value
        if not 0 <= pos < bs.rank:
            raise ValueError(f"basis index {value} out of range")
        return basis_element(bs, pos)
    if isinstance(value, dict):
        obj = dict(value)
        obj.setdefault("basis", bs.signature)
        return element_from_json(bs, obj)
    raise ValueError(f"cannot interpret element spec {value!r}")


def _element_out(x: RingElement) -> dict:
    bs = x.basis
    coeffs = {str(k): fmt_rat(v) for k, v in sorted(x.coeffs.items())}
    text = " + ".join(
        f"{fmt_rat(v)}·{bs.label(k)}" for k, v in sorted(x.coeffs.items())
    ) or "0"
    return {"basis": bs.signature, "coeffs": coeffs, "text": text}


# -- commands ---------------------------------------------------------------


def run_basis(functor: MonoidFunctor, ps: PartialSystem | None = None) -> dict:
    bs = basis_system(functor)
    positions = ps.xreps if ps else range(bs.rank)
    return {
        "ok": True,
        "rank": len(list(positions)),
        "labels": [bs.label(pos) for pos in positions],
        "pairs": [list(bs.reps[pos]) for pos in positions],
        "signature": bs.signature,
    }


def run_marks(functor: MonoidFunctor, ps: PartialSystem | None = None) -> dict:
    bs = basis_system(functor)
    if ps is None:
        from .ghost import phi_matrix

        matrix = [list(row) for row in phi_matrix(bs)]
        labels = [bs.label(pos) for pos in range(bs.rank)]
    else:
        matrix = [list(row) for row in partial_marks(ps)]
        labels = list(ps.labels())
    return {"ok": True, "labels": labels, "matrix": matrix}


def run_multiply(functor: MonoidFunctor, x, y, ps: PartialSystem | None = None) -> dict:
    bs = basis_system(functor)
    xe = _element_arg(bs, ps, x)
    ye = _element_arg(bs, ps, y)
    out = partial_multiply(ps, xe, ye) if ps is not None else xe * ye
    return {"ok": True, "element": _element_out(out)}


def _report_dict(rep) -> dict:
    checks = {
        name: getattr(rep, name)
        for name in (
            "triangular",
            "diagonal_is_weyl",
            "det_matches_diagonal",
            "injective",
            "psi_phi_zero",
            "cokernel_matches",
            "divisors_match",
            "psi_unit_diagonal",
            "psi_triangular",
        )
    }
    return {
        "ok": rep.ok,
        "p": str(rep.p),
        "rank": rep.rank,
        "det": rep.det,
        "det_p_part": rep.det_p_part,
        "moduli_product": rep.moduli_product,
        "checks": checks,
        "failures": list(rep.failures),
    }


def run_verify(functor: MonoidFunctor, p, ps: PartialSystem | None = None) -> dict:
    bs = basis_system(functor)
    rep = verify_partial(ps, p) if ps is not None else verify_fundamental(bs, p)
    return _report_dict(rep)


def run_idempotents(functor: MonoidFunctor, p=None, ps: PartialSystem | None = None) -> dict:
    bs = basis_system(functor)
    if ps is not None:
        elems = partial_idempotents(ps)
        domain = "Q"
    elif p is None:
        elems = idempotents_rational(bs)
        domain = "Q"
    else:
        elems = idempotents_local(bs, p)
        domain = f"Z_({p})"
    return {
        "ok": True,
        "count": len(elems),
        "domain": domain,
        "idempotents": [_element_out(e) for e in elems],
    }


def run_units(functor: MonoidFunctor, cap: int | None = None) -> dict:
    bs = basis_system(functor)
    ug = unit_group(bs, cap=cap or RANK_CAP)
    return {
        "ok": True,
        "order": ug.order,
        "rank": ug.rank,
        "generators": [_element_out(u) for u in ug.generators],
    }


def run_partial(functor: MonoidFunctor, ps: PartialSystem) -> dict:
    return {
        "ok": True,
        "pairs": len(ps.pairs),
        "rank": ps.size,
        "subring": ps.subring,
        "condition_a": True,  # construction would have raised otherwise
        "labels": list(ps.labels()),
    }


def _idempotent_checks(bs) -> bool:
    es = idempotents_rational(bs)
    total = None
    for e in es:
        if (e * e).coeffs != e.coeffs:
            return False
        total = e if total is None else total + e
    for i, a in enumerate(es):
        for b in es[i + 1 :]:
            if (a * b).coeffs:
                return False
    return total is not None and total.coeffs == one(bs).coeffs


def run_verify_all(groups=None, functors=None, primes=None) -> dict:
    """Axioms, exact sequences, idempotents, classes, units over the matrix."""
    groups = list(groups or DEFAULT_GROUPS)
    functors = list(functors or DEFAULT_FUNCTORS)
    primes = [str(p) for p in (primes or DEFAULT_PRIMES)]
    cells = []
    all_ok = True
    for gspec in groups:
        for fspec in functors:
            functor = resolve_functor(gspec, fspec)
            bs = basis_system(functor)
            axioms = axiom_report(functor)
            cell = {
                "group": functor.group.name,
                "functor": functor.name,
                "rank": bs.rank,
                "axioms_ok": axioms.ok,
                "axiom_violations": len(axioms.violations),
                "idempotents_ok": _idempotent_checks(bs),
            }
            fundamental = {}
            classes = {}
            for ptext in primes:
                p = parse_p(ptext)
                rep = verify_fundamental(bs, p)
                fundamental[ptext] = {"ok": rep.ok, "failures": list(rep.failures)}
                classes[ptext] = equivalence_classes(bs, p).count
            cell["fundamental"] = fundamental
            cell["classes"] = classes
            if bs.rank <= VERIFY_ALL_UNIT_RANK:
                ug = unit_group(bs)
                square_ok = all((u * u).coeffs == one(bs).coeffs for u in ug.units)
                cell["units"] = {"order": ug.order, "rank": ug.rank, "squares_ok": square_ok}
                unit_ok = square_ok
            else:
                cell["units"] = "skipped (rank over cap)"
                unit_ok = True
            cell_ok = (
                axioms.ok
                and cell["idempotents_ok"]
                and unit_ok
                and all(v["ok"] for v in fundamental.values())
            )
            cell["ok"] = cell_ok
            all_ok = all_ok and cell_ok
            cells.append(cell)
    return {"ok": all_ok, "cells": cells}
