"""JSON file formats: lattices, aggregation specs, value-map families."""
from __future__ import annotations

import json
from pathlib import Path

from . import closure as cl
from . import lattice as lat
from .aggregation import InfAggSpec, SupAggSpec, make_spec
from .errors import ArityMismatch
from .fca import ValueMapFamily, residuated_chain_family
from .maps import LatticeMap


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_lattice(path) -> lat.FiniteLattice:
    return lat.from_dict(read_json(path))


def _lattice_ref(ref, base: Path) -> lat.FiniteLattice:
    """Inline lattice object or a path relative to the referring file."""
    if isinstance(ref, dict):
        return lat.from_dict(ref)
    if not isinstance(ref, str):
        raise ValueError('"lattice" must be a file path or an inline lattice object')
    return load_lattice(base / ref)


def slot_from_dict(L: lat.FiniteLattice, data: dict):
    """``{"closure": [...], "interior": [...], "iso": {closure label: interior label}}``."""
    try:
        S = cl.validate_closure_system(L, data["closure"])
        T = cl.validate_interior_system(L, data["interior"])
        iso = data["iso"]
    except KeyError as exc:
        raise ValueError(f"slot is missing {exc.args[0]!r}") from None
    return S, T, cl.make_iso(S, T, iso)


def inf_slot_from_dict(L: lat.FiniteLattice, data: dict):
    """``{"interior": [...], "closure": [...], "iso": {interior label: closure label}}``."""
    try:
        T = cl.validate_interior_system(L, data["interior"])
        S = cl.validate_closure_system(L, data["closure"])
        iso = data["iso"]
    except KeyError as exc:
        raise ValueError(f"slot is missing {exc.args[0]!r}") from None
    return T, S, cl.make_iso(T, S, iso)


def spec_from_dict(data: dict, base: Path = Path(".")):
    """Aggregation spec; ``"kind": "inf"`` selects the inf-preserving reading."""
    try:
        L = _lattice_ref(data["lattice"], base)
        slots = data["slots"]
    except KeyError as exc:
        raise ValueError(f"aggregation spec is missing {exc.args[0]!r}") from None
    arity = data.get("arity", len(slots))
    if arity != len(slots):
        raise ArityMismatch(f"arity {arity} but {len(slots)} slots", witness=[arity, len(slots)])
    if data.get("kind", "sup") == "inf":
        return InfAggSpec(L, tuple(inf_slot_from_dict(L, s) for s in slots))
    return make_spec(L, [slot_from_dict(L, s) for s in slots])


def load_spec(path):
    path = Path(path)
    return spec_from_dict(read_json(path), path.parent)


def spec_to_dict(spec, lattice_ref=None) -> dict:
    L = spec.host
    slots = []
    for first, second, phi in spec.slots:
        if isinstance(spec, SupAggSpec):
            slots.append({"closure": first.labels(), "interior": second.labels(), "iso": phi.to_labels()})
        else:
            slots.append({"interior": first.labels(), "closure": second.labels(), "iso": phi.to_labels()})
    out = {"lattice": lattice_ref if lattice_ref is not None else lat.to_dict(L),
           "arity": len(slots), "slots": slots}
    if isinstance(spec, InfAggSpec):
        out["kind"] = "inf"
    return out


def family_from_dict(data: dict, base: Path = Path(".")) -> ValueMapFamily:
    """``{"lattice": ..., "maps": {token: {label: label}}}`` or ``{"builtin": "godel_chain", "k": k}``."""
    if "builtin" in data:
        if data["builtin"] != "godel_chain":
            raise ValueError(f"unknown builtin family {data['builtin']!r}")
        return residuated_chain_family(int(data.get("k", 2)))
    try:
        L = _lattice_ref(data["lattice"], base)
        maps = data["maps"]
    except KeyError as exc:
        raise ValueError(f"family is missing {exc.args[0]!r}") from None
    return ValueMapFamily(L, {str(t): LatticeMap.from_labels(L, L, m) for t, m in maps.items()})


def load_family(path) -> ValueMapFamily:
    path = Path(path)
    return family_from_dict(read_json(path), path.parent)

