"""The default instance corpus and instance loading."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Any

from .parsing import kind_of, parse_spec

__all__ = ["Instance", "load_instance", "default_corpus", "data_path", "DEFAULT_SPECS",
           "GERM_MODELS"]


@dataclass(frozen=True)
class Instance:
    name: str
    kind: str  # groupoid | cocycle | action | group | isgp | element
    obj: Any
    spec: str


def data_path(name: str) -> str:
    return str(resources.files("groupoidlab") / "data" / name)


def load_instance(spec: str) -> Instance:
    """Load a file path, an ``expr:`` term or a bare constructor term."""
    if not spec.startswith("expr:") and "(" in spec and not spec.endswith(".txt"):
        spec = "expr:" + spec
    obj = parse_spec(spec)
    if spec.startswith("expr:"):
        name = spec[5:]
    else:
        name = getattr(obj, "name", spec)
    return Instance(name, kind_of(obj), obj, spec)


DEFAULT_SPECS: tuple[str, ...] = (
    "expr:pair(2)", "expr:pair(3)", "expr:pair(4)", "expr:pair(5)",
    "expr:cyclic(2)", "expr:cyclic(3)", "expr:cyclic(4)",
    "expr:units(3)",
    "expr:disjoint(pair(2),pair(2))", "expr:disjoint(cyclic(2),cyclic(2))",
    "expr:transformation(cyclic(3),regular)", "expr:transformation(sym(3),natural)",
    "expr:projection(pair(2),cyclic(2))", "expr:projection(pair(2),cyclic(3))",
    "expr:projection(pair(2),cyclic(4))", "expr:projection(pair(3),cyclic(2))",
    "expr:projection(pair(3),cyclic(3))", "expr:projection(pair(3),cyclic(4))",
    "expr:projection(pair(2),sym(3))",
    "expr:parity(2)", "expr:parity(3)", "expr:trivial(pair(3))",
    "@remark.txt",
    "expr:canonical(2)", "expr:translation(3)", "expr:trivial_action(2)",
)

# expected germ groupoid of each shipped action
GERM_MODELS = {
    "canonical(2)": "pair(2)",
    "translation(3)": "transformation(cyclic(3),regular)",
    "trivial_action(2)": "units(2)",
}


def default_corpus() -> list[Instance]:
    out = []
    for spec in DEFAULT_SPECS:
        if spec.startswith("@"):
            inst = load_instance(data_path(spec[1:]))
            out.append(Instance(inst.name, inst.kind, inst.obj, spec))
        else:
            out.append(load_instance(spec))
    return out
