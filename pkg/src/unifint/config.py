"""Run configuration: parsing, closed-schema validation and serialisation.

A config is a YAML (or JSON) document::

    command: verify
    tolerance: 1.0e-8
    seed: 0
    spec:
      lambda: 1
      nu: 2
      alpha: 1
      mu: 1
      a: 1
      y: {re: 0.5, im: 0}
      z: {re: 0.3, im: 0}
      h: {m: 1, n: 0, upper: [], lower: [[0, 1]]}
      poly: {U: 1, V: 1, A: const1}

Complex-valued fields accept a plain number or a ``{re, im}`` mapping and
are normalised to the mapping form, so ``parse(serialize(cfg)) == cfg``.
"""

import json
import numbers
import re
from dataclasses import asdict, dataclass, field

import yaml

from .errors import InvariantError, SpecError, UnifintError
from .fox_h import HParams
from .hypergeometric import PFQParams, SpecialCaseSpec
from .srivastava import FAMILIES, PolySpec, TableCoefficients, family
from .unified_integral import IntegralSpec

COMMANDS = ("eval-h", "eval-poly", "lemma", "verify", "verify-31", "sweep")
DEFAULT_TOLERANCE = 1e-8
DEFAULT_OUT = "unifint-report"
SWEEP_FAMILIES = ("exponential", "binomial")


class ParseError(UnifintError, ValueError):
    pass


class SchemaError(UnifintError, ValueError):
    def __init__(self, path, message, line=None):
        self.path = tuple(path)
        self.key = self.path[-1] if self.path else None
        self.line = line
        where = ".".join(str(p) for p in self.path) or "<document>"
        if line is not None:
            where += f" (line {line})"
        super().__init__(f"{where}: {message}")


@dataclass
class RunConfig:
    command: str
    tolerance: float = DEFAULT_TOLERANCE
    seed: int = 0
    out: str = DEFAULT_OUT
    spec: dict = field(default_factory=dict)
    sweep: dict | None = None


# -------------------------------------------------------------- field kinds

class _Checker:
    def __init__(self, lines):
        self.lines = lines

    def fail(self, path, message):
        raise SchemaError(path, message, self.lines.get(tuple(path)))

    def mapping(self, value, path, required=(), optional=None):
        optional = optional or {}
        if not isinstance(value, dict):
            self.fail(path, f"expected a mapping, got {type(value).__name__}")
        for key in value:
            if key not in required and key not in optional:
                self.fail(list(path) + [key], "unknown key")
        for key in required:
            if key not in value:
                self.fail(list(path) + [key], "required key missing")
        return {**{k: v for k, v in optional.items() if k not in value}, **value}

    def real(self, value, path, positive=False, nonneg=False):
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            self.fail(path, f"expected a real number, got {value!r}")
        value = float(value)
        if positive and not value > 0:
            self.fail(path, f"must be > 0, got {value!r}")
        if nonneg and not value >= 0:
            self.fail(path, f"must be >= 0, got {value!r}")
        return value

    def integer(self, value, path, minimum=None):
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            self.fail(path, f"expected an integer, got {value!r}")
        if minimum is not None and value < minimum:
            self.fail(path, f"must be >= {minimum}, got {value}")
        return int(value)

    def complex_(self, value, path):
        if isinstance(value, dict):
            value = self.mapping(value, path, required=("re",), optional={"im": 0.0})
            return {"re": self.real(value["re"], list(path) + ["re"]),
                    "im": self.real(value["im"], list(path) + ["im"])}
        return {"re": self.real(value, path), "im": 0.0}

    def pairs(self, value, path):
        if not isinstance(value, list):
            self.fail(path, "expected a list of [value, weight] pairs")
        out = []
        for i, pair in enumerate(value):
            p = list(path) + [i]
            if not isinstance(pair, list) or len(pair) != 2:
                self.fail(p, f"expected [value, weight], got {pair!r}")
            out.append([self.complex_(pair[0], p + [0]), self.real(pair[1], p + [1], positive=True)])
        return out

    def h(self, value, path):
        value = self.mapping(value, path, required=("m", "n", "lower"), optional={"upper": []})
        out = {
            "m": self.integer(value["m"], list(path) + ["m"], minimum=1),
            "n": self.integer(value["n"], list(path) + ["n"], minimum=0),
            "upper": self.pairs(value["upper"], list(path) + ["upper"]),
            "lower": self.pairs(value["lower"], list(path) + ["lower"]),
        }
        try:
            build_h(out)
        except InvariantError as exc:
            self.fail(path, str(exc))
        return out

    def poly(self, value, path):
        value = self.mapping(value, path, required=("U", "V"), optional={"A": "const1"})
        U = self.integer(value["U"], list(path) + ["U"], minimum=1)
        V = self.integer(value["V"], list(path) + ["V"], minimum=0)
        A = value["A"]
        if isinstance(A, str):
            if A not in FAMILIES:
                self.fail(list(path) + ["A"], f"unknown coefficient family {A!r}")
        elif isinstance(A, list):
            A = [self.complex_(v, list(path) + ["A", i]) for i, v in enumerate(A)]
            if len(A) < V // U + 1:
                self.fail(list(path) + ["A"], f"table needs {V // U + 1} entries, got {len(A)}")
        else:
            self.fail(list(path) + ["A"], "expected a family name or a coefficient list")
        return {"U": U, "V": V, "A": A}

    def complex_list(self, value, path):
        if not isinstance(value, list):
            self.fail(path, "expected a list")
        return [self.complex_(v, list(path) + [i]) for i, v in enumerate(value)]


def _spec_schema(command, c, spec):
    path = ["spec"]
    if command == "eval-h":
        spec = c.mapping(spec, path, required=("h", "x"))
        return {"h": c.h(spec["h"], path + ["h"]), "x": c.complex_(spec["x"], path + ["x"])}
    if command == "eval-poly":
        spec = c.mapping(spec, path, required=("poly", "x"))
        return {"poly": c.poly(spec["poly"], path + ["poly"]), "x": c.complex_(spec["x"], path + ["x"])}
    if command == "lemma":
        spec = c.mapping(spec, path, required=("zp", "nu", "a"))
        return {"zp": c.complex_(spec["zp"], path + ["zp"]),
                "nu": c.complex_(spec["nu"], path + ["nu"]),
                "a": c.real(spec["a"], path + ["a"], positive=True)}
    if command == "verify":
        spec = c.mapping(spec, path, required=("lambda", "nu", "mu", "a", "y", "h"),
                         optional={"alpha": 1.0, "z": 0.0, "poly": {"U": 1, "V": 0}})
        return {
            "lambda": c.complex_(spec["lambda"], path + ["lambda"]),
            "nu": c.complex_(spec["nu"], path + ["nu"]),
            "alpha": c.complex_(spec["alpha"], path + ["alpha"]),
            "mu": c.real(spec["mu"], path + ["mu"], positive=True),
            "a": c.real(spec["a"], path + ["a"], positive=True),
            "y": c.complex_(spec["y"], path + ["y"]),
            "z": c.complex_(spec["z"], path + ["z"]),
            "h": c.h(spec["h"], path + ["h"]),
            "poly": c.poly(spec["poly"], path + ["poly"]),
        }
    if command == "verify-31":
        spec = c.mapping(spec, path, required=("lambda", "nu", "a", "y", "f"))
        f = c.mapping(spec["f"], path + ["f"], required=("numerator", "denominator"))
        out = {
            "lambda": c.complex_(spec["lambda"], path + ["lambda"]),
            "nu": c.complex_(spec["nu"], path + ["nu"]),
            "a": c.real(spec["a"], path + ["a"], positive=True),
            "y": c.complex_(spec["y"], path + ["y"]),
            "f": {"numerator": c.complex_list(f["numerator"], path + ["f", "numerator"]),
                  "denominator": c.complex_list(f["denominator"], path + ["f", "denominator"])},
        }
        try:
            build_special_case(out)
        except (SpecError, UnifintError) as exc:
            c.fail(path, str(exc))
        return out
    raise AssertionError(command)


def validate(doc, command=None, lines=None):
    """Check a loaded document against the closed schema; return a RunConfig."""
    c = _Checker(lines or {})
    doc = c.mapping(doc, [], required=(), optional={
        "command": command, "tolerance": DEFAULT_TOLERANCE, "seed": 0,
        "out": DEFAULT_OUT, "spec": None, "sweep": None,
    })
    cmd = doc["command"]
    if cmd is None:
        c.fail(["command"], "no command given")
    if cmd not in COMMANDS:
        c.fail(["command"], f"unknown command {cmd!r}; expected one of {', '.join(COMMANDS)}")
    if command is not None and cmd != command:
        c.fail(["command"], f"config says {cmd!r} but {command!r} was requested")
    cfg = RunConfig(
        command=cmd,
        tolerance=c.real(doc["tolerance"], ["tolerance"], positive=True),
        seed=c.integer(doc["seed"], ["seed"]),
        out=str(doc["out"]),
    )
    if cmd == "sweep":
        if doc["spec"] is not None:
            c.fail(["spec"], "the sweep command draws its own specs")
        sweep = c.mapping(doc["sweep"] or {}, ["sweep"], optional={
            "count": 20, "families": list(SWEEP_FAMILIES)})
        fams = sweep["families"]
        if not isinstance(fams, list) or not fams or any(f not in SWEEP_FAMILIES for f in fams):
            c.fail(["sweep", "families"], f"expected a non-empty subset of {list(SWEEP_FAMILIES)}")
        cfg.sweep = {"count": c.integer(sweep["count"], ["sweep", "count"], minimum=1),
                     "families": list(fams)}
    else:
        if doc["sweep"] is not None:
            c.fail(["sweep"], f"only valid with the sweep command, not {cmd!r}")
        if doc["spec"] is None:
            c.fail(["spec"], "required key missing")
        cfg.spec = _spec_schema(cmd, c, doc["spec"])
    return cfg


def _line_map(node, path=(), out=None):
    out = {} if out is None else out
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            p = path + (key.value,)
            out[p] = key.start_mark.line + 1
            _line_map(value, p, out)
    elif isinstance(node, yaml.SequenceNode):
        for i, value in enumerate(node.value):
            p = path + (i,)
            out[p] = value.start_mark.line + 1
            _line_map(value, p, out)
    return out


class _Loader(yaml.SafeLoader):
    """Safe loader that also reads YAML 1.2 floats such as ``1e-8``."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"""^[-+]?(?:[0-9][0-9_]*(?:\.[0-9_]*)?(?:[eE][-+]?[0-9]+)?|\.[0-9_]+(?:[eE][-+]?[0-9]+)?"""
               r"""|\.(?:inf|Inf|INF)|\.(?:nan|NaN|NAN))$"""),
    list("-+0123456789."),
)


def parse_config(text, command=None):
    """Parse and validate a config document.

    Raises
    ------
    ParseError
        The document is not valid YAML/JSON.
    SchemaError
        Missing, unknown or out-of-range keys; carries the key and line.
    """
    try:
        doc = yaml.load(text, Loader=_Loader)
        lines = _line_map(yaml.compose(text, Loader=_Loader)) if doc is not None else {}
    except yaml.YAMLError as exc:
        raise ParseError(f"invalid config document: {exc}") from exc
    if doc is None:
        doc = {}
    return validate(doc, command=command, lines=lines)


def serialize_config(cfg):
    doc = {k: v for k, v in asdict(cfg).items() if v is not None}
    if cfg.command == "sweep":
        doc.pop("spec", None)
    return json.dumps(doc, indent=2)


# ---------------------------------------------------- library object builders

def to_complex(v):
    return complex(v["re"], v["im"])


def build_h(d):
    return HParams(
        d["m"], d["n"],
        tuple((to_complex(v), w) for v, w in d["upper"]),
        tuple((to_complex(v), w) for v, w in d["lower"]),
    )


def build_poly(d):
    A = d.get("A", "const1")
    if isinstance(A, str):
        provider = family(A)
    else:
        provider = TableCoefficients(tuple(_plain(to_complex(v)) for v in A))
    return PolySpec(d["U"], d["V"], provider)


def _plain(z):
    return z.real if z.imag == 0 else z


def build_integral_spec(d):
    return IntegralSpec(
        lam=to_complex(d["lambda"]), nu=to_complex(d["nu"]), alpha=to_complex(d["alpha"]),
        mu=d["mu"], a=d["a"], y=to_complex(d["y"]), z=to_complex(d["z"]),
        h=build_h(d["h"]), poly=build_poly(d["poly"]),
    )


def build_special_case(d):
    f = PFQParams(tuple(to_complex(v) for v in d["f"]["numerator"]),
                  tuple(to_complex(v) for v in d["f"]["denominator"]))
    return SpecialCaseSpec(to_complex(d["lambda"]), to_complex(d["nu"]), d["a"], to_complex(d["y"]), f)
