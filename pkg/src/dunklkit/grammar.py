"""Textual function specifications.

Grammar (whitespace allowed between tokens)::

    spec   := name '(' [arg {',' arg}] ')'
    arg    := key '=' value
    value  := number | '[' [pair {',' pair}] ']'
    pair   := '(' number ',' number ')'

Names: kernel, gauss, atom-measure, density-measure, raw-table,
inverse-algebraic. Errors carry the byte offset and the set of tokens that
would have been accepted there.
"""

import re

from .core import Density, Gaussian, KernelDecaying, MeasureSpec, RawTable
from .errors import GrammarError

_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_NAME = re.compile(r"[a-z][a-z-]*")
_KEY = re.compile(r"[a-z_][a-z_0-9]*")

# name -> {key: (kind, required)}
SCHEMAS = {
    "kernel": {"k": ("number", False), "y": ("number", True)},
    "gauss": {"p": ("number", True), "scale": ("number", False)},
    "atom-measure": {"atoms": ("pairs", True)},
    "density-measure": {"p": ("number", True), "rho": ("number", False), "scale": ("number", False)},
    "raw-table": {"points": ("pairs", True)},
    "inverse-algebraic": {"power": ("number", True), "scale": ("number", False)},
}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def offset(self, pos=None):
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def fail(self, message, expected, pos=None):
        raise GrammarError(message, self.offset(pos), expected)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char):
        if self.peek() != char:
            self.fail("unexpected input" if self.peek() else "unexpected end of input", [repr(char)])
        self.pos += 1

    def match(self, regex, what):
        self.skip_ws()
        m = regex.match(self.text, self.pos)
        if not m:
            self.fail("unexpected input" if self.peek() else "unexpected end of input", [what])
        self.pos = m.end()
        return m.group(0)

    def number(self):
        return float(self.match(_NUMBER, "number"))

    def pairs(self):
        self.expect("[")
        out = []
        if self.peek() == "]":
            self.pos += 1
            return tuple(out)
        while True:
            self.expect("(")
            a = self.number()
            self.expect(",")
            b = self.number()
            self.expect(")")
            out.append((a, b))
            if self.peek() == ",":
                self.pos += 1
                continue
            if self.peek() != "]":
                self.fail("unexpected input" if self.peek() else "unexpected end of input", ["','", "']'"])
            self.pos += 1
            return tuple(out)

    def spec(self):
        self.skip_ws()
        start = self.pos
        name = self.match(_NAME, "name")
        if name not in SCHEMAS:
            self.fail(f"unknown name {name!r}", sorted(SCHEMAS), start)
        schema = SCHEMAS[name]
        self.expect("(")
        args = {}
        if self.peek() != ")":
            while True:
                self.skip_ws()
                key_pos = self.pos
                key = self.match(_KEY, "key")
                if key not in schema:
                    self.fail(f"unknown key {key!r} for {name}", sorted(schema), key_pos)
                if key in args:
                    self.fail(f"duplicate key {key!r}", sorted(set(schema) - set(args)), key_pos)
                self.expect("=")
                kind = schema[key][0]
                args[key] = self.number() if kind == "number" else self.pairs()
                if self.peek() == ",":
                    self.pos += 1
                    continue
                if self.peek() != ")":
                    self.fail("unexpected input" if self.peek() else "unexpected end of input", ["')'", "','"])
                break
        close_pos = self.pos
        self.expect(")")
        missing = sorted(k for k, (_, req) in schema.items() if req and k not in args)
        if missing:
            self.fail(f"missing required key for {name}", missing, close_pos)
        if self.peek():
            self.fail("trailing input", ["end of input"])
        return name, args


def _build(name, args):
    if name == "kernel":
        return KernelDecaying(y=args["y"], k=args.get("k"))
    if name == "gauss":
        return Gaussian(p=args["p"], scale=args.get("scale", 1.0))
    if name == "atom-measure":
        return MeasureSpec(atoms=args["atoms"])
    if name == "density-measure":
        return MeasureSpec(density=Density(args["p"], args.get("rho", 0.0), args.get("scale", 1.0)))
    if name == "raw-table":
        return RawTable(points=args["points"])
    if name == "inverse-algebraic":
        from .transform import FromTransform

        power = args["power"]
        scale = args.get("scale", 1.0)
        return FromTransform(
            density=lambda y, power=power, scale=scale: scale * (1.0 + abs(y)) ** (-power),
            power=power,
            scale=scale,
            name=f"inverse-algebraic(power={power!r}, scale={scale!r})",
        )
    raise AssertionError(name)


def parse_spec(text):
    """Parse a textual spec into a FunctionSpec or MeasureSpec."""
    name, args = _Parser(text).spec()
    return _build(name, args)


def _pairs(pairs):
    return "[" + ", ".join(f"({a!r}, {b!r})" for a, b in pairs) + "]"


def format_spec(spec):
    """Canonical text for a spec; ``parse_spec(format_spec(s)) == s``."""
    from .transform import FromTransform

    if isinstance(spec, KernelDecaying):
        head = "" if spec.k is None else f"k={float(spec.k)!r}, "
        return f"kernel({head}y={float(spec.y)!r})"
    if isinstance(spec, Gaussian):
        return f"gauss(p={float(spec.p)!r}, scale={float(spec.scale)!r})"
    if isinstance(spec, MeasureSpec):
        if spec.density is not None and spec.atoms:
            raise ValueError("the grammar cannot express atoms and a density together")
        if spec.density is not None:
            d = spec.density
            return f"density-measure(p={float(d.p)!r}, rho={float(d.rho)!r}, scale={float(d.scale)!r})"
        return f"atom-measure(atoms={_pairs(spec.atoms)})"
    if isinstance(spec, RawTable):
        return f"raw-table(points={_pairs(spec.points)})"
    if isinstance(spec, FromTransform) and spec.name.startswith("inverse-algebraic"):
        return spec.name
    raise ValueError(f"no textual form for {type(spec).__name__}")
