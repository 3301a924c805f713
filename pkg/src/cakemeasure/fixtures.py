"""Built-in valuations and the fixture grammar.

Named constructors (usable anywhere a fixture is expected)::

    uniform            Lebesgue measure on [0,1]
    cantor             the Cantor measure
    dirac(x)           unit point mass at x
    sq(n)              cdf x**2 interpolated linearly at n+1 knots
    exF(lam)           content with F = lam*x, 1/2, lam*x + 1 - lam
    exG(eps)           content with G = 0, (1-2eps)x + eps, 1
    mix(w1*v1 + ...)   positive combination of the above

Fixture files hold named blocks::

    # comment
    valuation half_and_half stieltjes probability
    bp 0 0 0 0
    seg linear 1/2
    bp 1/2 1/4 3/4 3/4
    seg linear 1/2
    bp 1 1 1 1
    end

    define mixed = mix(0.3*dirac(1/4) + 0.7*uniform)
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .cdf import CANTOR, LINEAR, Breakpoint, GeneralizedCDF, Segment, cantor_distribution, dirac_cdf, uniform_cdf
from .errors import ValidationError
from .rational import as_fraction, fmt
from .valuation import Convention, Valuation

S, C = Convention.STIELTJES, Convention.CONTENT


def uniform(mass=1) -> Valuation:
    return Valuation(uniform_cdf(mass), S, "uniform")


def cantor(mass=1) -> Valuation:
    return Valuation(cantor_distribution(mass), S, "cantor")


def dirac(x, mass=1) -> Valuation:
    return Valuation(dirac_cdf(x, mass), S, f"dirac({fmt(as_fraction(x))})")


def square(n: int = 64) -> Valuation:
    n = int(n)
    if n < 1:
        raise ValidationError("sq(n) needs n >= 1")
    knots = [(Fraction(i, n), Fraction(i * i, n * n)) for i in range(n + 1)]
    return Valuation(GeneralizedCDF.piecewise_linear(knots), S, f"sq({n})")


def example_f(lam=Fraction(1, 10)) -> Valuation:
    """Content whose cdf jumps at 1/2 from both sides, F(1/2) = 1/2."""
    lam = as_fraction(lam)
    if not (0 <= lam <= 1):
        raise ValidationError("exF needs 0 <= lambda <= 1")
    half = Fraction(1, 2)
    bps = [
        Breakpoint(0, 0, 0, 0),
        Breakpoint(half, lam * half, half, lam * half + 1 - lam),
        Breakpoint(1, 1, 1, 1),
    ]
    return Valuation(GeneralizedCDF(bps, [LINEAR, LINEAR]), C, f"exF({fmt(lam)})")


def example_g(eps=Fraction(1, 20)) -> Valuation:
    """Content whose cdf jumps just after 0 and just before 1."""
    eps = as_fraction(eps)
    if not (0 <= eps <= Fraction(1, 2)):
        raise ValidationError("exG needs 0 <= eps <= 1/2")
    bps = [Breakpoint(0, 0, 0, eps), Breakpoint(1, 1 - eps, 1, 1)]
    return Valuation(GeneralizedCDF(bps, [LINEAR]), C, f"exG({fmt(eps)})")


def mix(terms) -> Valuation:
    """Positive combination ``sum w_i v_i``; content if any term is a content."""
    terms = [(as_fraction(w), v) for w, v in terms]
    if not terms:
        raise ValidationError("mix needs at least one term")
    for w, _ in terms:
        if w <= 0:
            raise ValidationError("mix weights must be positive")
    total = None
    for w, v in terms:
        piece = v.cdf.scaled(w)
        total = piece if total is None else total + piece
    conv = C if any(v.convention is C for _, v in terms) else S
    name = "mix(" + " + ".join(f"{fmt(w)}*{v.name}" for w, v in terms) + ")"
    return Valuation(total, conv, name)


MEASURE_FIXTURES = ("uniform", "cantor", "dirac(1/2)", "mix(1/2*dirac(1/2) + 1/2*uniform)", "mix(3/10*dirac(1/4) + 1/5*dirac(3/4) + 1/2*uniform)")
CONTENT_FIXTURES = ("exF(1/10)", "exG(1/20)")
BUILTIN_FIXTURES = MEASURE_FIXTURES + CONTENT_FIXTURES + ("sq(64)",)


# -- expression parser -----------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:[eE][-+]?\d+)?(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[()*+,]))")

_CONSTRUCTORS = {
    "uniform": (uniform, 0),
    "cantor": (cantor, 0),
    "dirac": (dirac, 1),
    "sq": (square, 1),
    "exF": (example_f, 1),
    "exG": (example_g, 1),
}


def _tokenize(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValidationError(f"cannot parse fixture expression at {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text: str, registry: Mapping[str, Valuation]):
        self.toks = _tokenize(text)
        self.i = 0
        self.registry = registry
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ValidationError(f"bad fixture expression {self.text!r}: expected {value or 'more input'}")
        self.i += 1
        return tok

    def parse(self) -> Valuation:
        v = self.fixture()
        if self.i != len(self.toks):
            raise ValidationError(f"trailing input in fixture expression {self.text!r}")
        return v

    def fixture(self) -> Valuation:
        kind, name = self.take()
        if kind != "name":
            raise ValidationError(f"expected a fixture name in {self.text!r}")
        if name == "mix":
            self.take("(")
            terms = [self.weighted()]
            while self.peek()[1] == "+":
                self.take("+")
                terms.append(self.weighted())
            self.take(")")
            return mix(terms)
        if name in self.registry:
            return self.registry[name]
        if name not in _CONSTRUCTORS:
            raise KeyError(name)
        fn, arity = _CONSTRUCTORS[name]
        args = []
        if self.peek()[1] == "(":
            self.take("(")
            while self.peek()[1] != ")":
                k, val = self.take()
                if k != "num":
                    raise ValidationError(f"expected a number in {self.text!r}")
                args.append(as_fraction(val))
                if self.peek()[1] == ",":
                    self.take(",")
            self.take(")")
        if arity == 0 and not args:
            return fn()
        if len(args) != arity:
            raise ValidationError(f"{name} takes {arity} argument(s)")
        return fn(*args)

    def weighted(self):
        kind, val = self.peek()
        weight = Fraction(1)
        if kind == "num":
            self.take()
            weight = as_fraction(val)
            self.take("*")
        return weight, self.fixture()


class UnknownFixture(KeyError):
    pass


def resolve(expr: str, registry: Mapping[str, Valuation] | None = None) -> Valuation:
    """Build a valuation from a fixture expression or a registered name."""
    try:
        return _Parser(expr, registry or {}).parse()
    except KeyError as exc:
        raise UnknownFixture(str(exc.args[0])) from None


# -- fixture files -------------------------------------------------------------------


def parse_fixture_text(text: str) -> dict[str, Valuation]:
    """Parse a fixture file into ``{name: Valuation}`` with line-precise errors."""
    out: dict[str, Valuation] = {}
    block = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if block is None:
                if words[0] == "define":
                    m = re.match(r"define\s+(\w+)\s*=\s*(.+)$", line)
                    if not m:
                        raise ValidationError("expected 'define NAME = EXPR'")
                    out[m.group(1)] = resolve(m.group(2), out).renamed(m.group(1))
                elif words[0] == "valuation":
                    if len(words) < 2:
                        raise ValidationError("valuation needs a name")
                    flags = words[2:]
                    conv = S
                    for fl in flags:
                        if fl not in ("stieltjes", "content", "probability"):
                            raise ValidationError(f"unknown valuation flag {fl!r}")
                    if "content" in flags:
                        conv = C
                    block = {"name": words[1], "conv": conv, "prob": "probability" in flags, "bps": [], "segs": [], "start": lineno, "seg_lines": []}
                else:
                    raise ValidationError(f"unexpected {words[0]!r} outside a valuation block")
                continue
            if words[0] == "bp":
                if len(words) != 5:
                    raise ValidationError("bp needs: x left at right")
                if len(block["bps"]) != len(block["segs"]):
                    raise ValidationError("two breakpoints without a segment between them")
                block["bps"].append(Breakpoint(*(as_fraction(w) for w in words[1:])))
            elif words[0] == "seg":
                if len(block["bps"]) != len(block["segs"]) + 1:
                    raise ValidationError("segment must follow a breakpoint")
                block["segs"].append(_parse_segment(words))
                block["seg_lines"].append((lineno, words))
            elif words[0] == "end":
                out[block["name"]] = _finish_block(block)
                block = None
            else:
                raise ValidationError(f"unknown record {words[0]!r}")
        except ValidationError as exc:
            if str(exc).startswith("line "):
                raise
            raise ValidationError(f"line {lineno}: {exc}") from None
    if block is not None:
        raise ValidationError(f"line {block['start']}: valuation {block['name']!r} has no 'end'")
    return out


def _parse_segment(words) -> tuple[Segment, Fraction]:
    if len(words) < 3:
        raise ValidationError("seg needs a kind and a number")
    kind = words[1]
    value = as_fraction(words[2])
    if kind == "linear":
        if len(words) != 3:
            raise ValidationError("seg linear takes one slope")
        return LINEAR, value
    if kind == "cantor":
        if len(words) == 3:
            return CANTOR, value
        if len(words) == 5:
            return Segment("cantor", as_fraction(words[3]), as_fraction(words[4])), value
        raise ValidationError("seg cantor takes a mass and optionally a window u0 u1")
    raise ValidationError(f"unknown segment kind {kind!r}")


def _finish_block(block) -> Valuation:
    bps = block["bps"]
    segs = [s for s, _ in block["segs"]]
    try:
        cdf = GeneralizedCDF(bps, segs)
    except ValidationError as exc:
        raise ValidationError(f"valuation {block['name']!r}: {exc}") from None
    for i, ((seg, declared), (lineno, _)) in enumerate(zip(block["segs"], block["seg_lines"])):
        actual = cdf.segment_slope(i) if seg.kind == "linear" else cdf.segment_rise(i)
        if actual != declared:
            what = "slope" if seg.kind == "linear" else "mass"
            raise ValidationError(f"line {lineno}: declared {what} {fmt(declared)} but breakpoints imply {fmt(actual)}")
    v = Valuation(cdf, block["conv"], block["name"])
    if block["prob"] and v.total_mass != 1:
        raise ValidationError(f"valuation {block['name']!r} declared probability but has mass {fmt(v.total_mass)}")
    return v


def load_fixture_file(path) -> dict[str, Valuation]:
    return parse_fixture_text(Path(path).read_text(encoding="utf-8"))


def to_fixture_text(v: Valuation, name: str | None = None) -> str:
    """Serialize a valuation as a fixture block (parses back to an equal valuation)."""
    name = name or re.sub(r"\W+", "_", v.name).strip("_") or "unnamed"
    lines = [f"valuation {name} {v.convention.value}"]
    f = v.cdf
    for i, bp in enumerate(f.breakpoints):
        lines.append(f"bp {fmt(bp.x)} {fmt(bp.left)} {fmt(bp.at)} {fmt(bp.right)}")
        if i < len(f.segments):
            seg = f.segments[i]
            if seg.kind == "linear":
                lines.append(f"seg linear {fmt(f.segment_slope(i))}")
            elif seg.full_window:
                lines.append(f"seg cantor {fmt(f.segment_rise(i))}")
            else:
                lines.append(f"seg cantor {fmt(f.segment_rise(i))} {fmt(seg.u0)} {fmt(seg.u1)}")
    lines.append("end")
    return "\n".join(lines) + "\n"
