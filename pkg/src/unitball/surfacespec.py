"""Text descriptions of catalog surfaces.

Inline form, as given on the command line::

    sphere:r=1.4,center=(0.55,0,0)
    torus:R=2,r=1
    perturbed:amplitude=0.03,base=1.2,coeffs=(0,0,0,0,0,0,0,1)

Config-file form, one section named after the surface kind::

    # a perturbed sphere
    [perturbed]
    amplitude = 0.03
    base = 1.2
    coeffs = 0, 0, 0, 0, 0, 0, 0, 1

Every parse error is a :class:`~unitball.errors.SpecError` carrying the
1-based line and column of the offending text.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import (make_cylinder, make_ellipsoid, make_perturbed_sphere, make_sphere, make_torus,
                      make_tube_segment)
from .errors import SpecError


def _fishbowl(**kw):
    from .fishbowl import FishbowlParams, build_fishbowl
    return build_fishbowl(FishbowlParams(**kw))


def _main_body():
    from .fishbowl import main_body_surface
    return main_body_surface()


def _vec3(v):
    if len(v) != 3:
        raise ValueError("expected three numbers")
    return tuple(v)


# kind -> (constructor, {key: (keyword, converter)})
_SCALAR = float
KINDS = {
    "sphere": (make_sphere, {"r": ("radius", _SCALAR), "radius": ("radius", _SCALAR),
                             "center": ("center", _vec3)}),
    "ellipsoid": (lambda a=1.0, b=1.0, c=1.0, center=(0.0, 0.0, 0.0): make_ellipsoid((a, b, c), center),
                  {"a": ("a", _SCALAR), "b": ("b", _SCALAR), "c": ("c", _SCALAR), "center": ("center", _vec3)}),
    "torus": (make_torus, {"R": ("R", _SCALAR), "r": ("r", _SCALAR)}),
    "tube": (make_tube_segment, {"R": ("axis_radius", _SCALAR), "r": ("tube_radius", _SCALAR),
                                 "extent": ("angular_extent", _SCALAR)}),
    "cylinder": (make_cylinder, {"r": ("radius", _SCALAR), "h": ("height", _SCALAR)}),
    "perturbed": (lambda coeffs=(), amplitude=1.0, **kw: make_perturbed_sphere(list(coeffs), amplitude, **kw),
                  {"amplitude": ("amplitude", _SCALAR), "a": ("amplitude", _SCALAR),
                   "base": ("base_radius", _SCALAR), "center": ("center", _vec3),
                   "coeffs": ("coeffs", tuple)}),
    "mainbody": (_main_body, {}),
    "fishbowl": (_fishbowl, {"plate_length": ("plate_length", _SCALAR), "plate_gap": ("plate_gap", _SCALAR),
                             "half_circle_radius": ("half_circle_radius", _SCALAR),
                             "tunnel_delta": ("tunnel_delta", _SCALAR),
                             "tunnel_length": ("tunnel_length", _SCALAR)}),
}
_REQUIRED_DEFAULTS = {"tube": {"axis_radius": 2.0, "tube_radius": 1.0}}


@dataclass
class SurfaceSpec:
    """A parsed description: surface kind plus keyword arguments."""

    kind: str
    params: dict = field(default_factory=dict)
    source: str = "<inline>"

    def build(self):
        ctor, _ = KINDS[self.kind]
        kw = dict(_REQUIRED_DEFAULTS.get(self.kind, {}))
        kw.update(self.params)
        return ctor(**kw)

    def canonical(self) -> str:
        def fmt(v):
            if isinstance(v, tuple):
                return "(" + ",".join(repr(float(x)) for x in v) + ")"
            return repr(v)

        # write the first spec key that maps to each keyword so the text parses back
        _, keys = KINDS[self.kind]
        key_of = {}
        for key, (kwarg, _) in keys.items():
            key_of.setdefault(kwarg, key)
        body = ",".join(f"{key_of.get(k, k)}={fmt(v)}" for k, v in sorted(self.params.items()))
        return f"{self.kind}:{body}" if body else self.kind


_NUMBER = re.compile(r"[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class _Scanner:
    def __init__(self, text, line=1, col0=1):
        self.text, self.pos, self.line, self.col0 = text, 0, line, col0

    def error(self, msg, pos=None):
        return SpecError(msg, self.line, self.col0 + (self.pos if pos is None else pos))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def name(self):
        self.skip_ws()
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise self.error("expected a name")
        self.pos = m.end()
        return m.group(0), m.start()

    def number(self):
        self.skip_ws()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            raise self.error("expected a number")
        self.pos = m.end()
        return float(m.group(0))

    def value(self):
        """A number or a parenthesized list of numbers."""
        if self.peek() == "(":
            self.pos += 1
            items = []
            if self.peek() != ")":
                items.append(self.number())
                while self.peek() == ",":
                    self.pos += 1
                    items.append(self.number())
            self.expect(")")
            return tuple(items)
        return self.number()

    def number_list(self):
        """Bare comma-separated numbers (config-file values)."""
        items = [self.number()]
        while self.peek() == ",":
            self.pos += 1
            items.append(self.number())
        return items[0] if len(items) == 1 else tuple(items)


def _assign(kind, params, key, key_pos, value, scanner):
    _, keys = KINDS[kind]
    if key not in keys:
        raise scanner.error(f"unknown parameter {key!r} for {kind} (expected one of {sorted(keys)})", key_pos)
    kwarg, conv = keys[key]
    if kwarg in params:
        raise scanner.error(f"parameter {key!r} given twice", key_pos)
    if conv is _SCALAR and isinstance(value, tuple):
        raise scanner.error(f"parameter {key!r} takes a single number", key_pos)
    if conv is not _SCALAR and not isinstance(value, tuple):
        value = (value,)
    try:
        params[kwarg] = conv(value)
    except ValueError as exc:
        raise scanner.error(f"parameter {key!r}: {exc}", key_pos) from None


def _kind(name, pos, scanner):
    if name not in KINDS:
        raise scanner.error(f"unknown surface kind {name!r} (expected one of {sorted(KINDS)})", pos)
    return name


def parse_inline(text: str) -> SurfaceSpec:
    """Parse ``kind`` or ``kind:key=value,...``."""
    sc = _Scanner(text)
    kind = _kind(*sc.name(), sc)
    params: dict = {}
    if not sc.at_end():
        sc.expect(":")
        while True:
            key, pos = sc.name()
            sc.expect("=")
            _assign(kind, params, key, pos, sc.value(), sc)
            if sc.at_end():
                break
            sc.expect(",")
    return SurfaceSpec(kind, params)


def parse_config(text: str, source="<config>") -> SurfaceSpec:
    """Parse the config-file form: one ``[kind]`` section of ``key = value`` lines."""
    kind, params = None, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        sc = _Scanner(line, lineno)
        if sc.peek() == "[":
            if kind is not None:
                raise sc.error("only one surface section is allowed")
            sc.pos += 1
            kind = _kind(*sc.name(), sc)
            sc.expect("]")
            if not sc.at_end():
                raise sc.error("unexpected text after section header")
            continue
        if kind is None:
            raise sc.error("expected a [kind] section header first")
        key, pos = sc.name()
        sc.expect("=")
        value = sc.number_list()
        if not sc.at_end():
            raise sc.error("unexpected text after value")
        _assign(kind, params, key, pos, value, sc)
    if kind is None:
        raise SpecError("no surface section found", max(1, len(text.splitlines())), 1)
    return SurfaceSpec(kind, params, source)


def load_spec(spec: str) -> SurfaceSpec:
    """An existing file path is read as a config file; anything else is inline."""
    path = Path(spec)
    if path.is_file():
        return parse_config(path.read_text(), str(path))
    return parse_inline(spec)
