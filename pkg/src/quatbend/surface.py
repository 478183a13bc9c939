"""Presentations, words, curve splittings, integral representations and bending."""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exact_arith import Matrix
from .symplectic.forms import SkewFormZ, is_symplectic


class WordError(ValueError):
    pass


class RepresentationError(ValueError):
    pass


class BendError(ValueError):
    pass


# words ----------------------------------------------------------------------------

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(?:\{(-?\d+)\}|(-?\d+)))?$")


def parse_word(text: str):
    """'a b^-1 c^{2}' -> (('a', 1), ('b', -1), ('c', 1), ('c', 1)).  '1' or '' is empty."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    out = []
    for tok in text.replace("*", " ").split():
        m = _TOKEN.match(tok)
        if not m:
            raise WordError("bad word token %r" % tok)
        name = m.group(1)
        exp = int(m.group(2) or m.group(3) or 1)
        if exp == 0:
            continue
        out.extend([(name, 1 if exp > 0 else -1)] * abs(exp))
    return tuple(out)


def format_word(word) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        name, e = word[i]
        k = 1
        while i + k < len(word) and word[i + k] == (name, e):
            k += 1
        exp = e * k
        parts.append(name if exp == 1 else "%s^%d" % (name, exp))
        i += k
    return " ".join(parts)


def free_reduce(word):
    out = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def invert_word(word):
    return tuple((n, -e) for n, e in reversed(word))


def cyclic_reduce(word):
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def is_conjugate(u, v) -> bool:
    """Conjugacy in a free group: cyclic reductions agree up to rotation."""
    cu, cv = cyclic_reduce(u), cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    return any(cu[i:] + cu[:i] == cv for i in range(len(cu)))


def commutator(x, y):
    return x + y + invert_word(x) + invert_word(y)


def surface_relator(g: int):
    """[a1,b1]...[ag,bg]."""
    word = ()
    for k in range(1, g + 1):
        word += commutator((("a%d" % k, 1),), (("b%d" % k, 1),))
    return word


# presentations and curves ----------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relator: tuple = None

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens) or not gens:
            raise WordError("generator names must be distinct and nonempty")
        object.__setattr__(self, "generators", gens)
        if self.relator is not None:
            self.check_word(self.relator)

    def check_word(self, word):
        for name, _ in word:
            if name not in self.generators:
                raise WordError("letter %r is not a generator" % name)


@dataclass(frozen=True)
class CurveDatum:
    word: tuple
    kind: str
    side_one: tuple = ()
    side_two: tuple = ()
    stable: str = None

    def validate(self, pres: Presentation):
        pres.check_word(self.word)
        if not free_reduce(self.word):
            raise WordError("curve word is trivial")
        if self.kind == "separating":
            one, two = set(self.side_one), set(self.side_two)
            if one & two or one | two != set(pres.generators) or not one or not two:
                raise WordError("sides must partition the generators")
            if any(n not in one for n, _ in self.word):
                raise WordError("curve word must be written in side one")
            if pres.relator is not None:
                self._check_amalgam(pres.relator)
        elif self.kind == "nonseparating":
            if self.stable not in pres.generators:
                raise WordError("stable letter %r is not a generator" % self.stable)
            if any(n == self.stable for n, _ in self.word):
                raise WordError("curve word may not involve the stable letter")
        else:
            raise WordError("curve kind must be separating or nonseparating")

    def _check_amalgam(self, relator):
        # relator must rotate to (side-one segment)(side-two segment) with the
        # side-one segment conjugate to the curve word
        one = set(self.side_one)
        r = cyclic_reduce(relator)
        for i in range(len(r)):
            rot = r[i:] + r[:i]
            k = 0
            while k < len(rot) and rot[k][0] in one:
                k += 1
            if k and all(n not in one for n, _ in rot[k:]) and is_conjugate(rot[:k], self.word):
                return
        raise WordError("relator does not split along the curve word")


# representations -------------------------------------------------------------------

@dataclass(frozen=True)
class Representation:
    presentation: Presentation
    images: tuple                 # matrices in generator order
    form: SkewFormZ
    _inverses: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if len(self.images) != len(self.presentation.generators):
            raise RepresentationError("one image per generator required")
        for name, M in zip(self.presentation.generators, self.images):
            if not M.is_integral():
                raise RepresentationError("image of %s is not integral" % name)
            if not is_symplectic(M, self.form):
                raise RepresentationError("image of %s does not preserve the form" % name)
        if self.presentation.relator is not None and not check_relator(self):
            raise RepresentationError("relator does not evaluate to the identity")

    @classmethod
    def from_dict(cls, pres, mapping, form):
        return cls(pres, tuple(mapping[g] for g in pres.generators), form)

    def image(self, name) -> Matrix:
        return self.images[self.presentation.generators.index(name)]

    def inverse_image(self, name) -> Matrix:
        if name not in self._inverses:
            self._inverses[name] = self.form.inverse_transform(self.image(name))
        return self._inverses[name]

    def as_dict(self):
        return dict(zip(self.presentation.generators, self.images))

    def replace(self, mapping):
        d = self.as_dict()
        d.update(mapping)
        return Representation.from_dict(self.presentation, d, self.form)


def evaluate_word(rep: Representation, word) -> Matrix:
    if isinstance(word, str):
        word = parse_word(word)
    rep.presentation.check_word(word)
    out = Matrix.identity(rep.form.dim)
    for name, e in word:
        out = out * (rep.image(name) if e > 0 else rep.inverse_image(name))
    return out


def check_relator(rep: Representation) -> bool:
    rel = rep.presentation.relator
    if rel is None:
        raise RepresentationError("presentation has no relator")
    return evaluate_word(rep, rel).is_identity()


# automorphisms ------------------------------------------------------------------------

@dataclass(frozen=True)
class WordMap:
    images: dict      # generator -> word

    def apply(self, word):
        out = ()
        for name, e in word:
            img = self.images.get(name, ((name, 1),))
            out += img if e > 0 else invert_word(img)
        return free_reduce(out)

    def validate(self, pres: Presentation, curve: CurveDatum = None):
        for g, w in self.images.items():
            if g not in pres.generators:
                raise WordError("word map names unknown generator %r" % g)
            pres.check_word(w)
        if pres.relator is not None:
            img = self.apply(pres.relator)
            if not (is_conjugate(img, pres.relator)):
                raise WordError("word map does not send the relator to a conjugate of itself")
        if curve is not None and not is_conjugate(self.apply(curve.word), curve.word):
            raise WordError("word map does not fix the curve up to conjugacy")
        return True


def compose(first: WordMap, second: WordMap) -> WordMap:
    """The map with precompose(precompose(r, first), second) == precompose(r, compose(...))."""
    keys = set(first.images) | set(second.images)
    return WordMap({g: first.apply(second.images.get(g, ((g, 1),))) for g in sorted(keys)})


def precompose(rep: Representation, m: WordMap) -> Representation:
    return Representation(rep.presentation, tuple(
        evaluate_word(rep, m.images.get(g, ((g, 1),))) for g in rep.presentation.generators),
        rep.form)


# bending ----------------------------------------------------------------------------

def bend(rep: Representation, curve: CurveDatum, B: Matrix) -> Representation:
    curve.validate(rep.presentation)
    if not is_symplectic(B, rep.form):
        raise BendError("bend element does not preserve the form")
    C = evaluate_word(rep, curve.word)
    if B * C != C * B:
        raise BendError("bend element does not commute with the curve image")
    if curve.kind == "nonseparating":
        new = {curve.stable: rep.image(curve.stable) * B}
    else:
        Binv = rep.form.inverse_transform(B)
        new = {g: B * rep.image(g) * Binv for g in curve.side_two}
    try:
        return rep.replace(new)
    except RepresentationError as exc:
        raise BendError("bent assignment is not a representation: %s" % exc) from None


def iterate_bends(rep: Representation, steps) -> Representation:
    for curve, B in steps:
        rep = bend(rep, curve, B)
    return rep


def trace_signature(rep: Representation, words):
    """Sorted multiset of traces over a fixed word list."""
    out = []
    for w in words:
        M = evaluate_word(rep, w)
        out.append(sum(M[i, i] for i in range(M.nrows)))
    return tuple(sorted(out))


def default_test_words(pres: Presentation, length=3):
    """All positive words up to the given length, in a fixed order."""
    words, frontier = [], [()]
    for _ in range(length):
        frontier = [w + ((g, 1),) for w in frontier for g in pres.generators]
        words.extend(frontier)
    return words


def check_distinct(rep1: Representation, rep2: Representation, words=None) -> bool:
    words = words if words is not None else default_test_words(rep1.presentation)
    return trace_signature(rep1, words) != trace_signature(rep2, words)


# datum files --------------------------------------------------------------------------

@dataclass(frozen=True)
class Datum:
    presentation: Presentation
    assignment: dict          # generator -> list of quaternion coordinate 4-tuples (per copy)
    curve: CurveDatum
    automorphisms: dict       # name -> WordMap


def _coords(text):
    parts = text.split()
    if len(parts) != 4:
        raise WordError("quaternion needs four coordinates: %r" % text)
    return tuple(Fraction(p) for p in parts)


def _parse_word_map(text):
    images = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "->" not in item:
            raise WordError("word map entries look like 'g -> word': %r" % item)
        lhs, rhs = item.split("->", 1)
        images[lhs.strip()] = parse_word(rhs)
    return WordMap(images)


def parse_datum(text: str) -> Datum:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.optionxform = str
    cp.read_string(text)
    for sec in ("presentation", "assignment", "curve"):
        if sec not in cp:
            raise WordError("datum needs a [%s] section" % sec)
    p = cp["presentation"]
    gens = tuple(p.get("generators", "").split())
    rel = p.get("relator", "").strip()
    pres = Presentation(gens, parse_word(rel) if rel else None)
    assign = {}
    for g in gens:
        if g not in cp["assignment"]:
            raise WordError("no assignment for generator %r" % g)
        assign[g] = [_coords(chunk) for chunk in cp["assignment"][g].split(";")]
    c = cp["curve"]
    kind = c.get("kind", "").strip()
    curve = CurveDatum(parse_word(c.get("word", "")), kind,
                       tuple(c.get("side_one", "").split()), tuple(c.get("side_two", "").split()),
                       c.get("stable", None) and c.get("stable").strip())
    curve.validate(pres)
    autos = {}
    if "automorphisms" in cp:
        for name, val in cp["automorphisms"].items():
            m = _parse_word_map(val)
            m.validate(pres)
            autos[name] = m
    return Datum(pres, assign, curve, autos)


def load_datum(path) -> Datum:
    return parse_datum(Path(path).read_text())


def datum_quaternions(datum: Datum, algebra, copies: int):
    """generator -> list of quaternions, one per copy."""
    out = {}
    for g, chunks in datum.assignment.items():
        if len(chunks) == 1:
            chunks = chunks * copies
        if len(chunks) != copies:
            raise WordError("generator %r has %d alternatives for %d copies" % (g, len(chunks), copies))
        out[g] = [algebra(*c) for c in chunks]
    return out


def quaternion_word(quats, word, copy=0):
    """Evaluate a word on the quaternion assignment (one copy)."""
    A = next(iter(quats.values()))[copy].parent
    out = A(1)
    for name, e in word:
        q = quats[name][copy]
        out = out * (q if e > 0 else q.inverse())
    return out


def representation_from_datum(datum: Datum, model) -> Representation:
    from .symplectic.model import rho_multi
    quats = datum_quaternions(datum, model.algebra, model.copies)
    images = {g: rho_multi(model, qs) for g, qs in quats.items()}
    return Representation.from_dict(datum.presentation, images, model.gram)
