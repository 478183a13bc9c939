"""End-to-end driver: algebra -> model -> datum -> curve -> B-search -> bend ->
density certificate -> orbit separation.  Deterministic given the config."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exact_arith import Matrix
from .modp.cert import bad_prime_set, bad_primes, fingerprint, orbit_separation
from .quaternion import AlgebraError, OrderBasis, PellElement, QuaternionAlgebra, load_order_basis
from .surface import (Presentation, Representation, bend, load_datum, parse_word, quaternion_word,
                      datum_quaternions, evaluate_word, format_word, representation_from_datum)
from .symplectic.centralizer import b_search, eigenframe
from .symplectic.forms import SkewFormZ, symplectic_divisors
from .symplectic.model import RightRegularModel, rho

DATA_DIR = Path(__file__).resolve().parent / "data"

STAGES = ("algebra", "model", "datum", "curve", "b-search", "bend", "certify", "separate")
EXIT_NOT_CERTIFIED = 9
EXIT_CONFIG = 10


class StageError(RuntimeError):
    def __init__(self, stage, message):
        super().__init__("stage %d (%s): %s" % (STAGES.index(stage) + 1, stage, message))
        self.stage = stage

    @property
    def exit_code(self):
        return STAGES.index(self.stage) + 1


def resolve_path(name, base_dir=None):
    """A path relative to base_dir, or the name of a bundled data file."""
    p = Path(name)
    if p.is_absolute() and p.exists():
        return p
    if base_dir is not None and (Path(base_dir) / p).exists():
        return Path(base_dir) / p
    if p.exists():
        return p
    if (DATA_DIR / p.name).exists():
        return DATA_DIR / p.name
    raise FileNotFoundError("cannot find %s" % name)


@dataclass
class PipelineConfig:
    a: Fraction
    b: Fraction
    order: str = "standard"
    mu: tuple = (0, 1, 0, 0)
    copies: int = 1
    datum: str = "free_2ij.ini"
    b_height: int = 1
    bend_index: int = 0
    sweep_bound: int = 50
    separation_prime: int = 5
    auxiliary_primes: tuple = ()
    output_dir: str = "quatbend-out"
    emit_json: bool = False
    base_dir: str = field(default=None, repr=False)

    KEYS = ("a", "b", "order", "mu", "copies", "datum", "b_height", "bend_index", "sweep_bound",
            "separation_prime", "auxiliary_primes", "output_dir", "emit_json")

    def validate(self):
        if self.a == 0 or self.b == 0:
            raise ValueError("a and b must be nonzero")
        if self.copies < 1 or self.b_height < 0 or self.bend_index < 0 or self.sweep_bound < 0:
            raise ValueError("copies, heights, indices and bounds must be nonnegative")
        if len(self.mu) != 4:
            raise ValueError("mu needs four coordinates")
        return self


def parse_config(text: str, base_dir=None) -> PipelineConfig:
    """Flat 'key = value' lines; '#' starts a comment."""
    raw = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("config line %d is not 'key = value'" % n)
        k, v = (s.strip() for s in line.split("=", 1))
        k = k.replace("-", "_")
        if k not in PipelineConfig.KEYS:
            raise ValueError("unknown config key %r" % k)
        if k in raw:
            raise ValueError("duplicate config key %r" % k)
        raw[k] = v
    for req in ("a", "b"):
        if req not in raw:
            raise ValueError("config needs %r" % req)
    kw = {"a": Fraction(raw["a"]), "b": Fraction(raw["b"]), "base_dir": base_dir}
    for k in ("order", "datum", "output_dir"):
        if k in raw:
            kw[k] = raw[k]
    for k in ("copies", "b_height", "bend_index", "sweep_bound", "separation_prime"):
        if k in raw:
            kw[k] = int(raw[k])
    if "mu" in raw:
        kw["mu"] = tuple(Fraction(x) for x in raw["mu"].split())
    if "auxiliary_primes" in raw:
        kw["auxiliary_primes"] = tuple(int(x) for x in raw["auxiliary_primes"].split())
    if "emit_json" in raw:
        kw["emit_json"] = raw["emit_json"].lower() in ("1", "yes", "true", "on")
    return PipelineConfig(**kw).validate()


def load_config(path) -> PipelineConfig:
    path = Path(path)
    return parse_config(path.read_text(), base_dir=str(path.parent))


# representation files ------------------------------------------------------------------

def format_matrix(M: Matrix) -> str:
    return "\n".join(" ".join(str(x) for x in r) for r in M.rows)


def format_rep(rep: Representation) -> str:
    out = ["form", format_matrix(rep.form.gram)]
    if rep.presentation.relator is not None:
        out.append("relator %s" % format_word(rep.presentation.relator))
    for g, M in zip(rep.presentation.generators, rep.images):
        out.append("generator %s" % g)
        out.append(format_matrix(M))
    return "\n".join(out) + "\n"


def parse_rep(text: str) -> Representation:
    """Blocks headed 'form', 'generator NAME' and optionally 'relator WORD'."""
    blocks, current, relator = [], None, None
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()
        if head[0] == "form" and len(head) == 1:
            current = ["form", []]
            blocks.append(current)
        elif head[0] == "generator" and len(head) == 2:
            current = [head[1], []]
            blocks.append(current)
        elif head[0] == "relator":
            relator = parse_word(line[len("relator"):])
        else:
            if current is None:
                raise ValueError("matrix row before any block header")
            current[1].append([int(x) for x in head])
    if not blocks or blocks[0][0] != "form":
        raise ValueError("representation file must start with a form block")
    form = SkewFormZ(Matrix(blocks[0][1]))
    gens = [name for name, _ in blocks[1:]]
    pres = Presentation(tuple(gens), relator)
    return Representation(pres, tuple(Matrix(rows) for _, rows in blocks[1:]), form)


def load_rep(path) -> Representation:
    return parse_rep(Path(path).read_text())


# stages ------------------------------------------------------------------------------

@dataclass
class PipelineResult:
    exit_code: int
    log: str
    files: dict = field(default_factory=dict)
    certificate: object = None
    separation: object = None
    bend_elements: list = field(default_factory=list)


def build_model(cfg: PipelineConfig) -> RightRegularModel:
    A = QuaternionAlgebra(cfg.a, cfg.b)
    if cfg.order == "standard":
        order = OrderBasis.standard(A)
    else:
        order = load_order_basis(resolve_path(cfg.order, cfg.base_dir))
        if order.algebra != A:
            raise ValueError("order file is for a different algebra")
    return RightRegularModel(order, A(*cfg.mu), cfg.copies)


def curve_pell(datum, model) -> PellElement:
    quats = datum_quaternions(datum, model.algebra, model.copies)
    gammas = [quaternion_word(quats, datum.curve.word, c) for c in range(model.copies)]
    if any(g != gammas[0] for g in gammas):
        raise ValueError("the curve word has different quaternions on different copies")
    return PellElement(gammas[0])


def run_pipeline(cfg: PipelineConfig, out_dir=None, write=True) -> PipelineResult:
    log = io.StringIO()
    files = {}

    def say(msg):
        log.write(msg + "\n")

    def stage(name):
        say("[%d/%d] %s" % (STAGES.index(name) + 1, len(STAGES), name))

    result = PipelineResult(0, "")
    try:
        stage("algebra")
        try:
            A = QuaternionAlgebra(cfg.a, cfg.b)
            A.require_indefinite_division()
        except (AlgebraError, ValueError) as exc:
            raise StageError("algebra", str(exc)) from None
        say("  algebra (%s,%s), ramified at %s" % (A.a, A.b, _places(A.ramification)))

        stage("model")
        try:
            model = build_model(cfg)
            U, divs = symplectic_divisors(model.gram)
        except ValueError as exc:
            raise StageError("model", str(exc)) from None
        say("  form divisors %s, bad primes %s" % (
            " ".join(map(str, divs)), " ".join(map(str, sorted(bad_primes(model.gram.gram))))))
        files["model.txt"] = "gram\n%s\ndivisors %s\nunimodular U\n%s\n" % (
            format_matrix(model.gram.gram), " ".join(map(str, divs)), format_matrix(U))

        stage("datum")
        try:
            datum = load_datum(resolve_path(cfg.datum, cfg.base_dir))
            rep = representation_from_datum(datum, model)
        except (ValueError, FileNotFoundError) as exc:
            raise StageError("datum", str(exc)) from None
        say("  generators %s, relator %s" % (" ".join(rep.presentation.generators),
                                              "none" if rep.presentation.relator is None
                                              else format_word(rep.presentation.relator)))
        files["unbent.rep"] = format_rep(rep)

        stage("curve")
        try:
            pell = curve_pell(datum, model)
            if evaluate_word(rep, datum.curve.word) != rho(model, pell.gamma):
                raise ValueError("curve image is not rho of its quaternion")
            frame = eigenframe(model, pell)
        except ValueError as exc:
            raise StageError("curve", str(exc)) from None
        say("  curve %s is the Pell element %s, eigenvalue %s" % (
            format_word(datum.curve.word), pell.gamma, pell.eigenvalue()))

        stage("b-search")
        try:
            hits = b_search(model, pell, cfg.b_height, frame=frame)
        except (ValueError, RuntimeError) as exc:
            raise StageError("b-search", str(exc)) from None
        result.bend_elements = hits
        if not hits:
            raise StageError("b-search", "no bend element at height %d" % cfg.b_height)
        if cfg.bend_index >= len(hits):
            raise StageError("b-search", "bend_index %d but only %d elements found"
                             % (cfg.bend_index, len(hits)))
        B = hits[cfg.bend_index]
        say("  %d generic bend elements at height <= %d; using #%d (height %d)" % (
            len(hits), cfg.b_height, cfg.bend_index, B.height))
        files["bend.txt"] = "bend element #%d of %d, height %d\n%s\n" % (
            cfg.bend_index, len(hits), B.height, format_matrix(B.matrix))

        stage("bend")
        try:
            bent = bend(rep, datum.curve, B.matrix)
        except ValueError as exc:
            raise StageError("bend", str(exc)) from None
        files["bent.rep"] = format_rep(bent)
        say("  bent %s along %s" % (datum.curve.stable or " ".join(datum.curve.side_two),
                                   format_word(datum.curve.word)))

        stage("certify")
        model_id = _model_id(model)
        unbent_cert = bad_prime_set(rep.images, rep.form.gram, cfg.sweep_bound, model_id)
        cert = bad_prime_set(bent.images, bent.form.gram, cfg.sweep_bound, model_id)
        result.certificate = cert
        files["unbent-density.txt"] = unbent_cert.to_text()
        files["density.txt"] = cert.to_text()
        if cfg.emit_json:
            files["unbent-density.json"] = unbent_cert.to_json()
            files["density.json"] = cert.to_json()
        say("  unbent verdict %s, bent verdict %s, omega %s" % (
            unbent_cert.verdict, cert.verdict, " ".join(map(str, cert.omega)) or "none"))

        stage("separate")
        try:
            sep = orbit_separation(rep, datum.curve, B.matrix, cfg.separation_prime,
                                   cfg.auxiliary_primes)
        except ValueError as exc:
            raise StageError("separate", str(exc)) from None
        result.separation = sep
        files["separation.txt"] = sep.to_text()
        if cfg.emit_json:
            files["separation.json"] = sep.to_json()
        say("  k = %d at p0 = %d: %s" % (sep.k, sep.prime, sep.conclusion))
        result.exit_code = 0 if cert.verdict == "dense-certified" else EXIT_NOT_CERTIFIED
        say("verdict: %s" % cert.verdict)
    except StageError as exc:
        say("error: %s" % exc)
        result.exit_code = exc.exit_code
    result.log = log.getvalue()
    files["log.txt"] = result.log
    result.files = files
    if write:
        target = Path(out_dir or cfg.output_dir)
        target.mkdir(parents=True, exist_ok=True)
        for name, text in sorted(files.items()):
            (target / name).write_text(text)
    return result


def _model_id(model: RightRegularModel) -> str:
    import hashlib
    return hashlib.sha256(model.fingerprint_data().encode()).hexdigest()


def _places(places):
    return "{%s}" % ", ".join("inf" if p == float("inf") else str(p)
                              for p in sorted(places, key=lambda x: (x == float("inf"), x)))
