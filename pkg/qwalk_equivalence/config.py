import json
import logging
import configparser

from dataclasses import dataclass, field, replace
from pathlib import Path

from qwalk_equivalence.coins import (CoinParams1D, MatrixSpec, ScatterParams1D, TransitionField, catalog,
                                     general_coin, matrix_from_entries, scattering_matrix_1d)
from qwalk_equivalence.core import BasisLabel, QuantumWalkError, WaveFunction, norm_sq
from qwalk_equivalence.lattices import LATTICES, Lattice, get_lattice

logger = logging.getLogger(__name__)

MODELS = ("coined", "scattering")
OUTPUTS = ("native-grid", "cross-grid", "both")
PRESETS = {"square-symmetric": ("square", "square-diagonal"), "honeycomb-symmetric": ("honeycomb",), "line-plus": ("line",)}
LOAD_TOLERANCE = 1e-12
NORM_TOLERANCE = 1e-9


class ConfigError(QuantumWalkError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class ExperimentConfig:
    lattice: str
    model: str
    matrix: MatrixSpec
    initial: WaveFunction
    overrides: dict = field(default_factory=dict)
    steps: int = 20
    output: str = "both"
    workers: int = 1
    source: dict = field(default_factory=dict)

    @property
    def lattice_object(self) -> Lattice:
        return get_lattice(self.lattice)

    def transition_field(self) -> TransitionField:
        return TransitionField(self.matrix, self.overrides, site_width=self.lattice_object.site_width,
                               tol=LOAD_TOLERANCE)

    def with_steps(self, steps: int) -> "ExperimentConfig":
        if steps < 0:
            raise ConfigError("experiment.steps", f"must be a non-negative integer, got {steps}")
        return replace(self, steps=steps)


def _choice(section: configparser.SectionProxy, key: str, choices, default: str = None) -> str:
    value = section.get(key, default)
    if value is None:
        raise ConfigError(f"{section.name}.{key}", "missing")
    if value not in choices:
        raise ConfigError(f"{section.name}.{key}", f"must be one of {', '.join(choices)}, got '{value}'")
    return value


def _integer(section: configparser.SectionProxy, key: str, default: int, minimum: int) -> int:
    try:
        value = section.getint(key, default)
    except ValueError:
        raise ConfigError(f"{section.name}.{key}", f"must be an integer, got '{section.get(key)}'")
    if value < minimum:
        raise ConfigError(f"{section.name}.{key}", f"must be at least {minimum}, got {value}")
    return value


def _json(key: str, text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError(key, f"invalid JSON literal: {error}")


def _named_or_inline(key: str, text: str, dimension: int) -> MatrixSpec:
    text = text.strip()
    try:
        if text.startswith("["):
            matrix = matrix_from_entries(_json(key, text), name=key, tol=LOAD_TOLERANCE)
        else:
            matrix = catalog(text)
    except QuantumWalkError as error:
        if isinstance(error, ConfigError):
            raise
        raise ConfigError(key, str(error))

    if matrix.dim != dimension:
        raise ConfigError(key, f"lattice needs a {dimension}x{dimension} matrix, '{matrix.name}' is "
                               f"{matrix.dim}x{matrix.dim}")
    return matrix


def _float_params(section: configparser.SectionProxy, names: dict) -> dict:
    params = dict()
    for key, target in names.items():
        if key in section:
            try:
                params[target] = section.getfloat(key)
            except ValueError:
                raise ConfigError(f"matrix.{key}", f"must be a number, got '{section.get(key)}'")
    return params


def _matrix(section: configparser.SectionProxy, lattice: Lattice) -> MatrixSpec:
    given = [key for key in ("name", "entries", "family") if key in section]
    if len(given) != 1:
        raise ConfigError("matrix", "exactly one of name, entries or family must be given")
    key = given[0]

    if key != "family":
        return _named_or_inline(f"matrix.{key}", section[key], lattice.dimension)

    if lattice.dimension != 2:
        raise ConfigError("matrix.family", "parametrized families exist for the line only")
    family = _choice(section, "family", ("coin", "scattering"))
    try:
        if family == "coin":
            params = CoinParams1D(**_float_params(section, {"gamma": "gamma", "xi": "xi", "zeta": "zeta",
                                                            "theta": "theta"}))
            return MatrixSpec("coin", general_coin(params))
        params = ScatterParams1D(**_float_params(section, {"rho": "rho", "lambda": "lam", "phi": "phi",
                                                           "varphi": "varphi"}))
        return MatrixSpec("scattering", scattering_matrix_1d(params))
    except QuantumWalkError as error:
        raise ConfigError("matrix.family", str(error))


def _overrides(parser: configparser.ConfigParser, lattice: Lattice) -> dict:
    if not parser.has_section("overrides"):
        return dict()

    overrides = dict()
    for site_text, value in parser["overrides"].items():
        key = f"overrides.{site_text}"
        try:
            site = tuple(int(part) for part in site_text.split(","))
        except ValueError:
            raise ConfigError(key, "site must be written as 'j' or 'j,k'")
        if len(site) != lattice.site_width:
            raise ConfigError(key, f"{lattice.name} sites have {lattice.site_width} coordinates")
        overrides[site] = _named_or_inline(key, value, lattice.dimension)
    return overrides


def _initial(section: configparser.SectionProxy, lattice: Lattice, model: str) -> WaveFunction:
    given = [key for key in ("preset", "state") if key in section]
    if len(given) != 1:
        raise ConfigError("initial", "exactly one of preset or state must be given")

    if "preset" in section:
        preset = _choice(section, "preset", tuple(PRESETS))
        if lattice.name not in PRESETS[preset]:
            raise ConfigError("initial.preset", f"preset '{preset}' does not apply to the {lattice.name} lattice")
        return lattice.standard_initial_state(model)

    kind = lattice.kind(model)
    entries = _json("initial.state", section["state"])
    try:
        pairs = [(BasisLabel(kind, tuple(entry["label"])), complex(*entry["amp"])) for entry in entries]
        psi = WaveFunction.from_pairs(pairs, kind)
    except (KeyError, TypeError, ValueError) as error:
        raise ConfigError("initial.state", f"entries must look like {{\"label\": [...], \"amp\": [re, im]}}: {error}")
    except QuantumWalkError as error:
        raise ConfigError("initial.state", str(error))

    norm = norm_sq(psi)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ConfigError("initial.state", f"state norm squared is {norm:.12g}, expected 1")
    return psi.normalize()


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as error:
        raise ConfigError("config", str(error).splitlines()[0])

    for name in ("experiment", "matrix", "initial"):
        if not parser.has_section(name):
            raise ConfigError(name, "section missing")

    experiment = parser["experiment"]
    lattice = get_lattice(_choice(experiment, "lattice", tuple(LATTICES)))
    model = _choice(experiment, "model", MODELS)

    config = ExperimentConfig(
        lattice=lattice.name,
        model=model,
        matrix=_matrix(parser["matrix"], lattice),
        initial=_initial(parser["initial"], lattice, model),
        overrides=_overrides(parser, lattice),
        steps=_integer(experiment, "steps", 20, 0),
        output=_choice(experiment, "output", OUTPUTS, "both"),
        workers=_integer(experiment, "workers", 1, 1),
        source={name: dict(parser[name]) for name in parser.sections()},
    )
    logger.debug("loaded %s %s config, matrix '%s', %d overrides", config.lattice, config.model,
                 config.matrix.name, len(config.overrides))
    return config


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as error:
        raise ConfigError("config", f"cannot read {path}: {error.strerror}")
    return parse_config(text)
