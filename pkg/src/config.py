# src/config.py

import math
import re
import sys
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .error_handling import ConfigurationError
from .harness import FamilyMember, WeightSpec
from .root_datum import DatumKind, RootDatum
from .sampling import FAMILIES, RadialGrid
from .suites import DEFAULT_SEED, SUITE_CHECKS, SuiteRequest, validate_request

class DatumSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: DatumKind = DatumKind.RANK_ONE
    multiplicities: List[float] = Field(default_factory=lambda: [1.0, 0.0])

    def build(self) -> RootDatum:
        return RootDatum(self.kind, tuple(self.multiplicities))

class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x_max: float = Field(20.0, gt=0)
    lambda_max: float = Field(60.0, gt=0)
    panel_order: int = Field(64, ge=2)
    panels_per_unit: float = Field(1.0, gt=0)

    def radial(self) -> RadialGrid:
        return RadialGrid.build(self.x_max, self.panel_order, self.panels_per_unit)

    def spectral(self) -> RadialGrid:
        return RadialGrid.build(self.lambda_max, self.panel_order, self.panels_per_unit)

class FamilyMemberSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: str
    center: Optional[float] = None
    width: Optional[float] = None
    sigma: Optional[float] = None
    plateau: Optional[float] = None
    transition: Optional[float] = None
    seed: Optional[int] = None
    modes: Optional[int] = None
    bandwidth: Optional[float] = None

    @field_validator("family")
    @classmethod
    def known_family(cls, value: str) -> str:
        if value not in FAMILIES:
            raise ValueError(f"unknown test family '{value}', expected one of {FAMILIES}")
        return value

    def member(self) -> FamilyMember:
        params = self.model_dump(exclude={"family"}, exclude_none=True)
        return FamilyMember.of(self.family, **params)

class WeightSpecModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k: float
    a: float
    b: float

    def spec(self) -> WeightSpec:
        return WeightSpec(self.k, self.a, self.b)

class SuiteSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    check: str
    p: Optional[float] = None
    q: Optional[float] = None
    eta: float = 0.0
    weight: Optional[WeightSpecModel] = None
    part: str = "i"
    bound: float = math.inf
    exponents: List[float] = Field(default_factory=lambda: [3.0, 4.0, 6.0])
    samples: Optional[int] = Field(None, ge=1)
    family: List[FamilyMemberSpec] = Field(default_factory=list)

    @field_validator("check")
    @classmethod
    def known_check(cls, value: str) -> str:
        if value not in SUITE_CHECKS:
            raise ValueError(f"unknown check '{value}', expected one of {SUITE_CHECKS}")
        return value

    @field_validator("exponents")
    @classmethod
    def exponents_above_two(cls, value: List[float]) -> List[float]:
        if not value or any(q <= 2 for q in value):
            raise ValueError("O'Neil exponents must all be > 2")
        return value

    def request(self, limits: "LimitsSpec") -> SuiteRequest:
        return SuiteRequest(
            id=self.id, check=self.check, p=self.p, q=self.q, eta=self.eta,
            weight=self.weight.spec() if self.weight else None, part=self.part, bound=self.bound,
            samples=self.samples, exponents=tuple(self.exponents),
            family=[member.member() for member in self.family],
            eps_values=tuple(limits.eps_values), xi=limits.xi, t_max=limits.t_max,
        )

class LimitsSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    eps_values: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05, 0.02])
    xi: float = Field(1.0, gt=0)
    t_max: float = Field(5.0, gt=0)
    samples: int = Field(101, ge=2)

    @field_validator("eps_values")
    @classmethod
    def eps_in_unit_interval(cls, value: List[float]) -> List[float]:
        if not value or any(not 0 < eps <= 1 for eps in value):
            raise ValueError("contraction parameters must lie in (0, 1]")
        return value

class SuiteConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    datum: DatumSpec = Field(default_factory=DatumSpec)
    grid: GridSpec = Field(default_factory=GridSpec)
    suites: List[SuiteSpec] = Field(default_factory=list)
    limits: LimitsSpec = Field(default_factory=LimitsSpec)
    output_dir: str = "results"
    seed: int = Field(DEFAULT_SEED, ge=0)

    @model_validator(mode="after")
    def unique_ids(self) -> "SuiteConfig":
        seen = set()
        for suite in self.suites:
            if suite.id in seen:
                raise ValueError(f"duplicate suite id '{suite.id}'")
            seen.add(suite.id)
        return self

    def requests(self) -> List[SuiteRequest]:
        return [suite.request(self.limits) for suite in self.suites]

_HEADER = re.compile(r"^\s*\[\[?\s*([A-Za-z0-9_.]+)\s*\]\]?")

def _locate_line(text: str, loc: Tuple[Any, ...]) -> Optional[int]:
    """
    1-based line of the key at a pydantic-style location such as ("suites", 2, "p")

    Falls back to the enclosing table header when the key is not written out.
    """
    lines = text.splitlines()
    if not loc:
        return None
    table = str(loc[0])
    index = loc[1] if len(loc) > 1 and isinstance(loc[1], int) else None
    rest = [str(part) for part in loc[(2 if index is not None else 1):] if not isinstance(part, int)]

    start, count = None, -1
    for number, line in enumerate(lines):
        match = _HEADER.match(line)
        if match and match.group(1) == table:
            count += 1
            if index is None or count == index:
                start = number
                break
    if start is None:
        pattern = re.compile(rf"^\s*{re.escape(table)}\s*=")
        for number, line in enumerate(lines):
            if pattern.match(line):
                return number + 1
        return None

    if not rest:
        return start + 1
    key = rest[0]
    key_pattern = re.compile(rf"^\s*{re.escape(key)}\s*=")
    sub_table = f"{table}.{key}"
    own_keys = True
    for number in range(start + 1, len(lines)):
        match = _HEADER.match(lines[number])
        if match:
            name = match.group(1)
            if name == sub_table:
                return number + 1
            if not name.startswith(table + "."):
                break
            own_keys = False
        elif own_keys and key_pattern.match(lines[number]):
            return number + 1
    return start + 1

def _toml_error_line(error: Exception) -> Optional[int]:
    match = re.search(r"line (\d+)", str(error))
    return int(match.group(1)) if match else None

_PARAMETER_KEYS = {"p", "q", "eta", "weight", "part", "r", "family", "eps_values", "check"}

def parse_config(text: str, source: str = "<config>") -> SuiteConfig:
    """
    Parse and validate a TOML configuration

    Every downstream parameter check runs here, so a config that parses
    never fails on its parameters later.

    Args:
        text: TOML text
        source: file name used in error messages

    Returns:
        SuiteConfig

    Raises:
        ConfigurationError with the source and the line of the offending key
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(source, f"invalid TOML: {str(e)}", _toml_error_line(e))

    try:
        config = SuiteConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = tuple(first["loc"])
        path = ".".join(str(part) for part in loc) or "config"
        raise ConfigurationError(source, f"{path}: {first['msg']}", _locate_line(text, loc))

    try:
        datum = config.datum.build()
    except ConfigurationError as e:
        raise ConfigurationError(source, e.detail, _locate_line(text, ("datum", "multiplicities")))

    for index, request in enumerate(config.requests()):
        try:
            validate_request(datum, request)
        except ConfigurationError as e:
            key = e.context if e.context in _PARAMETER_KEYS else None
            loc = ("suites", index, key) if key else ("suites", index)
            if key == "r":
                loc = ("suites", index, "p")
            raise ConfigurationError(source, f"suite '{request.id}': {e.detail}", _locate_line(text, loc))
    return config

def load_config(path: str) -> SuiteConfig:
    """Read and validate a configuration file"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigurationError(path, f"cannot read config: {str(e)}")
    return parse_config(text, path)

def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return repr(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise ConfigurationError("dump_config", f"cannot write {type(value).__name__} to TOML")

def _table_lines(data: Dict) -> List[str]:
    return [f"{key} = {_toml_value(value)}" for key, value in data.items()
            if value is not None and not isinstance(value, dict) and key != "family"]

def dump_config(config: SuiteConfig) -> str:
    """TOML text that parse_config reads back into an equal SuiteConfig"""
    data = config.model_dump(mode="json")
    out = [f"output_dir = {_toml_value(config.output_dir)}", f"seed = {config.seed}", ""]
    for name in ("datum", "grid", "limits"):
        out.append(f"[{name}]")
        out.extend(_table_lines(data[name]))
        out.append("")
    for suite in config.suites:
        out.append("[[suites]]")
        fields = suite.model_dump(exclude={"weight", "family"})
        fields["bound"] = suite.bound
        out.extend(_table_lines(fields))
        if suite.weight is not None:
            out.append("[suites.weight]")
            out.extend(_table_lines(suite.weight.model_dump()))
        for member in suite.family:
            out.append("[[suites.family]]")
            out.extend(_table_lines(member.model_dump(exclude_none=True)))
        out.append("")
    return "\n".join(out)
