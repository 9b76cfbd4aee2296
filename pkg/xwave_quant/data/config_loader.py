"""Run configuration and input spectrum loading."""

import hashlib
import json
import logging
import math
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ..errors import ConfigError, DomainError
from ..models.basis import BasisConfig, QuadratureKind, VelocityGrid
from ..models.config import BasisSection, MediumSection, RunConfig
from ..models.field import Spectrum, SpectrumInterpolation
from ..models.medium import Constants, MediumParams, UnitSystem
from ..models.opa import OpaConfig
from .defaults import DEFAULT_BASIS, DEFAULT_OPA

logger = logging.getLogger("xwave_quant.data.config_loader")

SPECTRUM_COLUMNS = ["kperp", "kz", "re", "im"]

PathLike = Union[str, Path]


def _diagnostics(exc: ValidationError) -> List[str]:
    return [f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}" for error in exc.errors()]


class ConfigLoader:
    """Reads a JSON run configuration and builds the domain objects it describes."""

    def __init__(self, path: Optional[PathLike] = None, natural_units: bool = False):
        self.path = Path(path) if path is not None else None
        self.natural_units = natural_units
        self.config = self._load_config()

    def _load_config(self) -> RunConfig:
        """Parse and validate the configuration file ({} when no file is given)."""
        data = {}
        if self.path is not None:
            try:
                text = self.path.read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read config {self.path}", [str(exc)]) from exc
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(
                    f"malformed JSON in {self.path}", [f"line {exc.lineno} column {exc.colno}: {exc.msg}"]
                ) from exc
            if not isinstance(data, dict):
                raise ConfigError(f"config {self.path} must hold a JSON object")
        if self.natural_units:
            data = {**data, "units": {"system": UnitSystem.NATURAL.value}}
        try:
            config = RunConfig.model_validate(data)
        except ValidationError as exc:
            raise ConfigError("invalid configuration", _diagnostics(exc)) from exc
        logger.info("Loaded run configuration (hash %s)", config_hash(config))
        return config

    @property
    def base_dir(self) -> Path:
        return self.path.parent if self.path is not None else Path.cwd()

    def constants(self) -> Constants:
        if self.config.units.system == UnitSystem.SI:
            return Constants.si()
        return Constants.natural()

    def medium(self, section: Optional[MediumSection] = None) -> MediumParams:
        """Medium parameters; vacuum at the carrier frequency when dispersion is not given."""
        from ..tools.medium import vacuum_params

        section = section if section is not None else self.config.medium
        try:
            if section.is_vacuum:
                return vacuum_params(section.omega, self.constants())
            return MediumParams(
                omega=section.omega, n=section.n, k=section.k, omega1=section.omega1, omega2=section.omega2
            )
        except ValidationError as exc:
            raise ConfigError("invalid medium parameters", _diagnostics(exc)) from exc
        except DomainError as exc:
            raise ConfigError("invalid medium parameters", [str(exc)]) from exc

    def basis(self, params: Optional[MediumParams] = None, section: Optional[BasisSection] = None) -> BasisConfig:
        """BasisConfig with the alpha rule and velocity grid the section asks for."""
        from ..tools.specfun import gauss_laguerre, gauss_legendre

        params = params if params is not None else self.medium()
        section = section if section is not None else self.config.basis
        tolerances = self.config.tolerances
        if section.alpha_rule == QuadratureKind.GAUSS_LEGENDRE:
            alpha_max = section.alpha_max or DEFAULT_BASIS["alpha_max_span"] / section.delta
            rule = gauss_legendre(section.alpha_nodes, 0.0, alpha_max)
        elif section.alpha_rule == QuadratureKind.GAUSS_LAGUERRE:
            rule = gauss_laguerre(section.alpha_nodes, section.delta)
        else:
            raise ConfigError("the alpha rule must be gauss-laguerre or gauss-legendre")

        v_max = section.v_max or DEFAULT_BASIS["v_max_fraction"] * params.omega1
        v_points = section.v_points + (1 - section.v_points % 2)
        if v_points != section.v_points:
            logger.warning("v_points=%d is even; using %d so the grid contains v = 0", section.v_points, v_points)
        try:
            return BasisConfig(
                delta=section.delta,
                p_max=section.p_max,
                alpha_rule=rule,
                v_grid=VelocityGrid(v_max=v_max, points=v_points),
                projection_nodes=section.projection_nodes,
                residual_tolerance=tolerances.residual,
                convergence_tolerance=tolerances.convergence,
            )
        except ValidationError as exc:
            raise ConfigError("invalid basis configuration", _diagnostics(exc)) from exc

    def opa(self) -> OpaConfig:
        """OpaConfig; unset v_max and t are derived from the group-velocity mismatch."""
        section = self.config.opa
        field1 = self.medium(section.field1)
        field2 = self.medium(section.field2)
        mismatch = abs(field1.omega1 - field2.omega1)
        rho = math.sqrt(field1.k * field2.omega1 / (field2.k * field1.omega1))

        v_max = section.v_max or DEFAULT_OPA["v_max_fraction"] * mismatch
        if section.t is not None:
            t = section.t
        elif mismatch > 0:
            # First zero of the sinc factor at a fixed fraction of v_max
            slope = mismatch / ((1.0 + rho) * field1.omega2)
            t = 2.0 * math.pi / (slope * DEFAULT_OPA["sinc_zero_fraction"] * v_max)
        else:
            t = 1.0
        points = section.uv_points + (1 - section.uv_points % 2)

        def basis(params: MediumParams, delta: float) -> BasisConfig:
            return self.basis(
                params, BasisSection(delta=delta, p_max=section.p_max, v_max=v_max, v_points=points)
            )

        try:
            return OpaConfig(
                field1=field1,
                field2=field2,
                chi=section.chi,
                basis1=basis(field1, section.delta1),
                basis2=basis(field2, section.delta2),
                t=t,
                uv_grid=VelocityGrid(v_max=v_max, points=points),
                small_momenta_fraction=section.small_momenta_fraction,
                phase_convention=section.phase_convention,
            )
        except ValidationError as exc:
            raise ConfigError("invalid OPA configuration", _diagnostics(exc)) from exc

    def width_times(self, cfg: OpaConfig) -> List[float]:
        """Times for the locking-width fit: configured, or t doubled repeatedly."""
        if self.config.opa.times is not None:
            return list(self.config.opa.times)
        return [cfg.t * 2**i for i in range(DEFAULT_OPA["width_doublings"])]

    def spectrum_path(self) -> Path:
        name = self.config.propagate.spectrum_file
        if not name:
            raise ConfigError("propagate.spectrum_file is required for the propagate command")
        path = Path(name)
        return path if path.is_absolute() else self.base_dir / path


def config_hash(config: RunConfig) -> str:
    """First 16 hex digits of SHA-256 over the canonical JSON form of the validated config."""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def load_run_config(path: Optional[PathLike] = None, natural_units: bool = False) -> RunConfig:
    return ConfigLoader(path, natural_units=natural_units).config


def load_spectrum_csv(
    path: PathLike, interpolation: SpectrumInterpolation = SpectrumInterpolation.LINEAR
) -> Spectrum:
    """
    Read a sampled spectrum with columns kperp,kz,re,im.

    Rows must cover a full rectangular (kperp, kz) grid exactly once.
    Lines starting with '#' are ignored.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"spectrum file {path} does not exist")
    try:
        frame = pd.read_csv(path, comment="#")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse spectrum file {path}", [str(exc)]) from exc

    missing = [column for column in SPECTRUM_COLUMNS if column not in frame.columns]
    if missing:
        raise ConfigError(f"spectrum file {path} lacks columns {missing}", [f"found {list(frame.columns)}"])
    if frame.duplicated(subset=["kperp", "kz"]).any():
        raise ConfigError(f"spectrum file {path} has duplicate (kperp, kz) rows")

    kperp_grid = np.unique(frame["kperp"].to_numpy(dtype=float))
    kz_grid = np.unique(frame["kz"].to_numpy(dtype=float))
    if len(frame) != kperp_grid.size * kz_grid.size:
        raise ConfigError(
            f"spectrum file {path} is not a full grid",
            [f"{len(frame)} rows for {kperp_grid.size} x {kz_grid.size} grid points"],
        )
    values = np.zeros((kperp_grid.size, kz_grid.size), dtype=complex)
    rows = np.searchsorted(kperp_grid, frame["kperp"].to_numpy(dtype=float))
    columns = np.searchsorted(kz_grid, frame["kz"].to_numpy(dtype=float))
    values[rows, columns] = frame["re"].to_numpy(dtype=float) + 1j * frame["im"].to_numpy(dtype=float)
    try:
        spectrum = Spectrum(kperp_grid=kperp_grid, kz_grid=kz_grid, values=values, interpolation=interpolation)
    except ValidationError as exc:
        raise ConfigError(f"invalid spectrum in {path}", _diagnostics(exc)) from exc
    logger.info("Loaded spectrum %s on a %d x %d grid", path, kperp_grid.size, kz_grid.size)
    return spectrum
