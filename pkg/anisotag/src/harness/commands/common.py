import functools
import json
import logging
from pathlib import Path
from typing import Optional

import click

from anisotag.core.exceptions import AppException, ArtifactIOError
from anisotag.src.codec.nonlinear_map import NonlinearMap, load_or_build_map
from anisotag.src.harness.schemas.harness import RunConfig

logger = logging.getLogger(__name__)

LAYOUT_SCHEMA = "anisotag-layout/1"

def handle_app_errors(func):
    """Turn AppException into a logged error and the exception's exit status."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AppException as e:
            logger.error(f"{type(e).__name__}: {e.detail}")
            click.echo(f"error: {e.detail}", err=True)
            raise SystemExit(e.exit_code)
    return wrapper

def config_options(func):
    """One flag per RunConfig field plus --scenario; unset flags stay None."""
    for name, field in reversed(list(RunConfig.model_fields.items())):
        flag = name.replace("_", "-")
        default = field.get_default(call_default_factory=True)
        if field.annotation is bool:
            option = click.option(f"--{flag}/--no-{flag}", name, default=None, help=f"[default: {str(default).lower()}]")
        else:
            option = click.option(f"--{flag}", name, type=field.annotation, default=None, help=f"[default: {default}]")
        func = option(func)
    return click.option(
        "--scenario",
        "scenario_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None,
        help="key = value file; its values override flags",
    )(func)

def map_for(cfg: RunConfig) -> Optional[NonlinearMap]:
    return load_or_build_map(cfg.geometry) if cfg.nonlinear_map else None

def read_sidecar(path: Path) -> dict:
    try:
        sidecar = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise ArtifactIOError(f"cannot read layout sidecar {path}: {e}")
    if sidecar.get("schema") != LAYOUT_SCHEMA:
        raise ArtifactIOError(f"{path} is not an {LAYOUT_SCHEMA} sidecar")
    return sidecar

def write_sidecar(sidecar: dict, path: Path) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps({"schema": LAYOUT_SCHEMA, **sidecar}, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot write layout sidecar {path}: {e}")
    return path

def sidecar_path(gcode_path: Path) -> Path:
    return Path(gcode_path).with_suffix(".layout.json")
