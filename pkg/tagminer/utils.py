import logging
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from tagminer.core.config import settings

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).parent / "report-templates"

_templates = Environment(
    loader=FileSystemLoader(TEMPLATES_DIR),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    trim_blocks=True,
    lstrip_blocks=True,
)
_templates.filters["decimal"] = lambda value: format_decimal(value)


def render_report_template(*, template_name: str, context: dict[str, Any]) -> str:
    return _templates.get_template(template_name).render(context)


def as_fraction(value: float) -> Fraction:
    """Exact rational for a user supplied threshold: 0.2 becomes 1/5, not
    the nearest binary double."""
    return Fraction(repr(value))


def format_decimal(value: Fraction | float, places: int | None = None) -> str:
    places = settings.OUTPUT_DECIMALS if places is None else places
    return f"{float(value):.{places}f}"


def atomic_write_text(path: Path | str, text: str) -> None:
    """Write through a temp file in the target directory, then rename over it."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.debug(f"wrote {path}")


def write_lines(path: Path | str, lines: list[str]) -> None:
    atomic_write_text(path, "".join(f"{line}\n" for line in lines))
