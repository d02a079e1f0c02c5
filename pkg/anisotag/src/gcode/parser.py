import logging
import re
from decimal import Decimal
from pathlib import Path

from anisotag.core.exceptions import ArtifactIOError, GcodeParseError
from anisotag.src.gcode.schemas.gcode import GcodeInstruction, GcodeProgram, OpaqueLine

logger = logging.getLogger(__name__)

MOTION = re.compile(r"^(G[01])(?=$|[ \t;])")
TOKEN = re.compile(r"\S+")
NUMBER = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)$")
FIELDS = "XYZFE"

def _parse_motion(text: str, line_no: int) -> GcodeInstruction:
    code, _, comment = text.partition(";")
    tokens = list(TOKEN.finditer(code))
    command = tokens[0].group()
    values: dict[str, Decimal] = {}
    for token in tokens[1:]:
        word = token.group()
        column = token.start() + 1
        letter, literal = word[0], word[1:]
        if letter not in FIELDS:
            raise GcodeParseError(f"unexpected field {word!r}", line=line_no, column=column)
        if letter.lower() in values:
            raise GcodeParseError(f"duplicate {letter} field", line=line_no, column=column)
        if not NUMBER.match(literal):
            raise GcodeParseError(f"malformed number {literal!r} in {letter} field", line=line_no, column=column + 1)
        values[letter.lower()] = Decimal(literal)
    return GcodeInstruction(
        command=command,
        comment=comment if text.find(";") >= 0 else None,
        **values,
    )

def parse_gcode(text: str) -> GcodeProgram:
    lines = []
    extrusion_mode = "relative"
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if MOTION.match(raw):
            lines.append(_parse_motion(raw, line_no))
            continue
        word = raw.split(";", 1)[0].strip()
        if word == "M82":
            extrusion_mode = "absolute"
        elif word == "M83":
            extrusion_mode = "relative"
        lines.append(OpaqueLine(raw=raw))
    return GcodeProgram(lines=lines, extrusion_mode=extrusion_mode)

def read_gcode(path: Path) -> GcodeProgram:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"Cannot read G-code from {path}: {e}")
        raise ArtifactIOError(f"cannot read G-code from {path}: {e}")
    try:
        return parse_gcode(text)
    except GcodeParseError as e:
        raise GcodeParseError(f"{path}: {e.reason}", line=e.line, column=e.column)
