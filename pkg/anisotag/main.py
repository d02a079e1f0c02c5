import logging

import click

from anisotag.core.config import settings
from anisotag.src.harness.commands.buildmap import buildmap_command
from anisotag.src.harness.commands.decode import decode_command
from anisotag.src.harness.commands.encode import encode_command
from anisotag.src.harness.commands.simulate import simulate_command
from anisotag.src.harness.commands.sweep import sweep_command

@click.group()
@click.option("--log-level", default=None, help=f"[default: {settings.ANISOTAG_LOG_LEVEL}]")
def cli(log_level):
    """Print, swipe and read anisotropic reflection tags."""
    logging.basicConfig(level=(log_level or settings.ANISOTAG_LOG_LEVEL).upper())

cli.add_command(encode_command)
cli.add_command(simulate_command)
cli.add_command(decode_command)
cli.add_command(sweep_command)
cli.add_command(buildmap_command)

if __name__ == "__main__":
    cli()
