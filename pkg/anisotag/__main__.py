from anisotag.main import cli

cli(prog_name="anisotag")
