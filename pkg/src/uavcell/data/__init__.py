"""Bundled scenario fixtures."""

from importlib import resources


def paper_scenario_path():
    """Filesystem path of the bundled two-UAV dense-urban scenario."""
    return resources.files(__name__).joinpath("paper.json")
