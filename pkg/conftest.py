"""Root collection guard: the figure-rendering package is optional, so its
tests are only collected when it (and matplotlib) are installed."""

import importlib.util

collect_ignore_glob = []
if (importlib.util.find_spec("recovery_plots") is None
        or importlib.util.find_spec("matplotlib") is None):
    collect_ignore_glob.append("plots/*")
