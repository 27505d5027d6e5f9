"""Size caps shared by the graph builder, the oracle and the CLI.

Defaults may be overridden with the ``PN_ORACLE_CAP`` and ``PN_VERTEX_CAP``
environment variables (read at call time).
"""

import os

DEFAULT_ORACLE_CAP = 2000
DEFAULT_VERTEX_CAP = 5_000_000


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(float(raw))


def oracle_cap():
    """Largest interior size accepted by dense eigensolver paths."""
    return _env_int("PN_ORACLE_CAP", DEFAULT_ORACLE_CAP)


def vertex_cap():
    """Largest vertex count accepted by graph construction."""
    return _env_int("PN_VERTEX_CAP", DEFAULT_VERTEX_CAP)
