"""Backend selection for the sampling hot loop.

Prefers the compiled Cython stepper and falls back to the pure-Python mirror
when the extension is unavailable (e.g. no compiler at install time).  Both
implement identical arithmetic, so results do not depend on which one loads;
``BACKEND`` records the choice for manifests and benchmarks.
"""

from . import _mh_py

try:  # pragma: no cover - exercised indirectly via BACKEND
    from . import _mh as _impl

    BACKEND = "compiled"
except ImportError:  # pragma: no cover
    _impl = _mh_py
    BACKEND = "python"

mh_chain = _impl.mh_chain
mh_chain_python = _mh_py.mh_chain
mh_chain_compiled = _impl.mh_chain if BACKEND == "compiled" else None

__all__ = ["BACKEND", "mh_chain", "mh_chain_python", "mh_chain_compiled"]
