"""Kernel backend selection.

The hot numeric kernels exist twice: a compiled Cython extension
(``_ckern``) and a NumPy reference (``_pykern``).  At import time the
compiled backend is preferred when present; ``LFRORDER_BACKEND`` forces
the choice:

* ``LFRORDER_BACKEND=c``  -- require the extension, fail if unbuilt
* ``LFRORDER_BACKEND=py`` -- force the NumPy fallback
* unset / ``auto``        -- use the extension when importable

``BACKEND`` records which one won.  Both backends implement the same
function set with matching semantics; they may differ in the last few
ulps (libm vs. SIMD transcendentals), never beyond.
"""

import os

from . import _pykern

_requested = os.environ.get("LFRORDER_BACKEND", "auto").strip().lower() or "auto"

if _requested in ("auto", "c"):
    try:
        from . import _ckern as _impl

        BACKEND = "c"
    except ImportError:
        if _requested == "c":
            raise ImportError(
                "LFRORDER_BACKEND=c but the compiled kernel extension is not "
                "available; reinstall with a C toolchain or unset the variable"
            ) from None
        _impl = _pykern
        BACKEND = "py"
elif _requested in ("py", "python"):
    _impl = _pykern
    BACKEND = "py"
else:
    raise ValueError(
        f"unrecognized LFRORDER_BACKEND={_requested!r}; use 'c', 'py' or 'auto'"
    )

cum_hazard = _impl.cum_hazard
sf_ab = _impl.sf_ab
cdf_ab = _impl.cdf_ab
pdf_ab = _impl.pdf_ab
hrf_ab = _impl.hrf_ab
quantile_ab = _impl.quantile_ab
quantile_from_cum_hazard = _impl.quantile_from_cum_hazard
parallel_cdf = _impl.parallel_cdf
parallel_sf = _impl.parallel_sf
parallel_pdf = _impl.parallel_pdf
parallel_quantile = _impl.parallel_quantile


def available_backends():
    """Names of importable backends ('py' is always present)."""
    names = ["py"]
    try:
        from . import _ckern  # noqa: F401

        names.insert(0, "c")
    except ImportError:
        pass
    return names


def get_backend(name):
    """Return the backend module for 'c' or 'py' (used by the benchmark)."""
    if name == "py":
        return _pykern
    if name == "c":
        from . import _ckern

        return _ckern
    raise ValueError(f"unknown backend {name!r}")
