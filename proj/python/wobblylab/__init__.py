"""Exact-arithmetic wobbly bundle workbench on SL2 spectral curves over F_p.

Thin convenience layer over the compiled core: every report comes back as a
plain dict (parsed from the core's canonical JSON).
"""

import json as _json

from wobblylab import _core

__version__ = _core.__version__


def _parse(text):
    return _json.loads(text)


def standard_config(genus, p=131):
    """Standard desk-scale configuration: (curve, q) as dicts."""
    curve, q = _core.standard_config(genus, p)
    return _parse(curve), _parse(q)


def classify(curve, q, divisor, effort=8, seed=1):
    """Classify pi_* O(Dt). Arguments are dicts (or JSON strings)."""
    return _parse(_core.classify(_dump(curve), _dump(q), _dump(divisor), effort, seed))


def survey(curve, q, degree, trials, seed=1, effort=4):
    return _parse(_core.survey(_dump(curve), _dump(q), degree, trials, seed, effort))


def singular(curve, q, divisor, effort=8, seed=1):
    return _parse(_core.singular(_dump(curve), _dump(q), _dump(divisor), effort, seed))


def spectrum(genus, lam):
    return _parse(_core.spectrum(genus, lam))


def bn(genus, r, degree):
    return _parse(_core.bn(genus, r, degree))


def check(genus=2, p=131, trials=1, seed=1):
    """Run the invariant ledger. Returns (passed, ledger dict)."""
    passed, text = _core.check(genus, p, trials, seed)
    return passed, _parse(text)


def qspecial_dim(curve, divisor):
    return _core.qspecial_dim(_dump(curve), _dump(divisor))


def rr_dim(curve, divisor):
    return _core.rr_dim(_dump(curve), _dump(divisor))


def quaddiff_divisor(curve, q):
    return _parse(_core.quaddiff_divisor(_dump(curve), _dump(q)))


def h0_spectral(curve, q, divisor):
    return _core.h0_spectral(_dump(curve), _dump(q), _dump(divisor))


def place_counts(curve, q):
    return _core.place_counts(_dump(curve), _dump(q))


def sample_divisor(curve, q, degree, seed=1):
    return _parse(_core.sample_divisor(_dump(curve), _dump(q), degree, seed))


def _dump(obj):
    if isinstance(obj, str):
        return obj
    return _json.dumps(obj)
