import numpy as np

import oracles


def _flatten(value, prefix=""):
    if isinstance(value, dict):
        for k in sorted(value):
            yield from _flatten(value[k], f"{prefix}.{k}")
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, value


def test_frozen_values_match_a_fresh_computation(frozen):
    fresh = dict(_flatten(oracles.compute_all()))
    stored = dict(_flatten(frozen))
    assert fresh.keys() == stored.keys()
    for key, want in stored.items():
        got = fresh[key]
        if isinstance(want, float):
            assert np.isclose(got, want, rtol=1e-12, atol=0.0), key
        else:
            assert got == want, key
