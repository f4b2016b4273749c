import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from burnside_fusion import _accel
from burnside_fusion.catalog import group_by_name
from burnside_fusion.groups import _encode, homomorphisms

needs_numba = pytest.mark.skipif("numba" not in _accel.IMPLEMENTATIONS, reason="numba unavailable")
NP, NB = _accel.IMPLEMENTATIONS["numpy"], _accel.IMPLEMENTATIONS.get("numba")
GROUPS = ["S3", "D8", "Q8", "S4", "C3xC3", "A4"]


def same_partition(a, b):
    pairs = set(zip(a.tolist(), b.tolist()))
    return len(pairs) == len(set(a.tolist())) == len(set(b.tolist()))


@needs_numba
@pytest.mark.parametrize("name", GROUPS)
def test_mul_table(name):
    G = group_by_name(name)
    codes, weights = _encode(G.perms)
    assert (NP["mul_table"](G.perms, codes, weights) == NB["mul_table"](G.perms, codes, weights)).all()
    assert (NB["mul_table"](G.perms, codes, weights) == G.mul).all()


@needs_numba
@given(st.sampled_from(GROUPS), st.data())
def test_closure_and_transport(name, data):
    G = group_by_name(name)
    gens = np.array(data.draw(st.lists(st.integers(0, G.order - 1), min_size=1, max_size=3)), dtype=np.int64)
    a = NP["closure_mask"](G.mul, gens, gens)
    b = NB["closure_mask"](G.mul, gens, gens)
    assert (a == b).all()
    subs = G.subgroups()
    K = data.draw(st.sampled_from(subs))
    L = data.draw(st.sampled_from(subs))
    phi = data.draw(st.sampled_from(homomorphisms(K, G)))
    psi = data.draw(st.sampled_from(homomorphisms(L, G)))
    args = (G.conj, G.conj, np.asarray(K.gens, dtype=np.int64), phi.arr, psi.arr, L.mask)
    assert (NP["transport_mask"](*args) == NB["transport_mask"](*args)).all()


@needs_numba
@given(st.integers(1, 30), st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_lexmin_row(rows, cols, seed):
    m = np.random.default_rng(seed).integers(0, 4, size=(rows, cols)).astype(np.int64)
    i, j = NP["lexmin_row"](m), NB["lexmin_row"](m)
    assert tuple(m[i]) == tuple(m[j]) == min(tuple(r) for r in m.tolist())


@needs_numba
@given(st.integers(1, 40), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_orbit_labels(n, k, seed):
    rng = np.random.default_rng(seed)
    acts = np.array([rng.permutation(n) for _ in range(k)], dtype=np.int64)
    assert same_partition(NP["orbit_labels"](acts), NB["orbit_labels"](acts))


@needs_numba
@pytest.mark.parametrize("src,dst", [("D8", "S4"), ("Q8", "D8"), ("C3xC3", "S3xC3"), ("A4", "S4")])
def test_extend_homs(monkeypatch, src, dst):
    calls = []
    real = _accel.extend_homs

    def spy(*args):
        calls.append(args)
        return real(*args)

    import burnside_fusion.groups as groups_mod
    monkeypatch.setattr(groups_mod._accel, "extend_homs", spy)
    P, H = group_by_name(src), group_by_name(dst)
    for K in P.subgroups():
        homomorphisms(K, H)
    assert calls
    for args in calls:
        t1, ok1 = NP["extend_homs"](*args)
        t2, ok2 = NB["extend_homs"](*args)
        assert (ok1 == ok2).all() and (t1[ok1] == t2[ok2]).all()


@needs_numba
def test_backends_agree_end_to_end(tmp_path):
    outputs = {}
    for flag in ("0", "1"):
        env = dict(os.environ, BURNSIDE_FUSION_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-m", "burnside_fusion.cli", "idempotent", "F(S4,D8)"],
                             capture_output=True, text=True, env=env, check=True)
        outputs[flag] = res.stdout
        backend = subprocess.run([sys.executable, "-c", "import burnside_fusion; print(burnside_fusion.BACKEND)"],
                                 capture_output=True, text=True, env=env, check=True).stdout.strip()
        assert backend == ("numpy" if flag == "1" else "numba")
    assert outputs["0"] == outputs["1"]


def test_disable_flag_skips_numba_import():
    env = dict(os.environ, BURNSIDE_FUSION_DISABLE_NUMBA="1")
    code = "import sys, burnside_fusion; print(burnside_fusion.BACKEND, 'numba' in sys.modules)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert out.stdout.split() == ["numpy", "False"]
