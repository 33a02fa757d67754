"""Backend parity: the compiled kernel and the pure-Python twin must give
bit-identical outputs on identical inputs.  Skipped when the extension did
not build."""

import os
import random
import subprocess
import sys

import pytest

from forestvol import _kernel_py

_kernel = pytest.importorskip("forestvol._kernel")


def random_color_matrix(rng, n, colors=3):
    flat = bytearray(n * n)
    for i in range(n):
        for j in range(i + 1, n):
            c = rng.choice([0, 0, 1, 1, 2, colors])
            flat[i * n + j] = c
            flat[j * n + i] = c
    return bytes(flat)


def random_poset_instance(rng, k):
    """Random DAG preds (edges respect a hidden order), random packed poly."""
    order = list(range(k))
    rng.shuffle(order)
    preds = [0] * k
    for a in range(k):
        for b in range(a + 1, k):
            if rng.random() < 0.4:
                preds[order[b]] |= 1 << order[a]
    terms = {}
    for _ in range(rng.randint(1, 6)):
        key = 0
        for v in range(k + 1):  # slot k is the symbolic lower bound
            key |= rng.randint(0, 2) << (6 * v)
        terms[key] = terms.get(key, 0) + rng.randint(-9, 9)
    terms = {key: num for key, num in terms.items() if num}
    if not terms:
        terms = {0: 1}
    den = rng.randint(1, 12)
    a_num, a_den = rng.randint(-8, 8), rng.randint(1, 8)
    b_num, b_den = rng.randint(0, 8), rng.randint(1, 8)
    return tuple(preds), terms, den, a_num, a_den, b_num, b_den


def test_backend_tags():
    assert _kernel_py.BACKEND == "python"
    assert _kernel.BACKEND == "c"


def test_canon_key_parity():
    rng = random.Random(7)
    for n in range(0, 9):
        for _ in range(30):
            flat = random_color_matrix(rng, n)
            assert _kernel.canon_key(n, flat) == _kernel_py.canon_key(n, flat)


def test_poset_integral_parity():
    rng = random.Random(11)
    for k in range(0, 7):
        for _ in range(25):
            preds, terms, den, an, ad, bn, bd = random_poset_instance(rng, k)
            got = _kernel.poset_integral_packed(k, preds, terms, den, an, ad, bn, bd)
            ref = _kernel_py.poset_integral_packed(k, preds, terms, den, an, ad, bn, bd)
            assert got == ref


def test_poset_integral_b_zero_parity():
    # the b == 0 branch is a separate code path (termwise vanishing)
    rng = random.Random(13)
    for _ in range(40):
        k = rng.randint(1, 5)
        preds, terms, den, an, ad, _, _ = random_poset_instance(rng, k)
        got = _kernel.poset_integral_packed(k, preds, terms, den, an, ad, 0, 1)
        ref = _kernel_py.poset_integral_packed(k, preds, terms, den, an, ad, 0, 1)
        assert got == ref


def test_chain_reference_value():
    # x_0 < x_1 < x_2, integrand 1 over [0, 1]^3 -> 1/6
    preds = (0, 1, 2)
    for mod in (_kernel, _kernel_py):
        num, den = mod.poset_integral_packed(3, preds, {0: 1}, 1, 0, 1, 1, 1)
        assert num * 6 == den


def test_env_var_forces_backend():
    for choice, expect in (("py", "python"), ("c", "c"), ("auto", "c")):
        env = dict(os.environ, FORESTVOL_KERNEL=choice)
        out = subprocess.run(
            [sys.executable, "-c", "from forestvol.kernel import BACKEND; print(BACKEND)"],
            capture_output=True,
            text=True,
            env=env,
        )
        assert out.stdout.strip() == expect, (choice, out.stderr)


def test_results_match_through_public_api():
    # same tree weight regardless of backend, via a subprocess pin
    code = (
        "from fractions import Fraction\n"
        "from forestvol import DeltaParams, tree_weight\n"
        "from forestvol.families import complete_graph\n"
        "from forestvol.graphs import tree_from_edges\n"
        "g = complete_graph(4)\n"
        "t = tree_from_edges(g, [0, 1, 2])\n"
        "rec = tree_weight(g, t, DeltaParams(Fraction(1, 4)))\n"
        "print(rec.hat_w)\n"
    )
    vals = set()
    for choice in ("py", "c"):
        env = dict(os.environ, FORESTVOL_KERNEL=choice)
        out = subprocess.run(
            [sys.executable, "-c", code, "x"], capture_output=True, text=True, env=env
        )
        assert out.returncode == 0, out.stderr
        vals.add(out.stdout.strip())
    assert len(vals) == 1
