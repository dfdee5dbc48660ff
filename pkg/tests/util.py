"""Shared helpers for the test suite."""

import os
import subprocess
import sys
from pathlib import Path

import numpy as np

import structmv as sm

SRC = Path(__file__).resolve().parents[1] / "src"

SINGLE_LEVEL = (
    "circulant",
    "toeplitz",
    "hankel",
    "symmetric",
    "toeplitz_plus_hankel",
    "sparse",
)


def gaussian(rng, size):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def rel_err(got, want):
    got = np.asarray(got)
    want = np.asarray(want)
    scale = float(np.abs(want).max()) if want.size else 0.0
    err = float(np.abs(got - want).max()) if got.size else 0.0
    return err / scale if scale > 0 else err


def random_instance(structure, n, rng, density=0.5):
    if structure == "circulant":
        return sm.CirculantRep(n, gaussian(rng, n))
    if structure == "toeplitz":
        return sm.ToeplitzRep(n, gaussian(rng, 2 * n - 1))
    if structure == "hankel":
        return sm.HankelRep(n, gaussian(rng, 2 * n - 1))
    if structure == "symmetric":
        return sm.SymmetricRep(n, gaussian(rng, n * (n + 1) // 2))
    if structure == "toeplitz_plus_hankel":
        return sm.ToeplitzPlusHankelRep(
            toeplitz=sm.ToeplitzRep(n, gaussian(rng, 2 * n - 1)),
            hankel=sm.HankelRep(n, gaussian(rng, 2 * n - 1)),
        )
    if structure == "sparse":
        mask = rng.random((n, n)) < density
        support = tuple((int(i), int(j)) for i, j in np.argwhere(mask))
        return sm.SparseRep(
            sm.SparsityPattern(n, support), gaussian(rng, len(support))
        )
    raise ValueError(structure)


def run_cli(args, cwd):
    env = os.environ.copy()
    env["PYTHONPATH"] = str(SRC) + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(
        [sys.executable, "-m", "structmv", *args],
        cwd=cwd,
        env=env,
        capture_output=True,
        text=True,
    )
