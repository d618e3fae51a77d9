"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Times the Jacobi eigensolver on random Hermitian and density matrices, the
Walsh-Hadamard butterfly, and one full trace, for every available backend.
"""
import argparse
import timeit

import numpy as np

import qcapacity
from qcapacity import GroverConfig, hadamard_layer, initial_register_state, run_trace
from qcapacity.grover import _fwht_densities, _fwht_vectors
from qcapacity.linalg import hermitian_eigen


def cases(rng):
    out = []
    for n in (16, 32, 64):
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        out.append((f"eigen hermitian {n}", lambda m=0.5 * (g + g.conj().T): hermitian_eigen(m)))
    rho = hadamard_layer(initial_register_state(6, 0.95)).matrix
    out.append(("eigen density 64", lambda: hermitian_eigen(rho)))
    vecs = rng.normal(size=(1024, 1024)) + 0j
    out.append(("fwht 1024 vectors x 1024", lambda: _fwht_vectors(vecs)))
    dens = rng.normal(size=(64, 64, 64)) + 0j
    out.append(("fwht 64 densities 64x64", lambda: _fwht_densities(dens)))
    out.append(("trace n=4 p=0.95 25 blocks", lambda: run_trace(GroverConfig(4, 0.95, 25))))
    return out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = qcapacity.available_backends()
    timings = {}
    for which in backends:
        prev = qcapacity.use_backend(which)
        try:
            for label, fn in cases(np.random.default_rng(0)):
                fn()
                timings[label, which] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        finally:
            qcapacity.use_backend(prev)
    labels = list(dict.fromkeys(label for label, _ in timings))
    header = f"{'case':<30}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label in labels:
        row = f"{label:<30}" + "".join(f"{timings[label, b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{timings[label, 'python'] / timings[label, 'compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
