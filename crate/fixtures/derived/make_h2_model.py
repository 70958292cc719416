"""Generates the two-orbital (H2-form) Hamiltonians in this directory.

Minimal-basis (STO-3G) H2 at stretched bond lengths, where the singlet
ground state has strong two-determinant character. Spin-orbitals are
interleaved as q0 = g alpha, q1 = g beta, q2 = u alpha, q3 = u beta.
Run with numpy available:

    python3 make_h2_model.py
"""

import itertools
import json

import numpy as np
from math import erf

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
N = 4


def kron_label(label):
    m = np.eye(1)
    for ch in label:  # leftmost character is the highest qubit
        m = np.kron(m, PAULI[ch])
    return m


def annihilation(j):
    # qubit j is bit j of the basis index; kron order puts qubit N-1 first
    ops = []
    for q in reversed(range(N)):
        if q < j:
            ops.append(Z)
        elif q == j:
            ops.append((X + 1j * Y) / 2)
        else:
            ops.append(I2)
    m = np.eye(1)
    for o in ops:
        m = np.kron(m, o)
    return m


A = [annihilation(j) for j in range(N)]
AD = [a.conj().T for a in A]


ANGSTROM = 1.8897261246  # bohr per angstrom
STO3G_EXP = np.array([3.42525091, 0.62391373, 0.16885540])
STO3G_COEF = np.array([0.15432897, 0.53532814, 0.44463454])


def boys0(t):
    return 1.0 if t < 1e-12 else 0.5 * np.sqrt(np.pi / t) * erf(np.sqrt(t))


def norm(a):
    return (2 * a / np.pi) ** 0.75


def prim_integrals(a, b, ra, rb, centers):
    p = a + b
    rab2 = (ra - rb) ** 2
    rp = (a * ra + b * rb) / p
    k = np.exp(-a * b / p * rab2)
    s = (np.pi / p) ** 1.5 * k
    t = a * b / p * (3 - 2 * a * b / p * rab2) * s
    v = sum(-2 * np.pi / p * k * boys0(p * (rp - rc) ** 2) for rc in centers)
    return s, t, v


def prim_eri(a, b, c, d, ra, rb, rc, rd):
    p, q = a + b, c + d
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    kab = np.exp(-a * b / p * (ra - rb) ** 2)
    kcd = np.exp(-c * d / q * (rc - rd) ** 2)
    pre = 2 * np.pi**2.5 / (p * q * np.sqrt(p + q))
    return pre * kab * kcd * boys0(p * q / (p + q) * (rp - rq) ** 2)


def integrals(r):
    """STO-3G H2 integrals in the g/u molecular orbital basis (Hartree)."""
    centers = [0.0, r * ANGSTROM]
    nb = 2
    S = np.zeros((nb, nb))
    Hc = np.zeros((nb, nb))
    eri = np.zeros((nb,) * 4)
    prims = [(a, c * norm(a)) for a, c in zip(STO3G_EXP, STO3G_COEF)]
    for i, j in itertools.product(range(nb), repeat=2):
        for (a, ca), (b, cb) in itertools.product(prims, repeat=2):
            s, t, v = prim_integrals(a, b, centers[i], centers[j], centers)
            S[i, j] += ca * cb * s
            Hc[i, j] += ca * cb * (t + v)
    for i, j, k, l in itertools.product(range(nb), repeat=4):
        for (a, ca), (b, cb), (c, cc), (d, cd) in itertools.product(prims, repeat=4):
            eri[i, j, k, l] += ca * cb * cc * cd * prim_eri(
                a, b, c, d, centers[i], centers[j], centers[k], centers[l]
            )
    s12 = S[0, 1]
    C = np.array([[1, 1], [1, -1]]) / np.sqrt(np.array([2 * (1 + s12), 2 * (1 - s12)]))
    h1 = C.T @ Hc @ C
    mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", C, C, C, C, eri)
    return h1, mo, 1.0 / (r * ANGSTROM)


def hamiltonian(r):
    h1, eri, e_nuc = integrals(r)
    so = lambda p, spin: 2 * p + spin
    H = e_nuc * np.eye(2**N, dtype=complex)
    for p, q in itertools.product(range(2), repeat=2):
        for sg in range(2):
            H += h1[p, q] * AD[so(p, sg)] @ A[so(q, sg)]
    for p, q, r_, s_ in itertools.product(range(2), repeat=4):
        if abs(eri[p, q, r_, s_]) < 1e-14:
            continue
        for sg, tau in itertools.product(range(2), repeat=2):
            H += 0.5 * eri[p, q, r_, s_] * (
                AD[so(p, sg)] @ AD[so(r_, tau)] @ A[so(s_, tau)] @ A[so(q, sg)]
            )
    return H


def pauli_terms(H):
    terms = []
    for label in map("".join, itertools.product("IXYZ", repeat=N)):
        c = np.trace(kron_label(label) @ H) / 2**N
        if abs(c) > 1e-12:
            assert abs(c.imag) < 1e-12
            terms.append((c.real, label))
    terms.sort(key=lambda t: t[1])
    return terms


def write(path, r, terms):
    with open(path, "w") as f:
        f.write(f"# STO-3G H2, r = {r} angstrom (interleaved JW, q0 = g alpha)\n")
        for c, label in terms:
            f.write(f"{c:.16e} {label}\n")


if __name__ == "__main__":
    points = []
    for r in (0.74, 1.5, 2.0, 2.5):
        H = hamiltonian(r)
        terms = pauli_terms(H)
        name = f"h2_model_r{r:.2f}.txt"
        write(name, r, terms)
        w, v = np.linalg.eigh(H)
        g = v[:, 0]
        a, b = g[0b0011].real, g[0b1100].real
        sign = 1.0 if a >= 0 else -1.0
        a, b = sign * a, sign * b
        with open(f"h2_model_r{r:.2f}_mr.json", "w") as f:
            json.dump(
                {
                    "n_qubits": 4,
                    "reference": "0011",
                    "components": [
                        {"det": "0011", "coeff": round(a, 6)},
                        {"det": "1100", "coeff": round(b, 6)},
                    ],
                },
                f,
                indent=2,
            )
            f.write("\n")
        print(r, "E0", w[0], "E1", w[1], "a", a, "b", b, "terms", len(terms),
              "support", [format(i, "04b") for i in np.nonzero(abs(g) > 1e-9)[0]])
