"""Writes a synthetic degree-3 Frobenius table standing in for the SL(3)
class delta at level 41, nebentype chi_41^10, over F_21881.

Only the determinant is constrained (det = eps^3 * eta, HT 0 1 2); the
linear and quadratic coefficients are deterministic pseudo-random values.
"""
import random
import sys

P, N, E = 21881, 41, 10


def is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def primitive_root(p):
    fs = [q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)]
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1 for q in fs))


def main(out):
    g41 = primitive_root(N)
    zeta = pow(primitive_root(P), (P - 1) // (N - 1), P)
    log = {pow(g41, k, N): k for k in range(N - 1)}
    rng = random.Random(41)
    lines = [
        "# synthetic stand-in for delta: det = eps^3 eta, other coefficients arbitrary",
        f"GL3 delta {N} chi_41^{E} {P}",
        "HT 0 1 2",
    ]
    for ell in range(2, 1000):
        if not is_prime(ell) or ell == N:
            continue
        eta = pow(zeta, E * log[ell % N], P)
        c3 = (-pow(ell, 3, P) * eta) % P
        lines.append(f"POLY {ell}: 1 {rng.randrange(P)} {rng.randrange(P)} {c3}")
    lines.append("END")
    with open(out, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
