"""Generate newform coefficient files for the constituent database.

Requires the `cypari` package (bundled PARI/GP). Run from the repo root:

    python3 tools/gen_newforms.py [--bound 1000] [--out crates/core/data/newforms]

One file per level. Each record:

    NEWFORM <level> <weight> <nebentype> <label>
    BASE <Phi(t) coefficients, low first>
    FIELD <relative minpoly in y, low first>
    CHAR <a>:<value> ...
    AP <l>: <y^0 coeff> <y^1 coeff> ...
    END

Coefficients of y-polynomials are elements of Q(t)/(Phi): comma separated
rationals, low first.
"""
import argparse
import itertools
import math
import os
import sys

from cypari import pari

pari.allocatemem(2 * 10**9)

WEIGHTS = (2, 3, 4)

# Basis characters, given by their values at generators of (Z/N)^x in
# a prime field GF(p).
BASIS = {
    7: (12037, [{3: -1293}]),
    9: (12379, [{2: 5770}]),
    12: (5413, [{7: -1, 5: 1}, {7: 1, 5: -1}]),
    13: (12037, [{2: 4019}]),
    15: (12037, [{11: -1, 7: 1}, {11: 1, 7: 3417}]),
    16: (4001, [{15: -1, 5: 1}, {15: 1, 5: -899}]),
    17: (16001, [{3: 83}]),
    18: (3637, [{11: -695}]),
    19: (3637, [{2: -31}]),
    20: (12037, [{11: -1, 17: 1}, {11: 1, 17: 3417}]),
    21: (12037, [{8: -1, 10: 1}, {8: 1, 10: -1293}]),
    22: (16001, [{13: 3018}]),
    23: (22067, [{5: 7863}]),
    24: (12379, [{7: -1, 13: 1, 17: 1}, {7: 1, 13: -1, 17: 1}, {7: 1, 13: 1, 17: -1}]),
    25: (16001, [{2: 7734}]),
    26: (12037, [{15: 4019}]),
    27: (11863, [{2: 5034}]),
    28: (12379, [{15: -1, 17: 1}, {15: 1, 17: 5770}]),
    29: (2297, [{2: 1108}]),
    31: (4201, [{3: -1970}]),
    37: (3889, [{2: -1338}]),
    41: (21881, [{6: -10354}]),
}

# (label, form level, weight, basis level, exponents, index among matching
# orbits). Weight 4 entries with index None select the orbit with odd
# functional relation.
NAMED = [
    ("sigma_11_2", 11, 2, 11, (), 0),
    ("sigma_13_2", 13, 2, 13, (2,), 0),
    ("sigma_14_2", 14, 2, 14, (), 0),
    ("sigma_15_2", 15, 2, 15, (), 0),
    ("sigma_16_2", 16, 2, 16, (0, 1), 0),
    ("sigma_17_2a", 17, 2, 17, (), 0),
    ("sigma_17_2b", 17, 2, 17, (2,), 0),
    ("sigma_18_2", 18, 2, 18, (2,), 0),
    ("sigma_19_2a", 19, 2, 19, (), 0),
    ("sigma_19_2b", 19, 2, 19, (2,), 0),
    ("sigma_20_2a", 20, 2, 20, (), 0),
    ("sigma_20_2b", 20, 2, 20, (1, 1), 0),
    ("sigma_21_2a", 21, 2, 21, (), 0),
    ("sigma_21_2b", 21, 2, 21, (0, 2), 0),
    ("sigma_21_2c", 21, 2, 21, (1, 1), 0),
    ("sigma_22_2", 22, 2, 22, (2,), 0),
    ("sigma_23_2a", 23, 2, 23, (), 0),
    ("sigma_23_2b", 23, 2, 23, (2,), 0),
    ("sigma_24_2a", 24, 2, 24, (), 0),
    ("sigma_24_2b", 24, 2, 24, (0, 1, 0), 0),
    ("sigma_24_2c", 24, 2, 24, (1, 1, 1), 0),
    ("sigma_25_2a", 25, 2, 25, (2,), 0),
    ("sigma_25_2b", 25, 2, 25, (4,), 0),
    ("sigma_26_2a", 26, 2, 26, (), 0),
    ("sigma_26_2b", 26, 2, 26, (), 1),
    ("sigma_26_2c", 26, 2, 26, (4,), 0),
    ("sigma_26_2d", 26, 2, 26, (6,), 0),
    ("sigma_27_2a", 27, 2, 27, (), 0),
    ("sigma_27_2b", 27, 2, 27, (2,), 0),
    ("sigma_28_2a", 28, 2, 28, (0, 2), 0),
    ("sigma_28_2b", 28, 2, 28, (1, 1), 0),
    ("sigma_28_2c", 28, 2, 28, (1, 3), 0),
    ("sigma_29_2a", 29, 2, 29, (), 0),
    ("sigma_29_2b", 29, 2, 29, (2,), 0),
    ("sigma_29_2c", 29, 2, 29, (4,), 0),
    ("sigma_29_2d", 29, 2, 29, (14,), 0),
    ("sigma_31_2a", 31, 2, 31, (), 0),
    ("sigma_31_2b", 31, 2, 31, (2,), 0),
    ("sigma_31_2c", 31, 2, 31, (6,), 0),
    ("sigma_31_2d", 31, 2, 31, (10,), 0),
    ("sigma_37_2a", 37, 2, 37, (), 0),
    ("sigma_37_2b", 37, 2, 37, (), 1),
    ("sigma_37_2c", 37, 2, 37, (2,), 0),
    ("sigma_37_2d", 37, 2, 37, (4,), 0),
    ("sigma_37_2e", 37, 2, 37, (4,), 1),
    ("sigma_37_2f", 37, 2, 37, (6,), 0),
    ("sigma_37_2g", 37, 2, 37, (12,), 0),
    ("sigma_37_2h", 37, 2, 37, (18,), 0),
    ("sigma_41_2a", 41, 2, 41, (), 0),
    ("sigma_41_2b", 41, 2, 41, (2,), 0),
    ("sigma_41_2c", 41, 2, 41, (4,), 0),
    ("sigma_41_2d", 41, 2, 41, (8,), 0),
    ("sigma_41_2e", 41, 2, 41, (10,), 0),
    ("sigma_41_2f", 41, 2, 41, (20,), 0),
    ("sigma_7_3", 7, 3, 21, (0, 3), 0),
    ("sigma_8_3", 8, 3, 24, (1, 1, 0), 0),
    ("sigma_9_3", 9, 3, 27, (15,), 0),
] + [
    (f"sigma_{n}_4", n, 4, n, (), None)
    for n in (13, 17, 19, 21, 22, 23, 25, 27, 28, 29, 31, 37, 41)
]


def basis_kernel(n, exps):
    """Kernel in (Z/n)^x of prod chi_{n,i}^{e_i}, as a frozenset."""
    if not any(exps):
        return frozenset(a for a in range(1, n) if math.gcd(a, n) == 1)
    p, chars = BASIS[n]
    gens = sorted(chars[0])
    units = [a for a in range(1, n) if math.gcd(a, n) == 1]
    orders = []
    for g in gens:
        o, x = 1, g
        while x != 1:
            x, o = x * g % n, o + 1
        orders.append(o)
    value = {}
    for es in itertools.product(*[range(o) for o in orders]):
        a, v = 1, 1
        for g, e in zip(gens, es):
            a = a * pow(g, e, n) % n
        for i, e_i in enumerate(exps):
            for g, e in zip(gens, es):
                v = v * pow(chars[i][g] % p, e * e_i, p) % p
        if a in value and value[a] != v:
            raise RuntimeError(f"basis characters mod {n} are not well defined")
        value[a] = v
    assert len(value) == len(units)
    return frozenset(a for a, v in value.items() if v == 1)


def conrey_kernel(n1, a, n):
    """Kernel in (Z/n)^x of the lift of Conrey character a mod n1."""
    if n1 == 1:
        return frozenset(b for b in range(1, n) if math.gcd(b, n) == 1)
    g = pari(f"znstar({n1},1)")
    return frozenset(
        b for b in range(1, n) if math.gcd(b, n) == 1 and pari.chareval(g, a, b % n1) == 0
    )


def orbit_reps(n):
    """Conrey representatives of Galois orbits of characters mod n."""
    seen = set()
    reps = []
    for a in range(1, n + 1 if n == 1 else n):
        if math.gcd(a, n) != 1 or a in seen:
            continue
        g = pari(f"znstar({n},1)")
        o = int(pari.charorder(g, a)) if n > 1 else 1
        orb = set()
        for e in range(1, o + 1):
            if math.gcd(e, o) == 1:
                orb.add(pow(a, e, n) if n > 1 else 1)
        seen |= orb
        reps.append((a, o))
    return reps


def rat(x):
    x = pari(x)
    return str(x).replace(" ", "")


def tcoeffs(x, deg_phi):
    """Element of Q(t)/(Phi) as list of rationals, low first."""
    x = pari.lift(pari(x))
    if x == 0:
        return ["0"]
    if str(pari.type(x)) != "t_POL" or str(pari.variable(x)) != "t":
        return [rat(x)]
    return [rat(pari.polcoef(x, i, "t")) for i in range(pari.poldegree(x, "t") + 1)]


def fmt_t(x, deg_phi):
    c = tcoeffs(x, deg_phi)
    while len(c) > 1 and c[-1] == "0":
        c.pop()
    return ",".join(c)


def ycoeffs(x, rel):
    x = pari.lift(pari(x))
    if x == 0:
        return [pari(0)]
    if str(pari.type(x)) == "t_POL" and str(pari.variable(x)) == "y":
        return [pari.polcoef(x, i, "y") for i in range(pari.poldegree(x, "y") + 1)]
    return [x]


def fmt_y(x, rel, deg_phi):
    parts = [fmt_t(c, deg_phi) for c in ycoeffs(x, rel)]
    return " ".join(parts) if parts else "0"


def char_values(n, a, o, phi, k, coefs):
    """psi(b) as elements of Q(t)/(Phi), choosing the root of unity that
    satisfies a(l^2) = a(l)^2 - psi(l) l^(k-1) for small primes."""
    if o == 1:
        return {b: "1" for b in range(1, max(n, 2)) if math.gcd(b, n) == 1}, pari(1)
    g = pari(f"znstar({n},1)")
    dphi = int(pari.poldegree(phi, "t"))
    cands = []
    for j in range(0, 2 * o):
        for s in (1, -1):
            z = pari(f"Mod({s}*t^{j},{phi})")
            if pari(f"{z}^{o}") == 1 and all(pari(f"{z}^{o // q}") != 1 for q in range(2, o + 1) if o % q == 0 and pari.isprime(q)):
                cands.append(z)
    primes = [l for l in range(2, 60) if pari.isprime(l) and n % l != 0 and l * l < len(coefs)]
    for z in cands:
        ok = True
        for l in primes:
            r = pari.chareval(g, a, l)
            val = z ** int(r * o)
            lhs = coefs[l * l]
            rhs = coefs[l] ** 2 - val * l ** (k - 1)
            if pari.lift(pari.lift(lhs - rhs)) != 0:
                ok = False
                break
        if ok:
            vals = {}
            for b in range(1, n):
                if math.gcd(b, n) == 1:
                    r = pari.chareval(g, a, b)
                    vals[b] = fmt_t(z ** int(r * o), dphi)
            return vals, z
    raise RuntimeError(f"no consistent root of unity for level {n} char {a}")


def collect_space(n, k, a, o, bound):
    mf = pari.mfinit([n, k, pari(f"Mod({a},{n})")], 0)
    if int(pari.mfdim(mf)) == 0:
        return []
    params = pari.mfparams(mf)
    phi = params[4]
    if str(pari.type(phi)) != "t_POL":
        phi = pari("t-1")
    phi = pari.subst(phi, pari.variable(phi), pari("t"))
    dphi = int(pari.poldegree(phi, "t"))
    fields = pari.mffields(mf)
    basis = pari.mfeigenbasis(mf)
    signs = None
    if o == 1 and n > 1:
        signs = pari.mfatkineigenvalues(mf, n)
    nb = max(bound, 60 * 60)
    forms = []
    for idx in range(len(basis)):
        f = basis[idx]
        rel = fields[idx]
        if str(pari.type(rel)) != "t_POL" or pari.poldegree(rel, "y") < 1:
            rel = pari("y")
        coefs = pari.mfcoefs(f, nb)
        vals, _ = char_values(n, a, o, phi, k, coefs)
        root_number = None
        if signs is not None:
            w = pari.lift(signs[idx][0])
            root_number = (-1) ** (k // 2) * int(w)
        lines = []
        lines.append("BASE " + " ".join(rat(pari.polcoef(phi, i, "t")) for i in range(dphi + 1)))
        relc = [fmt_t(pari.polcoef(rel, i, "y"), dphi) for i in range(int(pari.poldegree(rel, "y")) + 1)]
        lines.append("FIELD " + " ".join(relc))
        lines.append("CHAR " + " ".join(f"{b}:{v}" for b, v in sorted(vals.items())))
        for l in range(2, bound):
            if pari.isprime(l):
                lines.append(f"AP {l}: {fmt_y(coefs[l], rel, dphi)}")
        forms.append({
            "level": n, "weight": k, "conrey": a, "order": o, "idx": idx,
            "reldeg": int(pari.poldegree(rel, "y")), "root_number": root_number,
            "body": lines, "label": f"f_{n}_{k}_{a}_{idx}",
        })
    return forms


def assign_names(forms_by_level):
    for label, n1, k, nb, exps, idx in NAMED:
        forms = [f for f in forms_by_level.get(n1, []) if f["weight"] == k]
        if idx is None:
            cands = [f for f in forms if f["order"] == 1 and f["root_number"] == -1]
            if len(cands) != 1:
                raise RuntimeError(f"{label}: {len(cands)} candidate orbits")
            cands[0]["label"] = label
            continue
        ker = basis_kernel(nb, exps)
        cands = [f for f in forms if conrey_kernel(n1, f["conrey"], nb) == ker]
        if idx >= len(cands):
            raise RuntimeError(f"{label}: only {len(cands)} candidate orbits")
        cands[idx]["label"] = label


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=1000)
    ap.add_argument("--out", default="crates/core/data/newforms")
    ap.add_argument("levels", nargs="*", type=int)
    args = ap.parse_args()
    table = [9, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 31, 37, 41]
    levels = args.levels or sorted({d for n in table for d in range(1, n + 1) if n % d == 0})
    os.makedirs(args.out, exist_ok=True)
    forms_by_level = {}
    for n in levels:
        forms_by_level[n] = [f for k in WEIGHTS for a, o in orbit_reps(n) for f in collect_space(n, k, a, o, args.bound)]
        print(n, len(forms_by_level[n]), file=sys.stderr)
    if not args.levels:
        assign_names(forms_by_level)
    for n, forms in forms_by_level.items():
        if not forms:
            continue
        with open(os.path.join(args.out, f"level_{n:03}.txt"), "w") as out:
            out.write(f"# newforms of level {n}, weights 2-4, a_l for l < {args.bound}\n")
            for f in forms:
                out.write(f"NEWFORM {n} {f['weight']} conrey_{n}_{f['conrey']} {f['label']}\n")
                for line in f["body"]:
                    out.write(line + "\n")
                out.write("END\n")
    for n, forms in sorted(forms_by_level.items()):
        for f in forms:
            if f["label"].startswith("sigma"):
                print(f["label"], "reldeg", f["reldeg"], "order", f["order"], file=sys.stderr)


if __name__ == "__main__":
    main()
