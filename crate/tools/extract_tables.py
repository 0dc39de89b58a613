"""Extract the level tables from paper.md into a plain-text fixture.

    python3 tools/extract_tables.py paper.md > crates/core/tests/data/tables.txt

Output records:

    TABLE <N> <eta> <p> <r>
    COMPUTED <l>[:1] ...        (":1" marks primes with only T(l,1))
    ROW <galois mult> <hecke mult> <representation, ASCII grammar>
"""
import re
import sys

HEADER = re.compile(
    r"Level \$N = (\d+)\$\.\s+Nebentype \$\\eta = ([^$]*)\$\.\s+Field \$\\mathbb\{F\} = GF\((\d+)(?:\^\{(\d+)\})?\)"
)
COMPUTED = re.compile(r"Computed (.*)\.\}")
ROW = re.compile(r"^(\d+) & \$(\d+)\$ & \$(.*)\$ \\\\")


def chars(s):
    """\\chi_{24,0}\\chi_{24,2}^{3} -> chi_24_0*chi_24_2^3"""
    out = []
    for m in re.finditer(r"\\chi_\{(\d+)(?:,(\d+))?\}(?:\^\{([\d,]+)\})?", s):
        name = f"chi_{m.group(1)}" + (f"_{m.group(2)}" if m.group(2) else "")
        if m.group(3):
            # "18,2" is read as the exponent 18
            name += "^" + m.group(3).split(",")[0]
        out.append(name)
    return "*".join(out) if out else "1"


def term(t):
    t = t.strip()
    factors = []
    c = chars(t)
    if c != "1":
        factors.append(c)
    m = re.search(r"\\varepsilon\^\{(\d+)\}", t)
    if m:
        factors.append(f"eps{m.group(1)}")
    m = re.search(r"\\mathrm\{Sym\}\^2\(\\sigma_\{(\d+),(\d+)\{?([a-z]*)\}?\}\)", t)
    if m:
        factors.append(f"Sym2(sigma_{m.group(1)}_{m.group(2)}{m.group(3)})")
    else:
        m = re.search(r"\\sigma_\{(\d+),(\d+)\{?([a-z]*)\}?\}", t)
        if m:
            factors.append(f"sigma_{m.group(1)}_{m.group(2)}{m.group(3)}")
    if "\\delta" in t:
        factors.append("delta")
    return "*".join(factors)


def main(path):
    for line in open(path, encoding="utf-8"):
        h = HEADER.search(line)
        if h:
            n, eta, p, r = h.group(1), h.group(2), h.group(3), h.group(4) or "1"
            print(f"TABLE {n} {chars(eta) if eta.strip() != '1' else '1'} {p} {r}")
            continue
        c = COMPUTED.search(line)
        if c:
            ts = re.findall(r"T_\{(\d+)(,1)?\}", c.group(1))
            print("COMPUTED " + " ".join(l + (":1" if one else "") for l, one in ts))
            continue
        m = ROW.match(line.strip())
        if m:
            terms = m.group(3).split("\\oplus")
            print(f"ROW {m.group(1)} {m.group(2)} " + " + ".join(term(t) for t in terms))


if __name__ == "__main__":
    main(sys.argv[1])
