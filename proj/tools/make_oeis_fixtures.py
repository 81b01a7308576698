#!/usr/bin/env python3
"""Writes OEIS-style b-files for the cross-check manifest into data/oeis/.

oeis.org is not reachable from the build sandbox, so each sequence is rebuilt
from its OEIS definition. Where the definition is a construction we can run
(compound Wythoff sequences, Wythoff array columns, Knuth's circle product,
Zeckendorf expansions, the a/b swap, the greedy distinct-differences
sequence) that construction is used, with phi evaluated by mpmath. The
remaining ids are written from their floor formula and are marked
"source: formula" in the header; comparing against those only exercises the
transform and offset plumbing.

Re-run with --terms N to regenerate; replace any file with a downloaded
b-file to cross-check against live data.
"""

import argparse
import pathlib

from mpmath import mp, mpf, floor, sqrt, ceil

mp.dps = 60
PHI = (1 + sqrt(5)) / 2


def a(n):
    return int(floor(n * PHI))


def b(n):
    return int(floor(n * PHI * PHI))


def fib(k):
    x, y = 0, 1
    for _ in range(k):
        x, y = y, x + y
    return x


def zeckendorf_indices(n):
    """Indices k >= 2 with n = sum F(k), no two consecutive."""
    out = []
    k = 2
    while fib(k + 1) <= n:
        k += 1
    while n > 0:
        if fib(k) <= n:
            out.append(k)
            n -= fib(k)
            k -= 2
        else:
            k -= 1
    return out


def circle(m, n):
    """Knuth's Fibonacci product m o n."""
    return sum(fib(i + j) for i in zeckendorf_indices(m) for j in zeckendorf_indices(n))


def wythoff_array_column(col, count):
    out = []
    for n in range(1, count + 1):
        row = [a(a(n)), b(a(n))]
        while len(row) < col:
            row.append(row[-1] + row[-2])
        out.append(row[col - 1])
    return out


def swap_ab(count):
    q = {0: 0}
    k = 1
    while len(q) < 4 * count:
        q[a(k)] = b(k)
        q[b(k)] = a(k)
        k += 1
    return [q[n] for n in range(count)]


def greedy_distinct_differences(count):
    used, diffs, out = set(), set(), []
    for n in range(1, count + 1):
        v = 1
        while v in used or v - n in diffs:
            v += 1
        used.add(v)
        diffs.add(v - n)
        out.append(v)
    return out


def f(i, j, n):
    return fib(i + 1) * a(n) + fib(i) * n - j


# id -> (offset, description, source, generator(count))
SEQUENCES = {
    "A000201": (1, "lower Wythoff sequence floor(n*phi)", "definition", lambda c: [a(n) for n in range(1, c + 1)]),
    "A001950": (1, "upper Wythoff sequence floor(n*phi^2)", "definition", lambda c: [b(n) for n in range(1, c + 1)]),
    "A022342": (1, "integers whose Zeckendorf expansion does not use F(2)", "definition",
                lambda c: [m for m in range(0, 3 * c) if 2 not in zeckendorf_indices(m)][:c]),
    "A026351": (0, "floor(n*phi) + 1", "definition", lambda c: [a(n) + 1 for n in range(0, c)]),
    "A004956": (0, "ceiling(n*phi)", "definition", lambda c: [int(ceil(n * PHI)) for n in range(0, c)]),
    "A026273": (1, "floor formula f_{0,2}(n), n >= 2", "formula", lambda c: [f(0, 2, n) for n in range(2, c + 2)]),
    "A099267": (1, "floor formula 2, f_{0,-2}(n)", "formula", lambda c: [2] + [f(0, -2, n) for n in range(1, c)]),
    "A058065": (1, "floor formula f_{0,3}(n), n >= 2", "formula", lambda c: [f(0, 3, n) for n in range(2, c + 2)]),
    "A184732": (1, "floor formula 1, 2, f_{0,-3}(n)", "formula", lambda c: [1, 2] + [f(0, -3, n) for n in range(1, c - 1)]),
    "A003622": (1, "Wythoff AA numbers a(a(n))", "definition", lambda c: [a(a(n)) for n in range(1, c + 1)]),
    "A022413": (1, "floor formula 1, f_{1,-3}(n)", "formula", lambda c: [1] + [f(1, -3, n) for n in range(1, c)]),
    "A003623": (1, "Wythoff AB numbers a(b(n))", "definition", lambda c: [a(b(n)) for n in range(1, c + 1)]),
    "A035336": (1, "second column of the Wythoff array", "definition", lambda c: wythoff_array_column(2, c)),
    "A089910": (1, "floor formula f_{2,-1}(n)", "formula", lambda c: [f(2, -1, n) for n in range(1, c + 1)]),
    "A134859": (1, "Wythoff AAA numbers a(a(a(n)))", "definition", lambda c: [a(a(a(n))) for n in range(1, c + 1)]),
    "A101345": (1, "Knuth circle product 2 o n", "definition", lambda c: [circle(2, n) for n in range(1, c + 1)]),
    "A047924": (0, "b(a(n)+1) + 1", "definition", lambda c: [b(a(n) + 1) + 1 for n in range(0, c)]),
    "A190460": (1, "floor formula f_{2,4}(n), n >= 2", "formula", lambda c: [f(2, 4, n) for n in range(2, c + 2)]),
    "A101864": (1, "Wythoff BB numbers b(b(n))", "definition", lambda c: [b(b(n)) for n in range(1, c + 1)]),
    "A134860": (1, "Wythoff AAB numbers a(a(b(n)))", "definition", lambda c: [a(a(b(n))) for n in range(1, c + 1)]),
    "A035337": (1, "third column of the Wythoff array", "definition", lambda c: wythoff_array_column(3, c)),
    "A134861": (1, "Wythoff BAA numbers b(a(a(n)))", "definition", lambda c: [b(a(a(n))) for n in range(1, c + 1)]),
    "A188012": (1, "floor formula 3, f_{3,-3}(n)", "formula", lambda c: [3] + [f(3, -3, n) for n in range(1, c)]),
    "A101642": (1, "Knuth circle product 3 o n", "definition", lambda c: [circle(3, n) for n in range(1, c + 1)]),
    "A134862": (1, "Wythoff ABB numbers a(b(b(n)))", "definition", lambda c: [a(b(b(n))) for n in range(1, c + 1)]),
    "A134863": (1, "Wythoff BAB numbers b(a(b(n)))", "definition", lambda c: [b(a(b(n))) for n in range(1, c + 1)]),
    "A035338": (1, "fourth column of the Wythoff array", "definition", lambda c: wythoff_array_column(4, c)),
    "A002251": (0, "swap a(k) and b(k) in the non-negative integers", "definition", swap_ab),
    "A019444": (1, "lexicographically first permutation of N with distinct a(n) - n", "definition",
                greedy_distinct_differences),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "oeis"))
    parser.add_argument("--terms", type=int, default=200)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for sid, (offset, description, source, gen) in SEQUENCES.items():
        values = gen(args.terms)
        assert len(values) == args.terms, sid
        lines = [
            f"# {sid}: {description}",
            f"# source: {source} (rebuilt offline by tools/make_oeis_fixtures.py)",
        ]
        lines += [f"{offset + k} {v}" for k, v in enumerate(values)]
        path = out / f"b{sid[1:]}.txt"
        tmp = path.with_suffix(".tmp")
        tmp.write_text("\n".join(lines) + "\n")
        tmp.replace(path)
    print(f"wrote {len(SEQUENCES)} b-files to {out}")


if __name__ == "__main__":
    main()
