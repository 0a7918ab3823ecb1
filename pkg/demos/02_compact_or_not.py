"""Reading compactness off the essential quantities.

Three cases with m = 1 on B^1 -> H^inf_{1-|z|^2}: C_{0.9z} D alone,
C_z D alone, and the difference C_z D - C_psi D for a disk automorphism
psi.  The first operator is compact and the other two are not.

E_T and E_pow separate the cases sharply.  E_test of the compact case is
only read at the outermost a-levels of a finite grid and shrinks slowly
(roughly halving per grid doubling), so it is the least decisive of the
three.  E_T is a sum of three boundary terms and can exceed Q_T, which
takes the larger of two two-term combinations.

Run: python3 demos/02_compact_or_not.py   (a few seconds)
"""

from wdcdiff import DiskGrid, analyze, parse_symbol
from wdcdiff.symbols import ONE, Constant, SpaceParams, StandardPower, SymbolPair

params = SpaceParams(1.0, 1, StandardPower(1.0))
grid = DiskGrid(11, 8)

pairs = {
    "0.9 z vs 0": SymbolPair(parse_symbol("scale(0.9, identity)"), ONE, Constant(0), Constant(0)),
    "z vs 0": SymbolPair(parse_symbol("identity"), ONE, Constant(0), Constant(0)),
    "z vs rotated disk map": SymbolPair(parse_symbol("identity"), ONE,
                                        parse_symbol("scale(-1, mobius(0.3))"), ONE),
}

print(f"{'pair':<24}{'Q_T':>9}{'Q_test':>9}{'Q_pow':>9}{'E_T':>9}{'E_test':>9}{'E_pow':>11}")
for name, pair in pairs.items():
    r = analyze(pair, params, grid, oracle=False)
    print(f"{name:<24}{r.Q_T:9.4f}{r.Q_test:9.4f}{r.Q_pow:9.4f}"
          f"{r.E_T:9.4f}{r.E_test:9.4f}{r.E_pow:11.3e}")

# The n-th power trace of the compact pair decays geometrically: 0.9^n n^1.
r = analyze(pairs["0.9 z vs 0"], params, grid, oracle=False)
print("\nn-trace tail for 0.9 z:", [(n, f"{t:.1e}") for n, t in r.n_trace if n >= 256][:4])
