"""Running the property checks on the four named presets.

Each preset goes through the pointwise T-vs-test-function inequality and
the grid-doubling stability of the empirical constants.  The stand-alone
Stirling and Stolz identities are included at the end.

Run: python3 demos/03_regression_checks.py   (about ten seconds)
"""

from wdcdiff import verify
from wdcdiff.grid import DiskGrid
from wdcdiff.presets import PRESETS, preset

family = [preset(name) for name in PRESETS]
for p in family:
    print(f"{p.name}: {p.description}")

result = verify.run_regression(family, grid=DiskGrid(9, 4),
                               checks=["tfg", "fgn", "limfgn", "comparability", "stirling", "stolz"])
print()
print(verify.summary_table(result.outcomes))
print("\nall passed:", result.passed)
