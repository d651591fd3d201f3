# a cached census over a range of discriminants, then the same through the command line
import tempfile
from pathlib import Path

from unitary_shimura.census_cli import CensusStats, cmd_census, main

cache = Path(tempfile.mkdtemp()) / "census.ndjson"
stats = CensusStats()
records = cmd_census(-200, -3, cache_path=cache, stats=stats, jobs=2)
print(len(records), "records;", stats.computed, "computed,", stats.cached, "cached")

stats = CensusStats()
cmd_census(-200, -3, cache_path=cache, stats=stats)
print("second run:", stats.computed, "computed,", stats.cached, "cached")

for r in records[:8]:
    degs = [c["degree"] for s in r["spaces"] for c in s["components"]]
    print(f"D={r['D']:4d} h={r['h']} spaces={len(r['spaces'])} degrees={degs}")

main(["report", "-D", "-15", "--precision", "15"])
main(["verify", "--scope", "symbols", "--bound", "100"])
