import sys

from truthseekers.export import to_json
from truthseekers.sweep import run_sweep, sweep_record

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
result = run_sweep(seed, 50)
for name, row in result.summary.items():
    print(f"{name:18} checked {row['checked']:6}  fail {row['fail']}")
if not result.ok:
    print(to_json(sweep_record(result)))
