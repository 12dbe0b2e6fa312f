import sys
from pathlib import Path

# the demo package is importable from its source tree even when only
# the primary package is installed
SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))
