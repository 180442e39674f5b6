import sys
from pathlib import Path

# allow running the suite from a clean checkout without installing
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
