"""Run the acceptance suite and print one line per criterion.

    python scripts/run_acceptance.py
"""
import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parent.parent
sys.exit(subprocess.call([sys.executable, "-m", "pytest", "-q", "-m", "acceptance",
                          str(root / "tests" / "test_acceptance.py")], cwd=root))
