"""
Membership Inference Uncertainty Lab

命令列入口：
    python mia_lab.py simulate --out curves.csv
詳見 docs/GUIDE.md
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from cli.main import main

if __name__ == "__main__":
    sys.exit(main())
