"""Convenience entry point: python main.py run --bits 4194304 --out bits.bin"""

import sys

from softsponge.cli import main

if __name__ == "__main__":
    sys.exit(main())
