"""
Allow package to be run as a module: python -m spherebounds
"""
import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
