"""Run the dampwave command line"""
import sys

from dampwave.cli import main

if __name__ == "__main__":
    sys.exit(main())
