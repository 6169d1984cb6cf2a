import sys

from rigidpy.cli import main

if __name__ == "__main__":
    sys.exit(main())
