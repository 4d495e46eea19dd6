"""python -m anharm entry point."""

import sys

from anharm.cli import main

if __name__ == "__main__":
    sys.exit(main())
