import sys

from hqdisk.cli import main

sys.exit(main())
