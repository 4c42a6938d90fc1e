import sys

from rdhei.cli import main

sys.exit(main())
