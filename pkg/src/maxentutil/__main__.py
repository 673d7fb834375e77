import sys

from maxentutil.cli import main

sys.exit(main())
