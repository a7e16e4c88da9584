import sys

from respmon.cli import main

sys.exit(main())
