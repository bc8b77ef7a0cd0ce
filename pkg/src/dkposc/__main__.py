import sys

from dkposc.cli import main

sys.exit(main())
