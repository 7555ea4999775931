import sys

from vspforms.cli import main

sys.exit(main())
