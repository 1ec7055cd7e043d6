"""Allow ``python -m dicke_bethe``."""

import sys

from .cli import main

sys.exit(main())
