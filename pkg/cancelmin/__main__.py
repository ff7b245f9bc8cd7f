"""Permet `python -m cancelmin`."""

import sys

from cancelmin.main import main

sys.exit(main())
