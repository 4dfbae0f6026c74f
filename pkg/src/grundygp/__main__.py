import sys

from grundygp.cli import main

sys.exit(main())
