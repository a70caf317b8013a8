"""``python -m hazardflow``."""

from hazardflow.cli import main

main()
