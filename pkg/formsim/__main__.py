"""Allow `python -m formsim`."""
from .cli import main

raise SystemExit(main())
