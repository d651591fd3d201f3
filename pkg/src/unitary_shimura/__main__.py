from .census_cli import main

raise SystemExit(main())
