from sknormalform.cli import main

raise SystemExit(main())
