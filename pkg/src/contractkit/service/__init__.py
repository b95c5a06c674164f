"""HTTP front end: the same operations as the CLI, taking source texts instead of paths."""
