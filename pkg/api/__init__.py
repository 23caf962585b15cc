"""HTTP endpoints over the workbench."""
