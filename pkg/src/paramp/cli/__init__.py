"""Command-line front end: config parsing, sweeps, CSV/SVG emission."""
