"""Shared exception types."""


class DataError(Exception):
    """Malformed or inconsistent input data (bad row, duplicate id, wrong column count)."""


class BenchmarkError(Exception):
    """A benchmark stage failed; message carries the run index and stage name."""
