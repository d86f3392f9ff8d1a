"""Pass/fail record of the acceptance criteria, printed at the end of a run."""

RESULTS: dict = {}
