"""Self-validating evaluator for a finite-scope B set-theory language."""
