"""Global series-term counter used for reporting.

Evaluators call :func:`add_terms` as they consume series terms; the
verification layer brackets each run with :func:`reset_terms` /
:func:`get_terms` to report how much summation work an identity needed.
Purely informational, never used for error control.
"""

_TERMS = [0]


def add_terms(n: int) -> None:
    _TERMS[0] += n


def reset_terms() -> None:
    _TERMS[0] = 0


def get_terms() -> int:
    return _TERMS[0]
