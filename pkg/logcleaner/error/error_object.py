""" Python definitions for the Error Object (Typed Dict) """

from __future__ import annotations

from typing import TypedDict, Optional


class ErrorObject(TypedDict):
    """ JSON Error: JSON representation of an application error """
    # Error name: `E_*` for user errors, `F_*` for faults
    name: str

    # Generic error title. Comes from the error class
    title: str

    # Process exit status the CLI reports for this error
    exitcode: int

    # Error description: what went wrong
    error: str

    # Error suggestion: what can you do to fix it
    fixit: Optional[str]

    # Additional data
    info: dict

    # Debug data. Only printed in verbose mode.
    debug: Optional[dict]
