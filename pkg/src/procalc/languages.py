"""Registry tying each process language to its parser, printer and stepper."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import ccs, csp
from .terms import Term


@dataclass(frozen=True)
class Language:
    name: str
    parse: Callable[[str], Term]
    parse_file: Callable[[str], Term]
    show: Callable[[Term], str]
    make_stepper: Callable[[], Callable]

    def __str__(self):
        return self.name


CCS = Language("ccs", ccs.parse_ccs, ccs.parse_ccs_file, ccs.print_ccs, ccs.CcsStepper)
CSP = Language("csp", csp.parse_csp, csp.parse_csp_file, csp.print_csp, csp.CspStepper)

LANGUAGES = {"ccs": CCS, "csp": CSP}


def get_language(name: str | Language) -> Language:
    if isinstance(name, Language):
        return name
    try:
        return LANGUAGES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown language {name!r} (expected ccs or csp)") from None
