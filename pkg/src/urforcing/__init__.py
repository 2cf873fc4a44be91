"""Forcing with urelements over finite posets and finite name pools."""
from .errors import BudgetExceeded, UrforcingError
from .hfu import EMPTY, HSet, Urelement, hset, kernel, make_set, ur
from .poset import P2, Poset, fn_poset
from .names import (
    LName,
    NamePool,
    PName,
    check_name,
    close_pool,
    embed_j,
    lname,
    mix,
    pname,
    purify,
    set_counterpart,
    valuate,
)
from .forcing import build_extension, check_forcing_theorem, find_witness, forces_semantic, forces_star

__version__ = "0.1.0"
