'''
This module provides exact computations around the totient coincidence
phi(d) phi(n) = phi(dn) = phi(d(n + lh)): the shift bound kappa_d,
admissibility of the linear family built from A(d) and verified witnesses.
'''
from .version import __version__
from .kappa import kappa, kappa_table
from .witness import Witness, stream_witnesses
