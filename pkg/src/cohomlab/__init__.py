"""GF(2) cohomology of PSL2(q) and embeddings of SL2(q) into Z2 wr PSL2(q)."""

from .cohomology import (
    EMBEDS,
    NOT_EMBEDS,
    PSL2Context,
    delta_image,
    embedding_decide,
    h1,
    h1_of_U,
    h2_bar,
    ker_phi_dim,
    shapiro_compare,
    witness_verify,
)
from .field import make_field
from .gf2 import BitMat, BitVec, Eliminator, Subspace
from .matgroup import build_group

__version__ = "0.1.0"

__all__ = [
    "EMBEDS",
    "NOT_EMBEDS",
    "PSL2Context",
    "BitMat",
    "BitVec",
    "Eliminator",
    "Subspace",
    "build_group",
    "delta_image",
    "embedding_decide",
    "h1",
    "h1_of_U",
    "h2_bar",
    "ker_phi_dim",
    "make_field",
    "shapiro_compare",
    "witness_verify",
]
