"""Message identification with keyed random linear codes and seeded generators."""

from .errors import (
    AttackNotApplicableError,
    EnumerationTooLargeError,
    FieldMismatchError,
    IdentError,
    LengthMismatchError,
    ParameterError,
)
from .gf import FieldElement, FieldSpec, FieldVector, add, dot, field_new, mul
from .identify_code import CodeIdentWord, CodeSpec, compute_tag, derive_column, ident_rate_code, send, verify
from .identify_prng import (
    LfsrSpec,
    PrngIdentWord,
    PrngScheme,
    build_tag_matrix,
    ident_rate_prng,
    lfsr_attack,
    lfsr_step_sequence,
    prng_expand,
    prng_send,
    prng_verify,
)
from .verdict import Reason, Verdict

__version__ = "0.1.0"
