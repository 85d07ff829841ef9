"""Shift spaces with finite-support points and codings into them"""
from .codings import (ConeContinuum, StrandCoding, code_sparse_subset, cone_code, cone_coding_check, cone_step,
                      random_cone, random_sparse_point, return_floor, sparse_coding_check,
                      sparse_shift_wandering_evidence, sparse_subset_preimage, strand_coding, strand_starts)
from .sequences import (SPARSE_FIXED, Alphabet, FiniteSupportSequence, hilbert_cube_distance, shift_step,
                        sparse_point, sparse_valid)

__all__ = [
    'Alphabet',
    'ConeContinuum',
    'FiniteSupportSequence',
    'SPARSE_FIXED',
    'StrandCoding',
    'code_sparse_subset',
    'cone_code',
    'cone_coding_check',
    'cone_step',
    'hilbert_cube_distance',
    'random_cone',
    'random_sparse_point',
    'return_floor',
    'shift_step',
    'sparse_coding_check',
    'sparse_point',
    'sparse_shift_wandering_evidence',
    'sparse_subset_preimage',
    'sparse_valid',
    'strand_coding',
    'strand_starts',
]
