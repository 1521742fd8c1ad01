"""Exact encodings of application problems as combinatorial n-fold IPs."""

from .bribery import (BriberyInstance, Copeland, VoterType, encode_bribery_c1,
                      encode_bribery_scoring, solve_bribery)
from .common import Decoder, DecodeError, decode
from .huge import BrickType, HugeNFoldInstance, encode_huge_nfold, solve_huge
from .strings import (MultiStringsInstance, encode_multi_strings, normalize_hamming,
                      solve_multi_strings, solve_schedule, string_presets)
from .wsm import WsmInstance, encode_wsm, solve_wsm

__all__ = [
    "BriberyInstance", "BrickType", "Copeland", "DecodeError", "Decoder",
    "HugeNFoldInstance", "MultiStringsInstance", "VoterType", "WsmInstance", "decode",
    "encode_bribery_c1", "encode_bribery_scoring", "encode_huge_nfold",
    "encode_multi_strings", "encode_wsm", "normalize_hamming", "solve_bribery",
    "solve_huge", "solve_multi_strings", "solve_schedule", "solve_wsm", "string_presets",
]
