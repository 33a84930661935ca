from .models import Candidate, MerchantState
from .merchant import merchant_decide, merchant_decide_arrays
from .birth import bm_birth_scale, clamp_scale
from .gating import rm_gate, rm_gate_arrays

__all__ = [
    'Candidate',
    'MerchantState',
    'merchant_decide',
    'merchant_decide_arrays',
    'bm_birth_scale',
    'clamp_scale',
    'rm_gate',
    'rm_gate_arrays',
]
