# scalepop/interaction/gating.py
import numpy as np


def rm_gate(s_pr: int, s_m: int) -> int:
    """RM-TF: решение проходит только при согласии с рекомендацией торговца, иначе пассивное 0."""
    return s_pr if s_pr == s_m else 0


def rm_gate_arrays(s_pr: np.ndarray, s_m: int) -> np.ndarray:
    if s_m == 0:
        return np.zeros_like(s_pr)
    return np.where(s_pr == s_m, s_pr, 0).astype(s_pr.dtype)
